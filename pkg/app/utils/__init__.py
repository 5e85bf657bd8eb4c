"""
Utility modules for the Signed Qubit Entropy toolkit
Contains linear-algebra helpers, the nonnegative active-set solver and input validation
"""

from app.utils.active_set import ActiveSetResult, min_norm_nonnegative
from app.utils.linalg import (
    SIGMA,
    dual_exponent,
    hermitian_eigenvalues,
    pnorm,
    sign_matrix,
    signed_power,
    walsh_nullspace,
)
from app.utils.validators import DataValidator

__all__ = [
    'ActiveSetResult',
    'min_norm_nonnegative',
    'SIGMA',
    'dual_exponent',
    'hermitian_eigenvalues',
    'pnorm',
    'sign_matrix',
    'signed_power',
    'walsh_nullspace',
    'DataValidator',
]
