"""
Small dense linear-algebra helpers for the 4x8 representation problem
"""

from functools import lru_cache
from typing import Tuple

import numpy as np

# Pauli basis sigma_0..sigma_3
SIGMA = (
    np.array([[1, 0], [0, 1]], dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

# Row subsets of A whose entrywise products span the nullspace
WALSH_PATTERNS = ((0, 1), (0, 2), (1, 2), (0, 1, 2))


@lru_cache(maxsize=1)
def sign_matrix() -> np.ndarray:
    """Integer 4x8 matrix: row i < 3 is (-1)^bit_i(n-1), row 3 is all ones."""
    columns = np.arange(8)
    rows = [1 - 2 * ((columns >> bit) & 1) for bit in range(3)]
    rows.append(np.ones(8, dtype=np.int64))
    A = np.array(rows, dtype=np.int64)
    A.setflags(write=False)
    return A


@lru_cache(maxsize=1)
def walsh_nullspace() -> np.ndarray:
    """8x4 orthonormal basis of null(A) built from Walsh characters."""
    A = sign_matrix()
    columns = [np.prod(A[list(pattern)], axis=0) for pattern in WALSH_PATTERNS]
    N = np.array(columns, dtype=float).T / np.sqrt(8.0)
    N.setflags(write=False)
    return N


def dual_exponent(k: int) -> float:
    """Exponent p' = 2k / (2k - 1) of the norm dual to the 2k-norm."""
    return 2.0 * k / (2.0 * k - 1.0)


def pnorm(x: np.ndarray, p: float) -> float:
    """The p-norm for p >= 1, scaled by max|x| to avoid overflow at large p."""
    x = np.abs(np.asarray(x, dtype=float))
    scale = float(np.max(x)) if x.size else 0.0
    if scale == 0.0:
        return 0.0
    return scale * float(np.sum((x / scale) ** p) ** (1.0 / p))


def signed_power(x: np.ndarray, gamma: float) -> np.ndarray:
    """sign(x) |x|^gamma, with 0^gamma = 0 (the real odd root when gamma = 1/(2k-1))."""
    x = np.asarray(x, dtype=float)
    return np.sign(x) * np.abs(x) ** gamma


def hermitian_eigenvalues(M: np.ndarray) -> Tuple[float, float]:
    """Closed-form eigenvalues (ascending) of a 2x2 Hermitian matrix."""
    a = float(np.real(M[0, 0]))
    d = float(np.real(M[1, 1]))
    off = abs(complex(M[0, 1]))
    half_trace = 0.5 * (a + d)
    radius = float(np.hypot(0.5 * (a - d), off))
    return half_trace - radius, half_trace + radius
