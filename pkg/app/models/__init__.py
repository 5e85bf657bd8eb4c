"""
Domain models for the Signed Qubit Entropy toolkit
Immutable phase-space values and solver/oracle result records
"""

from app.models.phase_space import (
    BlochVector,
    HermitianState,
    PhaseSpacePoint,
    RepresentationMatrix,
    SignedDistribution,
)
from app.models.reports import (
    BoundaryScalings,
    CandidateGroup,
    Claim1Report,
    MembershipVerdict,
    NonnegativeReport,
    OrderVerdict,
    ProbeReport,
    RatioPoint,
    SideEstimates,
    SolveReport,
    canonical_form,
)

__all__ = [
    'BlochVector',
    'HermitianState',
    'PhaseSpacePoint',
    'RepresentationMatrix',
    'SignedDistribution',
    'BoundaryScalings',
    'CandidateGroup',
    'Claim1Report',
    'MembershipVerdict',
    'NonnegativeReport',
    'OrderVerdict',
    'ProbeReport',
    'RatioPoint',
    'SideEstimates',
    'SolveReport',
    'canonical_form',
]
