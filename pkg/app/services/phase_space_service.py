"""
Phase Space Service: the eight-point phase space, the representation matrix,
and conversions between signed distributions, Bloch vectors and 2x2 states
"""

from typing import List, Sequence, Union

import numpy as np
import structlog

from app.config import Config
from app.exceptions import InvalidDistributionError, InvalidStateError
from app.models.phase_space import (
    BlochVector,
    HermitianState,
    PhaseSpacePoint,
    RepresentationMatrix,
    SignedDistribution,
)
from app.utils.linalg import SIGMA, hermitian_eigenvalues, sign_matrix, walsh_nullspace

logger = structlog.get_logger(__name__)

DistributionLike = Union[SignedDistribution, Sequence[float], np.ndarray]
VectorLike = Union[BlochVector, Sequence[float], np.ndarray]


class PhaseSpaceService:
    """Service for the representation relation A q = r_hat and the map phi."""

    def __init__(self, tol_sum: float = Config.TOL_SUM, tol_herm: float = Config.TOL_HERM,
                 tol_psd: float = Config.TOL_PSD):
        """Initialize with representation tolerances."""
        self.tol_sum = tol_sum
        self.tol_herm = tol_herm
        self.tol_psd = tol_psd
        self._matrix = RepresentationMatrix(sign_matrix())

    def build_matrix(self) -> RepresentationMatrix:
        """Return the constant 4x8 representation matrix."""
        return self._matrix

    @property
    def A(self) -> np.ndarray:
        return self._matrix.as_float()

    def points(self) -> List[PhaseSpacePoint]:
        """The eight phase-space points in index order."""
        return [PhaseSpacePoint.from_index(n) for n in range(1, 9)]

    def nullspace_basis(self) -> np.ndarray:
        """8x4 orthonormal Walsh basis of the nullspace of A."""
        return walsh_nullspace()

    def distribution(self, q: DistributionLike) -> SignedDistribution:
        """
        Coerce and validate a signed distribution.

        Raises:
            InvalidDistributionError: wrong shape, non-finite entries or sum != 1
        """
        if not isinstance(q, SignedDistribution):
            try:
                q = SignedDistribution(q)
            except ValueError as e:
                raise InvalidDistributionError(f"Invalid signed distribution: {e}")

        deviation = abs(q.total - 1.0)
        if deviation > self.tol_sum:
            raise InvalidDistributionError(
                f"Signed distribution sums to {q.total!r} (|sum - 1| = {deviation:.3g} > {self.tol_sum:.3g})"
            )
        return q

    def expectations(self, q: DistributionLike) -> BlochVector:
        """Expectation values r_i = sum_n q_n e_n(i)."""
        q = self.distribution(q)
        return BlochVector((self.A @ q.q)[:3])

    def represents(self, q: DistributionLike, r: VectorLike, tol: float = 1e-12) -> bool:
        """True iff ||A q - r_hat||_inf <= tol."""
        q_arr = q.q if isinstance(q, SignedDistribution) else np.asarray(q, dtype=float)
        r = BlochVector.of(r)
        residual = self.A @ q_arr - r.hat
        matches = bool(np.max(np.abs(residual)) <= tol)
        # Row 4 of A is the normalization, so a representation is a distribution
        if matches:
            assert abs(residual[3]) <= tol
        return matches

    def bloch_to_matrix(self, r: VectorLike) -> HermitianState:
        """M = (I + r1 sigma1 + r2 sigma2 + r3 sigma3) / 2."""
        r = BlochVector.of(r)
        M = 0.5 * (SIGMA[0] + r.r[0] * SIGMA[1] + r.r[1] * SIGMA[2] + r.r[2] * SIGMA[3])
        return HermitianState(M)

    def validate_state(self, M: Union[HermitianState, np.ndarray]) -> HermitianState:
        """
        Coerce and validate a potential quantum state.

        Raises:
            InvalidStateError: wrong shape, not Hermitian, or trace != 1
        """
        if not isinstance(M, HermitianState):
            try:
                M = HermitianState(M)
            except ValueError as e:
                raise InvalidStateError(f"Invalid 2x2 matrix: {e}")

        hermitian_error = float(np.max(np.abs(M.M - M.M.conj().T)))
        if hermitian_error > self.tol_herm:
            raise InvalidStateError(f"Matrix is not Hermitian (max |M - M^H| = {hermitian_error:.3g})")

        trace_error = abs(M.trace - 1.0)
        if trace_error > self.tol_herm:
            raise InvalidStateError(f"Matrix trace is {M.trace!r}, expected 1")
        return M

    def matrix_to_bloch(self, M: Union[HermitianState, np.ndarray]) -> BlochVector:
        """r_i = Tr(M sigma_i)."""
        M = self.validate_state(M)
        r = [float(np.real(np.trace(M.M @ SIGMA[i]))) for i in (1, 2, 3)]
        return BlochVector(r)

    def phi(self, q: DistributionLike) -> HermitianState:
        """The map phi from signed distributions to potential quantum states."""
        return self.bloch_to_matrix(self.expectations(q))

    def eigenvalues(self, r: VectorLike):
        """Eigenvalues of bloch_to_matrix(r), ascending."""
        return hermitian_eigenvalues(self.bloch_to_matrix(r).M)

    def is_quantum_state(self, r: VectorLike) -> bool:
        """True iff ||r||_2 <= 1 + tol_psd, i.e. the matrix is positive semi-definite."""
        r = BlochVector.of(r)
        by_norm = r.norm <= 1.0 + self.tol_psd
        smallest, _ = self.eigenvalues(r)
        by_spectrum = smallest >= -0.5 * self.tol_psd
        if by_norm != by_spectrum:
            logger.warning("psd_check_disagreement", r=r.to_list(), norm=r.norm,
                           smallest_eigenvalue=smallest)
        return by_norm
