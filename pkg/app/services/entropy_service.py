"""
Entropy Service: Rényi entropy for signed and unsigned distributions and the
finite-difference smoothness probe at q = 0

The probe is a numerical illustration of why only even integer orders keep
q -> H_alpha((q, 1 - q)) infinitely differentiable at 0. It does not prove it.
"""

import math
from typing import Optional, Sequence

import numpy as np
import structlog

from app.exceptions import EntropyDomainError, UndefinedEntropyError
from app.models.reports import ProbeReport, SideEstimates
from app.utils.linalg import pnorm
from app.utils.validators import DataValidator

logger = structlog.get_logger(__name__)

DEFAULT_STEPS = (1e-2, 1e-3, 1e-4)
EPS = np.finfo(float).eps
RELIABLE_FRACTION = 0.1
SETTLE_RATIO = 0.5


def entropy_bound_norm(k: int) -> float:
    """Largest 2k-norm compatible with H_2k >= 2, namely (1/2)^((2k-1)/k)."""
    return 0.5 ** ((2.0 * k - 1.0) / k)


def norm_to_entropy(norm: float, k: int) -> float:
    """H_2k in bits from the 2k-norm of the distribution."""
    return -(2.0 * k / (2.0 * k - 1.0)) * math.log2(norm)


class EntropyService:
    """Service for signed Rényi entropies."""

    @staticmethod
    def _vector(q) -> np.ndarray:
        arr = np.asarray(getattr(q, 'q', q), dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise EntropyDomainError(f"Expected a non-empty 1-D distribution, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise EntropyDomainError("Distribution entries must be finite")
        return arr

    def renyi_signed(self, q, k: int) -> float:
        """
        H_2k(q) = -(1/(2k-1)) log2(sum q_n^2k) = -(2k/(2k-1)) log2 ||q||_2k.

        Args:
            q: Signed distribution (SignedDistribution or sequence)
            k: Order index k >= 1

        Returns:
            Entropy in bits

        Raises:
            UndefinedEntropyError: q is the zero vector
        """
        if not DataValidator.validate_order(k):
            raise EntropyDomainError(f"Order index k must be an integer >= 1, got {k!r}")
        arr = self._vector(q)
        if not np.any(arr):
            raise UndefinedEntropyError("Rényi entropy of the zero vector is undefined")
        return norm_to_entropy(pnorm(arr, 2 * k), k)

    def renyi_signed_sum(self, q, k: int) -> float:
        """The same entropy through the power-sum form (used for cross-checks)."""
        arr = self._vector(q)
        if not np.any(arr):
            raise UndefinedEntropyError("Rényi entropy of the zero vector is undefined")
        return -math.log2(float(np.sum(arr ** (2 * k)))) / (2 * k - 1)

    def renyi_general(self, q, alpha: float) -> float:
        """-(1/(alpha-1)) log2 sum |q_n|^alpha for any alpha > 0; Shannon form at alpha = 1."""
        if not DataValidator.validate_positive(alpha):
            raise EntropyDomainError(f"Order alpha must be positive, got {alpha!r}")
        arr = np.abs(self._vector(q))
        if not np.any(arr):
            raise UndefinedEntropyError("Rényi entropy of the zero vector is undefined")
        if alpha == 1:
            nz = arr[arr > 0]
            return float(-np.sum(nz * np.log2(nz)))
        return -math.log2(float(np.sum(arr ** alpha))) / (alpha - 1.0)

    def renyi_unsigned(self, p: Sequence[float], alpha: float, tol: float = 1e-9) -> float:
        """
        Rényi entropy of an ordinary probability vector.

        Raises:
            EntropyDomainError: negative component (use renyi_signed), bad order or normalization
        """
        arr = self._vector(p)
        if np.any(arr < 0):
            raise EntropyDomainError(
                "Negative probability in renyi_unsigned; use renyi_signed for signed distributions"
            )
        if abs(float(np.sum(arr)) - 1.0) > tol:
            raise EntropyDomainError(f"Probabilities sum to {float(np.sum(arr))!r}, expected 1")
        return self.renyi_general(arr, alpha)

    @staticmethod
    def _binary_curve(q: np.ndarray, alpha: float) -> np.ndarray:
        """g(q) = H_alpha((q, 1 - q)) evaluated elementwise for signed q."""
        a = np.abs(q)
        b = np.abs(1.0 - q)
        if alpha == 1:
            with np.errstate(divide='ignore', invalid='ignore'):
                terms = np.where(a > 0, a * np.log2(np.where(a > 0, a, 1.0)), 0.0)
                terms = terms + np.where(b > 0, b * np.log2(np.where(b > 0, b, 1.0)), 0.0)
            return -terms
        return -np.log2(a ** alpha + b ** alpha) / (alpha - 1.0)

    def _side(self, alpha: float, order: int, steps: Sequence[float], direction: int) -> SideEstimates:
        weights = np.array([(-1) ** (order - j) * math.comb(order, j) for j in range(order + 1)],
                           dtype=float)
        if direction < 0:
            # backward difference: sum_j (-1)^j C(m, j) g(-j h)
            weights = np.array([(-1) ** j * math.comb(order, j) for j in range(order + 1)],
                               dtype=float)

        raw, roundoff = [], []
        for h in steps:
            nodes = direction * h * np.arange(order + 1)
            values = self._binary_curve(nodes, alpha)
            raw.append(float(weights @ values) / h ** order)
            scale = max(1.0, float(np.max(np.abs(values))))
            roundoff.append(float(2 ** order * EPS * scale / h ** order))

        # round-off grows as h shrinks, so the usable steps form a prefix
        reliable = 0
        for estimate, floor in zip(raw, roundoff):
            if floor > RELIABLE_FRACTION * max(abs(estimate), abs(raw[0])):
                break
            reliable += 1

        extrapolated = []
        for i in range(1, reliable):
            h0, h1 = steps[i - 1], steps[i]
            extrapolated.append((h0 * raw[i] - h1 * raw[i - 1]) / (h0 - h1))

        return SideEstimates(raw=tuple(raw), extrapolated=tuple(extrapolated),
                             roundoff=tuple(roundoff), reliable=reliable)

    @staticmethod
    def _grows(side: SideEstimates) -> bool:
        """Magnitude up at least 10x across the reliable steps and clear of round-off."""
        if side.reliable < 2:
            return False
        first, last = abs(side.raw[0]), abs(side.raw[side.reliable - 1])
        return last >= 10.0 * max(first, EPS) and last > 100.0 * side.floor

    @staticmethod
    def _settles(side: SideEstimates, steps: Sequence[float]) -> Optional[bool]:
        """
        Whether successive estimates shrink their increments the way a
        first-order error does; None with fewer than three reliable steps.
        """
        n = side.reliable
        if n < 3:
            return None
        raw, h = side.raw, steps
        previous = raw[n - 2] - raw[n - 3]
        last = raw[n - 1] - raw[n - 2]
        expected = (h[n - 2] - h[n - 1]) / (h[n - 3] - h[n - 2])
        allowance = 2.0 * sum(side.roundoff[n - 3:n])
        return abs(last) <= max(SETTLE_RATIO, 2.0 * expected) * abs(previous) + allowance

    @staticmethod
    def _rises(side: SideEstimates) -> bool:
        magnitudes = np.abs(side.raw[:side.reliable])
        return bool(np.all(np.diff(magnitudes) > 0))

    def smoothness_probe(self, alpha: float, order: int,
                         steps: Sequence[float] = DEFAULT_STEPS) -> ProbeReport:
        """
        Probe the m-th derivative of g(q) = H_alpha((q, 1 - q)) at q = 0 from both sides.

        Steps whose round-off floor exceeds a tenth of the estimate are dropped
        before anything is classified.

        Classification:
            DIVERGE       estimates on a side grow at least 10x across the schedule,
                          or keep growing without their increments shrinking
            JUMP          both sides settle and their limits differ by more than
                          10x the noise floor
            MATCH         both sides settle on a common limit
            INCONCLUSIVE  a side has fewer than three reliable steps, or does not
                          settle without growing

        Args:
            alpha: Entropy order alpha > 0
            order: Derivative order m >= 1
            steps: Strictly decreasing positive step sizes

        Returns:
            ProbeReport with per-step sided estimates and the classification
        """
        errors = DataValidator.validate_probe_args(alpha, order, steps)
        if errors:
            raise EntropyDomainError(f"Invalid probe arguments: {errors}")
        steps = tuple(float(h) for h in steps)

        right = self._side(alpha, order, steps, +1)
        left = self._side(alpha, order, steps, -1)
        settled = [self._settles(side, steps) for side in (right, left)]

        noise = max(right.spread, left.spread, right.floor, left.floor,
                    1e-9 * max(1.0, abs(right.limit), abs(left.limit)))

        if any(self._grows(side) or (state is False and self._rises(side))
               for side, state in zip((right, left), settled)):
            classification = ProbeReport.DIVERGE
        elif all(settled):
            if abs(right.limit - left.limit) > 10.0 * noise:
                classification = ProbeReport.JUMP
            else:
                classification = ProbeReport.MATCH
        else:
            classification = ProbeReport.INCONCLUSIVE

        logger.debug("smoothness_probe", alpha=alpha, order=order, classification=classification,
                     right_limit=right.limit, left_limit=left.limit, noise=noise,
                     right_reliable=right.reliable, left_reliable=left.reliable)

        return ProbeReport(alpha=float(alpha), order=int(order), steps=steps, right=right, left=left,
                           noise_floor=noise, classification=classification)
