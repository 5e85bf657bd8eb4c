"""
Result records produced by the solvers, the ratio analysis and the oracle
"""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from app.models.phase_space import BlochVector, SignedDistribution


def _floats(values) -> List[float]:
    return [float(x) for x in np.asarray(values).ravel()]


def canonical_form(w) -> np.ndarray:
    """Unit 2-norm, |.| sorted descending, largest coordinate positive."""
    w = np.asarray(w, dtype=float)
    w = w / np.linalg.norm(w)
    w = w[np.argsort(-np.abs(w), kind='stable')]
    return w if w[0] >= 0 else -w


@dataclass(frozen=True, eq=False)
class SolveReport:
    """Outcome of a minimum 2k-norm representation solve with its dual certificate."""
    r: BlochVector
    k: int
    q_opt: SignedDistribution
    x_dual: np.ndarray
    primal_value: float
    dual_value: float
    iterations: int
    converged: bool
    gradient_norm: float = 0.0
    residual: float = 0.0
    stalled: bool = False

    @property
    def gap(self) -> float:
        return self.primal_value - self.dual_value

    @property
    def entropy(self) -> float:
        """H_2k of the optimal representation, in bits."""
        k = self.k
        return -(2.0 * k / (2.0 * k - 1.0)) * float(np.log2(self.primal_value))

    def to_dict(self):
        return {
            'r': self.r.to_list(),
            'k': self.k,
            'q': self.q_opt.to_list(),
            'entropy': self.entropy,
            'primal_value': self.primal_value,
            'dual_value': self.dual_value,
            'gap': self.gap,
            'x_dual': _floats(self.x_dual),
            'iterations': self.iterations,
            'converged': self.converged,
            'gradient_norm': self.gradient_norm,
            'residual': self.residual,
        }

    def __repr__(self):
        return (f'<SolveReport k={self.k} primal={self.primal_value:.12g} '
                f'gap={self.gap:.3g} converged={self.converged}>')


@dataclass(frozen=True, eq=False)
class NonnegativeReport:
    """Minimum 2-norm representation restricted to q >= 0."""
    r: BlochVector
    status: str
    q: Optional[SignedDistribution] = None
    value: float = float('inf')
    iterations: int = 0
    active_set: Tuple[int, ...] = ()
    multipliers_min: float = 0.0
    kkt_residual: float = 0.0

    OPTIMAL = 'optimal'
    INFEASIBLE = 'infeasible'
    MAX_ITER = 'max_iter'

    @property
    def feasible(self) -> bool:
        return self.status != self.INFEASIBLE

    def to_dict(self):
        return {
            'r': self.r.to_list(),
            'status': self.status,
            'q': self.q.to_list() if self.q is not None else None,
            'value': self.value if self.feasible else None,
            'iterations': self.iterations,
            'active_set': list(self.active_set),
            'multipliers_min': self.multipliers_min,
            'kkt_residual': self.kkt_residual,
        }


@dataclass(frozen=True, eq=False)
class RatioPoint:
    """A direction w in R^4 with its ratio value and first-order residual."""
    w: np.ndarray
    k: int
    f_value: float
    foc_residual: float

    @property
    def nonzero_count(self) -> int:
        scale = max(float(np.max(np.abs(self.w))), 1e-300)
        return int(np.sum(np.abs(self.w) > 1e-9 * scale))

    def to_dict(self):
        return {
            'w': _floats(self.w),
            'k': self.k,
            'f': self.f_value,
            'foc_residual': self.foc_residual,
            'nonzero_count': self.nonzero_count,
        }


@dataclass(frozen=True)
class CandidateGroup:
    """Sign-pattern candidates sharing a support size and ratio value."""
    nonzero_count: int
    f_value: float
    count: int
    max_foc_residual: float

    def to_dict(self):
        return {
            'nonzero_count': self.nonzero_count,
            'f': self.f_value,
            'count': self.count,
            'max_foc_residual': self.max_foc_residual,
        }


@dataclass(frozen=True)
class BoundaryScalings:
    """Scalings lam, nu putting a direction on the boundaries of C_k and C_1."""
    lam: float
    nu: float
    equal: bool

    @property
    def ratio(self) -> float:
        return self.lam / self.nu


@dataclass(frozen=True, eq=False)
class Claim1Report:
    """Projection inequality chain relating the order-k and order-1 duals."""
    r: BlochVector
    k: int
    y1: np.ndarray
    yk: np.ndarray
    zk: np.ndarray
    w1: np.ndarray
    projection_ratio: float
    value_ratio: float
    f_w1: float
    bound: float
    tol: float = 1e-8

    @property
    def projection_bounded(self) -> bool:
        return self.projection_ratio <= self.f_w1 + self.tol

    @property
    def f_bounded(self) -> bool:
        return self.f_w1 <= self.bound + self.tol

    @property
    def ratios_match(self) -> bool:
        return abs(self.projection_ratio - self.value_ratio) <= self.tol

    @property
    def holds(self) -> bool:
        return self.projection_bounded and self.f_bounded and self.ratios_match

    def to_dict(self):
        return {
            'r': self.r.to_list(),
            'k': self.k,
            'y1': _floats(self.y1),
            'yk': _floats(self.yk),
            'zk': _floats(self.zk),
            'w1': _floats(self.w1),
            'projection_ratio': self.projection_ratio,
            'value_ratio': self.value_ratio,
            'f_w1': self.f_w1,
            'bound': self.bound,
            'holds': self.holds,
        }


@dataclass(frozen=True)
class SideEstimates:
    """One-sided finite-difference estimates of a derivative at zero."""
    raw: Tuple[float, ...]
    extrapolated: Tuple[float, ...]
    roundoff: Tuple[float, ...]
    reliable: int = 0

    @property
    def floor(self) -> float:
        """Round-off floor of the last reliable step."""
        return self.roundoff[max(self.reliable, 1) - 1]

    @property
    def limit(self) -> float:
        if self.extrapolated:
            return self.extrapolated[-1]
        return self.raw[max(self.reliable, 1) - 1]

    @property
    def spread(self) -> float:
        values = self.extrapolated if len(self.extrapolated) >= 2 else self.raw[:self.reliable]
        if len(values) < 2:
            return 0.0
        return abs(values[-1] - values[-2])


@dataclass(frozen=True)
class ProbeReport:
    """Smoothness-at-zero probe of q -> H_alpha((q, 1 - q))."""
    alpha: float
    order: int
    steps: Tuple[float, ...]
    right: SideEstimates
    left: SideEstimates
    noise_floor: float
    classification: str

    MATCH = 'MATCH'
    JUMP = 'JUMP'
    DIVERGE = 'DIVERGE'
    INCONCLUSIVE = 'INCONCLUSIVE'

    def to_dict(self):
        return {
            'alpha': self.alpha,
            'order': self.order,
            'steps': list(self.steps),
            'right': list(self.right.raw),
            'left': list(self.left.raw),
            'right_limit': self.right.limit,
            'left_limit': self.left.limit,
            'reliable_steps': {'right': self.right.reliable, 'left': self.left.reliable},
            'noise_floor': self.noise_floor,
            'classification': self.classification,
        }


@dataclass(frozen=True)
class OrderVerdict:
    """Uncertainty-principle check at one order k."""
    k: int
    max_entropy: float
    satisfied: bool
    gap: float
    converged: bool = True

    def to_dict(self):
        return {
            'k': self.k,
            'max_entropy': self.max_entropy,
            'satisfied': self.satisfied,
            'gap': self.gap,
            'converged': self.converged,
        }


@dataclass(frozen=True, eq=False)
class MembershipVerdict:
    """Uncertainty-principle verdict over the orders 1..K."""
    r: BlochVector
    per_k: List[OrderVerdict] = field(default_factory=list)

    @property
    def k_max(self) -> int:
        return len(self.per_k)

    @property
    def overall(self) -> bool:
        return all(v.satisfied for v in self.per_k)

    @property
    def theorem_consistent(self) -> bool:
        """
        Satisfying order 1 carries over to every checked order.

        A state failing order 1 may still pass a single higher order on its
        own, so only the implication from order 1 is required.
        """
        if not self.per_k or not self.per_k[0].satisfied:
            return True
        return all(v.satisfied for v in self.per_k if v.converged)

    @property
    def first_failure(self) -> Optional[int]:
        return next((v.k for v in self.per_k if not v.satisfied), None)

    def to_dict(self):
        return {
            'r': self.r.to_list(),
            'k_max': self.k_max,
            'per_k': [v.to_dict() for v in self.per_k],
            'overall': self.overall,
            'theorem_consistent': self.theorem_consistent,
            'first_failure': self.first_failure,
            'is_quantum_state': self.r.norm <= 1.0 + 1e-12,
            'note': ('orders 1..k_max checked; satisfying the principle at k=1 '
                     'implies it at every k'),
        }
