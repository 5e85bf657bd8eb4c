"""
Oracle Service: uncertainty-principle verdicts, classicality and boundary scans

A potential state r satisfies the principle at order k when its best
representation reaches H_2k >= 2 - tol_entropy. The principle quantifies over
every k; the oracle checks the prefix 1..K, and satisfying k = 1 already
implies every higher order.
"""

from typing import Optional, Tuple

import numpy as np
import pandas as pd
import structlog

from app.config import Config
from app.exceptions import ConvergenceError
from app.models.phase_space import BlochVector
from app.models.reports import MembershipVerdict, OrderVerdict
from app.services.entropy_service import EntropyService
from app.services.maxent_service import MaxEntSolver
from app.utils.validators import DataValidator

logger = structlog.get_logger(__name__)

GRID_COLUMNS = ['r1', 'r2', 'r3', 'member', 'classical', 'max_entropy_k1']


class OracleService:
    """Service answering membership and classicality questions for potential states."""

    def __init__(self, solver: Optional[MaxEntSolver] = None, entropy: Optional[EntropyService] = None,
                 tol_entropy: float = Config.TOL_ENTROPY, tol_bisect: float = Config.TOL_BISECT,
                 k_max: int = Config.K_MAX):
        """Initialize oracle with its solver and tolerances."""
        self.solver = solver or MaxEntSolver()
        self.entropy = entropy or EntropyService()
        self.tol_entropy = tol_entropy
        self.tol_bisect = tol_bisect
        self.k_max = k_max

    def order_verdict(self, r, k: int, tol: Optional[float] = None) -> OrderVerdict:
        """
        Solve at order k and compare the maximum entropy with 2.

        Raises:
            ConvergenceError: the order-k solve did not converge
        """
        r = BlochVector.of(r)
        tol = self.tol_entropy if tol is None else tol
        report = self.solver.minnorm(r, k)
        if not report.converged:
            raise ConvergenceError(
                f"Minimum-norm solve did not converge at k={k} for r={r.to_list()} "
                f"(gap {report.gap:.3g} after {report.iterations} iterations)",
                k=k,
                report=report,
            )

        max_entropy = self.entropy.renyi_signed(report.q_opt, k)
        return OrderVerdict(
            k=k,
            max_entropy=max_entropy,
            satisfied=max_entropy >= 2.0 - tol,
            gap=report.gap,
            converged=report.converged,
        )

    def satisfies_at_k(self, r, k: int, tol: Optional[float] = None) -> Tuple[bool, float]:
        """True iff the maximum H_2k over representations of r is at least 2 - tol."""
        verdict = self.order_verdict(r, k, tol)
        return verdict.satisfied, verdict.max_entropy

    def membership(self, r, K: Optional[int] = None, tol: Optional[float] = None) -> MembershipVerdict:
        """
        Check the principle at orders 1..K.

        Args:
            r: Bloch vector of a potential state
            K: Largest order checked (defaults to k_max)
            tol: Entropy tolerance

        Returns:
            MembershipVerdict with one OrderVerdict per order

        Raises:
            ConvergenceError: with the offending k
        """
        r = BlochVector.of(r)
        K = self.k_max if K is None else K
        if not DataValidator.validate_order(K):
            raise ValueError(f"K must be an integer >= 1, got {K!r}")

        verdict = MembershipVerdict(r=r, per_k=[self.order_verdict(r, k, tol) for k in range(1, K + 1)])
        if not verdict.theorem_consistent:
            logger.error("order_verdicts_disagree", r=r.to_list(),
                         per_k=[v.to_dict() for v in verdict.per_k])

        logger.debug("membership", r=r.to_list(), K=K, overall=verdict.overall)
        return verdict

    def classical_representable(self, r, tol: float = 1e-9) -> bool:
        """
        True iff a nonnegative representation with H_2 >= 2 exists.

        |r|_1 <= 1 guarantees it (the closed-form optimum is then nonnegative);
        the converse is checked and a violation is only reported.
        """
        r = BlochVector.of(r)
        report = self.solver.minnorm_nonneg2(r)
        classical = report.feasible and report.value <= 0.5 + tol

        if r.l1_norm <= 1.0 and not classical:
            logger.error("classical_region_violated", r=r.to_list(), l1_norm=r.l1_norm,
                         status=report.status, value=report.value)
        if classical and r.l1_norm > 1.0 + tol:
            logger.warning("classical_outside_l1_ball", r=r.to_list(), l1_norm=r.l1_norm, value=report.value)

        return classical

    def _holds_through(self, r: BlochVector, k: int) -> bool:
        return all(self.order_verdict(r, order).satisfied for order in range(1, k + 1))

    def boundary_scan(self, direction, k: int, tol: Optional[float] = None,
                      cumulative: bool = True) -> float:
        """
        Largest radius rho in [0, 2] along a unit direction that satisfies the principle.

        Args:
            direction: Unit 3-vector
            k: Order index
            tol: Bisection interval width
            cumulative: Require every order 1..k (the principle truncated at k);
                False scans the single-order predicate satisfies_at_k

        Returns:
            Lower end of the final bisection interval
        """
        if not DataValidator.validate_unit_direction(direction):
            raise ValueError(f"Direction must be a unit 3-vector, got {direction!r}")
        tol = self.tol_bisect if tol is None else tol
        d = BlochVector(direction)

        def holds(rho: float) -> bool:
            r = d.scaled(rho)
            if cumulative:
                return self._holds_through(r, k)
            return self.order_verdict(r, k).satisfied

        lo, hi = 0.0, 2.0
        if holds(hi):
            logger.warning("boundary_beyond_scan", direction=d.to_list(), k=k)
            return hi

        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if holds(mid):
                lo = mid
            else:
                hi = mid

        logger.debug("boundary_scan", direction=d.to_list(), k=k, radius=lo, cumulative=cumulative)
        return lo

    @staticmethod
    def grid_axis(step: float) -> np.ndarray:
        """Lattice coordinates -1, -1 + step, ... up to 1."""
        if not DataValidator.validate_step(step):
            raise ValueError(f"Grid step must lie in (0, 1], got {step!r}")
        n = int(np.floor(2.0 / step + 1e-9))
        return np.round(-1.0 + step * np.arange(n + 1), 12)

    def evaluate_grid(self, step: float, k: int = 1) -> pd.DataFrame:
        """
        Membership (orders 1..k), classicality and the k = 1 maximum entropy on a cube lattice.

        Returns:
            DataFrame with columns r1, r2, r3, member, classical, max_entropy_k1
        """
        axis = self.grid_axis(step)
        rows = []
        for r1 in axis:
            for r2 in axis:
                for r3 in axis:
                    r = BlochVector((r1, r2, r3))
                    verdict = self.membership(r, k)
                    rows.append({
                        'r1': float(r1),
                        'r2': float(r2),
                        'r3': float(r3),
                        'member': verdict.overall,
                        'classical': self.classical_representable(r),
                        'max_entropy_k1': verdict.per_k[0].max_entropy,
                    })

        frame = pd.DataFrame(rows, columns=GRID_COLUMNS)
        logger.info("grid_evaluated", step=step, k=k, rows=len(frame), members=int(frame['member'].sum()))
        return frame
