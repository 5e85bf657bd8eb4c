"""
Dual Geometry Service: the ratio functional f(w) = ||A^T w||_2 / ||A^T w||_p',
its first-order conditions, sign-pattern enumeration, multistart ascent and
the projection inequality linking the order-k and order-1 dual optima
"""

import itertools
from collections import OrderedDict
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import structlog

from app.config import Config
from app.exceptions import ConvergenceError, EntropyDomainError, RatioDomainError
from app.models.phase_space import BlochVector
from app.models.reports import (
    BoundaryScalings,
    CandidateGroup,
    Claim1Report,
    RatioPoint,
    canonical_form,
)
from app.services.maxent_service import MaxEntSolver
from app.utils.linalg import dual_exponent, pnorm, sign_matrix, signed_power
from app.utils.validators import DataValidator

logger = structlog.get_logger(__name__)

C1_RADIUS = 1.0 / np.sqrt(8.0)


def ratio_bound(k: int) -> float:
    """Global maximum of the ratio functional, (1/2)^((k-1)/k)."""
    return 0.5 ** ((k - 1.0) / k)


@dataclass(frozen=True)
class DualBalls:
    """The dual unit balls C_1 = {||A^T x||_2 <= 1} and C_k = {||A^T x||_p' <= 1}."""
    k: int
    tol: float = 1e-12

    @property
    def radius_c1(self) -> float:
        """C_1 is the Euclidean ball of this radius, since A A^T = 8 I."""
        return C1_RADIUS

    def in_c1(self, x) -> bool:
        return pnorm(sign_matrix().T @ np.asarray(x, dtype=float), 2.0) <= 1.0 + self.tol

    def in_ck(self, x) -> bool:
        return pnorm(sign_matrix().T @ np.asarray(x, dtype=float), dual_exponent(self.k)) <= 1.0 + self.tol


class DualGeometryService:
    """Service for the ratio functional and its critical points."""

    def __init__(self, n_starts: int = Config.N_STARTS, seed: int = Config.SEED,
                 max_ascent_iter: int = 1000):
        """Initialize multistart defaults."""
        self.n_starts = n_starts
        self.seed = seed
        self.max_ascent_iter = max_ascent_iter
        self.A = sign_matrix().astype(float)

    @staticmethod
    def _order(k: int, minimum: int = 1) -> int:
        if not DataValidator.validate_order(k) or k < minimum:
            raise EntropyDomainError(f"Order index k must be an integer >= {minimum}, got {k!r}")
        return int(k)

    @staticmethod
    def _direction(w) -> np.ndarray:
        arr = np.asarray(w, dtype=float)
        if arr.shape != (4,) or not np.all(np.isfinite(arr)):
            raise RatioDomainError(f"Direction must be a finite 4-vector, got {w!r}")
        if not np.any(arr):
            raise RatioDomainError("Ratio functional is undefined at w = 0")
        return arr

    def f_ratio(self, w, k: int) -> float:
        """||A^T w||_2 / ||A^T w||_p' with p' = 2k / (2k - 1); lies in (0, 1]."""
        k = self._order(k)
        v = self.A.T @ self._direction(w)
        return pnorm(v, 2.0) / pnorm(v, dual_exponent(k))

    def boundary_scalings(self, w, k: int) -> BoundaryScalings:
        """
        Scalings with ||A^T (nu w)||_2 = 1 and ||A^T (lam w)||_p' = 1.

        lam <= nu always; equality is flagged rather than treated as an error.
        For k = 1 both balls coincide and the pair is reported as equal.
        """
        k = self._order(k)
        w = self._direction(w)
        v = self.A.T @ w
        nu = 1.0 / pnorm(v, 2.0)
        lam = 1.0 / pnorm(v, dual_exponent(k))
        equal = bool(np.isclose(lam, nu, rtol=1e-12, atol=0.0))
        if equal and k > 1:
            logger.info("boundary_scalings_equal", w=w.tolist(), k=k)

        scalings = BoundaryScalings(lam=lam, nu=nu, equal=equal)
        mismatch = abs(scalings.ratio - self.f_ratio(w, k))
        if mismatch > 1e-12:
            logger.warning("boundary_ratio_mismatch", w=w.tolist(), k=k, mismatch=mismatch)
        return scalings

    def foc_residual(self, w, k: int) -> float:
        """
        Residual of the first-order system w = h(w) A t.

        h(w) = ||w||_2^2 / ||v||_p'^p' and t_n = sign(v_n) |v_n|^(1/(2k-1)),
        with v = A^T w. Returns ||w - h A t||_inf / max(1, ||w||_inf).
        """
        k = self._order(k)
        w = self._direction(w)
        v = self.A.T @ w
        p_dual = dual_exponent(k)
        h = float(w @ w) / float(np.sum(np.abs(v) ** p_dual))
        t = signed_power(v, 1.0 / (2 * k - 1))
        residual = w - h * (self.A @ t)
        return float(np.max(np.abs(residual))) / max(1.0, float(np.max(np.abs(w))))

    def gradient(self, w, k: int) -> np.ndarray:
        """Analytic gradient of f at w."""
        w = self._direction(w)
        v = self.A.T @ w
        p_dual = dual_exponent(k)
        norm2 = pnorm(v, 2.0)
        norm_dual = pnorm(v, p_dual)
        s = signed_power(v, p_dual - 1.0)
        f = norm2 / norm_dual
        return f * (self.A @ v / norm2 ** 2 - self.A @ s / norm_dual ** p_dual)

    def point(self, w, k: int) -> RatioPoint:
        w = self._direction(w)
        return RatioPoint(w=w, k=k, f_value=self.f_ratio(w, k), foc_residual=self.foc_residual(w, k))

    def enumerate_candidates(self, k: int) -> List[RatioPoint]:
        """All 80 nonzero sign vectors in {-1, 0, 1}^4, sorted by f descending."""
        k = self._order(k)
        points = [self.point(w, k) for w in itertools.product((-1.0, 0.0, 1.0), repeat=4) if any(w)]
        return sorted(points, key=lambda p: (-p.f_value, p.nonzero_count))

    def candidate_groups(self, k: int) -> List[CandidateGroup]:
        """Enumerated candidates grouped by (number of nonzeros, f value)."""
        groups = OrderedDict()
        for p in self.enumerate_candidates(k):
            key = (p.nonzero_count, round(p.f_value, 12))
            groups.setdefault(key, []).append(p)

        return [
            CandidateGroup(
                nonzero_count=count,
                f_value=members[0].f_value,
                count=len(members),
                max_foc_residual=max(m.foc_residual for m in members),
            )
            for (count, _), members in groups.items()
        ]

    def _ascend(self, w: np.ndarray, k: int) -> Tuple[np.ndarray, float, int]:
        """Projected gradient ascent on the unit sphere with backtracking."""
        w = w / np.linalg.norm(w)
        f = self.f_ratio(w, k)
        step = 0.1
        iterations = 0

        while iterations < self.max_ascent_iter:
            iterations += 1
            g = self.gradient(w, k)
            g = g - (g @ w) * w
            if np.linalg.norm(g) <= 1e-10:
                break

            improved = False
            while step > 1e-18:
                candidate = w + step * g
                candidate = candidate / np.linalg.norm(candidate)
                f_candidate = self.f_ratio(candidate, k)
                if f_candidate > f:
                    improved = True
                    break
                step *= 0.5
            if not improved:
                break

            w, f = candidate, f_candidate
            step = min(0.1, 2.0 * step)

        return w, f, iterations

    def multistart_maximize(self, k: int, n_starts: Optional[int] = None,
                            seed: Optional[int] = None) -> RatioPoint:
        """
        Best local maximum of f over n_starts seeded random directions.

        Start i draws from numpy.random.default_rng([seed, i]), so results do
        not depend on evaluation order.
        """
        k = self._order(k)
        n_starts = self.n_starts if n_starts is None else n_starts
        seed = self.seed if seed is None else seed
        if n_starts < 1:
            raise ValueError(f"n_starts must be >= 1, got {n_starts}")

        best_w, best_f = None, -np.inf
        for i in range(n_starts):
            rng = np.random.default_rng([seed, i])
            start = rng.standard_normal(4)
            if k == 1:
                w, f = start / np.linalg.norm(start), 1.0
            else:
                w, f, iterations = self._ascend(start, k)
                logger.debug("ascent_finished", k=k, start=i, f=f, iterations=iterations)
            if f > best_f:
                best_w, best_f = w, f

        best = self.point(best_w, k)
        logger.info("multistart_maximize", k=k, n_starts=n_starts, seed=seed, best_f=best.f_value,
                    bound=ratio_bound(k))
        return best

    def canonicalize(self, w) -> np.ndarray:
        """Unit 2-norm, coordinates sorted by |.| descending, largest coordinate positive."""
        return canonical_form(self._direction(w))

    def nearest_pattern(self, w) -> Tuple[int, float]:
        """
        Nearest normalized sign vector after canonicalization.

        Returns:
            (number of nonzeros of the nearest pattern, Euclidean distance to it)
        """
        c = self.canonicalize(w)
        best = (0, np.inf)
        for m in range(1, 5):
            pattern = np.zeros(4)
            pattern[:m] = np.where(c[:m] >= 0.0, 1.0, -1.0) / np.sqrt(m)
            distance = float(np.linalg.norm(c - pattern))
            if distance < best[1]:
                best = (m, distance)
        return best

    def claim1_check(self, r, k: int, solver=None) -> Claim1Report:
        """
        Chain ||z^k|| / ||y^1|| <= f(w^1) <= (1/2)^((k-1)/k) for a state r.

        y^1 is the closed-form order-1 dual optimum, y^k the order-k dual point
        from the solver, z^k the projection of y^k onto r_hat and w^1 = nu y^k
        the point where the ray through y^k leaves C_1.
        A default MaxEntSolver is used when no solver is given.

        Raises:
            ConvergenceError: the order-k solve did not converge
        """
        r = BlochVector.of(r)
        k = self._order(k, minimum=2)
        solver = solver or MaxEntSolver()
        report = solver.minnorm(r, k)
        if not report.converged:
            raise ConvergenceError(f"Order-{k} solve did not converge for r={r.to_list()}", k=k,
                                   report=report)

        r_hat = r.hat
        y1 = solver.dual_k1(r)
        yk = report.x_dual
        zk = (r_hat @ yk) / (r_hat @ r_hat) * r_hat
        w1 = self.boundary_scalings(yk, k).nu * yk

        projection_ratio = float(np.linalg.norm(zk) / np.linalg.norm(y1))
        value_ratio = float(report.dual_value / (r_hat @ y1))
        f_w1 = self.f_ratio(w1, k)

        result = Claim1Report(r=r, k=k, y1=y1, yk=yk, zk=zk, w1=w1,
                              projection_ratio=projection_ratio, value_ratio=value_ratio,
                              f_w1=f_w1, bound=ratio_bound(k))
        if not result.holds:
            logger.warning("projection_chain_violated", **result.to_dict())
        return result

    def claim4_scan(self, k: int, resolution: float = 1e-4) -> List[float]:
        """
        Roots on [-1, 1] of g(w) = w - ((1+w)^g - (1-w)^g) / ((1+w)^g + (1-w)^g), g = 1/(2k-1).

        Roots are grid points where |g| <= 1e-14 or midpoints of sign changes,
        merged when closer than two grid steps.
        """
        k = self._order(k, minimum=2)
        gamma = 1.0 / (2 * k - 1)
        n = int(round(2.0 / resolution))
        grid = np.linspace(-1.0, 1.0, n + 1)
        plus = (1.0 + grid) ** gamma
        minus = np.clip(1.0 - grid, 0.0, None) ** gamma
        values = grid - (plus - minus) / (plus + minus)

        roots = [float(x) for x in grid[np.abs(values) <= 1e-14]]
        signs = np.sign(values)
        crossings = np.flatnonzero(signs[:-1] * signs[1:] < 0)
        roots.extend(float(0.5 * (grid[i] + grid[i + 1])) for i in crossings)

        merged = []
        for root in sorted(roots):
            if merged and root - merged[-1] <= 2.0 * resolution:
                continue
            merged.append(root)
        return merged
