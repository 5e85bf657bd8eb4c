"""
MaxEnt Solver: maximum-H_2k representations of a potential state

Maximizing H_2k over {q : A q = r_hat} is the same as minimizing ||q||_2k.
For k = 1 the optimum is the least-norm solution (1/8) A^T r_hat; for k > 1
the solver runs damped Newton on the four nullspace coordinates z with
q = q* + N z, warm-started at z = 0.
"""

from typing import Optional, Tuple

import numpy as np
import structlog

from app.config import Config
from app.exceptions import CertificateError, EntropyDomainError
from app.models.phase_space import BlochVector, SignedDistribution
from app.models.reports import NonnegativeReport, SolveReport
from app.utils.active_set import min_norm_nonnegative
from app.utils.linalg import dual_exponent, pnorm, sign_matrix, walsh_nullspace
from app.utils.validators import DataValidator

logger = structlog.get_logger(__name__)

ARMIJO = 1e-4
REGULARIZATION = 1e-12
MAX_REGULARIZATION = 1e6


class MaxEntSolver:
    """Service for minimum 2k-norm representations and their dual certificates."""

    def __init__(self, tol: float = Config.TOL_GRAD, tol_gap: float = Config.TOL_GAP,
                 tol_feas: float = Config.TOL_FEAS, tol_kkt: float = Config.TOL_KKT,
                 max_iter: int = Config.MAX_ITER):
        """Initialize solver tolerances."""
        self.tol = tol
        self.tol_gap = tol_gap
        self.tol_feas = tol_feas
        self.tol_kkt = tol_kkt
        self.max_iter = max_iter
        self.A = sign_matrix().astype(float)
        self.N = walsh_nullspace()

    @staticmethod
    def _order(k: int) -> int:
        if not DataValidator.validate_order(k):
            raise EntropyDomainError(f"Order index k must be an integer >= 1, got {k!r}")
        return int(k)

    def maxent2(self, r) -> SignedDistribution:
        """Closed-form maximum 2-entropy representation q*_n = (1 + e_n . r) / 8."""
        r = BlochVector.of(r)
        return SignedDistribution(self.A.T @ r.hat / 8.0)

    def dual_k1(self, r) -> np.ndarray:
        """Closed-form k = 1 dual maximizer r_hat / (sqrt(8) ||r_hat||_2)."""
        r = BlochVector.of(r)
        r_hat = r.hat
        return r_hat / (np.sqrt(8.0) * np.linalg.norm(r_hat))

    def _objective(self, z: np.ndarray, q0: np.ndarray, k: int) -> float:
        y = 8.0 * (q0 + self.N @ z)
        return float(np.sum(y ** (2 * k)))

    def _derivatives(self, z: np.ndarray, q0: np.ndarray, k: int) -> Tuple[float, np.ndarray, np.ndarray]:
        """F(z) = sum (8 q_n)^2k with its gradient and Hessian in z."""
        y = 8.0 * (q0 + self.N @ z)
        F = float(np.sum(y ** (2 * k)))
        dq = 16.0 * k * y ** (2 * k - 1)
        d2q = 128.0 * k * (2 * k - 1) * y ** (2 * k - 2)
        grad = self.N.T @ dq
        hess = self.N.T @ (d2q[:, None] * self.N)
        return F, grad, hess

    @staticmethod
    def _newton_direction(grad: np.ndarray, hess: np.ndarray) -> Optional[np.ndarray]:
        lam = REGULARIZATION
        while lam <= MAX_REGULARIZATION:
            try:
                L = np.linalg.cholesky(hess + lam * np.eye(hess.shape[0]))
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            return -np.linalg.solve(L.T, np.linalg.solve(L, grad))
        return None

    def _certificate(self, q: np.ndarray, k: int) -> Tuple[np.ndarray, float, float]:
        """Gradient certificate x = (1/8) A u with its KKT residual and dual norm."""
        norm = pnorm(q, 2 * k)
        if norm == 0.0:
            raise CertificateError("Cannot build a dual certificate at q = 0")
        u = (q / norm) ** (2 * k - 1)
        x = self.A @ u / 8.0
        back = self.A.T @ x
        kkt_residual = float(np.linalg.norm(back - u))
        dual_norm = pnorm(back, dual_exponent(k))
        return x, kkt_residual, dual_norm

    def dual_certificate(self, r, k: int, q_opt) -> np.ndarray:
        """
        Dual point x = (1/8) A u from the norm gradient u at q_opt.

        Args:
            r: Bloch vector the representation was solved for
            k: Order index
            q_opt: Approximately optimal representation

        Returns:
            The 4-vector x

        Raises:
            CertificateError: KKT residual above tol_kkt or ||A^T x||_p' above 1 + tol_feas
        """
        k = self._order(k)
        q = np.asarray(getattr(q_opt, 'q', q_opt), dtype=float)
        x, kkt_residual, dual_norm = self._certificate(q, k)

        if kkt_residual > self.tol_kkt or dual_norm > 1.0 + self.tol_feas:
            logger.warning("certificate_failed", r=BlochVector.of(r).to_list(), k=k,
                           kkt_residual=kkt_residual, dual_norm=dual_norm)
            raise CertificateError(
                f"Dual certificate rejected (KKT residual {kkt_residual:.3g}, dual norm {dual_norm!r})",
                kkt_residual=kkt_residual,
                dual_norm=dual_norm,
            )
        return x

    def _gradient(self, z: np.ndarray, q0: np.ndarray, k: int) -> np.ndarray:
        y = 8.0 * (q0 + self.N @ z)
        return self.N.T @ (16.0 * k * y ** (2 * k - 1))

    def _certified_gap(self, q: np.ndarray, r_hat: np.ndarray, k: int) -> Tuple[np.ndarray, float, float]:
        """Feasible dual point, dual value and duality gap at q."""
        x, _, dual_norm = self._certificate(q, k)
        x = x / max(1.0, dual_norm)
        dual_value = float(r_hat @ x)
        return x, dual_value, pnorm(q, 2 * k) - dual_value

    def minnorm(self, r, k: int, tol: Optional[float] = None) -> SolveReport:
        """
        Minimize ||q||_2k subject to A q = r_hat.

        The loop stops once the gradient of ||q||_2k in nullspace coordinates
        or the certified duality gap drops below tol. Both stay resolvable where
        the optimum has vanishing components and F is flat to order 2k.

        Args:
            r: Bloch vector (any potential state)
            k: Order index k >= 1
            tol: Stopping tolerance; defaults to the solver's

        Returns:
            SolveReport; converged is False when the iteration budget ran out or
            the duality gap stayed above tol_gap
        """
        r = BlochVector.of(r)
        k = self._order(k)
        tol = self.tol if tol is None else tol
        q0 = self.maxent2(r).q

        z = np.zeros(4)
        iterations = 0
        gradient_norm = 0.0
        optimal = k == 1
        stalled = False

        while k > 1 and iterations <= self.max_iter:
            F, grad, hess = self._derivatives(z, q0, k)
            q = q0 + self.N @ z
            _, _, gap = self._certified_gap(q, r.hat, k)
            # d||q||_2k = ||q||_2k dF / (2k F)
            gradient_norm = pnorm(q, 2 * k) * float(np.max(np.abs(grad))) / (2 * k * F)
            logger.debug("newton_iteration", k=k, iteration=iterations, objective=F,
                         gradient_norm=gradient_norm, gap=gap)

            if gradient_norm <= tol or gap <= tol:
                optimal = True
                break
            if iterations == self.max_iter:
                break

            direction = self._newton_direction(grad, hess)
            slope = float(grad @ direction) if direction is not None else 0.0
            if slope >= 0.0:
                stalled = True
                break

            step = 1.0
            while True:
                candidate = z + step * direction
                if step < 1e-30 or np.array_equal(candidate, z):
                    stalled = True
                    break
                if self._objective(candidate, q0, k) <= F + ARMIJO * step * slope:
                    break
                # below the resolution of F: accept while the line minimum is not passed
                if float(self._gradient(candidate, q0, k) @ direction) <= 0.0:
                    break
                step *= 0.5
            if stalled:
                break

            z = candidate
            iterations += 1

        q = q0 + self.N @ z
        primal_value = pnorm(q, 2 * k)
        _, kkt_residual, _ = self._certificate(q, k)
        x, dual_value, gap = self._certified_gap(q, r.hat, k)
        residual = float(np.max(np.abs(self.A @ q - r.hat)))

        converged = (optimal or stalled) and gap <= self.tol_gap

        if not converged:
            logger.warning("minnorm_not_converged", r=r.to_list(), k=k, iterations=iterations,
                           gradient_norm=gradient_norm, gap=gap, stalled=stalled)
        else:
            logger.debug("minnorm_solved", r=r.to_list(), k=k, iterations=iterations,
                         primal_value=primal_value, gap=gap, kkt_residual=kkt_residual)

        return SolveReport(
            r=r,
            k=k,
            q_opt=SignedDistribution(q),
            x_dual=x,
            primal_value=primal_value,
            dual_value=dual_value,
            iterations=iterations,
            converged=converged,
            gradient_norm=gradient_norm,
            residual=residual,
            stalled=stalled,
        )

    def product_distribution(self, r) -> np.ndarray:
        """Nonnegative representation q_n = prod_i (1 + e_n(i) r_i) / 2 inside the cube."""
        r = BlochVector.of(r)
        factors = (1.0 + self.A[:3] * r.r[:, None]) / 2.0
        return np.prod(factors, axis=0)

    def minnorm_nonneg2(self, r, tol: float = 1e-12) -> NonnegativeReport:
        """
        Minimize ||q||_2 over {q >= 0, A q = r_hat} by active-set quadratic programming.

        The problem is feasible iff max|r_i| <= 1; the product distribution is
        the feasible start.

        Returns:
            NonnegativeReport with status optimal, infeasible or max_iter
        """
        r = BlochVector.of(r)
        if float(np.max(np.abs(r.r))) > 1.0 + tol:
            logger.debug("nonnegative_infeasible", r=r.to_list())
            return NonnegativeReport(r=r, status=NonnegativeReport.INFEASIBLE)

        start = self.product_distribution(BlochVector(np.clip(r.r, -1.0, 1.0)))
        result = min_norm_nonnegative(self.A, r.hat, start, tol=tol)

        if result.kkt_residual > self.tol_kkt:
            logger.warning("nonnegative_kkt_residual", r=r.to_list(), kkt_residual=result.kkt_residual)

        status = NonnegativeReport.OPTIMAL if result.converged else NonnegativeReport.MAX_ITER
        return NonnegativeReport(
            r=r,
            status=status,
            q=SignedDistribution(result.x),
            value=float(np.linalg.norm(result.x)),
            iterations=result.iterations,
            active_set=result.working_set,
            multipliers_min=result.multipliers_min,
            kkt_residual=result.kkt_residual,
        )
