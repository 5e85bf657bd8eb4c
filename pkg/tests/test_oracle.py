"""
Tests for membership verdicts, classicality and boundary scans
"""

import itertools
import math

import numpy as np
import pytest

from app.exceptions import ConvergenceError
from app.models import BlochVector, MembershipVerdict, NonnegativeReport, OrderVerdict
from app.services import MaxEntSolver, OracleService
from app.services.oracle_service import GRID_COLUMNS
from tests.conftest import DIAGONAL_STATE, INV_SQRT3, random_ball, random_directions


class TestSatisfiesAtK:

    def test_origin(self, oracle):
        satisfied, entropy = oracle.satisfies_at_k((0, 0, 0), 1)
        assert satisfied
        assert entropy == pytest.approx(3.0, abs=1e-12)

    def test_example_state_is_on_the_boundary(self, oracle):
        satisfied, entropy = oracle.satisfies_at_k(DIAGONAL_STATE, 1)
        assert satisfied
        assert entropy == pytest.approx(2.0, abs=1e-12)

    def test_outside_the_ball(self, oracle):
        satisfied, entropy = oracle.satisfies_at_k((0.8, 0.8, 0), 1)
        assert not satisfied
        assert entropy == pytest.approx(3 - math.log2(2.28), abs=1e-12)

    def test_closed_form_at_order_one(self, oracle):
        rng = np.random.default_rng(5)
        for r in random_ball(rng, 50, radius=1.5):
            _, entropy = oracle.satisfies_at_k(r, 1)
            assert entropy == pytest.approx(3 - math.log2(1 + r @ r), abs=1e-12)

    def test_non_convergence_raises_with_order(self):
        oracle = OracleService(solver=MaxEntSolver(max_iter=0))
        with pytest.raises(ConvergenceError) as excinfo:
            oracle.satisfies_at_k((0.3, 0.5, -0.2), 3)
        assert excinfo.value.k == 3
        assert excinfo.value.report is not None


class TestMembership:

    def test_pure_state(self, oracle):
        verdict = oracle.membership((0.6, 0, 0.8), 3)
        assert verdict.overall
        assert verdict.k_max == 3
        assert verdict.first_failure is None
        assert verdict.theorem_consistent

    def test_cube_corner_fails(self, oracle):
        verdict = oracle.membership((1, 1, 1), 2)
        assert not verdict.overall
        assert verdict.first_failure == 1
        assert verdict.theorem_consistent

    def test_defaults_to_configured_order(self, solver, entropy):
        oracle = OracleService(solver=solver, entropy=entropy, k_max=2)
        assert oracle.membership((0, 0, 0)).k_max == 2

    def test_rejects_bad_order(self, oracle):
        with pytest.raises(ValueError):
            oracle.membership((0, 0, 0), 0)

    def test_verdict_document(self, oracle):
        document = oracle.membership((INV_SQRT3, 0, 0), 2).to_dict()
        assert document['overall'] is True
        assert document['is_quantum_state'] is True
        assert [v['k'] for v in document['per_k']] == [1, 2]

    def test_consistency_flag(self):
        passing = OrderVerdict(k=1, max_entropy=2.5, satisfied=True, gap=0.0)
        failing = OrderVerdict(k=2, max_entropy=1.5, satisfied=False, gap=0.0)
        r = BlochVector((0, 0, 0))
        assert not MembershipVerdict(r=r, per_k=[passing, failing]).theorem_consistent
        assert MembershipVerdict(r=r, per_k=[failing, passing]).theorem_consistent

    def test_outside_state_over_five_orders(self, oracle):
        verdict = oracle.membership((0.8, 0.8, 0), 5)
        assert not verdict.overall
        assert verdict.first_failure == 1
        assert [v.k for v in verdict.per_k] == [1, 2, 3, 4, 5]
        assert all(v.converged for v in verdict.per_k)
        assert verdict.theorem_consistent

    def test_maximally_mixed_state_over_five_orders(self, oracle):
        verdict = oracle.membership((0, 0, 0), 5)
        assert verdict.overall
        for v in verdict.per_k:
            assert v.max_entropy == pytest.approx(3.0, abs=1e-12)

    def test_vanishing_components_on_cube_lattice(self, oracle):
        for r in itertools.product((-1.0, 0.0, 1.0), repeat=3):
            verdict = oracle.membership(r, 8)
            assert verdict.theorem_consistent
            assert verdict.overall is bool(np.linalg.norm(r) <= 1.0)

    def test_agrees_with_euclidean_ball(self, oracle):
        rng = np.random.default_rng(17)
        for r in rng.uniform(-1.2, 1.2, size=(300, 3)):
            norm = np.linalg.norm(r)
            if abs(norm - 1.0) <= 1e-6:
                continue
            assert oracle.membership(r, 1).overall is bool(norm <= 1.0)

    @pytest.mark.slow
    def test_every_order_agrees_inside_and_outside(self, oracle):
        rng = np.random.default_rng(23)
        for r in rng.uniform(-1.2, 1.2, size=(200, 3)):
            norm = np.linalg.norm(r)
            if abs(norm - 1.0) <= 1e-6:
                continue
            verdict = oracle.membership(r, 5)
            assert verdict.theorem_consistent
            assert verdict.overall is bool(norm <= 1.0)

    def test_entropy_decreases_along_rays(self, oracle):
        rng = np.random.default_rng(31)
        radii = np.linspace(0.0, 1.4, 8)
        for d in random_directions(rng, 5):
            for k in (1, 2):
                entropies = [oracle.satisfies_at_k(rho * d, k)[1] for rho in radii]
                assert np.all(np.diff(entropies) <= 1e-10)


class TestClassical:

    @pytest.mark.parametrize('r, expected', [
        ((0, 0, 0), True),
        ((0.5, 0.5, 0), True),
        ((1, 0, 0), True),
        ((INV_SQRT3, INV_SQRT3, INV_SQRT3), False),
        ((0.6, 0, 0.8), False),
        ((1.2, 0, 0), False),
    ])
    def test_examples(self, oracle, r, expected):
        assert oracle.classical_representable(r) is expected

    def test_matches_l1_ball_on_lattice(self, oracle):
        axis = oracle.grid_axis(0.25)
        for x in axis:
            for y in axis:
                for z in axis:
                    r = np.array([x, y, z])
                    l1 = np.abs(r).sum()
                    if abs(l1 - 1.0) <= 1e-8:
                        continue
                    assert oracle.classical_representable(r) is bool(l1 < 1.0)

    def test_region_violation_returns_verdict(self):
        class StalledSolver(MaxEntSolver):
            def minnorm_nonneg2(self, r, tol=1e-12):
                return NonnegativeReport(r=BlochVector.of(r), status=NonnegativeReport.MAX_ITER, value=0.6)

        oracle = OracleService(solver=StalledSolver())
        assert oracle.classical_representable((0.2, 0.2, 0.2)) is False


class TestBoundaryScan:

    def test_axis_direction(self, oracle):
        assert oracle.boundary_scan((1, 0, 0), 1) == pytest.approx(1.0, abs=1e-8)

    def test_diagonal_direction(self, oracle):
        assert oracle.boundary_scan(DIAGONAL_STATE, 1) == pytest.approx(1.0, abs=1e-8)

    def test_higher_order_radius_is_one(self, oracle):
        d = random_directions(np.random.default_rng(3), 1)[0]
        assert oracle.boundary_scan(d, 3, tol=1e-7) == pytest.approx(1.0, abs=1e-6)

    def test_single_order_reaches_at_least_the_sphere(self, oracle):
        assert oracle.boundary_scan((0, 0, 1), 2, tol=1e-6, cumulative=False) >= 1.0 - 1e-6

    def test_rejects_non_unit_direction(self, oracle):
        with pytest.raises(ValueError):
            oracle.boundary_scan((1, 1, 0), 1)


class TestGrid:

    def test_axis(self, oracle):
        assert oracle.grid_axis(0.5).tolist() == [-1.0, -0.5, 0.0, 0.5, 1.0]

    @pytest.mark.parametrize('step', [0, -0.1, 1.5])
    def test_rejects_bad_step(self, oracle, step):
        with pytest.raises(ValueError):
            oracle.grid_axis(step)

    def test_half_step_lattice(self, oracle):
        frame = oracle.evaluate_grid(0.5)
        assert list(frame.columns) == GRID_COLUMNS
        assert len(frame) == 125
        norms = np.linalg.norm(frame[['r1', 'r2', 'r3']].to_numpy(), axis=1)
        assert (frame['member'] == (norms <= 1.0 + 1e-12)).all()
        l1 = frame[['r1', 'r2', 'r3']].abs().sum(axis=1)
        assert (frame['classical'] == (l1 <= 1.0 + 1e-12)).all()
        assert frame['max_entropy_k1'].max() == pytest.approx(3.0, abs=1e-12)
