"""
Tests for signed Rényi entropies and the smoothness probe
"""

import math

import numpy as np
import pytest
import sympy as sp

from app.exceptions import EntropyDomainError, UndefinedEntropyError
from app.models import ProbeReport, SignedDistribution
from app.services.entropy_service import entropy_bound_norm, norm_to_entropy
from tests.conftest import DIAGONAL_Q


class TestRenyiSigned:

    @pytest.mark.parametrize('k', range(1, 9))
    def test_uniform_has_three_bits(self, entropy, k):
        assert entropy.renyi_signed(SignedDistribution.uniform(), k) == pytest.approx(3.0, abs=1e-12)

    @pytest.mark.parametrize('k', [1, 2, 5, 8])
    def test_point_mass_has_zero_bits(self, entropy, k):
        assert entropy.renyi_signed(SignedDistribution.point_mass(4), k) == pytest.approx(0.0, abs=1e-15)

    def test_example_reaches_the_bound(self, entropy):
        assert entropy.renyi_signed(DIAGONAL_Q, 1) == pytest.approx(2.0, abs=1e-12)

    def test_zero_vector_is_undefined(self, entropy):
        with pytest.raises(UndefinedEntropyError):
            entropy.renyi_signed(np.zeros(8), 2)

    def test_rejects_bad_order(self, entropy):
        with pytest.raises(EntropyDomainError):
            entropy.renyi_signed(DIAGONAL_Q, 0)

    def test_sign_flip_and_permutation_invariance(self, entropy, rng):
        for _ in range(1000):
            q = rng.normal(size=8)
            q /= q.sum()
            k = int(rng.integers(1, 6))
            base = entropy.renyi_signed(q, k)
            flipped = q * rng.choice([-1.0, 1.0], size=8)
            assert entropy.renyi_signed(flipped, k) == pytest.approx(base, abs=1e-12)
            assert entropy.renyi_signed(rng.permutation(q), k) == pytest.approx(base, abs=1e-12)

    def test_at_most_three_bits(self, entropy, rng):
        for _ in range(500):
            q = 0.125 + rng.normal(scale=0.5, size=8)
            q += (1.0 - q.sum()) / 8
            assert entropy.renyi_signed(q, int(rng.integers(1, 6))) < 3.0

    @pytest.mark.parametrize('k', [1, 2, 4])
    def test_three_bits_only_at_uniform(self, entropy, rng, k):
        direction = rng.normal(size=8)
        direction -= direction.mean()
        direction /= np.linalg.norm(direction)
        assert entropy.renyi_signed(np.full(8, 0.125), k) == pytest.approx(3.0, abs=1e-12)
        assert entropy.renyi_signed(0.125 + 1e-3 * direction, k) < 3.0 - 1e-9

    def test_matches_unsigned_on_probability_vectors(self, entropy, rng):
        for p in rng.dirichlet(np.ones(8), size=100):
            for k in (1, 2, 3):
                assert entropy.renyi_signed(p, k) == pytest.approx(entropy.renyi_unsigned(p, 2 * k), abs=1e-12)

    def test_norm_and_sum_forms_agree(self, entropy, rng):
        for _ in range(200):
            q = rng.normal(size=8)
            q /= q.sum()
            k = int(rng.integers(1, 5))
            assert entropy.renyi_signed(q, k) == pytest.approx(entropy.renyi_signed_sum(q, k), abs=1e-9)

    def test_general_order_agrees_at_even_integers(self, entropy):
        for k in (1, 2, 3):
            assert entropy.renyi_general(DIAGONAL_Q, 2 * k) == pytest.approx(entropy.renyi_signed(DIAGONAL_Q, k),
                                                                         abs=1e-12)

    @pytest.mark.parametrize('k', [1, 2, 3, 5])
    def test_bound_norm_matches_entropy_two(self, k):
        assert norm_to_entropy(entropy_bound_norm(k), k) == pytest.approx(2.0, abs=1e-12)


class TestRenyiUnsigned:

    def test_uniform_over_eight(self, entropy):
        assert entropy.renyi_unsigned(np.full(8, 0.125), 2) == pytest.approx(3.0, abs=1e-12)

    def test_fair_bit_shannon(self, entropy):
        assert entropy.renyi_unsigned([0.5, 0.5], 1) == pytest.approx(1.0, abs=1e-15)

    def test_biased_collision_entropy(self, entropy):
        assert entropy.renyi_unsigned([0.25, 0.75], 2) == pytest.approx(-math.log2(10 / 16), abs=1e-12)

    def test_zero_probabilities_are_ignored_in_shannon(self, entropy):
        assert entropy.renyi_unsigned([0.5, 0.5, 0.0], 1) == pytest.approx(1.0, abs=1e-15)

    def test_negative_component_points_to_signed_variant(self, entropy):
        with pytest.raises(EntropyDomainError, match='renyi_signed'):
            entropy.renyi_unsigned(DIAGONAL_Q, 2)

    def test_rejects_unnormalized(self, entropy):
        with pytest.raises(EntropyDomainError):
            entropy.renyi_unsigned([0.5, 0.6], 2)

    def test_rejects_nonpositive_order(self, entropy):
        with pytest.raises(EntropyDomainError):
            entropy.renyi_unsigned([0.5, 0.5], 0)


def sided_derivative(alpha, order, side):
    """Exact one-sided derivative of H_alpha((q, 1 - q)) at 0 from sympy."""
    q = sp.symbols('q', positive=True)
    a = sp.Rational(alpha).limit_denominator(1000) if not isinstance(alpha, int) else alpha
    if side > 0:
        g = -sp.log(q ** a + (1 - q) ** a, 2) / (a - 1)
    else:
        g = -sp.log(q ** a + (1 + q) ** a, 2) / (a - 1)
    derivative = sp.diff(g, q, order)
    value = sp.limit(derivative, q, 0, '+')
    return float(value) * (1 if side > 0 else (-1) ** order)


class TestSmoothnessProbe:

    @pytest.mark.parametrize('order', [1, 2, 3])
    def test_alpha_two_matches(self, entropy, order):
        assert entropy.smoothness_probe(2, order).classification == ProbeReport.MATCH

    @pytest.mark.parametrize('order', [1, 2, 3])
    def test_alpha_four_matches(self, entropy, order):
        assert entropy.smoothness_probe(4, order).classification == ProbeReport.MATCH

    def test_alpha_three_jumps_at_third_order(self, entropy):
        report = entropy.smoothness_probe(3, 3)
        assert report.classification == ProbeReport.JUMP
        assert abs(report.right.limit - report.left.limit) == pytest.approx(6 / math.log(2), rel=1e-2)

    @pytest.mark.parametrize('order', [1, 2])
    def test_alpha_three_smooth_below_third_order(self, entropy, order):
        assert entropy.smoothness_probe(3, order).classification == ProbeReport.MATCH

    def test_alpha_three_halves_diverges(self, entropy):
        report = entropy.smoothness_probe(1.5, 2)
        assert report.classification == ProbeReport.DIVERGE
        assert abs(report.right.raw[-1]) > 10 * abs(report.right.raw[0])

    def test_limits_match_symbolic_derivatives(self, entropy):
        report = entropy.smoothness_probe(3, 3)
        right = sided_derivative(3, 3, +1)
        left = sided_derivative(3, 3, -1)
        assert report.right.limit == pytest.approx(right, rel=1e-3)
        assert report.left.limit == pytest.approx(left, rel=1e-3)

    def test_smooth_case_matches_symbolic_derivative(self, entropy):
        report = entropy.smoothness_probe(2, 2)
        assert report.right.limit == pytest.approx(sided_derivative(2, 2, +1), abs=1e-4)

    def test_shannon_case_diverges(self, entropy):
        report = entropy.smoothness_probe(1, 1)
        assert report.classification == ProbeReport.DIVERGE
        assert report.right.raw[-1] > report.right.raw[0] > 0
        assert report.left.raw[-1] < report.left.raw[0] < 0

    def test_fifth_order_at_fifth_derivative_is_inconclusive(self, entropy):
        report = entropy.smoothness_probe(5, 5)
        assert report.classification == ProbeReport.INCONCLUSIVE
        assert report.right.reliable < 3
        assert report.left.reliable < 3

    def test_steps_below_the_roundoff_floor_are_dropped(self, entropy):
        report = entropy.smoothness_probe(3, 4)
        assert report.right.reliable == 2
        assert len(report.right.extrapolated) == 1
        assert report.classification != ProbeReport.MATCH

    @pytest.mark.parametrize('alpha, order', [(2, 1), (2, 2), (4, 1), (4, 2)])
    def test_error_decays_along_the_schedule(self, entropy, alpha, order):
        report = entropy.smoothness_probe(alpha, order, steps=(1e-1, 1e-2, 1e-3, 1e-4))
        assert report.classification == ProbeReport.MATCH
        for side, sign in ((report.right, +1), (report.left, -1)):
            exact = sided_derivative(alpha, order, sign)
            raw = [abs(d - exact) for d in side.raw]
            for i in range(1, len(raw)):
                assert raw[i] < raw[i - 1] or raw[i] <= 2 * side.roundoff[i]
            extrapolated = [abs(e - exact) for e in side.extrapolated]
            for i in range(1, len(extrapolated)):
                assert extrapolated[i] < extrapolated[i - 1] or extrapolated[i] <= 4 * side.roundoff[i + 1]

    def test_report_carries_every_step(self, entropy):
        report = entropy.smoothness_probe(2, 1, steps=(1e-1, 1e-2, 1e-3, 1e-4))
        assert len(report.right.raw) == 4
        assert len(report.right.extrapolated) == 3
        assert report.to_dict()['classification'] == 'MATCH'

    @pytest.mark.parametrize('alpha, order, steps', [
        (0, 2, (1e-2, 1e-3)),
        (2, 0, (1e-2, 1e-3)),
        (2, 2, (1e-3, 1e-2)),
        (2, 2, (1e-2, -1e-3)),
    ])
    def test_rejects_invalid_arguments(self, entropy, alpha, order, steps):
        with pytest.raises(EntropyDomainError):
            entropy.smoothness_probe(alpha, order, steps)
