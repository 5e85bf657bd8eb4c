#!/usr/bin/env python3
"""
Acceptance run for the Signed Qubit Entropy toolkit
Checks the reproduction, duality, ratio, classicality and CLI criteria with timings
"""

import itertools
import json
import os
import sys
import time

import numpy as np

# Add parent directory to path to import app
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from app import setup_logging  # noqa: E402
from app.models import ProbeReport, SignedDistribution  # noqa: E402
from app.services import (  # noqa: E402
    DualGeometryService,
    EntropyService,
    MaxEntSolver,
    OracleService,
)
from app.services.dual_geometry_service import ratio_bound  # noqa: E402
from app.utils import pnorm, sign_matrix, walsh_nullspace  # noqa: E402

SEED = 20240607
INV_SQRT3 = 1.0 / np.sqrt(3.0)

solver = MaxEntSolver()
entropy = EntropyService()
geometry = DualGeometryService()
oracle = OracleService(solver=solver, entropy=entropy)


def random_ball(rng, count, radius):
    d = rng.standard_normal((count, 3))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    return d * (radius * rng.random(count) ** (1.0 / 3.0))[:, None]


def lattice(low, high, points):
    axis = np.linspace(low, high, points)
    return (np.array(r) for r in itertools.product(axis, repeat=3))


def example_reproduction():
    expected = np.array([1 + np.sqrt(3), 1 + INV_SQRT3, 1 + INV_SQRT3, 1 - INV_SQRT3,
                         1 + INV_SQRT3, 1 - INV_SQRT3, 1 - INV_SQRT3, 1 - np.sqrt(3)]) / 8
    q = solver.maxent2((INV_SQRT3, INV_SQRT3, INV_SQRT3))
    return (np.max(np.abs(q.q - expected)) <= 1e-12
            and abs(entropy.renyi_signed(q, 1) - 2.0) <= 1e-12
            and q.q[7] < 0)


def ball_at_order_one():
    for r in lattice(-1.25, 1.25, 21):
        norm = np.linalg.norm(r)
        if abs(norm - 1.0) <= 1e-9:
            continue
        if oracle.satisfies_at_k(r, 1)[0] is not bool(norm <= 1.0):
            print(f"   mismatch at r={r.tolist()}")
            return False
    return True


def ball_at_higher_orders():
    rng = np.random.default_rng(SEED)
    for r in random_ball(rng, 200, 1.0):
        for k in (2, 3, 4, 5):
            report = solver.minnorm(r, k)
            if report.converged and report.entropy < 2.0 - 1e-8:
                print(f"   H_{2 * k} = {report.entropy} at r={r.tolist()}")
                return False

    for d in random_ball(rng, 50, 1.0):
        d = d / np.linalg.norm(d)
        for k in (1, 2, 3):
            radius = oracle.boundary_scan(d, k, tol=1e-7)
            if abs(radius - 1.0) > 1e-6:
                print(f"   radius {radius} along {d.tolist()} at k={k}")
                return False
    return True


def strong_duality():
    rng = np.random.default_rng(SEED + 1)
    unconverged = 0
    for r in random_ball(rng, 1000, 1.5):
        report = solver.minnorm(r, int(rng.integers(1, 6)))
        if report.dual_value > report.primal_value + 1e-12:
            return False
        if not report.converged:
            unconverged += 1
        elif report.gap > 1e-8:
            return False
    print(f"   unconverged instances: {unconverged}")
    return True


def ratio_maximum():
    for k in range(2, 9):
        best = geometry.enumerate_candidates(k)[0]
        if abs(best.f_value - ratio_bound(k)) > 1e-12 or best.nonzero_count != 2:
            return False
        found = geometry.multistart_maximize(k, n_starts=100, seed=42)
        if found.f_value > ratio_bound(k) + 1e-7:
            return False
    return True


def critical_points():
    for k in range(2, 9):
        for point in geometry.enumerate_candidates(k):
            if point.foc_residual <= 1e-10:
                magnitudes = np.abs(point.w[point.w != 0])
                if not np.allclose(magnitudes, magnitudes[0]):
                    return False
        roots = geometry.claim4_scan(k, resolution=1e-4)
        if any(1e-3 < abs(root) < 1.0 - 1e-3 for root in roots):
            return False
    return True


def classicality():
    counterexamples = 0
    for r in lattice(-1.0, 1.0, 21):
        l1 = np.abs(r).sum()
        if abs(l1 - 1.0) <= 1e-8:
            continue
        classical = oracle.classical_representable(r)
        if l1 > 1.0 and classical:
            counterexamples += 1
    if counterexamples:
        print(f"⚠️  classical states with |r|_1 > 1: {counterexamples}")
    return (not oracle.classical_representable((INV_SQRT3, INV_SQRT3, INV_SQRT3))
            and not oracle.classical_representable((0.9, 0.9, 0))
            and oracle.classical_representable((0.5, 0.5, 0)))


def entropy_properties():
    for k in range(1, 9):
        if abs(entropy.renyi_signed(SignedDistribution.uniform(), k) - 3.0) > 1e-12:
            return False
        if abs(entropy.renyi_signed(SignedDistribution.point_mass(3), k)) > 1e-12:
            return False

    rng = np.random.default_rng(SEED + 2)
    for _ in range(1000):
        q = rng.normal(size=8)
        q /= q.sum()
        k = int(rng.integers(1, 6))
        base = entropy.renyi_signed(q, k)
        flipped = entropy.renyi_signed(q * rng.choice([-1.0, 1.0], size=8), k)
        permuted = entropy.renyi_signed(rng.permutation(q), k)
        if abs(flipped - base) > 1e-12 or abs(permuted - base) > 1e-12:
            return False

    expected = {(2, 2): ProbeReport.MATCH, (4, 2): ProbeReport.MATCH,
                (3, 3): ProbeReport.JUMP, (1.5, 2): ProbeReport.DIVERGE}
    return all(entropy.smoothness_probe(alpha, order).classification == label
               for (alpha, order), label in expected.items())


def grid_search_agreement():
    A = sign_matrix().astype(float)
    N = walsh_nullspace()
    offsets = np.linspace(-1.0, 1.0, 9)
    base_grid = np.array(list(itertools.product(offsets, repeat=4)))
    rng = np.random.default_rng(SEED + 3)

    for r in random_ball(rng, 20, 1.2):
        k = int(rng.integers(1, 4))
        q0 = A.T @ np.append(r, 1.0) / 8.0
        center, width = np.zeros(4), 1.0
        for _ in range(40):
            grid = base_grid * width + center
            values = np.sum((q0 + grid @ N.T) ** (2 * k), axis=1)
            center = grid[int(np.argmin(values))]
            width *= 0.5
        if abs(solver.minnorm(r, k).primal_value - pnorm(q0 + N @ center, 2 * k)) > 1e-6:
            return False
    return True


def cli_contract():
    from click.testing import CliRunner

    from app.cli import cli

    runner = CliRunner(mix_stderr=False)
    result = runner.invoke(cli, ['--no-timestamp', 'maxent', '--r', '1/sqrt3,1/sqrt3,1/sqrt3'])
    if result.exit_code != 0 or abs(json.loads(result.stdout)['q'][7] + 0.0915064) > 1e-7:
        return False

    result = runner.invoke(cli, ['--no-timestamp', 'fmax', '--k', '2', '--enumerate'])
    if result.exit_code != 0 or abs(json.loads(result.stdout)['max_f'] - ratio_bound(2)) > 1e-12:
        return False

    result = runner.invoke(cli, ['check', '--r', '0.8,0.8,0', '--kmax', '5'])
    if result.exit_code != 0 or json.loads(result.stdout)['overall'] is not False:
        return False

    return runner.invoke(cli, ['maxent', '--r', '0.1,0.2']).exit_code == 2


CRITERIA = [
    ('Example reproduction', example_reproduction),
    ('Euclidean ball at k=1', ball_at_order_one),
    ('Euclidean ball at k>1', ball_at_higher_orders),
    ('Strong and weak duality', strong_duality),
    ('Ratio-functional maximum', ratio_maximum),
    ('Critical-point structure', critical_points),
    ('Classicality region', classicality),
    ('Entropy properties', entropy_properties),
    ('Grid-search agreement', grid_search_agreement),
    ('CLI contract', cli_contract),
]


def main():
    """Run every criterion and report timings."""
    print("🚀 Signed Qubit Entropy - Acceptance Run")
    print("=" * 50)
    setup_logging('ERROR')

    passed = 0
    for number, (name, check) in enumerate(CRITERIA, start=1):
        started = time.perf_counter()
        try:
            ok = check()
        except Exception as e:
            print(f"❌ {number}. {name}: {str(e)}")
            continue
        elapsed = time.perf_counter() - started
        print(f"{'✅' if ok else '❌'} {number}. {name} ({elapsed:.2f}s)")
        passed += int(ok)

    print("\n" + "=" * 50)
    if passed == len(CRITERIA):
        print("🎉 All acceptance criteria passed!")
    else:
        print(f"❌ {len(CRITERIA) - passed} of {len(CRITERIA)} criteria failed")
    return passed == len(CRITERIA)


if __name__ == "__main__":
    sys.exit(0 if main() else 1)
