"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line (printed in the terminal summary) and
then asserts, so a failure is both reported and fatal.
"""
import math
import random
import time

import numpy as np
import pytest

from conftest import record
from mitsui_lab import properties
from mitsui_lab.domain import IntegerLattice, bounded_basis, torus_volumes
from mitsui_lab.field import ideal_from_generators, numeric_norm, unit_ideal
from mitsui_lab.fourier import TorusBox, fourier_approximate_indicator
from mitsui_lab.geometry import Ball, Box, DomainSegment, qmc_integrate
from mitsui_lab.harness import ExperimentConfig, class_split, mitsui_coefficient, run_proof_path
from mitsui_lab.ray import enumerate_finite_characters
from mitsui_lab.sieve import pit_sum, prime_elements_array

pytestmark = pytest.mark.slow

N6 = 10 ** 6


def _mod(field, k):
    return ideal_from_generators(field, [field.rational(k)])


def _pit_ratio(field):
    t0 = time.perf_counter()
    s = pit_sum(field, None, None, N6)
    return s.real / N6, time.perf_counter() - t0


def test_pit_rationals(QQ):
    ratio, secs = _pit_ratio(QQ)
    ok = abs(ratio - 1) <= 0.005 and secs <= 10
    record(1, "PIT over Q at 1e6", ok, f"ratio={ratio:.6f} time={secs:.1f}s")
    assert ok


@pytest.mark.parametrize("name", ["Q(i)", "Q(sqrt2)"])
def test_pit_quadratic(name):
    from mitsui_lab.config import reference_field
    ratio, secs = _pit_ratio(reference_field(name))
    ok = abs(ratio - 1) <= 0.005 and secs <= 60
    record(2, f"PIT over {name} at 1e6", ok, f"ratio={ratio:.6f} time={secs:.1f}s")
    assert ok


def test_disk_ratio_gaussian(Qi):
    O = unit_ideal(Qi)
    R = 1000.0
    emp = math.fsum(prime_elements_array(Qi, O, Ball(np.zeros(2), R)).weights.tolist())
    pred = mitsui_coefficient(Qi, O, O) * math.pi * R * R
    assert math.isclose(pred, 4e6, rel_tol=1e-12)
    ratio = emp / 4e6
    ok = 0.98 <= ratio <= 1.02
    record(3, "disk of radius 1e3 in Z[i]", ok, f"ratio={ratio:.6f}")
    assert ok


def test_square_ratio_sqrt2(Qs2):
    O = unit_ideal(Qs2)
    X = 1000.0
    emp = math.fsum(prime_elements_array(Qs2, O, Box(Qs2, [X, X])).weights.tolist())
    pred = 2 / (4 * math.log(1 + math.sqrt(2))) * 4 * X * X
    assert math.isclose(pred, mitsui_coefficient(Qs2, O, O) * 4 * X * X, rel_tol=1e-9)
    ratio = emp / pred
    ok = 0.95 <= ratio <= 1.05
    record(4, "square X=1e3 in Z[sqrt2]", ok, f"ratio={ratio:.6f}")
    assert ok


def test_congruence_split_gaussian(Qi):
    q = _mod(Qi, 3)
    split = class_split(Qi, q, DomainSegment(Qi, 0, N6))
    sums = np.array(split["sums"])
    mean = sums.mean()
    spread = float(np.max(np.abs(sums - mean)) / mean)
    # independent total: every coprime prime element in the domain, no residue bookkeeping
    full = prime_elements_array(Qi, unit_ideal(Qi), DomainSegment(Qi, 0, N6))
    coprime = full.norms % 3 != 0
    total = math.fsum(full.weights[coprime].tolist())
    exact_total = math.fsum(sorted(np.log(full.norms[coprime].astype(float)).tolist()))
    ok = (len(sums) == 8 and spread <= 0.10 and split["exact"]
          and split["total_count"] == int(coprime.sum()) and split["total"] == total
          and math.fsum(sums.tolist()) == pytest.approx(exact_total, rel=1e-12))
    record(5, "congruence split mod 3 in Z[i]", ok,
           f"classes={len(sums)} max_dev={spread:.4f} count={split['total_count']}")
    assert ok


def test_nontrivial_character_cancellation(Qi):
    worst = 0.0
    count = 0
    for k in (3, 5):
        q = _mod(Qi, k)
        for psi in enumerate_finite_characters(Qi, q):
            if psi.is_trivial:
                continue
            worst = max(worst, abs(pit_sum(Qi, q, psi, N6)) / N6)
            count += 1
    ok = count == 4 and worst <= 0.05
    record(6, "nontrivial characters mod 3, 5 on Q(i)", ok, f"characters={count} max|sum|/N={worst:.2e}")
    assert ok


def test_bounded_basis_thousand():
    rng = random.Random(2024)
    mats = []
    while len(mats) < 1000:
        M = [[rng.randint(-30, 30) for _ in range(4)] for _ in range(4)]
        d = round(np.linalg.det(np.array(M, dtype=float)))
        if 0 < abs(d) <= 10 ** 4:
            mats.append(M)
    t0 = time.perf_counter()
    good = 0
    for M in mats:
        L = IntegerLattice(tuple(map(tuple, M)))
        B = bounded_basis(L)
        good += int(max(abs(v) for r in B.basis for v in r) <= L.index and B.same_lattice(L))
    secs = time.perf_counter() - t0
    ok = good == 1000 and secs <= 5
    record(7, "bounded basis of 1000 random 4x4 lattices", ok, f"passed={good} time={secs:.2f}s")
    assert ok


def test_fourier_suite():
    M = 20
    details, ok = [], True
    for d in (1, 2):
        P = TorusBox((0.3,) * d, (0.1,) * d)
        res = {}
        for Y in (100, 200):
            A = fourier_approximate_indicator(P, (), Y, M)
            ok &= A.max_abs_coefficient() <= 1 and abs(A.c0 - P.volume()) <= 1 / M
            res[Y] = A.residual_bound
        ratio = res[200] / res[100]
        ok &= ratio <= 0.7
        details.append(f"d={d} residual ratio={ratio:.3f}")
    record(8, "Fourier approximation suite", ok, "; ".join(details))
    assert ok


def test_packing_scaling_ball():
    ratio, thr, passed = properties.packing_scaling("Q(sqrt2)", 1000.0, (10, 20, 40))
    ok = passed and ratio <= 2
    record(9, "packing deficit scaling for a ball in Q(sqrt2)", ok, f"max/min={ratio:.3f}")
    assert ok


def test_torus_volumes_gaussian(Qi):
    base, idele = torus_volumes(Qi, unit_ideal(Qi))
    closed_ok = base == math.pi / 2 and idele == math.pi / 2
    a, b = 1.0, 50.0
    seg = DomainSegment(Qi, a, b)
    lo, hi = seg.bounding_box()

    def integrand(x):
        inside = seg.contains(x)
        out = np.zeros(x.shape[0])
        out[inside] = 2 ** Qi.r2 / numeric_norm(Qi, x[inside])
        return out

    mult, _ = qmc_integrate(integrand, lo, hi, n_points=N6)
    est = mult * math.sqrt(Qi.r1 + Qi.r2) / math.log(b / a)
    qmc_gap = abs(est - math.pi / 2) / (math.pi / 2)
    _, idele3 = torus_volumes(Qi, _mod(Qi, 3))
    ratio = idele3 / idele
    ok = closed_ok and qmc_gap <= 0.01 and ratio == 8
    record(10, "torus volumes for Q(i)", ok, f"closed={base!r} qmc_gap={qmc_gap:.2e} ratio={ratio!r}")
    assert ok


def test_proof_path_sandwich():
    cfg = ExperimentConfig.from_mapping({"kind": "proof-path", "field": "Q(sqrt2)",
                                         "params": {"X": 1000, "Y2": 64}})
    rep = run_proof_path(cfg)
    md = rep.metadata
    rows_ok = all(r[rep.columns.index("s_inner")] <= r[rep.columns.index("s_mid")]
                  <= r[rep.columns.index("s_outer")] for r in rep.rows)
    agg, brk = md["aggregate_rel_error"], md["bracket_rel_error"]
    ok = (md["chain_ok"] and rows_ok and len(rep.rows) > 0 and md["cells_partition_exact"]
          and abs(agg) <= 0.1 and abs(brk) <= 0.1)
    record(11, "thin-cone sandwich in Q(sqrt2)", ok,
           f"cells={len(rep.rows)} aggregate={agg:+.4f} bracket={brk:+.4f}")
    assert ok


PAIRS = [("Q(i)", 3), ("Q(i)", 5), ("Q(sqrt2)", 3), ("Q(sqrt2)", 7), ("Q", 5)]


def test_orthogonality_and_unit_invariance():
    worst_orth = worst_inv = 0.0
    for name, k in PAIRS:
        worst_orth = max(worst_orth, properties.character_orthogonality(name, k)[0])
        worst_inv = max(worst_inv, properties.unit_invariance(name, k, Y=3, trials=100, seed=k)[0])
    ok = worst_orth <= 1e-9 and worst_inv <= 1e-8
    record(12, "character orthogonality and unit invariance", ok,
           f"pairs={len(PAIRS)} orth={worst_orth:.1e} invariance={worst_inv:.1e}")
    assert ok
