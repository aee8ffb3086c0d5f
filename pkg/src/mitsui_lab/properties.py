"""Desk-scale property checks shared by the properties experiment and the tests.

Each check returns (measured value, threshold, passed).
"""
from __future__ import annotations

import math
import random

import numpy as np

from .config import reference_field
from .dedekind import primes_above
from .domain import IntegerLattice, bounded_basis, torus_volumes
from .field import (element_mul, element_pow, ideal_from_generators, minkowski_embed,
                    unit_ideal)
from .geometry import (Ball, Box, DomainSegment, ThinConeSegment, cover_with_annulus_sectors,
                       qmc_volume, region_volume, sectors_disjoint, select_interior_sectors)
from .ray import (angular_characters_up_to, congruence_class, enumerate_finite_characters,
                  evaluate_character, residue_ring)
from .sieve import prime_elements_array, rational_primes, sieve_prime_ideals


def modulus(field, k: int):
    return ideal_from_generators(field, [field.rational(k)])


def sieve_completeness(name="Q(i)", bound=2000):
    """max over unramified p < bound of |sum_{P | p} f log p - n log p|."""
    f = reference_field(name)
    worst = 0.0
    for p in rational_primes(bound):
        p = int(p)
        if f.discriminant % p == 0:
            continue
        tot = math.fsum(P.residue_degree * math.log(p) for P in primes_above(f, p))
        worst = max(worst, abs(tot - f.degree * math.log(p)))
    return worst, 1e-9, worst <= 1e-9


def generator_bijection(name="Q(sqrt2)", N=10 ** 4):
    """1 when the sieved generators are distinct and coincide with the
    prime elements found in the fundamental domain below N."""
    f = reference_field(name)
    gens = [P.generator.coords for P in sieve_prime_ideals(f, N)]
    enum = prime_elements_array(f, unit_ideal(f), DomainSegment(f, 0, N))
    ok = len(set(gens)) == len(gens) and set(gens) == {tuple(map(int, c)) for c in enum.coords}
    return float(ok), 1.0, ok


def congruence_partition(name="Q(i)", q=3, radius=60.0):
    """1 when the per-class streams partition the coprime stream."""
    f = reference_field(name)
    Q = modulus(f, q)
    O = unit_ideal(f)
    region = Ball(np.zeros(f.degree), radius)
    full = prime_elements_array(f, O, region, modulus=Q, coprime=True)
    ring = residue_ring(f, O, Q)
    seen = []
    for u in ring.units:
        cc = congruence_class(f, Q, O, tuple(int(v) for v in u))
        seen.extend(tuple(map(int, c)) for c in prime_elements_array(f, O, region, cc).coords)
    ok = len(seen) == len(set(seen)) and set(seen) == {tuple(map(int, c)) for c in full.coords}
    return float(ok), 1.0, ok


def pit_monotone(name="Q(i)", N=10 ** 4):
    from .sieve import prime_ideal_log_norms
    f = reference_field(name)
    _, w = prime_ideal_log_norms(f, N)
    ok = bool(np.all(np.diff(np.cumsum(w)) >= 0))
    return float(ok), 1.0, ok


def character_orthogonality(name="Q(i)", q=5):
    """max |(1/|G|) sum_g chi(g) conj(chi'(g)) - [chi = chi']|."""
    f = reference_field(name)
    chars = enumerate_finite_characters(f, modulus(f, q))
    G = chars[0].group
    elems = G.quotient_elements()
    M = np.array([[c.value(g) for g in elems] for c in chars])
    dev = float(np.max(np.abs(M @ M.conj().T / len(elems) - np.eye(len(chars)))))
    return dev, 1e-9, dev <= 1e-9


def _random_unit(f, rng):
    u = element_pow(f, f.torsion_generator, rng.randrange(f.torsion_order))
    for eps, inv in zip(f.fundamental_units, f.unit_inverses):
        k = rng.randint(-3, 3)
        u = element_mul(f, u, element_pow(f, eps if k >= 0 else inv, abs(k)))
    return u


def unit_invariance(name="Q(sqrt2)", q=3, Y=3, trials=100, seed=7):
    """max |psi(e x; e alpha) - psi(x; alpha)| over random characters, points,
    classes and units e."""
    f = reference_field(name)
    Q = modulus(f, q)
    O = unit_ideal(f)
    chars = list(enumerate_finite_characters(f, Q)) + list(angular_characters_up_to(f, Q, Y))
    ring = residue_ring(f, O, Q)
    rng = random.Random(seed)
    nprng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        psi = chars[rng.randrange(len(chars))]
        x = nprng.normal(size=f.r1 + f.r2) + 1j * np.concatenate([np.zeros(f.r1), nprng.normal(size=f.r2)])
        rep = tuple(int(v) for v in ring.units[rng.randrange(ring.phi)])
        e = _random_unit(f, rng)
        ex = x * minkowski_embed(f, e)
        alpha = congruence_class(f, Q, O, rep)
        ealpha = congruence_class(f, Q, O, element_mul(f, e, rep).coords)
        v1 = evaluate_character(psi, _real_point(f, x), alpha)
        v2 = evaluate_character(psi, _real_point(f, ex), ealpha)
        worst = max(worst, abs(v1 - v2))
    return worst, 1e-8, worst <= 1e-8


def _real_point(f, z):
    out = list(z[: f.r1].real)
    for j in range(f.r2):
        out += [z[f.r1 + j].real, z[f.r1 + j].imag]
    return np.array(out)


def fourier_bounds(d=2, Y=50, M=20):
    """max |c_xi| (must be <= 1) with the c0 deviation checked as well."""
    from .fourier import TorusBox, fourier_approximate_indicator
    P = TorusBox((0.3,) * d, (0.08,) * d)
    A = fourier_approximate_indicator(P, (2,), Y, M, measure=False)
    c = A.max_abs_coefficient()
    ok = c <= 1 and abs(A.c0 - P.volume() / 2) <= 1 / M
    return c, 1.0, ok


def sector_disjointness(name="Q(sqrt2)", X=100, Y=10):
    f = reference_field(name)
    ok = sectors_disjoint(cover_with_annulus_sectors(f, X, Y))
    return float(ok), 1.0, ok


def packing_scaling(name="Q(sqrt2)", X=1000.0, Ys=(10, 20, 40)):
    """max/min of deficit * Y / X^2 for a ball body."""
    f = reference_field(name)
    C = Ball(np.array([X / 2, X / 2] + [0.0] * (f.degree - 2)), 0.3 * X)
    vals = []
    for Y in Ys:
        _, deficit = select_interior_sectors(C, cover_with_annulus_sectors(f, X, Y))
        vals.append(deficit * Y / X ** 2)
    ratio = max(vals) / min(vals)
    return ratio, 2.0, ratio <= 2.0


def bounded_basis_random(count=200, dim=4, max_det=10 ** 4, seed=11):
    """Fraction of random lattices whose bounded basis passes both checks."""
    rng = random.Random(seed)
    good = 0
    done = 0
    while done < count:
        M = [[rng.randint(-30, 30) for _ in range(dim)] for _ in range(dim)]
        L = IntegerLattice(tuple(tuple(r) for r in M)) if _full_rank(M) else None
        if L is None or not 0 < L.index <= max_det:
            continue
        B = bounded_basis(L)
        D = L.index
        good += int(all(abs(v) <= D for r in B.basis for v in r) and B.same_lattice(L))
        done += 1
    frac = good / count
    return frac, 1.0, frac == 1.0


def _full_rank(M):
    return abs(np.linalg.det(np.array(M, dtype=float))) > 0.5


def measure_relation(name="Q(sqrt2)", n_points=2 ** 18):
    """Relative gap between the closed-form thin-cone volume and QMC."""
    f = reference_field(name)
    seg = ThinConeSegment(f, 0.25, 0.125, 0.0, 1.0, [1] * f.r1, 500.0, 2000.0)
    closed = region_volume(seg).value
    est = qmc_volume(seg, n_points).value
    gap = abs(est - closed) / closed
    return gap, 2e-3, gap <= 2e-3


def torus_volume_ratio(name="Q(i)", q=3):
    f = reference_field(name)
    base, full1 = torus_volumes(f, unit_ideal(f))
    _, fullq = torus_volumes(f, modulus(f, q))
    r = fullq / full1
    return r, 8.0, abs(r - 8.0) <= 1e-12


SUITE = [
    ("sieve_completeness", sieve_completeness),
    ("generator_bijection", generator_bijection),
    ("congruence_partition", congruence_partition),
    ("pit_monotone", pit_monotone),
    ("character_orthogonality", character_orthogonality),
    ("unit_invariance", unit_invariance),
    ("fourier_bounds", fourier_bounds),
    ("sector_disjointness", sector_disjointness),
    ("packing_scaling", packing_scaling),
    ("bounded_basis", bounded_basis_random),
    ("measure_relation", measure_relation),
    ("torus_volume_ratio", torus_volume_ratio),
]
