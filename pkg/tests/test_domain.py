import itertools
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mitsui_lab.config import reference_field
from mitsui_lab.dedekind import totient
from mitsui_lab.domain import (IntegerLattice, bounded_basis, compute_regulator,
                               fundamental_domain, log_embed, reduce_to_fundamental_domain,
                               torus_volumes, unit_kernel_lattice)
from mitsui_lab.field import (element_mul, element_pow, field_norm, ideal_from_generators,
                              minkowski_embed, unit_ideal)
from mitsui_lab.intlin import hnf


def _mod(f, k):
    return ideal_from_generators(f, [f.rational(k)])


def test_log_embed_examples(Qi, Qs2):
    assert np.allclose(log_embed(Qs2, Qs2.one()).vector, 0)
    L = math.log(1 + math.sqrt(2))
    le = log_embed(Qs2, (1, 1))
    assert np.allclose(le.vector, [L, -L])
    assert abs(le.norm_part) < 1e-12
    assert np.linalg.norm(le.h_component) == pytest.approx(math.sqrt(2) * L, rel=1e-12)
    assert np.allclose(log_embed(Qi, Qi.rational(2)).vector, [math.log(4)])


def test_log_embed_zero_rejected(Qs2):
    with pytest.raises(ValueError):
        log_embed(Qs2, (0, 0))


def test_log_coordinate_sum_is_log_norm():
    rng = random.Random(1)
    for name in ["Q(i)", "Q(sqrt2)", "Q(sqrt5)", "Q(cbrt2)"]:
        f = reference_field(name)
        for _ in range(50):
            x = [rng.randint(-30, 30) for _ in range(f.degree)]
            a = field_norm(f, x)[1]
            if a:
                assert log_embed(f, x).norm_part == pytest.approx(math.log(a), abs=1e-8)


def test_units_lie_in_trace_zero_hyperplane():
    for name in ["Q(sqrt2)", "Q(sqrt3)", "Q(sqrt5)", "Q(cbrt2)"]:
        f = reference_field(name)
        for u in f.fundamental_units:
            assert abs(log_embed(f, u).vector.sum()) <= 1e-8


def test_regulators(Qi, Qs2):
    assert compute_regulator(Qi) == 1.0
    assert compute_regulator(Qs2) == pytest.approx(0.881374, abs=1e-6)
    assert compute_regulator(reference_field("Q(sqrt5)")) == pytest.approx(0.481212, abs=1e-6)


def test_reduce_examples(Qi, Qs2):
    u, r = reduce_to_fundamental_domain(Qs2, (3, 1))
    assert r.coords == (3, 1) and u == Qs2.one()
    x = element_mul(Qs2, element_pow(Qs2, (1, 1), 2), (3, 1))
    u, r = reduce_to_fundamental_domain(Qs2, x)
    assert r.coords == (3, 1)
    assert u == element_pow(Qs2, (1, 1), 2)
    u, r = reduce_to_fundamental_domain(Qi, (-3, -2))
    assert element_mul(Qi, u, r).coords == (-3, -2)
    assert fundamental_domain(Qi).contains_element(r)
    assert field_norm(Qi, u)[1] == 1


def _associates(f, x, span=8):
    """All associates zeta^k eps^e x with |e_j| <= span."""
    out = []
    zs = [element_pow(f, f.torsion_generator, k) for k in range(f.torsion_order)]
    for z in zs:
        for es in itertools.product(range(-span, span + 1), repeat=f.unit_rank):
            u = z
            for e, eps, inv in zip(es, f.fundamental_units, f.unit_inverses):
                u = element_mul(f, u, element_pow(f, eps if e >= 0 else inv, abs(e)))
            out.append(element_mul(f, u, x))
    return out


@pytest.mark.parametrize("name", ["Q(i)", "Q(sqrt2)", "Q(sqrt5)", "Q(sqrt-5)", "Q"])
def test_exactly_one_associate_in_domain(name):
    f = reference_field(name)
    D = fundamental_domain(f)
    for x in itertools.product(range(-6, 7), repeat=f.degree):
        if not field_norm(f, x)[1]:
            continue
        hits = {a.coords for a in _associates(f, x) if D.contains_element(a)}
        assert len(hits) == 1, (x, hits)
        u, r = reduce_to_fundamental_domain(f, x)
        assert hits == {r.coords}


def test_bounded_basis_examples():
    I4 = IntegerLattice(tuple(tuple(int(i == j) for j in range(4)) for i in range(4)))
    assert bounded_basis(I4).same_lattice(I4)
    assert max(abs(v) for r in bounded_basis(I4).basis for v in r) <= 1
    L = IntegerLattice(((1, 0), (1, 5)))       # columns (1,1) and (0,5)
    B = bounded_basis(L)
    assert B.same_lattice(L) and B.index == 5
    assert max(abs(v) for r in B.basis for v in r) <= 5
    with pytest.raises(ValueError):
        IntegerLattice(((1, 2), (2, 4)))


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 5).flatmap(
    lambda d: st.lists(st.lists(st.integers(-40, 40), min_size=d, max_size=d), min_size=d, max_size=d)))
def test_bounded_basis_property(M):
    if round(np.linalg.det(np.array(M, dtype=float))) == 0:
        return
    L = IntegerLattice(tuple(map(tuple, M)))
    B = bounded_basis(L)
    D = L.index
    assert B.hnf() == L.hnf()
    assert max(abs(v) for r in B.basis for v in r) <= D
    assert B.index == D


def test_hnf_oracle_against_sympy():
    from sympy import Matrix
    from sympy.matrices.normalforms import hermite_normal_form
    rng = random.Random(9)
    for _ in range(30):
        M = [[rng.randint(-9, 9) for _ in range(3)] for _ in range(3)]
        if Matrix(M).det() == 0:
            continue
        ours = hnf(M, 3)
        # same row lattice: determinant matches and each of our rows is an integer combination
        inv = Matrix(M).T.inv()
        for row in ours:
            assert all(v.is_integer for v in inv * Matrix(row))
        assert abs(Matrix(ours).det()) == abs(Matrix(M).det())
        assert abs(hermite_normal_form(Matrix(M).T).det()) == abs(Matrix(M).det())


def _brute_kernel_index(f, k):
    """Least e > 0 with eps^e totally positive and congruent to 1 mod k."""
    eps = f.fundamental_units[0]
    u = f.one()
    for e in range(1, 200):
        u = element_mul(f, u, eps)
        signs_ok = all(minkowski_embed(f, u)[: f.r1].real > 0)
        if signs_ok and (u.coords[0] - 1) % k == 0 and all(c % k == 0 for c in u.coords[1:]):
            return e
    raise AssertionError("no kernel element found")


@pytest.mark.parametrize("name,k", [("Q(sqrt2)", 3), ("Q(sqrt5)", 2), ("Q(sqrt2)", 7), ("Q(sqrt3)", 5)])
def test_unit_kernel_lattice_brute_force(name, k):
    f = reference_field(name)
    L = unit_kernel_lattice(f, _mod(f, k))
    assert L.basis == ((_brute_kernel_index(f, k),),)


def test_unit_kernel_trivial_modulus(Qs2, Qi):
    L = unit_kernel_lattice(Qs2, unit_ideal(Qs2))
    # only the sign condition remains: eps has norm -1 so eps^2 is needed
    assert L.basis == ((2,),)
    assert unit_kernel_lattice(Qi, unit_ideal(Qi)).dim == 0


def test_unit_kernel_index_divides_group_order():
    f = reference_field("Q(cbrt2)")
    q = _mod(f, 5)
    L = unit_kernel_lattice(f, q)
    assert (totient(f, q) * 2 ** f.r1 * f.torsion_order) % L.index == 0


def test_torus_volumes(Qi, Qs2):
    assert torus_volumes(Qi, unit_ideal(Qi)) == (math.pi / 2, math.pi / 2)
    L = math.log(1 + math.sqrt(2))
    base, idele = torus_volumes(Qs2, unit_ideal(Qs2))
    assert base == pytest.approx(2 * math.sqrt(2) * L, rel=1e-14)
    for k in (3, 5, 7):
        q = _mod(Qs2, k)
        assert torus_volumes(Qs2, q)[1] / idele == pytest.approx(totient(Qs2, q), rel=1e-14)
