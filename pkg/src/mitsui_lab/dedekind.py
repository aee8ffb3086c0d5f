"""Prime ideals above a rational prime by Dedekind-Kummer factorisation.

For p not dividing [O_K : Z[w]] the primes over p are (p, g_i(w)) where g_i
runs over the irreducible factors of the minimal polynomial of w mod p.  The
generator w is theta when p does not divide the power-basis index, and
otherwise some small integral element whose order Z[w] has index prime to p.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property, lru_cache

import sympy

from . import intlin, polymod
from .field import (FieldElement, FractionalIdeal, NumberField, _c, char_poly,
                    element_add, element_mul, field_norm, ideal_contains_ideal,
                    ideal_from_generators, ideal_mul, index_of_power_basis,
                    unit_ideal)


@dataclass(frozen=True)
class PrimeIdeal:
    over: int
    residue_degree: int
    ramification: int
    norm: int
    factor: tuple                    # irreducible factor mod p of the generator's min. poly
    aux: tuple = dc_field(repr=False, compare=False, default=())   # (field, generator, powers->basis matrix)
    generator: FieldElement | None = dc_field(default=None, compare=False)
    basis_hint: tuple | None = dc_field(default=None, repr=False, compare=False)

    @cached_property
    def ideal(self) -> FractionalIdeal:
        if self.basis_hint is not None:
            return FractionalIdeal(self.basis_hint, 1)
        field, w, _ = self.aux
        p = self.over
        g = _eval_poly_at(field, [int(c) for c in self.factor], w)
        return ideal_from_generators(field, [field.rational(p), g])

    @cached_property
    def residue_map(self) -> tuple | None:
        """For residue degree 1: the ring map O_K -> F_p as the images of the
        basis elements; x lies in the prime iff sum x_j c_j = 0 mod p."""
        if self.residue_degree != 1:
            return None
        field, w, Q = self.aux
        p = self.over
        r = (-self.factor[0]) % p
        rp = [pow(r, k, p) for k in range(field.degree)]
        out = []
        for row in Q:
            acc = 0
            for q, v in zip(row, rp):
                acc += q.numerator * pow(q.denominator, -1, p) * v
            out.append(acc % p)
        return tuple(out)

    def contains(self, x) -> bool:
        rm = self.residue_map
        if rm is not None:
            return sum(a * b for a, b in zip(_c(x), rm)) % self.over == 0
        return self.ideal.contains(x)

    def sort_key(self):
        return (self.norm, self.ideal.basis)


def _eval_poly_at(field, coeffs, w):
    acc = field.zero()
    for c in reversed(coeffs):
        acc = element_add(field, element_mul(field, acc, w), field.rational(c))
    return acc


def _powers_to_basis(field: NumberField, w) -> list:
    """Rational matrix Q with w_j = sum_k Q[j][k] w^k (rows indexed by basis)."""
    n = field.degree
    rows = []
    cur = field.one()
    for _ in range(n):
        rows.append([Fraction(v) for v in cur.coords])
        cur = element_mul(field, cur, w)
    # rows: w^k in basis coordinates; we want the inverse relation
    return intlin.rational_inverse(rows)


@lru_cache(maxsize=None)
def _generators_for(field: NumberField):
    """Candidate generators w with their minimal polynomial and index."""
    n = field.degree
    out = []
    theta = _theta(field)
    cands = [theta] + [field.element(v) for v in itertools.product(range(-2, 3), repeat=n)
                       if any(v[1:])]
    seen = set()
    for w in cands:
        if w.coords in seen:
            continue
        seen.add(w.coords)
        cp = char_poly(field, w)
        disc = _disc(cp)
        if disc == 0:
            continue
        ratio = Fraction(disc, field.discriminant)
        if ratio.denominator != 1:
            continue
        idx = math.isqrt(abs(ratio.numerator))
        if idx * idx != abs(ratio.numerator):
            continue
        out.append((w, tuple(cp), idx))
        if len(out) > 40:
            break
    return out


def _theta(field):
    # theta in integral-basis coordinates: (power coords e_1) @ basis^-1
    n = field.degree
    if n == 1:
        return field.rational(-field.spec.defining_polynomial[0])
    inv = intlin.rational_inverse([list(r) for r in field.basis])
    return field.element(tuple(int(v) for v in inv[1]))


def _disc(cp):
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(cp)), x, domain="ZZ")
    if poly.degree() == 1:
        return 1
    return int(sympy.discriminant(poly))


@lru_cache(maxsize=None)
def _index_and_theta(field):
    return index_of_power_basis(field), _theta(field)


def _choose_generator(field: NumberField, p: int):
    idx, theta = _index_and_theta(field)
    if idx.numerator % p != 0:
        return theta, list(field.spec.defining_polynomial)
    for w, cp, widx in _generators_for(field):
        if widx % p != 0:
            return w, list(cp)
    raise ValueError(f"no generator with index prime to {p}: "
                     "factorisation at an index-dividing prime is not supported")


def _sqrt_mod(a, p):
    a %= p
    if a == 0:
        return 0
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    return int(sympy.sqrt_mod(a, p))


def _factor_mod(cp, p):
    """Irreducible factors of a monic integer polynomial mod p."""
    if len(cp) == 2:
        return [([cp[0] % p, 1], 1)]
    if len(cp) == 3 and p > 2:
        c, b = cp[0] % p, cp[1] % p
        d = (b * b - 4 * c) % p
        if d == 0:
            r = (-b * pow(2, -1, p)) % p
            return [([(-r) % p, 1], 2)]
        if pow(d, (p - 1) // 2, p) == p - 1:
            return [([c, b, 1], 1)]
        s = _sqrt_mod(d, p)
        inv2 = pow(2, -1, p)
        r1 = (-b + s) * inv2 % p
        r2 = (-b - s) * inv2 % p
        return sorted([([(-r1) % p, 1], 1), ([(-r2) % p, 1], 1)])
    return polymod.factor(cp, p)


def _degree_one_basis(n, p, rm):
    """HNF of {x : sum x_j c_j = 0 mod p} for a residue map with c_0 = 1."""
    k = max(j for j in range(n) if rm[j] % p)
    inv = pow(rm[k], -1, p)
    rows = []
    for i in range(n):
        row = [0] * n
        if i < k:
            row[i] = 1
            row[k] = (-rm[i] * inv) % p
        elif i == k:
            row[k] = p
        else:
            row[i] = 1
        rows.append(tuple(row))
    return tuple(rows)


def primes_above(field: NumberField, p: int) -> list[PrimeIdeal]:
    """All prime ideals over p, sorted by (norm, factor)."""
    return list(_primes_above_cached(field, int(p)))


@lru_cache(maxsize=4096)
def _q_matrix(field, w_coords):
    return tuple(tuple(r) for r in _powers_to_basis(field, field.element(w_coords)))


@lru_cache(maxsize=200000)
def _primes_above_cached(field: NumberField, p: int) -> tuple:
    w, cp = _choose_generator(field, p)
    Q = _q_matrix(field, w.coords)
    out = []
    for g, e in _factor_mod([int(c) for c in cp], p):
        f = len(g) - 1
        P = PrimeIdeal(p, f, e, p ** f, tuple(g), (field, w, Q))
        if f == 1:
            hint = _degree_one_basis(field.degree, p, P.residue_map)
            P = PrimeIdeal(p, f, e, p ** f, tuple(g), (field, w, Q), None, hint)
        out.append(P)
    out.sort(key=lambda P: P.sort_key())
    return tuple(out)


def prime_factors(field: NumberField, q: FractionalIdeal) -> list[tuple[PrimeIdeal, int]]:
    """Factorisation of an integral ideal as [(prime, exponent)]."""
    if q.denominator != 1:
        raise ValueError("factorisation needs an integral ideal")
    nq = q.norm.numerator
    out = []
    for p in sorted(sympy.factorint(nq)) if nq > 1 else []:
        for P in primes_above(field, p):
            k = 0
            power = P.ideal
            while ideal_contains_ideal(power, q):
                k += 1
                power = ideal_mul(field, power, P.ideal)
            if k:
                out.append((P, k))
    return out


def totient(field: NumberField, q: FractionalIdeal) -> int:
    """phi(q) = #(O_K/q)^x."""
    phi = int(q.norm)
    for P, _ in prime_factors(field, q):
        phi = phi // P.norm * (P.norm - 1)
    return phi


def divides(P: PrimeIdeal, q: FractionalIdeal) -> bool:
    return ideal_contains_ideal(P.ideal, q)


def is_unit_ideal(field, q):
    return q == unit_ideal(field)
