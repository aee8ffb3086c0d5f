"""Residue rings (a/qa)^x, the component group of C(q)/R_{>0}, its
characters, the chart C(q) = D x (a/qa)^x, and Hecke characters of finite
order or of angular type.

Conventions
-----------
* Raw component group: {+-1}^{r1} x (O_K/q)^x, written additively as
  Z/2 (one factor per real place, 1 = negative) followed by the cyclic
  factors of (O_K/q)^x from a Smith normal form.
* A character of a finite abelian group is stored as a vector of rational
  phases, one per raw factor; its value at raw coordinates x is
  exp(2 pi i sum_i phase_i x_i).
* The torsor (a/qa)^x is trivialised by its first unit class in canonical
  order (by 1 when a = O_K).  Character labels depend on this choice, sums
  and absolute values do not.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product

import numpy as np

from . import intlin
from .dedekind import prime_factors
from .field import (FieldElement, FractionalIdeal, NumberField, _c, element_mul,
                    ideal_mul, minkowski_embed, minkowski_real, mult_matrix,
                    reduce_mod_hnf_array, unit_ideal)

MAX_RESIDUE_RING = 10 ** 5
GENERATION_CHECK_LIMIT = 5000


# ---------------------------------------------------------------------------
# residue rings


@dataclass(frozen=True)
class CongruenceClass:
    """The class of ``representative`` in ambient/(modulus * ambient)."""

    modulus: FractionalIdeal
    ambient: FractionalIdeal
    representative: FieldElement


def _coset_codes(coords: np.ndarray, radices: np.ndarray) -> np.ndarray:
    """Lexicographic code of reduced coordinate rows (first coordinate most significant)."""
    code = np.zeros(coords.shape[0], dtype=np.int64)
    for i in range(coords.shape[1]):
        code = code * int(radices[i]) + coords[:, i]
    return code


class ResidueRing:
    """Coset representatives of a/qa with the classes generating it over O_K/q.

    ``elements`` holds canonical representatives (rows reduced modulo the
    HNF of qa) in lexicographic order; ``unit_mask`` marks (a/qa)^x.
    When a = O_K the unit group structure is computed: ``invariants``
    (d_1 | d_2 | ...), ``generators`` and a discrete-log table ``dlog``.
    """

    def __init__(self, field: NumberField, a: FractionalIdeal, q: FractionalIdeal,
                 method: str = "auto"):
        if a.denominator != 1 or q.denominator != 1:
            raise ValueError("residue rings need integral ideals")
        size = int(q.norm)
        if size > MAX_RESIDUE_RING:
            raise ValueError(f"residue ring of size {size} exceeds the brute-force limit {MAX_RESIDUE_RING}")
        self.field = field
        self.ambient = a
        self.modulus = q
        self.size = size
        self.qa = ideal_mul(field, q, a)
        self._H = np.array(self.qa.basis, dtype=np.int64)
        self._radices = np.diag(self._H).copy()

        # coset representatives of a modulo qa
        n = field.degree
        A = [list(r) for r in a.basis]
        Ainv = intlin.rational_inverse(A)
        rel = [[int(sum(Fraction(self.qa.basis[i][k]) * Ainv[k][j] for k in range(n)))
                for j in range(n)] for i in range(n)]
        rel = intlin.hnf(rel, n)
        ranges = [range(rel[i][i]) for i in range(n)]
        c = np.array(list(product(*ranges)), dtype=np.int64).reshape(-1, n)
        x = self.reduce(c @ np.array(A, dtype=np.int64))
        codes = _coset_codes(x, self._radices)
        order = np.argsort(codes, kind="stable")
        self.elements = x[order]
        self.codes = codes[order]
        if len(np.unique(self.codes)) != size:
            raise RuntimeError("coset enumeration produced duplicates")

        if method == "auto":
            method = "generate" if size <= GENERATION_CHECK_LIMIT else "valuation"
        self.method = method
        if method == "generate":
            mask = np.array([self._generates(row) for row in self.elements], dtype=bool)
        elif method == "valuation":
            mask = self._valuation_mask(self.elements)
        else:
            raise ValueError(f"unknown unit test {method!r}")
        self.unit_mask = mask
        self.units = self.elements[mask]
        self.unit_codes = self.codes[mask]
        self.phi = int(mask.sum())
        self.is_base = a == unit_ideal(field)
        self._group_done = False

    # basic maps -------------------------------------------------------
    def reduce(self, coords) -> np.ndarray:
        return reduce_mod_hnf_array(np.atleast_2d(np.asarray(coords, dtype=np.int64)), self._H)

    def code(self, coords) -> np.ndarray:
        return _coset_codes(self.reduce(coords), self._radices)

    def index(self, coords) -> np.ndarray:
        """Position in ``elements`` of each row's class."""
        codes = self.code(coords)
        pos = np.searchsorted(self.codes, codes)
        pos = np.clip(pos, 0, self.size - 1)
        if not np.all(self.codes[pos] == codes):
            raise ValueError("element does not lie in the ambient ideal")
        return pos

    def unit_index(self, coords) -> np.ndarray:
        """Position in ``units`` (-1 for non-unit classes)."""
        codes = self.code(coords)
        pos = np.searchsorted(self.unit_codes, codes)
        pos = np.clip(pos, 0, max(self.phi - 1, 0))
        ok = self.unit_codes[pos] == codes if self.phi else np.zeros(len(codes), bool)
        return np.where(ok, pos, -1)

    def is_unit(self, x) -> bool:
        return bool(self.unit_index([_c(x)])[0] >= 0)

    def _generates(self, row) -> bool:
        """x generates a/qa over O_K iff x O_K + qa = a."""
        rows = mult_matrix(self.field, [int(v) for v in row]) + [list(r) for r in self.qa.basis]
        h = intlin.hnf(rows, self.field.degree)
        return tuple(tuple(r) for r in h) == self.ambient.basis

    def _valuation_mask(self, coords):
        """v_P(x) = v_P(a) for every P | q, i.e. x lies in no P*a."""
        mask = np.ones(coords.shape[0], dtype=bool)
        for P, _ in prime_factors(self.field, self.modulus):
            Pa = ideal_mul(self.field, P.ideal, self.ambient)
            r = reduce_mod_hnf_array(coords, Pa.basis)
            mask &= np.any(r != 0, axis=1)
        return mask

    def valuation_mask(self):
        return self._valuation_mask(self.elements)

    # products ---------------------------------------------------------
    def _mul_rows(self, X, Y):
        T = self.field.T
        return self.reduce(np.einsum("mi,mj,ijk->mk", X, Y, T))

    # unit group structure (base ring only) -----------------------------
    def _ensure_group(self):
        if self._group_done:
            return
        if not self.is_base:
            raise ValueError("group structure is computed on (O_K/q)^x only")
        phi = self.phi
        U = self.units
        one_idx = int(self.unit_index([self.field.one().coords])[0])
        # element orders, all at once
        orders = np.zeros(phi, dtype=np.int64)
        cur = U.copy()
        step = 1
        while np.any(orders == 0):
            idx = self.unit_index(cur)
            hit = (idx == one_idx) & (orders == 0)
            orders[hit] = step
            cur = self._mul_rows(cur, U)
            step += 1
            if step > phi + 1:
                raise RuntimeError("order computation did not terminate")
        self.element_orders = orders

        # greedy generating set by maximal order, with relative-order relations
        exps = np.full((phi, 0), 0, dtype=np.int64)
        inH = np.zeros(phi, dtype=bool)
        inH[one_idx] = True
        gens, rels = [], []
        while not inH.all():
            cand = np.where(~inH)[0]
            g = int(cand[np.argmax(orders[cand])])   # first among maximal orders
            k = len(gens)
            exps = np.hstack([exps, np.zeros((phi, 1), dtype=np.int64)])
            members = np.where(inH)[0]
            base = U[members]
            gvec = np.repeat(U[g][None, :], len(members), axis=0)
            new_in = inH.copy()
            m = 0
            cur = base
            while True:
                m += 1
                cur = self._mul_rows(cur, gvec)
                idx = self.unit_index(cur)
                if inH[idx[0]]:
                    # g^m lies in the previous subgroup
                    h0 = idx[np.where(members == one_idx)[0][0]]
                    rel = [0] * (k + 1)
                    for j in range(k):
                        rel[j] = -int(exps[h0, j])
                    rel[k] = m
                    rels.append(rel)
                    break
                exps[idx, :k] = exps[members, :k]
                exps[idx, k] = m
                new_in[idx] = True
            inH = new_in
            gens.append(g)
        k = len(gens)
        R = [r + [0] * (k - len(r)) for r in rels]
        if k:
            _, D, V = intlin.smith_normal_form(R)
            diag = [D[i][i] for i in range(k)]
        else:
            V, diag = [], []
        keep = [i for i in range(k) if diag[i] > 1]
        self.invariants = tuple(int(diag[i]) for i in keep)
        Vk = np.array([[V[r][i] for i in keep] for r in range(k)], dtype=object).reshape(k, len(keep))
        y = (exps.astype(object) @ Vk) if k else np.zeros((phi, 0), dtype=object)
        inv = np.array(self.invariants, dtype=object)
        self.dlog = np.array(np.mod(y, inv) if len(keep) else y, dtype=np.int64).reshape(phi, len(keep))
        # generators of the cyclic factors: rows of V^-1
        if k:
            Vinv = intlin.rational_inverse(V)
            cyc = []
            for i in keep:
                e = [int(Vinv[i][j]) for j in range(k)]
                acc = self.field.one()
                for j in range(k):
                    acc = element_mul(self.field, acc, _unit_power(self, U[gens[j]], e[j]))
                cyc.append(FieldElement(tuple(int(v) for v in self.reduce([acc.coords])[0])))
            self.generators = tuple(cyc)
        else:
            self.generators = ()
        self._group_done = True

    @property
    def group_invariants(self) -> tuple:
        self._ensure_group()
        return self.invariants

    def discrete_log(self, coords) -> np.ndarray:
        """Coordinates on the cyclic factors of (O_K/q)^x, one row per element."""
        self._ensure_group()
        idx = self.unit_index(coords)
        if np.any(idx < 0):
            raise ValueError("discrete log of a non-unit class")
        return self.dlog[idx]

    def order_statistics(self) -> dict:
        self._ensure_group()
        vals, counts = np.unique(self.element_orders, return_counts=True)
        return {int(v): int(c) for v, c in zip(vals, counts)}

    # torsor -----------------------------------------------------------
    @cached_property
    def trivialization(self) -> FieldElement:
        """The configured generator of a/qa: 1 for a = O_K, else the first unit class."""
        if self.is_base:
            return FieldElement(tuple(int(v) for v in self.reduce([self.field.one().coords])[0]))
        if self.phi == 0:
            raise ValueError("a/qa has no generating class")
        return FieldElement(tuple(int(v) for v in self.units[0]))

    @cached_property
    def _torsor_table(self):
        base = base_ring(self.field, self.modulus)
        prods = base.units @ np.array(mult_matrix(self.field, self.trivialization), dtype=np.int64)
        codes = self.code(prods)
        order = np.argsort(codes)
        return codes[order], order, base

    def to_base(self, coords) -> np.ndarray:
        """Index in (O_K/q)^x of beta with beta * trivialization = x mod qa."""
        if self.is_base:
            idx = self.unit_index(coords)
            if np.any(idx < 0):
                raise ValueError("class is not a generator of a/qa")
            return idx
        codes_sorted, order, base = self._torsor_table
        codes = self.code(coords)
        pos = np.clip(np.searchsorted(codes_sorted, codes), 0, len(codes_sorted) - 1)
        if not np.all(codes_sorted[pos] == codes):
            raise ValueError("class is not a generator of a/qa")
        return order[pos]


def _unit_power(ring, row, e):
    """row^e in O_K/q for a unit class row (negative e via the group order)."""
    f = ring.field
    if e < 0:
        e %= ring.phi if ring.phi else 1
    acc = f.one()
    base = FieldElement(tuple(int(v) for v in row))
    while e:
        if e & 1:
            acc = FieldElement(tuple(int(v) for v in ring.reduce([element_mul(f, acc, base).coords])[0]))
        e >>= 1
        if e:
            base = FieldElement(tuple(int(v) for v in ring.reduce([element_mul(f, base, base).coords])[0]))
    return acc


@lru_cache(maxsize=256)
def residue_ring(field: NumberField, a: FractionalIdeal, q: FractionalIdeal) -> ResidueRing:
    return ResidueRing(field, a, q)


def base_ring(field: NumberField, q: FractionalIdeal) -> ResidueRing:
    return residue_ring(field, unit_ideal(field), q)


def residue_units(field: NumberField, a: FractionalIdeal, q: FractionalIdeal) -> ResidueRing:
    """(a/qa)^x with coset data; group structure available on the base ring."""
    ring = residue_ring(field, a, q)
    if ring.is_base:
        ring._ensure_group()
    return ring


def congruence_class(field: NumberField, q: FractionalIdeal, a: FractionalIdeal, rep,
                     require_unit: bool = True) -> CongruenceClass:
    """Canonical class of ``rep`` in a/qa, checked to generate a/qa."""
    if not a.contains(rep):
        raise ValueError("representative does not lie in the ambient ideal")
    ring = residue_ring(field, a, q)
    red = tuple(int(v) for v in ring.reduce([_c(rep)])[0])
    if require_unit and not ring.is_unit(red):
        raise ValueError("class does not generate a/qa (not coprime to the modulus)")
    return CongruenceClass(q, a, FieldElement(red))


# ---------------------------------------------------------------------------
# component group


class ComponentGroup:
    """pi_0(C(q)/R_{>0}) for h_K = 1: ({+-1}^{r1} x (O_K/q)^x) / image of O_K^x.

    ``raw_orders`` lists the raw cyclic factors; ``quotient_orders`` the
    factors e_j of the quotient, with coordinates y = x V mod e from a
    Smith normal form U R V = D of the relation matrix R.
    """

    def __init__(self, field: NumberField, q: FractionalIdeal):
        self.field = field
        self.modulus = q
        self.ring = residue_units(field, unit_ideal(field), q)
        self.class_group_unresolved = field.class_number > 1
        r1 = field.r1
        self.raw_orders = tuple([2] * r1 + list(self.ring.group_invariants))
        self.raw_size = int(np.prod(self.raw_orders, dtype=object)) if self.raw_orders else 1
        units = [field.torsion_generator] + list(field.fundamental_units)
        self.unit_images = [self.raw_coords_of_unit(u) for u in units]
        m = len(self.raw_orders)
        if m:
            rel = [list(v) for v in self.unit_images] + \
                  [[self.raw_orders[i] * int(i == j) for j in range(m)] for i in range(m)]
            _, D, V = intlin.smith_normal_form(rel)
            self._V = V
            self.quotient_orders = tuple(int(D[j][j]) for j in range(m))
        else:
            self._V = []
            self.quotient_orders = ()
        self.order = int(np.prod(self.quotient_orders, dtype=object)) if m else 1
        self.unit_image_size = self.raw_size // self.order

    # raw coordinates ------------------------------------------------------
    def raw_coords(self, signs, residue) -> tuple:
        """signs: +-1 per real place; residue: a unit class of O_K/q."""
        bits = [0 if s > 0 else 1 for s in signs]
        d = self.ring.discrete_log([_c(residue)])[0]
        return tuple(bits + [int(v) for v in d])

    def raw_coords_of_unit(self, u) -> tuple:
        f = self.field
        emb = minkowski_embed(f, u)
        signs = [1 if emb[i].real > 0 else -1 for i in range(f.r1)]
        return self.raw_coords(signs, u)

    def raw_coords_batch(self, points: np.ndarray, residue_idx: np.ndarray) -> np.ndarray:
        """Raw coordinates from real Minkowski points and unit indices in the base ring."""
        r1 = self.field.r1
        pts = np.atleast_2d(points)
        bits = (pts[:, :r1] < 0).astype(np.int64)
        self.ring._ensure_group()
        return np.hstack([bits, self.ring.dlog[residue_idx]])

    # quotient ---------------------------------------------------------
    def quotient_coords(self, raw) -> tuple:
        if not self.raw_orders:
            return ()
        x = list(raw)
        m = len(x)
        return tuple(sum(x[i] * self._V[i][j] for i in range(m)) % self.quotient_orders[j]
                     for j in range(m))

    def quotient_elements(self):
        return list(product(*[range(e) for e in self.quotient_orders]))

    def transversal(self) -> dict:
        """A raw representative for each quotient element."""
        out = {}
        for x in product(*[range(o) for o in self.raw_orders]):
            out.setdefault(self.quotient_coords(x), x)
        return out

    def is_trivial_on_units(self, phases) -> bool:
        return all(sum(p * v for p, v in zip(phases, img)) % 1 == 0 for img in self.unit_images)

    def raw_characters(self):
        """All characters of the raw group, as phase vectors."""
        for ks in product(*[range(o) for o in self.raw_orders]):
            yield tuple(Fraction(k, o) for k, o in zip(ks, self.raw_orders))


@lru_cache(maxsize=256)
def component_group(field: NumberField, q: FractionalIdeal) -> ComponentGroup:
    return ComponentGroup(field, q)


# ---------------------------------------------------------------------------
# characters


@dataclass(frozen=True)
class FiniteCharacter:
    """Character of the component group, labelled by k over the quotient factors."""

    label: tuple
    order: int
    phases: tuple                     # Fractions per raw factor
    is_real: bool
    group: ComponentGroup = dc_field(repr=False, compare=False, hash=False, default=None)

    @property
    def is_trivial(self) -> bool:
        return all(p == 0 for p in self.phases)

    def value_raw(self, raw) -> complex:
        ph = sum(p * int(v) for p, v in zip(self.phases, raw)) % 1
        return _root_of_unity(ph)

    def value(self, quotient_elem) -> complex:
        return self.value_raw(self.group.transversal()[tuple(quotient_elem)])

    def values(self) -> dict:
        return {g: self.value_raw(x) for g, x in self.group.transversal().items()}


def _root_of_unity(ph: Fraction) -> complex:
    ph = Fraction(ph) % 1
    # exact values at quarter turns keep trivial and real characters exact
    exact = {Fraction(0): 1 + 0j, Fraction(1, 4): 1j, Fraction(1, 2): -1 + 0j, Fraction(3, 4): -1j}
    if ph in exact:
        return exact[ph]
    a = 2 * math.pi * float(ph)
    return complex(math.cos(a), math.sin(a))


def enumerate_finite_characters(field: NumberField, q: FractionalIdeal) -> list[FiniteCharacter]:
    """All characters of pi_0(C(q)/R_{>0}) (h_K = 1 part); trivial first."""
    G = component_group(field, q)
    m = len(G.raw_orders)
    e = G.quotient_orders
    out = []
    for k in product(*[range(o) for o in e]):
        phases = tuple(sum((Fraction(G._V[i][j] * k[j], e[j]) for j in range(m)), Fraction(0)) % 1
                       for i in range(m))
        order = 1
        for kj, ej in zip(k, e):
            order = order * (ej // math.gcd(kj, ej)) // math.gcd(order, ej // math.gcd(kj, ej))
        real = all((2 * kj) % ej == 0 for kj, ej in zip(k, e))
        label = tuple(kj for kj, ej in zip(k, e) if ej > 1)
        out.append(FiniteCharacter(label, order, phases, real, G))
    return out


def trivial_character(field: NumberField, q: FractionalIdeal) -> FiniteCharacter:
    return enumerate_finite_characters(field, q)[0]


@dataclass(frozen=True)
class AngularCharacter:
    """exp(2 pi i (a.t(x) + sum_j m_j arg_j(x) / 2 pi + phase(signs, residue))).

    ``h_frequency`` k gives a = a_m + B^{-T} k with B a basis of the unit
    kernel lattice, so a pairs integrally with it up to the angular part.
    """

    h_frequency: tuple
    angular_frequencies: tuple
    phases: tuple
    a: tuple
    group: ComponentGroup = dc_field(repr=False, compare=False, hash=False, default=None)

    @property
    def sign_character(self) -> tuple:
        return self.phases[: self.group.field.r1]

    @property
    def finite_twist(self) -> tuple:
        return self.phases[self.group.field.r1:]

    @property
    def is_trivial(self) -> bool:
        return (not any(self.h_frequency) and not any(self.angular_frequencies)
                and all(p == 0 for p in self.phases))


def _turns(z: complex) -> float:
    return math.atan2(z.imag, z.real) / (2 * math.pi)


def _torsion_turns(field: NumberField) -> tuple:
    """Exact arguments (in turns) of the torsion generator at complex places."""
    emb = minkowski_embed(field, field.torsion_generator)
    w = field.torsion_order
    return tuple(Fraction(round(_turns(emb[field.r1 + j]) * w), w) for j in range(field.r2))


def angular_characters_up_to(field: NumberField, q: FractionalIdeal, Y: int) -> list[AngularCharacter]:
    """Characters of C(q)/R_{>0} with |k|_inf <= Y and |m|_inf <= Y."""
    if field.degree > 3:
        raise ValueError("angular characters are enumerated for degree <= 3 only")
    from .domain import unit_kernel_lattice
    G = component_group(field, q)
    r, r2, r1 = field.unit_rank, field.r2, field.r1
    tors_turns = _torsion_turns(field)
    # arguments of fundamental units at complex places (principal branch)
    eps_turns = [[_turns(minkowski_embed(field, u)[r1 + j]) for j in range(r2)]
                 for u in field.fundamental_units]
    if r:
        B = unit_kernel_lattice(field, q).basis
        Binv = intlin.rational_inverse([list(row) for row in B])
        BinvT = [[Binv[j][i] for j in range(r)] for i in range(r)]
    else:
        BinvT = []
    raw_chars = list(G.raw_characters())
    img_tors = G.unit_images[0]
    img_eps = G.unit_images[1:]
    out = []
    for m in product(range(-Y, Y + 1), repeat=r2):
        ang_tors = sum((mj * t for mj, t in zip(m, tors_turns)), Fraction(0))
        a_m = [-sum(mj * t for mj, t in zip(m, eps_turns[i])) for i in range(r)]
        ok_chars = [ph for ph in raw_chars
                    if (ang_tors + sum(p * v for p, v in zip(ph, img_tors))) % 1 == 0]
        for k in product(range(-Y, Y + 1), repeat=r):
            bk = [sum((BinvT[i][j] * k[j] for j in range(r)), Fraction(0)) for i in range(r)]
            for ph in ok_chars:
                if all((bk[i] + sum(p * v for p, v in zip(ph, img_eps[i]))) % 1 == 0
                       for i in range(r)):
                    a = tuple(a_m[i] + float(bk[i]) for i in range(r))
                    out.append(AngularCharacter(tuple(k), tuple(m), ph, a, G))
    out.sort(key=lambda c: (not c.is_trivial, sum(abs(v) for v in c.angular_frequencies)
                            + sum(abs(v) for v in c.h_frequency), c.angular_frequencies,
                            c.h_frequency, c.phases))
    return out


# ---------------------------------------------------------------------------
# evaluation


def _as_point(field, x) -> np.ndarray:
    if isinstance(x, np.ndarray) and x.dtype.kind == "f" and x.shape[-1] == field.degree:
        return np.atleast_2d(x)
    return minkowski_real(field, [_c(x)])


def _residue_base_index(field, q, alpha: CongruenceClass) -> int:
    ring = residue_ring(field, alpha.ambient, q)
    return int(ring.to_base([alpha.representative.coords])[0])


def character_phase_batch(psi, points: np.ndarray, base_idx: np.ndarray) -> np.ndarray:
    """Phase (in turns, as floats) of psi at points with residues given by
    indices into (O_K/q)^x."""
    G = psi.group
    f = G.field
    raw = G.raw_coords_batch(points, base_idx)
    ph = np.zeros(raw.shape[0])
    if raw.shape[1]:
        ph = np.mod(raw @ np.array([float(p) for p in psi.phases]), 1.0)
    if isinstance(psi, AngularCharacter):
        from .domain import fundamental_domain
        D = fundamental_domain(f)
        if f.unit_rank:
            ph = ph + D.unit_coordinates(points) @ np.array(psi.a)
        for j, mj in enumerate(psi.angular_frequencies):
            if mj:
                re = points[:, f.r1 + 2 * j]
                im = points[:, f.r1 + 2 * j + 1]
                ph = ph + mj * np.arctan2(im, re) / (2 * math.pi)
    return ph


def evaluate_character_batch(psi, points: np.ndarray, base_idx: np.ndarray) -> np.ndarray:
    return np.exp(2j * math.pi * character_phase_batch(psi, np.atleast_2d(points), base_idx))


def evaluate_character(psi, x, alpha: CongruenceClass) -> complex:
    """psi(x; alpha) for a point x of (K (x) R)^x and a unit class alpha."""
    G = psi.group
    f = G.field
    if isinstance(psi, FiniteCharacter) and psi.is_trivial:
        return 1 + 0j
    pts = _as_point(f, x)
    if np.any(pts[:, : f.r1] == 0):
        raise ValueError("x has a zero coordinate")
    idx = _residue_base_index(f, G.modulus, alpha)
    if isinstance(psi, FiniteCharacter):
        raw = G.raw_coords_batch(pts, np.array([idx]))[0]
        return psi.value_raw(raw)
    return complex(evaluate_character_batch(psi, pts, np.array([idx]))[0])


# ---------------------------------------------------------------------------
# chart


@dataclass(frozen=True)
class ChartPoint:
    class_index: int
    domain_rep: FieldElement
    residue: CongruenceClass


def chart(field: NumberField, q: FractionalIdeal, pi, class_index: int = 0) -> ChartPoint:
    """(lambda, representative of pi in the fundamental domain, class of pi in
    (a_lambda / q a_lambda)^x)."""
    from .domain import reduce_to_fundamental_domain
    a = field.class_representatives[class_index]
    alpha = congruence_class(field, q, a, pi)
    _, rep = reduce_to_fundamental_domain(field, pi)
    return ChartPoint(class_index, rep, alpha)
