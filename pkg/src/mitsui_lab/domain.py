"""Logarithmic embedding, the unit-lattice fundamental domain, regulator,
torus volumes, and integer lattices with bounded bases.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import intlin
from .field import (FieldElement, NumberField, _c, element_mul, element_pow,
                    minkowski_embed, minkowski_real)

# faces closer than this are decided by the half-open rule
BOUNDARY_TOL = 1e-9


@dataclass(frozen=True)
class LogEmbedding:
    vector: np.ndarray          # log|x| at real places, log|x|^2 at complex places
    norm_part: float            # coordinate sum = log N(x)
    h_component: np.ndarray     # projection to H along u

    @property
    def log_norm(self):
        return self.norm_part


def place_weights(field: NumberField) -> np.ndarray:
    return np.array([1.0] * field.r1 + [2.0] * field.r2)


def norm_direction(field: NumberField) -> np.ndarray:
    """u = (1/n)(1,..,1,2,..,2): the image of the diagonal R_{>0}."""
    return place_weights(field) / field.degree


def _log_vectors_from_points(field, points: np.ndarray) -> np.ndarray:
    pts = np.atleast_2d(points)
    r1, r2 = field.r1, field.r2
    out = np.empty((pts.shape[0], r1 + r2))
    with np.errstate(divide="ignore"):
        out[:, :r1] = np.log(np.abs(pts[:, :r1]))
        for j in range(r2):
            re, im = pts[:, r1 + 2 * j], pts[:, r1 + 2 * j + 1]
            out[:, r1 + j] = np.log(re * re + im * im)
    return out


def log_vectors(field: NumberField, points: np.ndarray) -> np.ndarray:
    """Log embedding of a batch of real Minkowski points, shape (m, r1+r2)."""
    return _log_vectors_from_points(field, points)


def log_embed(field: NumberField, x) -> LogEmbedding:
    """Log embedding of an element (coordinates) or of an embedded point
    (complex vector of length r1+r2)."""
    if isinstance(x, np.ndarray) and np.iscomplexobj(x):
        sig = x
    else:
        sig = minkowski_embed(field, x)
    a = np.abs(sig)
    if np.any(a == 0):
        raise ValueError("log embedding of a point with a zero coordinate")
    v = np.log(a) * place_weights(field)
    s = float(v.sum())
    h = v - s * norm_direction(field)
    return LogEmbedding(v, s, h)


def unit_log_matrix(field: NumberField) -> np.ndarray:
    r = field.unit_rank
    if r == 0:
        return np.zeros((0, field.r1 + field.r2))
    return np.array([log_embed(field, u).vector for u in field.fundamental_units])


def compute_regulator(field: NumberField) -> float:
    """Covolume of the unit log lattice in H divided by sqrt(r1 + r2)."""
    U = unit_log_matrix(field)
    if U.shape[0] == 0:
        return 1.0
    for row in U:
        if abs(row.sum()) > 1e-8:
            raise ValueError("configured unit does not log-embed into H")
    g = np.linalg.det(U @ U.T)
    if not g > 1e-20:
        raise ValueError("configured units are multiplicatively dependent")
    return float(math.sqrt(g) / math.sqrt(field.r1 + field.r2))


# ---------------------------------------------------------------------------
# fundamental domain


class FundamentalDomain:
    """Half-open fundamental domain for O_K^x acting on (K (x) R)^x.

    Free part: unit-log coordinates t (x's H-component written in the
    basis of log-embedded fundamental units) lie in [0, 1)^r.  Torsion part:
    sigma_1(x) > 0 when K has a real place, otherwise the argument at the
    first complex place lies in [0, 2 pi / w_K).
    """

    def __init__(self, field: NumberField):
        self.field = field
        U = unit_log_matrix(field)
        self.unit_log_basis = U
        self.u = norm_direction(field)
        if U.shape[0]:
            self._solve = U.T @ np.linalg.inv(U @ U.T)
        else:
            self._solve = np.zeros((field.r1 + field.r2, 0))
        self.torsion_sector = "sign" if field.r1 > 0 else "angle"
        self._zeta_pows = None

    # coordinates ----------------------------------------------------
    def unit_coordinates(self, points: np.ndarray) -> np.ndarray:
        ell = _log_vectors_from_points(self.field, points)
        h = ell - ell.sum(axis=1, keepdims=True) * self.u[None, :]
        return h @ self._solve

    def sector_coordinate(self, points: np.ndarray) -> np.ndarray:
        """For the angular sector: arg / (2 pi / w) in [0, w); for the sign
        sector: sigma_1 itself."""
        pts = np.atleast_2d(points)
        f = self.field
        if self.torsion_sector == "sign":
            return pts[:, 0]
        a = np.arctan2(pts[:, f.r1 + 1], pts[:, f.r1])
        a = np.mod(a, 2 * math.pi)
        return a * f.torsion_order / (2 * math.pi)

    def contains(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(points)
        t = self.unit_coordinates(pts)
        ok = np.all((t >= -BOUNDARY_TOL) & (t < 1 - BOUNDARY_TOL), axis=1)
        s = self.sector_coordinate(pts)
        if self.torsion_sector == "sign":
            ok &= s > 0
        else:
            w = self.field.torsion_order
            ok &= (s < 1 - BOUNDARY_TOL) | (s >= w - BOUNDARY_TOL)
        return ok

    def near_boundary(self, points: np.ndarray) -> np.ndarray:
        """Diagnostic: points within the tie tolerance of some face."""
        pts = np.atleast_2d(points)
        t = self.unit_coordinates(pts)
        near = np.any(np.abs(t - np.round(t)) < BOUNDARY_TOL, axis=1)
        if self.torsion_sector == "angle":
            s = self.sector_coordinate(pts)
            near |= np.abs(s - np.round(s)) < BOUNDARY_TOL
        return near

    def contains_element(self, x) -> bool:
        return bool(self.contains(minkowski_real(self.field, [_c(x)]))[0])

    # reduction --------------------------------------------------------
    def _torsion_powers(self):
        if self._zeta_pows is None:
            f = self.field
            self._zeta_pows = [element_pow(f, f.torsion_generator, j)
                               for j in range(f.torsion_order)]
        return self._zeta_pows

    def reduce(self, x) -> tuple[FieldElement, FieldElement]:
        """Return (unit, representative) with representative = unit^-1 * x in the domain."""
        f = self.field
        x = FieldElement(_c(x))
        if x.is_zero():
            raise ValueError("cannot reduce zero")
        unit = f.one()
        rep = x
        r = f.unit_rank
        for _ in range(8):
            t = self.unit_coordinates(minkowski_real(f, [rep.coords]))[0]
            k = np.floor(t + BOUNDARY_TOL).astype(int)
            if not np.any(k):
                break
            for j in range(r):
                if k[j]:
                    rep = element_mul(f, rep, element_pow(f, f.unit_inverses[j], int(k[j]))
                                      if k[j] > 0 else element_pow(f, f.fundamental_units[j], int(-k[j])))
                    unit = element_mul(f, unit, element_pow(f, f.fundamental_units[j], int(k[j]))
                                       if k[j] > 0 else element_pow(f, f.unit_inverses[j], int(-k[j])))
        zs = self._torsion_powers()
        w = f.torsion_order
        for j in range(w):
            cand = element_mul(f, rep, zs[j])
            if self.contains_element(cand):
                # rep * zeta^j = x * unit^-1 * zeta^j, so the new unit is unit * zeta^-j
                return element_mul(f, unit, zs[(w - j) % w]), cand
        raise RuntimeError("reduction failed to land in the fundamental domain")


@lru_cache(maxsize=None)
def _domain_cache(field_id, field):
    return FundamentalDomain(field)


def fundamental_domain(field: NumberField) -> FundamentalDomain:
    return _domain_cache(id(field), field)


def reduce_to_fundamental_domain(field: NumberField, x) -> tuple[FieldElement, FieldElement]:
    return fundamental_domain(field).reduce(x)


# ---------------------------------------------------------------------------
# integer lattices


@dataclass(frozen=True)
class IntegerLattice:
    """Full-rank sublattice of Z^d; the columns of ``basis`` generate it."""

    basis: tuple

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(tuple(int(v) for v in r) for r in self.basis))
        if self.dim and intlin.det(self.basis) == 0:
            raise ValueError("lattice basis is rank deficient")

    @property
    def dim(self):
        return len(self.basis)

    @property
    def index(self) -> int:
        return abs(intlin.det(self.basis)) if self.dim else 1

    def columns(self):
        return [list(c) for c in zip(*self.basis)] if self.dim else []

    def hnf(self):
        return tuple(tuple(r) for r in intlin.hnf(self.columns(), self.dim))

    def same_lattice(self, other: "IntegerLattice") -> bool:
        return self.hnf() == other.hnf()

    def contains(self, v) -> bool:
        return intlin.in_lattice(list(v), [list(r) for r in self.hnf()])


def _bounded_columns(cols: list[list[int]]) -> list[list[int]]:
    """Bounded basis of the lattice spanned by ``cols`` (d columns in Z^d)."""
    d = len(cols)
    cols = [list(c) for c in cols]
    if d == 1:
        return [[abs(cols[0][0])]]
    # Euclid on the first row by column operations
    while True:
        nz = [j for j in range(d) if cols[j][0] != 0]
        if not nz:
            raise ValueError("lattice basis is rank deficient")
        if len(nz) == 1:
            break
        piv = min(nz, key=lambda j: abs(cols[j][0]))
        for j in nz:
            if j != piv:
                q = cols[j][0] // cols[piv][0]
                cols[j] = [a - q * b for a, b in zip(cols[j], cols[piv])]
    j0 = next(j for j in range(d) if cols[j][0] != 0)
    cols[0], cols[j0] = cols[j0], cols[0]
    if cols[0][0] < 0:
        cols[0] = [-a for a in cols[0]]
    # recurse on the minor (rows 1.., columns 1..); column operations there
    # are column operations of the whole matrix since row 0 vanishes
    minor = _bounded_columns([c[1:] for c in cols[1:]])
    # bring the first column's tail below D' using the minor's triangular basis
    tri = intlin.hnf(minor, d - 1)
    v = intlin.reduce_mod_hnf(cols[0][1:], tri)
    return [[cols[0][0]] + v] + [[0] + c for c in minor]


def bounded_basis(lattice: IntegerLattice) -> IntegerLattice:
    """A basis of the same lattice whose entries are bounded by its index.

    Gcd-reduce the first row to (d_1, 0, ..., 0), recurse on the lower-right
    minor (index D' = D / d_1), then reduce the first column below the
    first row modulo the minor's lattice so that those entries are < D'.
    """
    if lattice.dim == 0:
        return lattice
    cols = _bounded_columns(lattice.columns())
    return IntegerLattice(tuple(zip(*cols)))


def unit_kernel_lattice(field: NumberField, q) -> IntegerLattice:
    """Exponent vectors e with prod eps_j^e_j trivial in {+-1}^{r1} x (O_K/q)^x,
    as a bounded basis."""
    from .ray import component_group
    r = field.unit_rank
    if r == 0:
        return IntegerLattice(())
    G = component_group(field, q)
    orders = G.raw_orders
    m = len(orders)
    images = [G.raw_coords_of_unit(u) for u in field.fundamental_units]
    # (e, f) with sum_j e_j img_j + sum_i f_i o_i e_i = 0
    mat = [[images[j][i] for j in range(r)] + [orders[i] * int(k == i) for k in range(m)]
           for i in range(m)]
    kern = intlin.integer_kernel(mat) if m else [[int(i == j) for i in range(r)] for j in range(r)]
    vecs = [row[:r] for row in kern] if m else kern
    h = intlin.hnf(vecs, r)
    lat = IntegerLattice(tuple(zip(*h)))
    return bounded_basis(lat)


def torus_volumes(field: NumberField, q) -> tuple[float, float]:
    """(vol_mult((K (x) R)^x / O_K^x R_{>0}), vol(C(q) / R_{>0}))."""
    from .dedekind import totient
    r1, r2 = field.r1, field.r2
    base = (2 ** r1) * (2 * math.pi) ** r2 * field.regulator * math.sqrt(r1 + r2) / field.torsion_order
    phi = totient(field, q)
    return base, phi * field.class_number * base
