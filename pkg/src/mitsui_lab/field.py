"""Exact arithmetic in the ring of integers of a monogenic number field.

Elements are integer coordinate vectors on a fixed integral basis
w_0 = 1, w_1, ..., w_{n-1}.  By default w_j = theta^j for a root theta of the
defining polynomial; a rational basis-change matrix (rows = w_j written in
powers of theta) selects another integral basis, e.g. (1+sqrt5)/2.

Numeric Minkowski data (embeddings) are computed once with mpmath and kept
as float64 arrays for vectorised region tests.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import mpmath
import numpy as np

from . import intlin


# ---------------------------------------------------------------------------
# specs and elements


@dataclass(frozen=True)
class NumberFieldSpec:
    """Configuration of a number field.

    ``defining_polynomial`` lists integer coefficients with the constant term
    first and a leading 1.  ``class_representatives`` holds one generator list
    per ideal class (each generator a coordinate vector); the first must
    generate the unit ideal.  ``fundamental_units`` may be the string
    ``"auto"`` for real quadratic fields.
    """

    defining_polynomial: tuple
    basis_change: tuple | None = None
    fundamental_units: tuple | str = ()
    torsion_generator: tuple | None = None
    torsion_order: int = 2
    class_number: int = 1
    class_representatives: tuple = ()
    name: str = ""
    regulator_reference: float | None = None


@dataclass(frozen=True)
class FieldElement:
    coords: tuple

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def is_zero(self):
        return not any(self.coords)


def _c(x) -> tuple:
    if isinstance(x, FieldElement):
        return x.coords
    return tuple(int(v) for v in x)


@dataclass(frozen=True)
class FractionalIdeal:
    """(1/denominator) * Z-span of the rows of ``basis`` (canonical row HNF)."""

    basis: tuple
    denominator: int = 1

    @property
    def degree(self):
        return len(self.basis)

    @cached_property
    def norm(self) -> Fraction:
        d = 1
        for i, row in enumerate(self.basis):
            d *= row[i]
        return Fraction(d, self.denominator ** len(self.basis))

    def is_integral(self):
        return self.denominator == 1

    def contains(self, x) -> bool:
        """Membership of an integral element given by coordinates."""
        v = [self.denominator * c for c in _c(x)]
        return intlin.in_lattice(v, self.basis)

    def __contains__(self, x):
        return self.contains(x)


# ---------------------------------------------------------------------------
# the field


@dataclass(frozen=True, eq=False)
class NumberField:
    spec: NumberFieldSpec
    degree: int
    signature: tuple
    roots: tuple                 # sigma_i(theta), real places first, then Im > 0
    basis: tuple                 # rows: w_j in powers of theta (Fractions)
    multiplication_table: tuple  # T[i][j][k]: w_i w_j = sum_k T[i][j][k] w_k
    discriminant: int
    fundamental_units: tuple
    unit_inverses: tuple
    torsion_generator: FieldElement
    torsion_order: int
    class_number: int
    class_representatives: tuple
    regulator: float = 0.0
    _arrays: dict = dc_field(default_factory=dict, repr=False)

    @property
    def n(self):
        return self.degree

    @property
    def r1(self):
        return self.signature[0]

    @property
    def r2(self):
        return self.signature[1]

    @property
    def unit_rank(self):
        return self.r1 + self.r2 - 1

    @property
    def name(self):
        return self.spec.name or f"poly{list(self.spec.defining_polynomial)}"

    @property
    def embeddings(self):
        return self.roots

    # numeric views -----------------------------------------------------
    @property
    def T(self) -> np.ndarray:
        return self._arrays["T"]

    @property
    def basis_embeddings(self) -> np.ndarray:
        """Complex (r1+r2) x n matrix of sigma_i(w_j)."""
        return self._arrays["emb"]

    @property
    def minkowski_matrix(self) -> np.ndarray:
        """Real n x n matrix sending coordinates to Minkowski real coordinates
        (real places, then (Re, Im) for each complex place)."""
        return self._arrays["mink"]

    def one(self) -> FieldElement:
        return FieldElement((1,) + (0,) * (self.degree - 1))

    def zero(self) -> FieldElement:
        return FieldElement((0,) * self.degree)

    def element(self, coords) -> FieldElement:
        c = _c(coords)
        if len(c) != self.degree:
            raise ValueError(f"expected {self.degree} coordinates, got {len(c)}")
        return FieldElement(c)

    def rational(self, k: int) -> FieldElement:
        return FieldElement((int(k),) + (0,) * (self.degree - 1))

    def __repr__(self):
        return f"NumberField({self.name}, n={self.degree}, sig={self.signature})"


# ---------------------------------------------------------------------------
# ring operations


def element_add(field, x, y) -> FieldElement:
    return FieldElement(tuple(a + b for a, b in zip(_c(x), _c(y))))


def element_sub(field, x, y) -> FieldElement:
    return FieldElement(tuple(a - b for a, b in zip(_c(x), _c(y))))


def element_neg(field, x) -> FieldElement:
    return FieldElement(tuple(-a for a in _c(x)))


def element_scale(field, x, k: int) -> FieldElement:
    return FieldElement(tuple(k * a for a in _c(x)))


def element_mul(field: NumberField, x, y) -> FieldElement:
    """Exact product via the multiplication table (Python ints never wrap)."""
    a, b = _c(x), _c(y)
    n = field.degree
    T = field.multiplication_table
    out = [0] * n
    for i in range(n):
        ai = a[i]
        if not ai:
            continue
        Ti = T[i]
        for j in range(n):
            bj = b[j]
            if not bj:
                continue
            c = ai * bj
            row = Ti[j]
            for k in range(n):
                if row[k]:
                    out[k] += c * row[k]
    return FieldElement(tuple(out))


def element_pow(field: NumberField, x, e: int) -> FieldElement:
    if e < 0:
        x = element_inverse(field, x)
        e = -e
    result = field.one()
    base = FieldElement(_c(x))
    while e:
        if e & 1:
            result = element_mul(field, result, base)
        e >>= 1
        if e:
            base = element_mul(field, base, base)
    return result


def mult_matrix(field: NumberField, x) -> list:
    """Integer matrix whose row j holds the coordinates of w_j * x."""
    a = _c(x)
    n = field.degree
    T = field.multiplication_table
    return [[sum(a[i] * T[j][i][k] for i in range(n)) for k in range(n)] for j in range(n)]


def field_norm(field: NumberField, x) -> tuple:
    """(signed norm N_{K/Q}(x), absolute norm N(x))."""
    s = intlin.det(mult_matrix(field, x))
    return s, abs(s)


def element_trace(field: NumberField, x) -> int:
    m = mult_matrix(field, x)
    return sum(m[i][i] for i in range(field.degree))


def char_poly(field: NumberField, x) -> list:
    """Characteristic polynomial of x (constant term first, monic), exact."""
    m = [[Fraction(v) for v in row] for row in mult_matrix(field, x)]
    n = field.degree
    # Faddeev-LeVerrier
    coeffs = [Fraction(1)]
    mk = [[Fraction(0)] * n for _ in range(n)]
    c = Fraction(1)
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        prod = [[sum(m[i][t] * mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        for i in range(n):
            prod[i][i] += c
        mk = prod
        am = [[sum(m[i][t] * mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        c = -sum(am[i][i] for i in range(n)) / k
        coeffs.append(c)
    # coeffs[k] is the coefficient of x^(n-k)
    out = [int(v) for v in reversed(coeffs)]
    return out


def element_inverse_rational(field: NumberField, x) -> list:
    """Coordinates (Fractions) of 1/x."""
    m = mult_matrix(field, x)
    # y * x = 1  <=>  sum_j y_j (w_j x) = e_0  <=>  y @ m = e_0
    inv = intlin.rational_inverse(m)
    return list(inv[0])


def element_inverse(field: NumberField, x) -> FieldElement:
    """Inverse of a unit, exactly; raises if x is not a unit."""
    y = element_inverse_rational(field, x)
    if any(v.denominator != 1 for v in y):
        raise ValueError("element is not a unit of O_K")
    return FieldElement(tuple(int(v) for v in y))


def multiplicative_order(field: NumberField, x, limit: int = 1000) -> int | None:
    one = field.one()
    cur = FieldElement(_c(x))
    for k in range(1, limit + 1):
        if cur == one:
            return k
        cur = element_mul(field, cur, x)
    return None


# ---------------------------------------------------------------------------
# embeddings


def minkowski_embed(field: NumberField, x) -> np.ndarray:
    """(sigma_1(x), ..., sigma_{r1+r2}(x)) as a complex vector."""
    return field.basis_embeddings @ np.asarray(_c(x), dtype=float)


def minkowski_real(field: NumberField, coords) -> np.ndarray:
    """Real Minkowski coordinates of a batch of coordinate vectors, shape (m, n)."""
    c = np.atleast_2d(np.asarray(coords, dtype=float))
    return c @ field.minkowski_matrix.T


def place_abs(field: NumberField, points: np.ndarray) -> np.ndarray:
    """|x|_sigma for each place (moduli, not squared) from real Minkowski points."""
    pts = np.atleast_2d(points)
    r1, r2 = field.r1, field.r2
    out = np.empty((pts.shape[0], r1 + r2))
    out[:, :r1] = np.abs(pts[:, :r1])
    for j in range(r2):
        out[:, r1 + j] = np.hypot(pts[:, r1 + 2 * j], pts[:, r1 + 2 * j + 1])
    return out


def numeric_norm(field: NumberField, points: np.ndarray) -> np.ndarray:
    a = place_abs(field, points)
    w = np.array([1] * field.r1 + [2] * field.r2, dtype=float)
    return np.prod(a ** w, axis=1)


# ---------------------------------------------------------------------------
# ideals


def _make_ideal(rows, denominator, n) -> FractionalIdeal:
    h = intlin.hnf(rows, n)
    if len(h) != n:
        raise ValueError("generators do not span a full-rank module")
    g = denominator
    for row in h:
        for v in row:
            g = math.gcd(g, v)
    if g > 1:
        h = [[v // g for v in row] for row in h]
        denominator //= g
    return FractionalIdeal(tuple(tuple(r) for r in h), int(denominator))


def _check_module(field, ideal: FractionalIdeal):
    for row in ideal.basis:
        for j in range(field.degree):
            w = [0] * field.degree
            w[j] = 1
            prod = element_mul(field, row, w)
            if not intlin.in_lattice(list(prod.coords), [list(r) for r in ideal.basis]):
                raise ValueError("module is not closed under multiplication by O_K")


def ideal_from_generators(field: NumberField, gens: Sequence, scale=1) -> FractionalIdeal:
    """HNF of scale * (O_K-module generated by gens)."""
    gens = [g for g in gens]
    if not gens:
        raise ValueError("empty generator list")
    scale = Fraction(scale)
    if scale == 0:
        raise ValueError("zero scale")
    rows = []
    for g in gens:
        if isinstance(g, FractionalIdeal):
            raise TypeError("generators must be elements")
        rows.extend(mult_matrix(field, g))
    num, den = scale.numerator, scale.denominator
    rows = [[num * v for v in row] for row in rows]
    if not any(any(r) for r in rows):
        raise ValueError("generators are all zero")
    ideal = _make_ideal(rows, den, field.degree)
    if den < 0:
        raise ValueError("negative denominator")
    return ideal


def ideal_from_basis(field: NumberField, rows, denominator=1, check=True) -> FractionalIdeal:
    ideal = _make_ideal(rows, denominator, field.degree)
    if check:
        _check_module(field, ideal)
    return ideal


def unit_ideal(field: NumberField) -> FractionalIdeal:
    n = field.degree
    return FractionalIdeal(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), 1)


def principal_ideal(field: NumberField, x) -> FractionalIdeal:
    return ideal_from_generators(field, [x])


def ideal_norm(ideal: FractionalIdeal) -> Fraction:
    return ideal.norm


def ideal_mul(field: NumberField, a: FractionalIdeal, b: FractionalIdeal) -> FractionalIdeal:
    rows = []
    for x in a.basis:
        for y in b.basis:
            rows.append(list(element_mul(field, x, y).coords))
    return _make_ideal(rows, a.denominator * b.denominator, field.degree)


def ideal_add(field: NumberField, a: FractionalIdeal, b: FractionalIdeal) -> FractionalIdeal:
    da, db = a.denominator, b.denominator
    lcm = da * db // math.gcd(da, db)
    rows = [[v * (lcm // da) for v in r] for r in a.basis]
    rows += [[v * (lcm // db) for v in r] for r in b.basis]
    return _make_ideal(rows, lcm, field.degree)


def ideal_pow(field, a: FractionalIdeal, k: int) -> FractionalIdeal:
    if k < 0:
        return ideal_pow(field, ideal_inverse(field, a), -k)
    out = unit_ideal(field)
    for _ in range(k):
        out = ideal_mul(field, out, a)
    return out


def ideal_inverse(field: NumberField, a: FractionalIdeal) -> FractionalIdeal:
    """{y : y a in O_K}, via the dual of the lattice spanned by the
    columns of the multiplication matrices of a's basis."""
    n = field.degree
    cols = []
    for row in a.basis:
        m = mult_matrix(field, row)   # y @ m = coords of y*row
        cols.extend([[m[i][k] for i in range(n)] for k in range(n)])
    bc = intlin.hnf(cols, n)          # rows span the column lattice
    inv = intlin.rational_inverse(bc)
    dual = intlin.transpose(inv)      # rows of (Bc^-1)^T
    den = 1
    for row in dual:
        for v in row:
            den = den * v.denominator // math.gcd(den, v.denominator)
    rows = [[int(v * den) for v in row] for row in dual]
    # y*(L/d) in O  <=>  (y/d)*L in O, so the inverse of L/d is d * L^{-1}
    out = _make_ideal(rows, den, n)
    if a.denominator != 1:
        out = _make_ideal([[v * a.denominator for v in r] for r in out.basis], out.denominator, n)
    return out


def ideal_contains_ideal(a: FractionalIdeal, b: FractionalIdeal) -> bool:
    """True when b is a subset of a."""
    for row in b.basis:
        v = [c * a.denominator for c in row]
        # b = rows / b.den, need rows/b.den in L/a.den  <=> rows * a.den in b.den * L
        L = [[x * b.denominator for x in r] for r in a.basis]
        if not intlin.in_lattice(v, L):
            return False
    return True


def ideal_reduce(ideal: FractionalIdeal, x) -> tuple:
    """Canonical representative of an integral element modulo an integral ideal."""
    if ideal.denominator != 1:
        raise ValueError("reduction needs an integral ideal")
    return tuple(intlin.reduce_mod_hnf(list(_c(x)), ideal.basis))


def reduce_mod_hnf_array(coords: np.ndarray, basis) -> np.ndarray:
    """Vectorised canonical reduction of integer rows modulo an upper-triangular HNF."""
    v = np.array(coords, dtype=np.int64, copy=True)
    H = np.asarray(basis, dtype=np.int64)
    for i in range(H.shape[0]):
        q = np.floor_divide(v[:, i], H[i, i])
        v -= q[:, None] * H[i][None, :]
    return v


# ---------------------------------------------------------------------------
# batch arithmetic used by the enumerators


def batch_mul(field: NumberField, a: np.ndarray, b) -> np.ndarray:
    """Products a_m * b for a batch of coordinate rows and one fixed element b."""
    M = np.asarray(mult_matrix(field, b), dtype=np.int64)
    return np.asarray(a, dtype=np.int64) @ M


def batch_norm(field: NumberField, coords: np.ndarray) -> np.ndarray:
    """Exact signed norms of a batch of elements (int64; magnitude checked)."""
    c = np.asarray(coords, dtype=np.int64)
    n = field.degree
    T = field.T
    if n == 1:
        return c[:, 0] * int(T[0, 0, 0])
    # matrix of multiplication by x: M[j, k] = sum_i x_i T[j, i, k]
    M = np.einsum("mi,jik->mjk", c, T)
    bound = float(np.max(np.abs(M), initial=0)) if M.size else 0.0
    if bound ** n * math.factorial(n) >= 2.0 ** 62:
        Mo = M.astype(object)
        return np.array([intlin.det(m.tolist()) for m in Mo], dtype=object)
    if n == 2:
        return M[:, 0, 0] * M[:, 1, 1] - M[:, 0, 1] * M[:, 1, 0]
    if n == 3:
        return (M[:, 0, 0] * (M[:, 1, 1] * M[:, 2, 2] - M[:, 1, 2] * M[:, 2, 1])
                - M[:, 0, 1] * (M[:, 1, 0] * M[:, 2, 2] - M[:, 1, 2] * M[:, 2, 0])
                + M[:, 0, 2] * (M[:, 1, 0] * M[:, 2, 1] - M[:, 1, 1] * M[:, 2, 0]))
    return np.array([intlin.det(m.tolist()) for m in M], dtype=np.int64)


# ---------------------------------------------------------------------------
# construction


def _poly_eval_frac(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _polymulmod(a, b, f):
    """Multiply rational coefficient lists modulo the monic polynomial f."""
    n = len(f) - 1
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    for d in range(len(out) - 1, n - 1, -1):
        c = out[d]
        if c:
            for k in range(n + 1):
                out[d - n + k] -= c * f[k]
    out = out[:n] + [Fraction(0)] * max(0, n - len(out))
    return out[:n]


def _is_irreducible(coeffs) -> bool:
    import sympy
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed([int(c) for c in coeffs])), x, domain="ZZ")
    if poly.degree() == 1:
        return True
    return bool(poly.is_irreducible)


def _poly_disc(coeffs) -> int:
    import sympy
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed([int(c) for c in coeffs])), x, domain="ZZ")
    if poly.degree() == 1:
        return 1
    return int(sympy.discriminant(poly))


def _dedekind_maximal_at(coeffs, p) -> bool:
    """Dedekind's criterion: is Z[theta] maximal at p?"""
    from . import polymod
    f = [int(c) for c in coeffs]
    fac = polymod.factor(f, p)
    g = [1]
    h = [1]
    for fi, e in fac:
        g = polymod.mul(g, fi, p) if g != [1] else list(fi)
        for _ in range(e - 1):
            h = polymod.mul(h, fi, p)
    # integer lifts (coefficients in [0, p)) and F = (f - g h) / p
    gh = [0] * (len(g) + len(h) - 1)
    for i, a in enumerate(g):
        for j, b in enumerate(h):
            gh[i + j] += a * b
    diff = [(f[i] if i < len(f) else 0) - (gh[i] if i < len(gh) else 0)
            for i in range(max(len(f), len(gh)))]
    assert all(d % p == 0 for d in diff)
    F = polymod.normalize([d // p for d in diff], p)
    if not F:
        return False
    common = polymod.gcd(polymod.gcd(F, g, p), h, p)
    return len(common) <= 1


def _real_quadratic_unit(field: NumberField) -> FieldElement:
    """Fundamental unit of a real quadratic O_K = Z[w] with sigma_1 > 1.

    Runs the continued fraction of sigma_1(w); every unit p - q w with q > 0
    and small sigma_1-value shows up among the convergents p/q.
    """
    if field.degree != 2 or field.r1 != 2:
        raise ValueError("automatic units only for real quadratic fields")
    cp = char_poly(field, (0, 1))          # x^2 + b x + c
    c, b = cp[0], cp[1]
    D = b * b - 4 * c
    r = math.isqrt(D)
    w1 = float(field.basis_embeddings[0, 1].real)
    # sigma_1(w) = (P + sqrt D) / Q with Q | D - P^2
    if w1 > -b / 2:
        P, Q = -b, 2
    else:
        P, Q = b, -2
    h2, h1 = 0, 1
    k2, k1 = 1, 0
    for _ in range(100000):
        a = (P + r) // Q if Q > 0 else (P + r + 1) // Q
        h2, h1 = h1, a * h1 + h2
        k2, k1 = k1, a * k1 + k2
        u = field.element((h1, -k1))
        if field_norm(field, u)[1] == 1:
            return _normalize_unit_gt1(field, u)
        P = a * Q - P
        Q = (D - P * P) // Q
    raise RuntimeError("continued fraction did not reach a unit")


def _normalize_unit_gt1(field, u):
    """Choose the associate among +-u^{+-1} with sigma_1 > 1."""
    cands = [u, element_neg(field, u), element_inverse(field, u),
             element_neg(field, element_inverse(field, u))]
    for c in cands:
        v = minkowski_embed(field, c)[0].real
        if v > 1:
            return c
    raise RuntimeError("could not normalise unit")


def _spec_tuple(x):
    if isinstance(x, (list, tuple)):
        return tuple(_spec_tuple(v) for v in x)
    return x


def load_field(spec: NumberFieldSpec) -> NumberField:
    coeffs = [int(c) for c in spec.defining_polynomial]
    n = len(coeffs) - 1
    if n < 1 or coeffs[-1] != 1:
        raise ValueError("defining polynomial must be monic of degree >= 1")
    if not _is_irreducible(coeffs):
        raise ValueError("defining polynomial is reducible over Q")

    if spec.basis_change is None:
        B = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    else:
        B = [[Fraction(v) for v in row] for row in spec.basis_change]
        if len(B) != n or any(len(r) != n for r in B):
            raise ValueError("basis_change must be n x n")
    if B[0] != [Fraction(1)] + [Fraction(0)] * (n - 1):
        raise ValueError("the first integral basis element must be 1")
    Binv = intlin.rational_inverse(B)

    # multiplication table in the integral basis
    T = [[[0] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            prod = _polymulmod(B[i], B[j], coeffs)
            c = [sum(prod[k] * Binv[k][l] for k in range(n)) for l in range(n)]
            if any(v.denominator != 1 for v in c):
                raise ValueError("basis_change does not give a ring: non-integral structure constants")
            T[i][j] = [int(v) for v in c]
    # every basis element must be integral: its characteristic polynomial is in Z[x]
    Tt = tuple(tuple(tuple(r) for r in m) for m in T)

    # embeddings, high precision then rounded
    with mpmath.workdps(50):
        rts = mpmath.polyroots([mpmath.mpf(c) for c in reversed(coeffs)], maxsteps=200, extraprec=200) \
            if n > 1 else [mpmath.mpf(-coeffs[0])]
        real, cplx = [], []
        for z in rts:
            z = mpmath.mpc(z)
            if abs(z.imag) < mpmath.mpf(10) ** -30:
                real.append(mpmath.mpf(z.real))
            elif z.imag > 0:
                cplx.append(z)
        real.sort(reverse=True)
        cplx.sort(key=lambda z: (-z.real, z.imag))
        roots = [mpmath.mpc(r) for r in real] + cplx
        emb = np.empty((len(roots), n), dtype=complex)
        for i, z in enumerate(roots):
            for j in range(n):
                v = mpmath.mpc(0)
                for k in range(n):
                    if B[j][k]:
                        v += mpmath.mpf(B[j][k].numerator) / B[j][k].denominator * z ** k
                emb[i, j] = complex(v)
    r1, r2 = len(real), len(cplx)
    if r1 + 2 * r2 != n:
        raise ValueError("root finding failed to resolve the signature")
    mink = np.zeros((n, n))
    mink[:r1] = emb[:r1].real
    for j in range(r2):
        mink[r1 + 2 * j] = emb[r1 + j].real
        mink[r1 + 2 * j + 1] = emb[r1 + j].imag

    Tarr = np.array(T, dtype=np.int64).reshape(n, n, n)
    arrays = {"T": Tarr, "emb": emb, "mink": mink}
    for a in arrays.values():
        a.setflags(write=False)

    # discriminant of the basis
    tmp = NumberField(spec, n, (r1, r2), tuple(complex(z) for z in roots),
                      tuple(tuple(r) for r in B), Tt, 0, (), (), None, spec.torsion_order,
                      spec.class_number, (), 0.0, arrays)
    for j in range(n):
        cp = char_poly(tmp, tuple(int(i == j) for i in range(n)))
        if cp[-1] != 1:
            raise ValueError("basis element is not integral")
    tr = [[element_trace(tmp, element_mul(tmp, _e(n, i), _e(n, j))) for j in range(n)] for i in range(n)]
    disc = intlin.det(tr)

    # p-maximality of the power basis (Dedekind criterion)
    if spec.basis_change is None and n > 1:
        import sympy
        for p, e in sympy.factorint(abs(disc)).items():
            if e >= 2 and not _dedekind_maximal_at(coeffs, p):
                raise ValueError(
                    f"Z[theta] is not maximal at p={p}; supply basis_change for an integral basis")

    # torsion
    if spec.torsion_generator is None:
        zeta = element_neg(tmp, tmp.one())
    else:
        zeta = tmp.element(spec.torsion_generator)
    if multiplicative_order(tmp, zeta, limit=max(2 * spec.torsion_order, 2)) != spec.torsion_order:
        raise ValueError("torsion generator does not have the configured order")

    # units
    if spec.fundamental_units == "auto":
        units = (_real_quadratic_unit(tmp),)
    else:
        units = tuple(tmp.element(u) for u in spec.fundamental_units)
    if len(units) != r1 + r2 - 1:
        raise ValueError(f"need {r1 + r2 - 1} fundamental units, got {len(units)}")
    for u in units:
        if field_norm(tmp, u)[1] != 1:
            raise ValueError(f"configured unit {u.coords} has norm != +-1")
    inverses = tuple(element_inverse(tmp, u) for u in units)

    # class representatives (integral ideals); a_0 = O_K
    reps_spec = spec.class_representatives or ((tmp.one().coords,),)
    reps = tuple(ideal_from_generators(tmp, [tmp.element(g) for g in gens]) for gens in reps_spec)
    if reps[0] != unit_ideal(tmp):
        raise ValueError("the first class representative must be the unit ideal")
    if len(reps) != spec.class_number:
        raise ValueError("number of class representatives differs from the class number")

    field = NumberField(spec, n, (r1, r2), tuple(complex(z) for z in roots),
                       tuple(tuple(r) for r in B), Tt, disc, units, inverses, zeta,
                       spec.torsion_order, spec.class_number, reps, 0.0, arrays)
    from .domain import compute_regulator
    reg = compute_regulator(field)
    if spec.regulator_reference is not None and abs(reg - spec.regulator_reference) > 1e-6:
        raise ValueError(f"regulator {reg} differs from the configured reference {spec.regulator_reference}")
    object.__setattr__(field, "regulator", reg)
    return field


def _e(n, i):
    return tuple(int(k == i) for k in range(n))


def index_of_power_basis(field: NumberField) -> Fraction:
    """[O_K : Z[theta]] = 1 / |det(basis_change)|."""
    den = 1
    for row in field.basis:
        for v in row:
            den = den * v.denominator // math.gcd(den, v.denominator)
    M = [[int(v * den) for v in row] for row in field.basis]
    return abs(Fraction(den ** field.degree, intlin.det(M)))
