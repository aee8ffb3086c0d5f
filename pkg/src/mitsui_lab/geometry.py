"""Regions in K (x) R with membership, bounding boxes and volumes; the annulus
sector cover and packing of a body; QMC integration; the main-term integral
with an optional real exceptional character.

Points are real Minkowski coordinates: r1 real coordinates followed by
(re, im) pairs for the complex places.  Volumes are for Lebesgue measure in
these coordinates.  Angles are measured in turns (fractions of a full circle).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.stats import qmc

from .domain import BOUNDARY_TOL, fundamental_domain, unit_log_matrix
from .field import FractionalIdeal, NumberField, numeric_norm, place_abs

TOL = BOUNDARY_TOL
QMC_SEED = 20240607
QMC_POINTS = 2 ** 20
QMC_REPLICATES = 8


def _half_open(c, lo, hi):
    """lo <= c < hi with both faces nudged towards exclusion by TOL (relative)."""
    scale = max(abs(float(lo)), abs(float(hi)), 1.0)
    return (c >= float(lo) - TOL * scale) & (c < float(hi) - TOL * scale)


def point_turns(points: np.ndarray, field: NumberField) -> np.ndarray:
    """Argument at each complex place in turns, in [-TOL, 1 - TOL)."""
    r1 = field.r1
    out = np.empty((points.shape[0], field.r2))
    for j in range(field.r2):
        t = np.mod(np.arctan2(points[:, r1 + 2 * j + 1], points[:, r1 + 2 * j]) / (2 * math.pi), 1.0)
        t[t >= 1 - TOL] -= 1.0
        out[:, j] = t
    return out


def _wedge_box(rlo: float, rhi: float, t0: float, t1: float):
    """Bounding box of {r e^{2 pi i t}: rlo <= r <= rhi, t0 <= t <= t1}."""
    ts = [t0, t1] + [k / 4 for k in range(math.floor(4 * t0), math.ceil(4 * t1) + 1) if t0 <= k / 4 <= t1]
    xs, ys = [], []
    for r in (rlo, rhi):
        for t in ts:
            xs.append(r * math.cos(2 * math.pi * t))
            ys.append(r * math.sin(2 * math.pi * t))
    return min(xs), max(xs), min(ys), max(ys)


class Region:
    """Base class: subclasses provide contains, bounding_box and optionally volume."""

    kind = "region"
    dim: int

    def contains(self, points: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def volume(self) -> float | None:
        """Closed-form volume, or None when only QMC is available."""
        return None

    def describe(self) -> dict:
        return {"kind": self.kind}


class Empty(Region):
    kind = "empty"

    def __init__(self, dim: int):
        self.dim = dim

    def contains(self, points):
        return np.zeros(np.atleast_2d(points).shape[0], dtype=bool)

    def bounding_box(self):
        return np.zeros(self.dim), np.zeros(self.dim)

    def volume(self):
        return 0.0


class Box(Region):
    """(K (x) R)_{<X_1,...}: |x|_sigma < X_sigma at every place (open)."""

    kind = "box"

    def __init__(self, field: NumberField, bounds):
        self.field = field
        self.dim = field.degree
        k = field.r1 + field.r2
        b = np.broadcast_to(np.asarray(bounds, dtype=float), (k,)).copy()
        if np.any(b < 0):
            raise ValueError("box bounds must be nonnegative")
        self.bounds = b

    def contains(self, points):
        a = place_abs(self.field, np.atleast_2d(points))
        return np.all(a < self.bounds * (1 - TOL), axis=1)

    def bounding_box(self):
        f = self.field
        hi = np.concatenate([self.bounds[: f.r1], np.repeat(self.bounds[f.r1:], 2)])
        return -hi, hi

    def component_volume(self) -> float:
        f = self.field
        return float(np.prod(self.bounds[: f.r1]) * np.prod(math.pi * self.bounds[f.r1:] ** 2))

    def volume(self):
        return 2 ** self.field.r1 * self.component_volume()

    def describe(self):
        return {"kind": self.kind, "bounds": self.bounds.tolist()}


class Ball(Region):
    """Open Euclidean ball in Minkowski coordinates."""

    kind = "ball"

    def __init__(self, center, radius: float):
        self.center = np.asarray(center, dtype=float)
        self.radius = float(radius)
        self.dim = self.center.shape[0]

    def contains(self, points):
        d = np.atleast_2d(points) - self.center
        return np.einsum("ij,ij->i", d, d) < (self.radius * (1 - TOL)) ** 2

    def bounding_box(self):
        return self.center - self.radius, self.center + self.radius

    def volume(self):
        n = self.dim
        return math.pi ** (n / 2) / math.gamma(n / 2 + 1) * self.radius ** n

    def describe(self):
        return {"kind": self.kind, "center": self.center.tolist(), "radius": self.radius}


class HalfspacePolytope(Region):
    """{x : A x < b}; must be bounded."""

    kind = "polytope"

    def __init__(self, A, b):
        self.A = np.atleast_2d(np.asarray(A, dtype=float))
        self.b = np.asarray(b, dtype=float)
        self.dim = self.A.shape[1]
        self._box = None

    def contains(self, points):
        v = np.atleast_2d(points) @ self.A.T
        return np.all(v < self.b - TOL * np.maximum(np.abs(self.b), 1.0), axis=1)

    def bounding_box(self):
        if self._box is None:
            from scipy.optimize import linprog
            lo, hi = np.empty(self.dim), np.empty(self.dim)
            for i in range(self.dim):
                c = np.zeros(self.dim)
                for sgn in (1.0, -1.0):
                    c[i] = sgn
                    res = linprog(c, A_ub=self.A, b_ub=self.b, bounds=[(None, None)] * self.dim)
                    if res.status == 2:
                        return np.zeros(self.dim), np.zeros(self.dim)
                    if res.status != 0:
                        raise ValueError("polytope is unbounded")
                    if sgn > 0:
                        lo[i] = res.fun
                    else:
                        hi[i] = -res.fun
            self._box = (lo, hi)
        return self._box

    def describe(self):
        return {"kind": self.kind, "A": self.A.tolist(), "b": self.b.tolist()}


class Intersection(Region):
    kind = "intersection"

    def __init__(self, *regions: Region):
        if not regions:
            raise ValueError("empty intersection list")
        self.regions = regions
        self.dim = regions[0].dim

    def contains(self, points):
        ok = self.regions[0].contains(points)
        for r in self.regions[1:]:
            ok &= r.contains(points)
        return ok

    def bounding_box(self):
        boxes = [r.bounding_box() for r in self.regions]
        lo = np.max([b[0] for b in boxes], axis=0)
        hi = np.min([b[1] for b in boxes], axis=0)
        return lo, np.maximum(hi, lo)

    def describe(self):
        return {"kind": self.kind, "parts": [r.describe() for r in self.regions]}


@dataclass(frozen=True)
class AnnulusSector(Region):
    """Product over places of a radial interval [lo, hi) and, at complex
    places, an angular interval [t0, t1) in turns; one sign per real place."""

    field: NumberField
    radial: tuple          # ((Fraction lo, Fraction hi), ...) per place
    angular: tuple         # ((Fraction t0, Fraction t1), ...) per complex place
    signs: tuple           # +1 / -1 per real place

    kind = "annulus_sector"

    @property
    def dim(self):
        return self.field.degree

    def contains(self, points):
        f = self.field
        pts = np.atleast_2d(points)
        a = place_abs(f, pts)
        ok = np.ones(pts.shape[0], dtype=bool)
        for i, (lo, hi) in enumerate(self.radial):
            ok &= _half_open(a[:, i], lo, hi)
        for i, s in enumerate(self.signs):
            ok &= pts[:, i] * s > 0
        if f.r2:
            t = point_turns(pts, f)
            for j, (t0, t1) in enumerate(self.angular):
                ok &= _half_open(t[:, j], t0, t1)
        return ok

    def bounding_box(self):
        f = self.field
        lo, hi = np.empty(f.degree), np.empty(f.degree)
        for i in range(f.r1):
            a, b = float(self.radial[i][0]), float(self.radial[i][1])
            lo[i], hi[i] = (a, b) if self.signs[i] > 0 else (-b, -a)
        for j in range(f.r2):
            rl, rh = self.radial[f.r1 + j]
            t0, t1 = self.angular[j]
            x0, x1, y0, y1 = _wedge_box(float(rl), float(rh), float(t0), float(t1))
            k = f.r1 + 2 * j
            lo[k], hi[k], lo[k + 1], hi[k + 1] = x0, x1, y0, y1
        return lo, hi

    def volume(self):
        f = self.field
        v = 1.0
        for i in range(f.r1):
            v *= float(self.radial[i][1] - self.radial[i][0])
        for j in range(f.r2):
            lo, hi = self.radial[f.r1 + j]
            t0, t1 = self.angular[j]
            v *= math.pi * float(t1 - t0) * float(hi * hi - lo * lo)
        return v

    def hull_vertices(self) -> np.ndarray:
        """Finite point set whose convex hull contains the sector."""
        f = self.field
        per_place = []
        for i in range(f.r1):
            s = self.signs[i]
            per_place.append([(s * float(self.radial[i][0]),), (s * float(self.radial[i][1]),)])
        for j in range(f.r2):
            lo, hi = (float(v) for v in self.radial[f.r1 + j])
            t0, t1 = (float(v) for v in self.angular[j])
            d = 2 * math.pi * (t1 - t0)
            pts = []
            for r, t in ((lo, t0), (lo, t1), (hi, t0), (hi, t1)):
                pts.append((r * math.cos(2 * math.pi * t), r * math.sin(2 * math.pi * t)))
            # tangents at the outer endpoints meet on the bisector
            rt = hi / math.cos(d / 2)
            tm = 2 * math.pi * (t0 + t1) / 2
            pts.append((rt * math.cos(tm), rt * math.sin(tm)))
            per_place.append(pts)
        return np.array([sum(combo, ()) for combo in itertools.product(*per_place)])

    def describe(self):
        return {"kind": self.kind,
                "radial": [[str(a), str(b)] for a, b in self.radial],
                "angular": [[str(a), str(b)] for a, b in self.angular],
                "signs": list(self.signs)}


class ThinConeSegment(Region):
    """[lo, hi) . P where P is a product of a cube in unit-log coordinates t,
    a cube of angles (turns) and a fixed sign pattern."""

    kind = "thin_cone"

    def __init__(self, field: NumberField, t_lo, t_side, ang_lo, ang_side, signs,
                 norm_lo: float, norm_hi: float):
        self.field = field
        self.dim = field.degree
        r = field.unit_rank
        self.t_lo = np.broadcast_to(np.asarray(t_lo, dtype=float), (r,)).copy()
        self.t_side = np.broadcast_to(np.asarray(t_side, dtype=float), (r,)).copy()
        self.ang_lo = np.broadcast_to(np.asarray(ang_lo, dtype=float), (field.r2,)).copy()
        self.ang_side = np.broadcast_to(np.asarray(ang_side, dtype=float), (field.r2,)).copy()
        self.signs = tuple(int(s) for s in signs)
        if len(self.signs) != field.r1:
            raise ValueError("one sign per real place")
        self.norm_lo, self.norm_hi = float(norm_lo), float(norm_hi)

    def contains(self, points):
        f = self.field
        pts = np.atleast_2d(points)
        ok = _half_open(numeric_norm(f, pts), self.norm_lo, self.norm_hi)
        for i, s in enumerate(self.signs):
            ok &= pts[:, i] * s > 0
        if f.unit_rank:
            with np.errstate(divide="ignore", invalid="ignore"):
                t = fundamental_domain(f).unit_coordinates(pts)
            for i in range(f.unit_rank):
                ok &= _half_open(t[:, i], self.t_lo[i], self.t_lo[i] + self.t_side[i])
        if f.r2:
            tt = point_turns(pts, f)
            for j in range(f.r2):
                if self.ang_side[j] >= 1:
                    continue
                ok &= _half_open(tt[:, j], self.ang_lo[j], self.ang_lo[j] + self.ang_side[j])
        return ok

    def _place_abs_range(self):
        """Per-place range of |x|_sigma over the segment."""
        f = self.field
        wts = np.array([1.0] * f.r1 + [2.0] * f.r2)
        U = unit_log_matrix(f)
        corners = np.array(list(itertools.product(*[(a, a + s) for a, s in zip(self.t_lo, self.t_side)]))) \
            if f.unit_rank else np.zeros((1, 0))
        h = corners @ U if f.unit_rank else np.zeros((1, f.r1 + f.r2))
        e_lo = np.min(h, axis=0) / wts
        e_hi = np.max(h, axis=0) / wts
        n = f.degree
        lo = max(self.norm_lo, 0.0) ** (1 / n) * np.exp(e_lo)
        hi = self.norm_hi ** (1 / n) * np.exp(e_hi)
        return lo, hi

    def bounding_box(self):
        f = self.field
        alo, ahi = self._place_abs_range()
        lo, hi = np.empty(f.degree), np.empty(f.degree)
        for i in range(f.r1):
            lo[i], hi[i] = (alo[i], ahi[i]) if self.signs[i] > 0 else (-ahi[i], -alo[i])
        for j in range(f.r2):
            t0 = self.ang_lo[j]
            t1 = t0 + min(self.ang_side[j], 1.0)
            x0, x1, y0, y1 = _wedge_box(alo[f.r1 + j], ahi[f.r1 + j], t0, t1)
            k = f.r1 + 2 * j
            lo[k], hi[k], lo[k + 1], hi[k + 1] = x0, x1, y0, y1
        return lo, hi

    def angular_measure(self) -> float:
        """Measure of the angular cube in radians^r2."""
        return float(np.prod(2 * math.pi * np.minimum(self.ang_side, 1.0)))

    def volume(self):
        f = self.field
        return (float(np.prod(self.t_side)) * f.regulator * self.angular_measure()
                * (self.norm_hi - self.norm_lo) / 2 ** f.r2)

    def describe(self):
        return {"kind": self.kind, "t_lo": self.t_lo.tolist(), "t_side": self.t_side.tolist(),
                "ang_lo": self.ang_lo.tolist(), "ang_side": self.ang_side.tolist(),
                "signs": list(self.signs), "norm": [self.norm_lo, self.norm_hi]}


class DomainSegment(Region):
    """The fundamental domain cut at lo <= N(x) < hi."""

    kind = "domain"

    def __init__(self, field: NumberField, norm_lo: float, norm_hi: float):
        self.field = field
        self.dim = field.degree
        self.norm_lo, self.norm_hi = float(norm_lo), float(norm_hi)

    def contains(self, points):
        pts = np.atleast_2d(points)
        ok = _half_open(numeric_norm(self.field, pts), self.norm_lo, self.norm_hi)
        with np.errstate(divide="ignore", invalid="ignore"):
            ok &= fundamental_domain(self.field).contains(pts)
        return ok

    def bounding_box(self):
        f = self.field
        wts = np.array([1.0] * f.r1 + [2.0] * f.r2)
        U = unit_log_matrix(f)
        if f.unit_rank:
            corners = np.array(list(itertools.product((0.0, 1.0), repeat=f.unit_rank)))
            e_hi = np.max(corners @ U, axis=0) / wts
        else:
            e_hi = np.zeros(f.r1 + f.r2)
        rad = self.norm_hi ** (1 / f.degree) * np.exp(e_hi)
        lo, hi = np.empty(f.degree), np.empty(f.degree)
        for i in range(f.r1):
            lo[i], hi[i] = (0.0 if i == 0 else -rad[i]), rad[i]
        for j in range(f.r2):
            k = f.r1 + 2 * j
            if f.r1 == 0 and j == 0:
                x0, x1, y0, y1 = _wedge_box(0.0, rad[f.r1 + j], 0.0, 1.0 / f.torsion_order)
            else:
                x0, x1, y0, y1 = -rad[f.r1 + j], rad[f.r1 + j], -rad[f.r1 + j], rad[f.r1 + j]
            lo[k], hi[k], lo[k + 1], hi[k + 1] = x0, x1, y0, y1
        return lo, hi

    def volume(self):
        f = self.field
        return (2 ** f.r1 * math.pi ** f.r2 * f.regulator
                * (self.norm_hi - self.norm_lo) / f.torsion_order)

    def describe(self):
        return {"kind": self.kind, "norm": [self.norm_lo, self.norm_hi]}


# ---------------------------------------------------------------------------
# volumes


@dataclass(frozen=True)
class VolumeEstimate:
    value: float
    error: float
    method: str

    def __float__(self):
        return self.value


def qmc_integrate(func, lo, hi, n_points: int = QMC_POINTS, replicates: int = QMC_REPLICATES,
                  seed: int = QMC_SEED, chunk: int = 2 ** 16) -> tuple[float, float]:
    """Integral of func over the box [lo, hi] by scrambled Sobol replicates.

    Returns (mean of replicate estimates, standard error).  func maps an
    (m, d) array to m values.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    d = lo.shape[0]
    span = hi - lo
    box = float(np.prod(span))
    if box <= 0:
        return 0.0, 0.0
    m = max(int(math.log2(max(n_points // replicates, 1))), 1)
    est = []
    for r in range(replicates):
        pts = qmc.Sobol(d, scramble=True, seed=seed + r).random_base2(m)
        sums = []
        for s in range(0, pts.shape[0], chunk):
            x = lo + pts[s:s + chunk] * span
            sums.append(float(np.sum(func(x))))
        est.append(box * math.fsum(sums) / pts.shape[0])
    est = np.array(est)
    err = float(est.std(ddof=1) / math.sqrt(replicates)) if replicates > 1 else float("nan")
    return float(math.fsum(est) / replicates), err


def qmc_volume(region: Region, n_points: int = QMC_POINTS) -> VolumeEstimate:
    lo, hi = region.bounding_box()
    v, e = qmc_integrate(lambda x: region.contains(x).astype(float), lo, hi, n_points)
    return VolumeEstimate(v, e, "qmc")


def region_volume(region: Region, n_points: int = QMC_POINTS) -> VolumeEstimate:
    """Closed form when the region kind has one, otherwise QMC."""
    v = region.volume()
    if v is not None:
        return VolumeEstimate(float(v), 0.0, "closed")
    return qmc_volume(region, n_points)


# ---------------------------------------------------------------------------
# annulus sector cover and packing


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def cover_count_constant(field: NumberField) -> float:
    """C(n) with #cover <= C(n) Y^n for every integer Y >= 2."""
    return 2.0 ** field.r1 * (2 * math.pi + 0.5) ** field.r2


def cover_with_annulus_sectors(field: NumberField, X, Y: int) -> list[AnnulusSector]:
    """Disjoint annulus sectors covering {1 <= |x|_sigma < X at every place}.

    Radial intervals split [1, X) into ceil((X-1) Y / X) equal pieces (width
    at most X/Y); angular intervals split the circle into ceil(2 pi Y) pieces
    (width at most 1/Y radians).
    """
    if int(Y) != Y or Y < 2:
        raise ValueError("Y must be an integer >= 2")
    X = _as_fraction(X)
    if X <= 1:
        return []
    Y = int(Y)
    k_rad = math.ceil((X - 1) * Y / X)
    width = (X - 1) / k_rad
    radial = [(1 + i * width, 1 + (i + 1) * width) for i in range(k_rad)]
    k_ang = math.ceil(2 * math.pi * Y)
    angular = [(Fraction(j, k_ang), Fraction(j + 1, k_ang)) for j in range(k_ang)]
    k = field.r1 + field.r2
    out = []
    for signs in itertools.product((1, -1), repeat=field.r1):
        for rad in itertools.product(radial, repeat=k):
            for ang in itertools.product(angular, repeat=field.r2):
                out.append(AnnulusSector(field, tuple(rad), tuple(ang), tuple(signs)))
    return out


def sectors_disjoint(sectors: list[AnnulusSector]) -> bool:
    """Exact pairwise check: two sectors are disjoint iff their signs differ
    or some half-open parameter interval pair does not overlap."""
    if len(sectors) < 2:
        return True
    fr = [v for s in sectors for iv in s.radial + s.angular for v in iv]
    L = 1
    for v in fr:
        L = L * v.denominator // math.gcd(L, v.denominator)
    biggest = max(abs(v) for v in fr) * L
    if biggest > 2 ** 62:
        raise OverflowError("interval endpoints too large for exact integer comparison")
    iv = np.array([[[int(v * L) for v in p] for p in s.radial + s.angular] for s in sectors], dtype=np.int64)
    sg = np.array([s.signs for s in sectors], dtype=np.int64).reshape(len(sectors), -1)
    for i in range(len(sectors) - 1):
        rest_iv = iv[i + 1:]
        same = np.all(sg[i + 1:] == sg[i], axis=1)
        overlap = np.all((rest_iv[:, :, 0] < iv[i, :, 1]) & (iv[i, :, 0] < rest_iv[:, :, 1]), axis=1)
        if np.any(same & overlap):
            return False
    return True


def select_interior_sectors(C: Region, sectors: list[AnnulusSector]) -> tuple[list, float]:
    """Sectors certified to lie inside C, and vol(C) minus their total volume.

    Certification is exact for Box bodies of the same field and otherwise
    tests every hull vertex (corners plus the outer-arc tangent point) for
    membership; borderline sectors count as outside.
    """
    if isinstance(C, Empty):
        return [], 0.0
    vol = region_volume(C).value
    if not sectors:
        return [], vol
    if isinstance(C, Box) and C.field is sectors[0].field:
        inside = [s for s in sectors
                  if all(float(hi) <= X for (_, hi), X in zip(s.radial, C.bounds))]
    else:
        verts = np.stack([s.hull_vertices() for s in sectors])
        M, V, n = verts.shape
        ok = C.contains(verts.reshape(M * V, n)).reshape(M, V).all(axis=1)
        inside = [s for s, o in zip(sectors, ok) if o]
    return inside, vol - math.fsum(s.volume() for s in inside)


# ---------------------------------------------------------------------------
# main-term integral with an exceptional real character


def _sign_values(field, psi, alpha):
    """Value of the real character psi(-; alpha) on each sign component,
    keyed by the sign tuple."""
    from .ray import evaluate_character
    out = {}
    for signs in itertools.product((1, -1), repeat=field.r1):
        pt = np.array(list(signs) + [1.0, 0.0] * field.r2, dtype=float)
        v = evaluate_character(psi, pt, alpha)
        if abs(v.imag) > 1e-9 or abs(abs(v.real) - 1) > 1e-9:
            raise ValueError("the exceptional character must be real")
        out[signs] = float(round(v.real))
    return out


def secondary_integral(field: NumberField, C: Region, a: FractionalIdeal | None = None,
                       psi=None, alpha=None, beta: float | None = None,
                       n_points: int = QMC_POINTS) -> float:
    """Integral over C of 1 - psi(x; alpha) N(x a^-1)^(beta - 1).

    Without beta (no exceptional zero) this is vol(C).
    """
    if beta is None:
        return region_volume(C, n_points).value
    if psi is None:
        raise ValueError("beta given without a character")
    if not 0 < beta <= 1:
        raise ValueError("beta must lie in (0, 1]")
    Na = float(a.norm) if a is not None else 1.0
    scale = Na ** (1 - beta)
    if isinstance(C, Empty):
        return 0.0
    if getattr(psi, "is_trivial", False) and alpha is None:
        sv = {s: 1.0 for s in itertools.product((1, -1), repeat=field.r1)}
    else:
        sv = _sign_values(field, psi, alpha)
    b = beta

    if isinstance(C, AnnulusSector):
        J = 1.0
        for i in range(field.r1):
            lo, hi = (float(v) for v in C.radial[i])
            J *= (hi ** b - lo ** b) / b
        for j in range(field.r2):
            lo, hi = (float(v) for v in C.radial[field.r1 + j])
            t0, t1 = C.angular[j]
            J *= 2 * math.pi * float(t1 - t0) * (hi ** (2 * b) - lo ** (2 * b)) / (2 * b)
        return C.volume() - sv[C.signs] * scale * J

    if isinstance(C, ThinConeSegment):
        lo, hi = C.norm_lo, C.norm_hi
        if hi <= lo:
            return 0.0
        kappa = C.volume() / (hi - lo)
        return kappa * ((hi - lo) - sv[C.signs] * scale * (hi ** b - max(lo, 0.0) ** b) / b)

    if isinstance(C, DomainSegment):
        lo, hi = C.norm_lo, C.norm_hi
        if hi <= lo:
            return 0.0
        comps = [s for s in sv if field.r1 == 0 or s[0] == 1]
        kappa = C.volume() / (hi - lo) / len(comps)
        return math.fsum(kappa * ((hi - lo) - sv[s] * scale * (hi ** b - max(lo, 0.0) ** b) / b)
                         for s in comps)

    if isinstance(C, Box):
        f = field
        J = 1.0
        for i in range(f.r1):
            J *= C.bounds[i] ** b / b
        for j in range(f.r2):
            J *= math.pi * C.bounds[f.r1 + j] ** (2 * b) / b
        comp = C.component_volume()
        return math.fsum(comp - sv[s] * scale * J for s in sv)

    keys = list(sv)
    table = np.array([sv[k] for k in keys])
    bits = np.array([2 ** (field.r1 - 1 - i) for i in range(field.r1)], dtype=np.int64)

    def integrand(x):
        inside = C.contains(x)
        if field.r1:
            idx = ((x[:, : field.r1] < 0).astype(np.int64) @ bits) if field.r1 else 0
            s = table[idx]
        else:
            s = table[0]
        N = numeric_norm(field, x)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = 1 - s * scale * np.where(N > 0, N, np.inf) ** (b - 1)
        return np.where(inside, val, 0.0)

    lo, hi = C.bounding_box()
    v, _ = qmc_integrate(integrand, lo, hi, n_points)
    return v
