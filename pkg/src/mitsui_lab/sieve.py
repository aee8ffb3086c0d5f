"""Prime ideals of bounded norm, primality of elements relative to an ideal,
lattice-point enumeration of prime elements in regions, and weighted
character sums over primes.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .dedekind import PrimeIdeal, prime_factors, primes_above
from .field import (FieldElement, FractionalIdeal, NumberField, _c, batch_norm,
                    ideal_contains_ideal, minkowski_real, principal_ideal,
                    reduce_mod_hnf_array, unit_ideal)

# candidate points per enumeration block
BLOCK_POINTS = 1 << 18


# ---------------------------------------------------------------------------
# rational primes


class _PrimeTable:
    """Growable Eratosthenes table shared by all callers (read-only once built)."""

    def __init__(self):
        self.mask = np.zeros(0, dtype=bool)

    def ensure(self, limit: int) -> np.ndarray:
        if self.mask.shape[0] < limit:
            size = max(int(limit), 2 * self.mask.shape[0], 1 << 16)
            m = np.ones(size, dtype=bool)
            m[:2] = False
            for p in range(2, math.isqrt(size - 1) + 1):
                if m[p]:
                    m[p * p::p] = False
            self.mask = m
        return self.mask


_TABLE = _PrimeTable()


def prime_mask(limit: int) -> np.ndarray:
    """Boolean array of length >= limit; entry k says whether k is prime."""
    return _TABLE.ensure(int(limit))


def rational_primes(limit: int) -> np.ndarray:
    """All primes p < limit."""
    if limit <= 2:
        return np.zeros(0, dtype=np.int64)
    return np.flatnonzero(prime_mask(limit)[:limit]).astype(np.int64)


def _is_prime_int(k: int) -> bool:
    if k < 2:
        return False
    if k < 10 ** 8:
        return bool(prime_mask(k + 1)[k])
    import sympy
    return bool(sympy.isprime(k))


# ---------------------------------------------------------------------------
# prime ideals


def sieve_prime_ideals(field: NumberField, N: float, generators: bool = True) -> list[PrimeIdeal]:
    """All prime ideals of norm < N sorted by (norm, HNF).

    For class number one (and generators=True) each ideal carries the unique
    generator lying in the fundamental domain.
    """
    out = []
    for p in rational_primes(int(math.ceil(N))):
        for P in primes_above(field, int(p)):
            if P.norm < N:
                out.append(P)
    out.sort(key=lambda P: (P.norm, P.ideal.basis))
    if generators and field.class_number == 1 and out:
        out = _attach_generators(field, out, N)
    return out


def _attach_generators(field, primes, N):
    from .geometry import DomainSegment
    batch = prime_elements_array(field, unit_ideal(field), DomainSegment(field, 0, N))
    by_p = {}
    for i, P in enumerate(primes):
        by_p.setdefault(P.over, []).append(i)
    gens = [None] * len(primes)
    for coords, nn in zip(batch.coords, batch.norms):
        nn = int(nn)
        p = _prime_root(nn, field.degree)
        hits = [i for i in by_p.get(p, ()) if primes[i].norm == nn and primes[i].ideal.contains(tuple(coords))]
        if len(hits) != 1:
            raise RuntimeError(f"element {tuple(coords)} matches {len(hits)} sieved primes")
        i = hits[0]
        if gens[i] is not None:
            raise RuntimeError(f"two generators in the fundamental domain for {primes[i]}")
        gens[i] = FieldElement(tuple(int(c) for c in coords))
    if any(g is None for g in gens):
        raise RuntimeError("a sieved prime has no generator in the fundamental domain")
    return [dataclasses.replace(P, generator=g) for P, g in zip(primes, gens)]


def _prime_root(m: int, max_k: int) -> int:
    """p when m = p^k with 1 <= k <= max_k, else 0."""
    if _is_prime_int(m):
        return m
    for k in range(2, max_k + 1):
        r = round(m ** (1.0 / k))
        for c in (r - 1, r, r + 1):
            if c > 1 and c ** k == m and _is_prime_int(c):
                return c
    return 0


def _in_prime_times(field, P: PrimeIdeal, a: FractionalIdeal, coords: np.ndarray) -> np.ndarray:
    """Rows x with x in P a."""
    from .field import ideal_mul
    Pa = ideal_mul(field, P.ideal, a)
    if Pa.denominator != 1:
        raise ValueError("ambient ideal must be integral")
    red = reduce_mod_hnf_array(coords, Pa.basis)
    return np.all(red == 0, axis=1)


def is_prime_element(field: NumberField, a: FractionalIdeal, x) -> bool:
    """Whether x a^-1 is a prime ideal (x must lie in a)."""
    x = FieldElement(_c(x))
    if not a.contains(x.coords):
        raise ValueError("element does not lie in the ambient ideal")
    if x.is_zero():
        return False
    Nx = abs(int(batch_norm(field, np.array([x.coords]))[0]))
    Na = a.norm
    nn = Nx / Na
    if nn.denominator != 1:
        raise ValueError("norm not divisible by the ambient norm")
    nn = int(nn)
    if _is_prime_int(nn):
        return True
    p = _prime_root(nn, field.degree)
    if not p:
        return False
    row = np.array([x.coords], dtype=np.int64)
    return any(P.norm == nn and bool(_in_prime_times(field, P, a, row)[0])
               for P in primes_above(field, p))


def find_generator(field: NumberField, P: PrimeIdeal) -> FieldElement | None:
    """The generator of P inside the fundamental domain (class number one)."""
    if P.generator is not None:
        return P.generator
    if field.class_number != 1:
        return None
    from .geometry import DomainSegment
    b = prime_elements_array(field, unit_ideal(field), DomainSegment(field, P.norm, P.norm + 1))
    for coords in b.coords:
        if P.ideal.contains(tuple(int(c) for c in coords)):
            return FieldElement(tuple(int(c) for c in coords))
    return None


# ---------------------------------------------------------------------------
# lattice enumeration


def _ambient_basis(a: FractionalIdeal) -> np.ndarray:
    if a.denominator != 1:
        raise ValueError("ambient ideal must be integral")
    return np.array(a.basis, dtype=np.int64)


def lattice_points(field: NumberField, a: FractionalIdeal, region) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Blocks (coords, points) of the elements of a inside region.

    Scans the lattice coefficient box over the region's bounding box in slabs
    along the first coefficient; the last coefficient's range is solved
    exactly per row, so only a thin shell of candidates is wasted.
    """
    lo, hi = (np.asarray(v, dtype=float) for v in region.bounding_box())
    if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
        raise ValueError("region is unbounded")
    A = _ambient_basis(a)
    n = field.degree
    G = A.astype(float) @ field.minkowski_matrix.T          # row i = embedding of basis vector i
    Ginv = np.linalg.inv(G)
    # coefficient box: c = x Ginv with x in [lo, hi]
    cmin = np.sum(np.minimum(lo[:, None] * Ginv, hi[:, None] * Ginv), axis=0)
    cmax = np.sum(np.maximum(lo[:, None] * Ginv, hi[:, None] * Ginv), axis=0)
    cmin = np.floor(cmin - 1e-9).astype(np.int64)
    cmax = np.ceil(cmax + 1e-9).astype(np.int64)
    if np.any(cmax < cmin):
        return
    ranges = [np.arange(cmin[j], cmax[j] + 1) for j in range(n - 1)]
    g_last = G[n - 1]
    gscale = np.max(np.abs(g_last))
    free = np.abs(g_last) > 1e-12 * gscale
    width = [len(r) for r in ranges[1:]]
    inner = int(np.prod(width)) if width else 1
    last_len = int(cmax[n - 1] - cmin[n - 1] + 1)
    if n == 1:
        c = np.arange(cmin[0], cmax[0] + 1)[:, None]
        coords = c @ A
        pts = minkowski_real(field, coords)
        keep = region.contains(pts)
        if np.any(keep):
            yield coords[keep], pts[keep]
        return
    step = max(1, BLOCK_POINTS // max(1, inner * min(last_len, 64)))
    first = ranges[0]
    for s in range(0, len(first), step):
        mesh = np.meshgrid(first[s:s + step], *ranges[1:], indexing="ij")
        P = np.stack([m.ravel() for m in mesh], axis=1)
        base = P.astype(float) @ G[: n - 1]
        L = np.full(P.shape[0], -np.inf)
        U = np.full(P.shape[0], np.inf)
        ok = np.ones(P.shape[0], dtype=bool)
        for k in range(n):
            if free[k]:
                b1 = (lo[k] - base[:, k]) / g_last[k]
                b2 = (hi[k] - base[:, k]) / g_last[k]
                L = np.maximum(L, np.minimum(b1, b2))
                U = np.minimum(U, np.maximum(b1, b2))
            else:
                ok &= (base[:, k] >= lo[k] - 1e-9) & (base[:, k] <= hi[k] + 1e-9)
        L = np.maximum(np.ceil(L - 1e-9), cmin[n - 1])
        U = np.minimum(np.floor(U + 1e-9), cmax[n - 1])
        cnt = np.where(ok, np.maximum(U - L + 1, 0), 0).astype(np.int64)
        total = int(cnt.sum())
        if total == 0:
            continue
        rows = np.repeat(np.arange(P.shape[0]), cnt)
        offs = np.arange(total) - np.repeat(np.cumsum(cnt) - cnt, cnt)
        last = L.astype(np.int64)[rows] + offs
        C = np.concatenate([P[rows], last[:, None]], axis=1)
        coords = C @ A
        pts = minkowski_real(field, coords)
        keep = region.contains(pts)
        if np.any(keep):
            yield coords[keep], pts[keep]


@dataclass
class PrimeElements:
    """Prime elements of an ideal a inside a region, sorted by (norm, coords)."""

    coords: np.ndarray        # (m, n) int64
    points: np.ndarray        # (m, n) Minkowski coordinates
    norms: np.ndarray         # N(pi a^-1) as int64
    residues: np.ndarray      # index into the unit classes of a/qa (-1 when no modulus given)

    @property
    def weights(self) -> np.ndarray:
        return np.log(self.norms.astype(float))

    def __len__(self):
        return self.coords.shape[0]


def prime_elements_array(field: NumberField, a: FractionalIdeal, region, cc=None,
                         modulus: FractionalIdeal | None = None,
                         coprime: bool = False) -> PrimeElements:
    """All pi in a and region with pi a^-1 prime.

    cc restricts to one congruence class of a/qa; ``modulus`` with
    ``coprime`` keeps only pi coprime to the modulus and records residue indices.
    """
    from .ray import residue_ring
    n = field.degree
    if cc is not None:
        if cc.ambient != a:
            raise ValueError("congruence class lives in a different ambient ideal")
        modulus = cc.modulus
    ring = residue_ring(field, a, modulus) if modulus is not None else None
    target = int(ring.code([cc.representative.coords])[0]) if cc is not None else None
    Na = a.norm
    if Na.denominator != 1:
        raise ValueError("ambient ideal must be integral")
    Na = int(Na)
    parts = []
    for coords, pts in lattice_points(field, a, region):
        N = np.abs(batch_norm(field, coords))
        if N.dtype == object:
            raise OverflowError("norms exceed 64-bit range")
        nz = N > 0
        coords, pts, N = coords[nz], pts[nz], N[nz]
        if np.any(N % Na):
            raise RuntimeError("element norm not divisible by the ideal norm")
        nn = N // Na
        good = nn >= 2
        coords, pts, nn = coords[good], pts[good], nn[good]
        if not len(nn):
            continue
        table = prime_mask(int(nn.max()) + 1)
        isp = table[nn]
        rest = np.flatnonzero(~isp)
        if len(rest) and n > 1:
            roots = {}
            for i in rest:
                p = _prime_root(int(nn[i]), n)
                if p:
                    roots.setdefault((p, int(nn[i])), []).append(i)
            for (p, m), idx in roots.items():
                idx = np.array(idx)
                hit = np.zeros(len(idx), dtype=bool)
                for P in primes_above(field, p):
                    if P.norm == m:
                        hit |= _in_prime_times(field, P, a, coords[idx])
                isp[idx[hit]] = True
        coords, pts, nn = coords[isp], pts[isp], nn[isp]
        if ring is not None:
            if cc is not None:
                keep = ring.code(coords) == target
                coords, pts, nn = coords[keep], pts[keep], nn[keep]
            res = ring.unit_index(coords)
            if coprime or cc is not None:
                keep = res >= 0
                coords, pts, nn, res = coords[keep], pts[keep], nn[keep], res[keep]
        else:
            res = np.full(len(nn), -1, dtype=np.int64)
        parts.append((coords, pts, nn, res))
    if not parts:
        return PrimeElements(np.zeros((0, n), np.int64), np.zeros((0, n)), np.zeros(0, np.int64),
                             np.zeros(0, np.int64))
    coords = np.concatenate([p[0] for p in parts])
    pts = np.concatenate([p[1] for p in parts])
    nn = np.concatenate([p[2] for p in parts])
    res = np.concatenate([p[3] for p in parts])
    order = np.lexsort(tuple(coords[:, j] for j in range(n - 1, -1, -1)) + (nn,))
    return PrimeElements(coords[order], pts[order], nn[order], res[order])


def enumerate_prime_elements(field: NumberField, a: FractionalIdeal, region, cc=None
                             ) -> Iterator[tuple[FieldElement, float]]:
    """Stream of (pi, log N(pi a^-1)) over prime elements of a in region."""
    b = prime_elements_array(field, a, region, cc)
    for coords, w in zip(b.coords, b.weights):
        yield FieldElement(tuple(int(c) for c in coords)), float(w)


# ---------------------------------------------------------------------------
# character sums over primes


def _divides_modulus(field, q) -> set:
    if q is None or q == unit_ideal(field):
        return set()
    return {P for P, _ in prime_factors(field, q)}


def prime_ideal_log_norms(field: NumberField, N: float, q: FractionalIdeal | None = None
                          ) -> tuple[np.ndarray, np.ndarray]:
    """(norms, log norms) of prime ideals of norm < N not dividing q, sorted by norm."""
    bad = _divides_modulus(field, q)
    ps = sieve_prime_ideals(field, N, generators=False)
    norms = np.array([P.norm for P in ps if P not in bad], dtype=np.int64)
    return norms, np.log(norms.astype(float))


def pit_sum(field: NumberField, q: FractionalIdeal | None, character=None, N: float = 2) -> complex:
    """Sum of psi(p) log N(p) over prime ideals p of norm < N coprime to q.

    Nontrivial characters are evaluated at the generator of p in the
    fundamental domain, which needs class number one.
    """
    if q is None:
        q = unit_ideal(field)
    if character is None or getattr(character, "is_trivial", False):
        _, w = prime_ideal_log_norms(field, N, q)
        return complex(math.fsum(w.tolist()), 0.0)
    if field.class_number != 1:
        raise ValueError("nontrivial characters need class number one")
    from .geometry import DomainSegment
    from .ray import evaluate_character_batch
    b = prime_elements_array(field, unit_ideal(field), DomainSegment(field, 0, N),
                             modulus=q, coprime=True)
    if not len(b):
        return 0j
    vals = evaluate_character_batch(character, b.points, b.residues) * b.weights
    return complex(math.fsum(vals.real.tolist()), math.fsum(vals.imag.tolist()))
