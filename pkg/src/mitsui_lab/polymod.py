"""Polynomials over F_p, coefficient lists with the constant term first."""
from __future__ import annotations

import itertools
import random


def trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def normalize(f, p):
    return trim([c % p for c in f])


def add(f, g, p):
    n = max(len(f), len(g))
    return trim([((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)) % p
                 for i in range(n)])


def sub(f, g, p):
    n = max(len(f), len(g))
    return trim([((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % p
                 for i in range(n)])


def mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return trim([c % p for c in out])


def divmod_poly(f, g, p):
    f = normalize(f, p)
    g = normalize(g, p)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(f) - len(g) + 1, 0)
    r = list(f)
    dg = len(g) - 1
    while len(r) - 1 >= dg and r:
        c = r[-1] * inv % p
        shift = len(r) - 1 - dg
        q[shift] = c
        for i, b in enumerate(g):
            r[shift + i] = (r[shift + i] - c * b) % p
        r = trim(r)
    return trim(q), r


def monic(f, p):
    f = normalize(f, p)
    if not f:
        return f
    inv = pow(f[-1], -1, p)
    return [c * inv % p for c in f]


def gcd(f, g, p):
    f, g = normalize(f, p), normalize(g, p)
    while g:
        f, g = g, divmod_poly(f, g, p)[1]
    return monic(f, p)


def powmod(base, e, mod, p):
    result = [1]
    base = divmod_poly(base, mod, p)[1]
    while e:
        if e & 1:
            result = divmod_poly(mul(result, base, p), mod, p)[1]
        e >>= 1
        if e:
            base = divmod_poly(mul(base, base, p), mod, p)[1]
    return result


def derivative(f, p):
    return trim([(i * c) % p for i, c in enumerate(f)][1:])


def _irreducibles_brute(deg, p):
    """All monic irreducible polynomials of degree ``deg`` (tiny p^deg only)."""
    out = []
    for tail in itertools.product(range(p), repeat=deg):
        f = list(tail) + [1]
        if deg == 1 or all(divmod_poly(f, g, p)[1] for d in range(1, deg // 2 + 1)
                           for g in _irreducibles_brute_cached(d, p)):
            out.append(f)
    return out


_IRR_CACHE: dict = {}


def _irreducibles_brute_cached(deg, p):
    key = (deg, p)
    if key not in _IRR_CACHE:
        _IRR_CACHE[key] = _irreducibles_brute(deg, p)
    return _IRR_CACHE[key]


def _equal_degree_split(g, d, p, rng):
    """Split a squarefree product of degree-d irreducibles into its factors."""
    g = monic(g, p)
    k = (len(g) - 1) // d
    if k <= 1:
        return [g]
    if p ** d <= 256:
        return [h for h in _irreducibles_brute_cached(d, p) if not divmod_poly(g, h, p)[1]]
    while True:
        a = [rng.randrange(p) for _ in range(len(g) - 1)]
        a = trim(a)
        if len(a) < 2:
            continue
        if p == 2:
            # trace map a + a^2 + ... + a^(2^(d-1))
            t, cur = list(a), list(a)
            for _ in range(d - 1):
                cur = divmod_poly(mul(cur, cur, p), g, p)[1]
                t = add(t, cur, p)
            h = gcd(g, t, p)
        else:
            e = (p ** d - 1) // 2
            h = gcd(g, sub(powmod(a, e, g, p), [1], p), p)
        if 0 < len(h) - 1 < len(g) - 1:
            q = divmod_poly(g, h, p)[0]
            return _equal_degree_split(h, d, p, rng) + _equal_degree_split(q, d, p, rng)


def factor(f, p, seed=0):
    """Factor a monic polynomial over F_p.

    Returns a sorted list of (irreducible monic factor, multiplicity).
    """
    f = monic(f, p)
    rng = random.Random(seed * 1000003 + p)
    distinct = []
    rest = list(f)
    x = [0, 1]
    xp = [0, 1]
    d = 1
    # invariant: rest only has irreducible factors of degree >= d
    while len(rest) > 1:
        if len(rest) - 1 < 2 * d:
            distinct.append(rest)
            break
        xp = powmod(xp, p, rest, p)
        g = gcd(rest, sub(xp, x, p), p)
        if len(g) > 1:
            distinct.extend(_equal_degree_split(g, d, p, rng))
            while True:
                c = gcd(rest, g, p)
                if len(c) <= 1:
                    break
                rest = divmod_poly(rest, c, p)[0]
            if len(rest) > 1:
                xp = divmod_poly(xp, rest, p)[1]
        d += 1
    out = []
    for h in distinct:
        m = 0
        g = list(f)
        while True:
            q, r = divmod_poly(g, h, p)
            if r:
                break
            g = q
            m += 1
        out.append((h, m))
    out.sort(key=lambda t: (len(t[0]), t[0][::-1]))
    return out
