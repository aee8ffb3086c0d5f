"""Exact integer linear algebra on nested lists of Python ints.

Everything here works on plain lists so that intermediate values never
overflow; callers convert to numpy only at the edges.
"""
from __future__ import annotations

from fractions import Fraction


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with g = gcd(a, b) >= 0 and s*a + t*b = g."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def det(mat) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    a = [list(map(int, row)) for row in mat]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def _echelon(rows, ncols, extra=None):
    """Row echelon form over Z with positive pivots, in place.

    ``extra`` rows (same count as ``rows``) receive the same row operations;
    this is how transforms and kernels are tracked.  Returns the list of
    pivot columns.
    """
    m = len(rows)
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= m:
            break
        # Euclid down the column until a single nonzero entry remains
        while True:
            nz = [i for i in range(r, m) if rows[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(rows[i][c]))
            if piv != r:
                rows[r], rows[piv] = rows[piv], rows[r]
                if extra is not None:
                    extra[r], extra[piv] = extra[piv], extra[r]
            done = True
            pr = rows[r]
            for i in range(r + 1, m):
                if rows[i][c] != 0:
                    q = rows[i][c] // pr[c]
                    ri = rows[i]
                    for j in range(c, ncols):
                        ri[j] -= q * pr[j]
                    if extra is not None:
                        ei, er = extra[i], extra[r]
                        for j in range(len(ei)):
                            ei[j] -= q * er[j]
                    if ri[c] != 0:
                        done = False
            if done:
                break
        if all(rows[i][c] == 0 for i in range(r, m)):
            continue
        if rows[r][c] < 0:
            rows[r] = [-v for v in rows[r]]
            if extra is not None:
                extra[r] = [-v for v in extra[r]]
        pivots.append(c)
        r += 1
    return pivots


def hnf(rows, ncols=None):
    """Canonical row Hermite normal form.

    Returns the nonzero rows of the echelon form; pivots are positive and
    the entries above each pivot are reduced into [0, pivot).
    """
    rows = [list(map(int, row)) for row in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    pivots = _echelon(rows, ncols)
    rows = rows[: len(pivots)]
    for r, c in enumerate(pivots):
        p = rows[r][c]
        for i in range(r):
            q = rows[i][c] // p
            if q:
                ri, rr = rows[i], rows[r]
                for j in range(c, ncols):
                    ri[j] -= q * rr[j]
    return rows


def integer_kernel(mat) -> list[list[int]]:
    """Basis (as rows) of {x in Z^k : mat @ x = 0} for an m x k matrix."""
    m = len(mat)
    k = len(mat[0]) if m else 0
    # rows of mat^T augmented with the identity
    rows = [[int(mat[i][j]) for i in range(m)] for j in range(k)]
    extra = [[int(i == j) for i in range(k)] for j in range(k)]
    pivots = _echelon(rows, m, extra)
    kern = extra[len(pivots):]
    return hnf(kern, k) if kern else []


def reduce_mod_hnf(vec, basis):
    """Canonical representative of ``vec`` modulo the full-rank row HNF ``basis``."""
    v = list(vec)
    for i, row in enumerate(basis):
        q = v[i] // row[i]
        if q:
            for j in range(i, len(v)):
                v[j] -= q * row[j]
    return v


def in_lattice(vec, basis) -> bool:
    return not any(reduce_mod_hnf(vec, basis))


def mat_mul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def transpose(a):
    return [list(r) for r in zip(*a)]


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def rational_inverse(mat):
    """Inverse of a square rational matrix as nested Fractions (Gauss-Jordan)."""
    n = len(mat)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(mat)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [row[n:] for row in a]


def smith_normal_form(mat):
    """Smith normal form U @ mat @ V = D of an integer m x k matrix.

    Returns (U, D, V) with U, V unimodular and D diagonal with
    d_1 | d_2 | ... (nonnegative).
    """
    m = len(mat)
    k = len(mat[0]) if m else 0
    a = [list(map(int, r)) for r in mat]
    u = identity(m)
    v = identity(k)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    for t in range(min(m, k)):
        while True:
            nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, k) if a[i][j]]
            if not nz:
                return u, a, v
            _, i, j = min(nz)
            swap_rows(t, i)
            swap_cols(t, j)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[t])]
                if a[i][t]:
                    dirty = True
            for j in range(t + 1, k):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                    for row in v:
                        row[j] -= q * row[t]
                if a[t][j]:
                    dirty = True
            if dirty:
                continue
            # divisibility condition against the remaining block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, k)
                        if a[i][j] % p), None)
            if bad is None:
                break
            i, _ = bad
            a[t] = [x + y for x, y in zip(a[t], a[i])]
            u[t] = [x + y for x, y in zip(u[t], u[i])]
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return u, a, v
