"""Exact integer and rational linear algebra.

Matrices are lists of rows.  Integer routines work on Python ints, rational
ones on :class:`fractions.Fraction`; nothing here touches floating point except
:func:`lll_reduce`, which only uses floats to *choose* unimodular moves and
applies them exactly.
"""
from fractions import Fraction
from math import gcd, lcm

import numpy as np


def xgcd(a, b):
    """Return ``(g, x, y)`` with ``g = gcd(a, b) >= 0`` and ``a*x + b*y = g``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def hnf(rows, ncols):
    """Row-style Hermite normal form of the integer lattice spanned by ``rows``.

    Returns the nonzero rows of the echelon form: pivots strictly increase
    left to right, every pivot is positive and the entries above a pivot lie in
    ``[0, pivot)``.  The result depends only on the lattice, not on the
    generating set.
    """
    pending = [list(r) for r in rows if any(r)]
    out = []
    for col in range(ncols):
        pivot = None
        rest = []
        for r in pending:
            if r[col] == 0:
                rest.append(r)
            elif pivot is None:
                pivot = r
            else:
                a, b = pivot[col], r[col]
                g, x, y = xgcd(a, b)
                ag, bg = a // g, b // g
                new_pivot = [x * p + y * q for p, q in zip(pivot, r)]
                other = [bg * p - ag * q for p, q in zip(pivot, r)]
                pivot = new_pivot
                if any(other):
                    rest.append(other)
        if pivot is None:
            continue
        if pivot[col] < 0:
            pivot = [-v for v in pivot]
        out.append((col, pivot))
        pending = rest
        if not pending:
            break
    for i in range(len(out)):
        ci, ri = out[i]
        p = ri[ci]
        for j in range(i):
            cj, rj = out[j]
            q = rj[ci] // p
            if q:
                out[j] = (cj, [u - q * v for u, v in zip(rj, ri)])
    return [r for _, r in out]


def common_denominator(rows):
    d = 1
    for r in rows:
        for v in r:
            d = lcm(d, Fraction(v).denominator)
    return d


def rational_hnf(rows, ncols):
    """HNF of a rational lattice as ``(integer_rows, denominator)``.

    The pair is normalized so that ``gcd(denominator, all entries) == 1``,
    which makes it a canonical key for the lattice.
    """
    d = common_denominator(rows)
    int_rows = [[int(Fraction(v) * d) for v in r] for r in rows]
    h = hnf(int_rows, ncols)
    g = d
    for r in h:
        for v in r:
            g = gcd(g, v)
    if g > 1:
        h = [[v // g for v in r] for r in h]
        d //= g
    return h, d


def det(matrix):
    """Exact determinant by fraction-free Gaussian elimination (Bareiss)."""
    m = [[Fraction(v) for v in r] for r in matrix]
    n = len(m)
    if n == 0:
        return Fraction(1)
    sign = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            if f:
                for j in range(k, n):
                    m[i][j] -= f * m[k][j]
    out = Fraction(sign)
    for k in range(n):
        out *= m[k][k]
    return out


def inverse(matrix):
    """Exact inverse of a square rational matrix; raises ZeroDivisionError if singular."""
    n = len(matrix)
    a = [[Fraction(v) for v in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(matrix)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[k], a[piv] = a[piv], a[k]
        p = a[k][k]
        a[k] = [v / p for v in a[k]]
        for i in range(n):
            if i != k and a[i][k]:
                f = a[i][k]
                a[i] = [u - f * v for u, v in zip(a[i], a[k])]
    return [r[n:] for r in a]


def transpose(matrix):
    return [list(c) for c in zip(*matrix)]


def matmul(a, b):
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(r, c)) for c in bt] for r in a]


def vecmat(v, m):
    """Row vector times matrix."""
    ncols = len(m[0])
    return [sum(v[i] * m[i][j] for i in range(len(v))) for j in range(ncols)]


def solve_triangular_integral(hnf_rows, target):
    """Integer coefficients expressing ``target`` in a square upper-triangular
    basis, or ``None`` if ``target`` is not in the lattice."""
    v = [Fraction(t) for t in target]
    coeffs = []
    for i, row in enumerate(hnf_rows):
        q = v[i] / row[i]
        if q.denominator != 1:
            return None
        coeffs.append(int(q))
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    if any(v):
        return None
    return coeffs


def lll_reduce(vectors, exact_rows, delta=0.75):
    """LLL-reduce the float ``vectors`` (one per row) and mirror every move on
    ``exact_rows``.

    Floats steer the reduction; the returned exact rows differ from the input
    by an integer unimodular transformation, so the lattice they span is
    unchanged regardless of rounding.
    """
    b = [np.array(v, dtype=float) for v in vectors]
    ex = [list(r) for r in exact_rows]
    n = len(b)

    def gso():
        bstar = []
        mu = np.zeros((n, n))
        for i in range(n):
            v = b[i].copy()
            for j in range(i):
                denom = float(bstar[j] @ bstar[j])
                mu[i, j] = float(b[i] @ bstar[j]) / denom if denom else 0.0
                v = v - mu[i, j] * bstar[j]
            bstar.append(v)
        return bstar, mu

    k = 1
    steps = 0
    while k < n and steps < 10000:
        steps += 1
        bstar, mu = gso()
        for j in range(k - 1, -1, -1):
            q = int(round(mu[k, j]))
            if q:
                b[k] = b[k] - q * b[j]
                ex[k] = [u - q * v for u, v in zip(ex[k], ex[j])]
                bstar, mu = gso()
        lhs = float(bstar[k] @ bstar[k])
        rhs = (delta - mu[k, k - 1] ** 2) * float(bstar[k - 1] @ bstar[k - 1])
        if lhs >= rhs:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            ex[k], ex[k - 1] = ex[k - 1], ex[k]
            k = max(k - 1, 1)
    return ex
