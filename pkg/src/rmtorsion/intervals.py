"""Interval helpers.

Two flavours are used: exact intervals with :class:`Fraction` endpoints (for
root refinement and sign decisions) and outward-rounded mpmath intervals (for
transcendental constants and for handing certified enclosures to callers).
"""
from fractions import Fraction

from mpmath.ctx_iv import MPIntervalContext
from mpmath.libmp import to_rational

# private context so callers changing mpmath.iv.prec cannot affect us
IV = MPIntervalContext()
IV.prec = 113


def poly_eval(coeffs, x):
    """Horner evaluation; ``coeffs`` low degree first."""
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _mul(a, b):
    p = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(p), max(p)


def poly_eval_interval(coeffs, lo, hi):
    """Exact enclosure of ``{p(x) : lo <= x <= hi}`` by interval Horner."""
    acc = (Fraction(0), Fraction(0))
    for c in reversed(coeffs):
        m = _mul(acc, (lo, hi))
        acc = (m[0] + c, m[1] + c)
    return acc


def bisect_root(coeffs, lo, hi):
    """Halve an isolating interval of a simple root of ``coeffs``."""
    mid = (lo + hi) / 2
    fm = poly_eval(coeffs, mid)
    if fm == 0:
        return mid, mid
    flo = poly_eval(coeffs, lo)
    if (flo < 0) == (fm < 0):
        return mid, hi
    return lo, mid


def to_iv(lo, hi=None):
    """Outward-rounded mpmath interval containing the rational interval [lo, hi]."""
    if hi is None:
        hi = lo
    lo, hi = Fraction(lo), Fraction(hi)
    a = IV.mpf(lo.numerator) / lo.denominator
    b = IV.mpf(hi.numerator) / hi.denominator
    return IV.mpf([a.a, b.b])


def iv_lower(x):
    """Lower endpoint of an interval as an exact Fraction."""
    p, q = to_rational(IV.mpf(x)._mpi_[0])
    return Fraction(int(p), int(q))


def iv_upper(x):
    p, q = to_rational(IV.mpf(x)._mpi_[1])
    return Fraction(int(p), int(q))


def iv_width(x):
    return iv_upper(x) - iv_lower(x)


def iv_mid(x):
    return float((iv_lower(x) + iv_upper(x)) / 2)


def iv_root(x, n):
    """Outward-rounded ``x^(1/n)`` for a positive interval ``x``."""
    x = IV.mpf(x)
    if n == 1:
        return x
    if n == 2:
        return IV.sqrt(x)
    return IV.exp(IV.log(x) / n)
