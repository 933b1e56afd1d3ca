"""Exact arithmetic in totally real number fields.

A field is given by a monic integer polynomial and an integral basis written in
the power basis of a root ``theta``.  Elements are stored by their rational
coordinates over the integral basis, so ``O_F`` is literally ``Z^n`` and every
fractional ideal is a rational lattice, kept in canonical Hermite normal form.

Real embeddings are the real roots of the polynomial in ascending order; they
are isolated by Sturm sequences and refined by exact bisection, so every sign
decision about an embedded element is exact.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np
import sympy

from . import linalg
from .errors import (BoxTooLarge, NotARing, NotTotallyReal, RMTorsionError,
                     UnsupportedDegree, ZeroIdeal)
from .intervals import (IV, bisect_root, iv_lower, iv_upper, poly_eval,
                        poly_eval_interval, to_iv)

_ROOT_WIDTH = Fraction(1, 2 ** 120)
DEFAULT_BOX_CAP = 200_000


def _frac(v):
    if isinstance(v, str):
        return Fraction(v)
    return Fraction(v)


def _polymulmod(a, b, f):
    """Product of power-basis coordinate vectors modulo the monic ``f``."""
    n = len(f) - 1
    prod = [Fraction(0)] * (2 * n - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] += x * y
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            # theta^k = -sum f_j theta^(k-n+j)
            for j in range(n):
                prod[k - n + j] -= c * f[j]
        prod[k] = Fraction(0)
    return prod[:n]


class TotallyRealField:
    """A totally real number field with a fixed integral basis.

    Use :func:`make_field` rather than calling the constructor directly.
    """

    def __init__(self, min_poly, integral_basis, units=None, label=None):
        f = [int(c) for c in min_poly]
        if f[-1] != 1:
            raise RMTorsionError("minimal polynomial must be monic")
        self.min_poly = tuple(f)
        self.degree = n = len(f) - 1
        if n < 1:
            raise RMTorsionError("degree must be positive")
        x = sympy.Symbol("x")
        poly = sympy.Poly(list(reversed(f)), x, domain="QQ")
        if sympy.degree(sympy.gcd(poly, poly.diff(x))) > 0:
            raise NotTotallyReal("minimal polynomial is not squarefree")
        if poly.count_roots() < n:
            raise NotTotallyReal(f"{poly.as_expr()} has fewer than {n} real roots")
        if n > 1 and not poly.is_irreducible:
            raise RMTorsionError(f"{poly.as_expr()} is reducible over Q")
        self._roots = tuple(
            (Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q)))
            for (a, b), _ in poly.intervals(eps=sympy.Rational(1, 2 ** 120)))

        basis = [[_frac(v) for v in row] for row in integral_basis]
        if len(basis) != n or any(len(r) != n for r in basis):
            raise RMTorsionError("integral basis must be n vectors of length n")
        if linalg.det(basis) == 0:
            raise RMTorsionError("integral basis is linearly dependent")
        self.integral_basis = tuple(tuple(r) for r in basis)
        self._basis_inv = linalg.inverse(basis)

        table = []
        for i in range(n):
            row = []
            for j in range(n):
                p = _polymulmod(basis[i], basis[j], f)
                c = linalg.vecmat(p, self._basis_inv)
                if any(v.denominator != 1 for v in c):
                    raise NotARing(f"e{i}*e{j} is not integral over the basis")
                row.append(tuple(int(v) for v in c))
            table.append(tuple(row))
        self._table = tuple(table)
        one = linalg.vecmat([Fraction(1)] + [Fraction(0)] * (n - 1), self._basis_inv)
        if any(v.denominator != 1 for v in one):
            raise NotARing("1 is not in the span of the integral basis")
        self._one = tuple(one)
        self.label = label
        self._units_config = units

    # -- construction helpers -------------------------------------------------
    def __repr__(self):
        return f"TotallyRealField({self.label or list(self.min_poly)})"

    def element(self, coords):
        """Element from coordinates over the integral basis."""
        return FieldElement(self, tuple(_frac(c) for c in coords))

    def from_power_basis(self, coords):
        c = [_frac(v) for v in coords] + [Fraction(0)] * (self.degree - len(coords))
        return self.element(linalg.vecmat(c, self._basis_inv))

    def __call__(self, value):
        if isinstance(value, FieldElement):
            return value
        if isinstance(value, (list, tuple)):
            return self.element(value)
        q = _frac(value)
        return FieldElement(self, tuple(q * c for c in self._one))

    @property
    def zero(self):
        return FieldElement(self, (Fraction(0),) * self.degree)

    @property
    def one(self):
        return FieldElement(self, tuple(Fraction(c) for c in self._one))

    def basis_elements(self):
        n = self.degree
        return [self.element([int(i == j) for j in range(n)]) for i in range(n)]

    # -- invariants -------------------------------------------------------------
    @cached_property
    def trace_matrix(self):
        es = self.basis_elements()
        return [[(a * b).trace() for b in es] for a in es]

    @cached_property
    def discriminant(self):
        """Determinant of the trace form on the integral basis."""
        return linalg.det(self.trace_matrix)

    @cached_property
    def embedding_matrix(self):
        """Float matrix ``S[i, k] = sigma_i(e_k)`` (for pruning only)."""
        n = self.degree
        s = np.empty((n, n))
        for k, e in enumerate(self.basis_elements()):
            lo_hi = [e._embedding_bounds(i, self._roots[i]) for i in range(n)]
            s[:, k] = [float((a + b) / 2) for a, b in lo_hi]
        return s

    @cached_property
    def embedding_matrix_iv(self):
        n = self.degree
        out = [[None] * n for _ in range(n)]
        for k, e in enumerate(self.basis_elements()):
            for i in range(n):
                a, b = e._embedding_bounds(i, self._roots[i])
                out[i][k] = to_iv(a, b)
        return out

    def to_json(self):
        d = {"min_poly": list(self.min_poly),
             "integral_basis": [[str(v) for v in r] for r in self.integral_basis]}
        if self._units_config:
            d["units"] = self._units_config
        return d

    @cached_property
    def units(self) -> "UnitGroupData":
        return totally_positive_units(self)


@dataclass(frozen=True, eq=False)
class FieldElement:
    """Element of a :class:`TotallyRealField`, exact rational coordinates."""

    field: TotallyRealField
    coords: tuple

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise RMTorsionError("elements of different fields")
            return other
        return self.field(other)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return other.field is self.field and other.coords == self.coords
        if isinstance(other, (int, Fraction)):
            return self == self.field(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"FieldElement({[str(c) for c in self.coords]})"

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coords) + ")"

    def __add__(self, other):
        other = self._coerce(other)
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, FractionalIdeal):
            return other * self
        other = self._coerce(other)
        n = self.field.degree
        t = self.field._table
        out = [Fraction(0)] * n
        for i, x in enumerate(self.coords):
            if not x:
                continue
            for j, y in enumerate(other.coords):
                if not y:
                    continue
                xy = x * y
                for k, c in enumerate(t[i][j]):
                    if c:
                        out[k] += xy * c
        return FieldElement(self.field, tuple(out))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self):
        return not any(self.coords)

    def __bool__(self):
        return not self.is_zero()

    def multiplication_matrix(self):
        """Rows are coordinates of ``e_i * self``."""
        return [list((b * self).coords) for b in self.field.basis_elements()]

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        m = self.multiplication_matrix()
        # y * M = coords(1)
        inv = linalg.inverse(m)
        return FieldElement(self.field, tuple(linalg.vecmat(list(self.field._one), inv)))

    def norm(self) -> Fraction:
        """Exact norm, the product of all real embeddings."""
        return linalg.det(self.multiplication_matrix())

    def trace(self) -> Fraction:
        m = self.multiplication_matrix()
        return sum((m[i][i] for i in range(len(m))), Fraction(0))

    def is_integral(self):
        return all(c.denominator == 1 for c in self.coords)

    def power_coords(self):
        return linalg.vecmat(list(self.coords), [list(r) for r in self.field.integral_basis])

    def rational_value(self):
        """The element as a Fraction if it lies in Q, else ``None``."""
        p = self.power_coords()
        if any(p[1:]):
            return None
        return p[0]

    def denominator(self):
        return math.lcm(*(c.denominator for c in self.coords))

    # -- embeddings -------------------------------------------------------------
    def _embedding_bounds(self, i, root):
        return poly_eval_interval(self.power_coords(), *root)

    def embedding_interval(self, i, width=None):
        """Exact rational enclosure ``(lo, hi)`` of ``sigma_i(self)``."""
        p = self.power_coords()
        root = self.field._roots[i]
        lo, hi = poly_eval_interval(p, *root)
        if width is None:
            return lo, hi
        q = self.rational_value()
        if q is not None:
            return q, q
        f = self.field.min_poly
        while hi - lo > width:
            root = bisect_root(f, *root)
            lo, hi = poly_eval_interval(p, *root)
        return lo, hi

    def embed(self, precision=1e-30):
        """Certified intervals (mpmath, outward rounded) for every embedding."""
        w = Fraction(precision)
        return [to_iv(*self.embedding_interval(i, w)) for i in range(self.field.degree)]

    def approx(self):
        """Float embeddings (pruning and numerics only)."""
        return self.field.embedding_matrix @ np.array([float(c) for c in self.coords])

    def sign(self, i):
        """Exact sign of ``sigma_i(self)``."""
        if self.is_zero():
            return 0
        p = self.power_coords()
        f = self.field.min_poly
        root = self.field._roots[i]
        while True:
            lo, hi = poly_eval_interval(p, *root)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            root = bisect_root(f, *root)

    def signs(self):
        return tuple(self.sign(i) for i in range(self.field.degree))

    def is_totally_positive(self):
        return all(s > 0 for s in self.signs())

    def floor_embedding(self, i):
        """Exact ``floor(sigma_i(self))``."""
        q = self.rational_value()
        if q is not None:
            return math.floor(q)
        p = self.power_coords()
        f = self.field.min_poly
        root = self.field._roots[i]
        while True:
            lo, hi = poly_eval_interval(p, *root)
            if math.floor(lo) == math.floor(hi):
                return math.floor(lo)
            root = bisect_root(f, *root)

    def abs_embedding_le(self, i, bound):
        """Exact test ``|sigma_i(self)| <= bound`` for a rational bound."""
        bound = Fraction(bound)
        return (self - bound).sign(i) <= 0 and (self + bound).sign(i) >= 0


def embed(field, x, precision):
    """Certified real intervals for the embeddings of ``x``."""
    return field(x).embed(precision)


def elem_norm(x: FieldElement) -> Fraction:
    return x.norm()


# -- field construction --------------------------------------------------------
def _squarefree_part(D):
    f = 1
    d = D
    for p, e in sympy.factorint(D).items():
        f *= p ** (e // 2)
        d //= p ** (2 * (e // 2))
    return f, d


def quadratic_basis(min_poly):
    """Built-in integral basis for a monic quadratic ``x^2 + b x + c``."""
    c0, b, _ = (int(v) for v in min_poly)
    D = b * b - 4 * c0
    if D <= 0:
        raise NotTotallyReal(f"discriminant {D} <= 0")
    if math.isqrt(D) ** 2 == D:
        raise RMTorsionError("polynomial is reducible over Q")
    f, d = _squarefree_part(D)
    # sqrt(d) = (2 theta + b) / f
    sqrt_d = [Fraction(b, f), Fraction(2, f)]
    if d % 4 == 1:
        return [[Fraction(1), Fraction(0)], [(1 + sqrt_d[0]) / 2, sqrt_d[1] / 2]], d
    return [[Fraction(1), Fraction(0)], sqrt_d], d


def make_field(min_poly, integral_basis=None, units=None, label=None) -> TotallyRealField:
    """Build and validate a totally real field.

    ``min_poly`` lists integer coefficients from the constant term up.  For
    degree 2 the integral basis may be omitted; for degree >= 3 both the basis
    and unit data must be supplied.
    """
    f = [int(c) for c in min_poly]
    n = len(f) - 1
    if integral_basis is None:
        if n != 2:
            if n >= 3:
                raise UnsupportedDegree("degree >= 3 needs an explicit integral basis and units")
            raise RMTorsionError("degree must be at least 2")
        # total reality first, so x^2+1 reports the right error
        x = sympy.Symbol("x")
        if sympy.Poly(list(reversed(f)), x).count_roots() < 2:
            raise NotTotallyReal("fewer than 2 real roots")
        integral_basis, d = quadratic_basis(f)
        label = label or f"Q(sqrt{d})"
    elif n >= 3 and not units:
        raise UnsupportedDegree("degree >= 3 needs unit data in the configuration")
    return TotallyRealField(f, integral_basis, units=units, label=label)


def real_quadratic_field(d: int) -> TotallyRealField:
    """``Q(sqrt d)`` for a squarefree ``d > 1``."""
    return make_field([-d, 0, 1])


def field_from_json(data) -> TotallyRealField:
    return make_field(data["min_poly"], data.get("integral_basis"), data.get("units"),
                      data.get("label"))


# -- fractional ideals ---------------------------------------------------------
class FractionalIdeal:
    """Nonzero fractional ideal stored as ``(HNF rows) / denominator``.

    The rows are integer coordinate vectors over the integral basis.  The pair
    is canonical, so equality of ideals is equality of the stored data.
    """

    __slots__ = ("field", "hnf", "denominator", "__weakref__", "_basis")

    def __init__(self, field, hnf_rows, denominator):
        self.field = field
        self.hnf = tuple(tuple(r) for r in hnf_rows)
        self.denominator = denominator
        self._basis = None
        if len(self.hnf) != field.degree:
            raise ZeroIdeal("ideal lattice is not of full rank")

    @classmethod
    def from_lattice_rows(cls, field, rows):
        h, d = linalg.rational_hnf(rows, field.degree)
        if len(h) != field.degree:
            raise ZeroIdeal("generators span a lattice of lower rank")
        return cls(field, h, d)

    @classmethod
    def from_generators(cls, field, gens):
        gens = [field(g) for g in gens]
        gens = [g for g in gens if not g.is_zero()]
        if not gens:
            raise ZeroIdeal("all generators are zero")
        es = field.basis_elements()
        rows = [list((g * e).coords) for g in gens for e in es]
        return cls.from_lattice_rows(field, rows)

    @classmethod
    def unit(cls, field):
        n = field.degree
        return cls(field, [[int(i == j) for j in range(n)] for i in range(n)], 1)

    @classmethod
    def from_json(cls, field, data):
        if isinstance(data, dict) and "hnf" in data:
            d = Fraction(data.get("denominator", 1))
            rows = [[Fraction(v) / d for v in r] for r in data["hnf"]]
            ideal = cls.from_lattice_rows(field, rows)
            if not ideal.is_ideal():
                raise RMTorsionError("HNF rows do not span an O_F-module")
            return ideal
        if isinstance(data, dict):
            data = data["generators"]
        if isinstance(data, (int, str)):
            data = [data]
        return cls.from_generators(field, [_parse_element(field, g) for g in data])

    def to_json(self):
        return {"hnf": [list(r) for r in self.hnf], "denominator": self.denominator}

    def key(self):
        return self.hnf, self.denominator

    def __eq__(self, other):
        return (isinstance(other, FractionalIdeal) and other.field is self.field
                and other.key() == self.key())

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"FractionalIdeal(hnf={[list(r) for r in self.hnf]}, den={self.denominator})"

    @property
    def basis(self):
        if self._basis is None:
            d = self.denominator
            self._basis = tuple(self.field.element([Fraction(v, d) for v in r]) for r in self.hnf)
        return self._basis

    def rows(self):
        return [list(b.coords) for b in self.basis]

    def is_ideal(self):
        es = self.field.basis_elements()
        return all(self.contains(b * e) for b in self.basis for e in es)

    def is_integral(self):
        return all(b.is_integral() for b in self.basis)

    def contains(self, x):
        x = self.field(x)
        target = [c * self.denominator for c in x.coords]
        return linalg.solve_triangular_integral(self.hnf, target) is not None

    __contains__ = contains

    def issubset(self, other):
        return all(other.contains(b) for b in self.basis)

    def __le__(self, other):
        return self.issubset(other)

    def __ge__(self, other):
        return other.issubset(self)

    def __add__(self, other):
        return ideal_sum(self, other)

    def __mul__(self, other):
        if isinstance(other, FractionalIdeal):
            return ideal_product(self, other)
        other = self.field(other)
        if other.is_zero():
            raise ZeroIdeal("scaling by zero")
        return FractionalIdeal.from_lattice_rows(self.field, [list((b * other).coords) for b in self.basis])

    __rmul__ = __mul__

    def __and__(self, other):
        return ideal_intersect(self, other)

    def __pow__(self, k):
        if k < 0:
            return ideal_inverse(self) ** (-k)
        out = FractionalIdeal.unit(self.field)
        for _ in range(k):
            out = out * self
        return out

    def inverse(self):
        return ideal_inverse(self)

    def norm(self):
        return ideal_norm(self)


def _parse_element(field, g):
    if isinstance(g, FieldElement):
        return g
    if isinstance(g, (list, tuple)):
        return field.element(g)
    return field(g)


def ideal(field, *gens):
    """Ideal generated by field elements (or coordinate lists / rationals)."""
    return FractionalIdeal.from_generators(field, [_parse_element(field, g) for g in gens])


def _check(*ideals):
    for i in ideals:
        if i is None:
            raise ZeroIdeal("zero ideal")


def ideal_sum(I, J):
    _check(I, J)
    return FractionalIdeal.from_lattice_rows(I.field, I.rows() + J.rows())


def ideal_product(I, J):
    _check(I, J)
    rows = [list((a * b).coords) for a in I.basis for b in J.basis]
    return FractionalIdeal.from_lattice_rows(I.field, rows)


def ideal_intersect(I, J):
    """Intersection as the kernel lattice of ``[[A, A], [B, 0]]``."""
    _check(I, J)
    n = I.field.degree
    rows = I.rows() + J.rows()
    d = linalg.common_denominator(rows)
    A = [[int(v * d) for v in r] for r in I.rows()]
    B = [[int(v * d) for v in r] for r in J.rows()]
    big = [a + a for a in A] + [b + [0] * n for b in B]
    h = linalg.hnf(big, 2 * n)
    kernel = [r[n:] for r in h if not any(r[:n])]
    return FractionalIdeal.from_lattice_rows(I.field, [[Fraction(v, d) for v in r] for r in kernel])


def ideal_inverse(I):
    """``{x : x I in O_F}`` as the dual of the lattice of multiplication columns."""
    _check(I)
    field = I.field
    n = field.degree
    cols = []
    for b in I.basis:
        m = b.multiplication_matrix()
        cols.extend(linalg.transpose(m))
    h, d = linalg.rational_hnf(cols, n)
    basis = [[Fraction(v, d) for v in r] for r in h]
    dual = linalg.transpose(linalg.inverse(basis))
    inv = FractionalIdeal.from_lattice_rows(field, dual)
    if ideal_product(I, inv) != FractionalIdeal.unit(field):
        raise AssertionError("I * I^-1 != O_F")
    return inv


def ideal_norm(I) -> Fraction:
    """Absolute norm ``[O_F : I]`` (extended multiplicatively)."""
    _check(I)
    out = Fraction(1)
    for i, r in enumerate(I.hnf):
        out *= r[i]
    return out / Fraction(I.denominator) ** I.field.degree


# -- units ---------------------------------------------------------------------
@dataclass(frozen=True)
class UnitGroupData:
    fundamental_units: tuple
    totally_positive_generators: tuple

    @property
    def eps_plus(self):
        return self.totally_positive_generators[0]


def _quadratic_generator(field):
    """An ``omega`` with ``O_F = Z + Z omega``."""
    one = [int(c) for c in field._one]
    g, x, y = linalg.xgcd(one[0], one[1])
    # (one, (-y, x)) has determinant one[0]*x + one[1]*y = 1
    return field.element([-y, x])


def quadratic_irrational_cf(P, D, Q):
    """Yield partial quotients of ``(P + sqrt D) / Q``; needs ``Q | D - P^2``."""
    r = math.isqrt(D)
    while True:
        if Q > 0:
            a = (P + r) // Q
        else:
            a = (-P - r - 1) // (-Q)
        yield a
        P = a * Q - P
        Q = (D - P * P) // Q


def quadratic_fundamental_unit(field):
    """Fundamental unit of a real quadratic field from continued-fraction convergents.

    Returns the unit ``> 1`` in the embedding where the basis generator is
    largest.
    """
    if field.degree != 2:
        raise UnsupportedDegree("continued-fraction units need a quadratic field")
    w = _quadratic_generator(field)
    t = w.trace()
    m = w.norm()
    assert t.denominator == 1 and m.denominator == 1
    t, m = int(t), int(m)
    D = t * t - 4 * m
    p0, p1, q0, q1 = 1, 0, 0, 1
    for _, a in zip(range(10_000), quadratic_irrational_cf(t, D, 2)):
        p0, p1 = a * p0 + p1, p0
        q0, q1 = a * q0 + q1, q0
        if q0 < 1:
            continue
        u = field(p0 - q0 * t) + w * q0
        if abs(u.norm()) == 1:
            return u
    raise RMTorsionError("no unit found among 10000 convergents")


def _sign_kernel(field, units):
    """Generators of the totally positive subgroup of ``<-1, units>``."""
    n = field.degree
    gens = [-field.one] + list(units)
    vecs = [[int(s < 0) for s in u.signs()] for u in gens]
    m = len(gens)
    # kernel of the F2-linear map e_k -> vecs[k]
    out = []
    for mask in range(1, 2 ** m):
        acc = [0] * n
        for k in range(m):
            if mask >> k & 1:
                acc = [a ^ b for a, b in zip(acc, vecs[k])]
        if not any(acc):
            prod = field.one
            for k in range(m):
                if mask >> k & 1:
                    prod = prod * gens[k]
            out.append(prod)
    squares = [u * u for u in units]
    seen = []
    for u in out + squares:
        if u != field.one and u not in seen:
            seen.append(u)
    return seen


def totally_positive_units(field) -> UnitGroupData:
    """Fundamental units and totally positive unit generators.

    Quadratic fields compute the fundamental unit ``eps`` internally and return
    ``eps_plus`` equal to ``eps`` or ``eps^2``, whichever is totally positive.
    Higher degree fields read ``{"fundamental": [...], "totally_positive": [...]}``
    (coordinates over the integral basis) from the configuration.
    """
    cfg = field._units_config
    if field.degree == 2 and not cfg:
        eps = quadratic_fundamental_unit(field)
        if eps.sign(0) < 0 and eps.sign(1) < 0:
            eps = -eps
        plus = eps if eps.is_totally_positive() else eps * eps
        return UnitGroupData((eps,), (plus,))
    if not cfg:
        raise UnsupportedDegree("unit data must be supplied for degree >= 3")
    fund = tuple(field.element(u) for u in cfg.get("fundamental", []))
    for u in fund:
        if abs(u.norm()) != 1 or not u.is_integral():
            raise RMTorsionError(f"{u} is not a unit")
    if "totally_positive" in cfg:
        plus = tuple(field.element(u) for u in cfg["totally_positive"])
    else:
        plus = tuple(_sign_kernel(field, fund))
    for u in plus:
        if abs(u.norm()) != 1 or not u.is_totally_positive():
            raise RMTorsionError(f"{u} is not a totally positive unit")
    return UnitGroupData(fund, plus)


# -- lattice points in embedding boxes -----------------------------------------
def reduce_basis(elements):
    """LLL-reduced exact basis of the lattice spanned by ``elements`` (a basis)."""
    vecs = [e.approx() for e in elements]
    rows = [list(e.coords) for e in elements]
    red = linalg.lll_reduce(vecs, rows)
    field = elements[0].field
    return [field.element(r) for r in red]


def _as_iv(r):
    if isinstance(r, (int, Fraction)):
        return to_iv(r)
    if isinstance(r, float):
        return to_iv(Fraction(r))
    return IV.mpf(r)


def lattice_points_in_box(basis, radii, cap=DEFAULT_BOX_CAP, strict=False):
    """All lattice points ``x`` with ``|sigma_i(x)| <= radii[i]`` for every ``i``.

    ``basis`` is a Z-basis (field elements) of a full-rank lattice.  The search
    ranges are derived from the trace-dual basis with outward-rounded interval
    arithmetic, so no point of the box can be missed; each candidate is then
    accepted by an exact comparison (``strict`` makes the bound strict).
    Radii may be rationals (exact test) or mpmath intervals, in which case
    points within the interval slack of the boundary are also returned.
    Returns a list of field elements, sorted by coordinates.
    """
    field = basis[0].field
    n = field.degree
    red = reduce_basis(list(basis))
    R = [_as_iv(r) for r in radii]
    R_exact = [r if isinstance(r, (int, Fraction)) else None for r in radii]
    # trace-dual basis
    T = [[(a * b).trace() for b in red] for a in red]
    Tinv = linalg.inverse(T)
    dual = []
    for j in range(n):
        acc = field.zero
        for k in range(n):
            acc = acc + red[k] * Tinv[j][k]
        dual.append(acc)
    emb = [[to_iv(*b.embedding_interval(i)) for b in red] for i in range(n)]
    ranges = []
    for j in range(n):
        bound = IV.mpf(0)
        for i in range(n):
            lo, hi = dual[j].embedding_interval(i)
            bound += R[i] * to_iv(max(abs(lo), abs(hi)))
        m = math.floor(iv_upper(bound))
        ranges.append(range(-m, m + 1))
    est = 1
    for r in ranges:
        est *= len(r)
    if est > cap:
        raise BoxTooLarge(f"~{est} candidate lattice points exceeds cap {cap}")

    out = []
    count = 0
    for head in itertools.product(*ranges[:-1]):
        # partial sums per embedding
        lo_y, hi_y = ranges[-1].start, ranges[-1].stop - 1
        for i in range(n):
            s = IV.mpf(0)
            for y, e in zip(head, emb[i]):
                if y:
                    s += y * e
            c = emb[i][n - 1]
            a = (-R[i] - s) / c
            b = (R[i] - s) / c
            lo = min(iv_lower(a), iv_lower(b))
            hi = max(iv_upper(a), iv_upper(b))
            lo_y = max(lo_y, math.ceil(lo))
            hi_y = min(hi_y, math.floor(hi))
        for y in range(lo_y, hi_y + 1):
            coords = list(head) + [y]
            x = field.zero
            for c, b in zip(coords, red):
                if c:
                    x = x + b * c
            count += 1
            if count > cap:
                raise BoxTooLarge(f"more than {cap} candidate lattice points")
            if _in_box(x, R, R_exact, strict):
                out.append(x)
    out.sort(key=lambda e: e.coords)
    return out


def _in_box(x, R, R_exact, strict):
    """Exact test for rational radii.  Radii known only as intervals accept
    every point not provably outside, so the result is then a superset."""
    for i in range(x.field.degree):
        bound = R_exact[i]
        if bound is None:
            lo, hi = x.embedding_interval(i)
            low_abs = Fraction(0) if lo <= 0 <= hi else min(abs(lo), abs(hi))
            if low_abs > iv_upper(R[i]):
                return False
            continue
        bound = Fraction(bound)
        if x.is_zero():
            if strict and bound <= 0:
                return False
            continue
        s = (x - bound).sign(i)
        t = (x + bound).sign(i)
        if strict:
            if not (s < 0 and t > 0):
                return False
        elif not (s <= 0 and t >= 0):
            return False
    return True


# -- minimum of the norm form ----------------------------------------------------
def _gauss_reduce(b1, b2):
    """Lagrange-Gauss reduction of a rank-2 lattice in the Minkowski embedding."""
    for _ in range(1000):
        v1, v2 = b1.approx(), b2.approx()
        if v2 @ v2 < v1 @ v1:
            b1, b2 = b2, b1
            v1, v2 = v2, v1
        mu = round(float(v1 @ v2) / float(v1 @ v1))
        if mu == 0:
            break
        b2 = b2 - b1 * mu
    return b1, b2


def _floor_max_ratio(num, den) -> int:
    """``floor(max_i sigma_i(num / den))`` exactly."""
    q = num / den
    return max(q.floor_embedding(i) for i in range(q.field.degree))


def _lattice_combination(basis, coords):
    out = basis[0].field.zero
    for c, b in zip(coords, basis):
        if c:
            out = out + b * c
    return out


def _lattice_coords(I, x):
    c = linalg.solve_triangular_integral(I.hnf, [v * I.denominator for v in x.coords])
    if c is None:
        raise RMTorsionError(f"{x} is not in the lattice")
    return c


def _lattice_element(I, coords):
    return _lattice_combination(I.basis, coords)


def first_sail_point(I):
    """Totally positive point of ``I`` with minimal trace (smallest coordinates on ties)."""
    field = I.field
    n = field.degree
    # a small totally positive point from the reduced basis bounds the trace
    red = reduce_basis(list(I.basis))
    start = None
    for cs in itertools.product(range(-4, 5), repeat=n):
        v = sum((r.approx() * c for r, c in zip(red, cs)), np.zeros(n))
        if np.all(v > 0) and (start is None or v.sum() < start[0]):
            x = _lattice_combination(red, cs)
            if x.is_totally_positive():
                start = (v.sum(), x)
    if start is None:
        k = 1
        while not I.contains(field(k)):
            k += 1
        t = field(k).trace()
    else:
        t = start[1].trace()
    # a totally positive point of trace <= t has every embedding in (0, t)
    best = None
    for x in lattice_points_in_box(I.basis, [t] * field.degree):
        if x.is_zero() or not x.is_totally_positive():
            continue
        key = (x.trace(), x.coords)
        if best is None or key < best[0]:
            best = (key, x)
    return best[1]


def positive_sail(I, eps=None):
    """Boundary lattice points of the hull of the totally positive points of ``I``.

    Quadratic fields only.  Returns ``(points, unit)`` where ``points`` is
    ``A_0, ..., A_m`` with ``A_m = unit * A_0``, consecutive points forming a
    basis of ``I``, and ``unit`` is ``eps`` or its inverse.
    """
    field = I.field
    if field.degree != 2:
        raise UnsupportedDegree("sails are computed for quadratic fields only")
    eps = eps if eps is not None else field.units.eps_plus
    eps_inv = eps.inverse()
    a0 = first_sail_point(I)
    c0 = _lattice_coords(I, a0)
    g, x, y = linalg.xgcd(c0[0], c0[1])
    if g != 1:
        raise AssertionError("sail vertex is not primitive")
    # det([c0, (-y, x)]) = 1; the neighbour is the first translate inside the cone
    x0 = _lattice_element(I, [-y, x])
    a1 = x0 + a0 * (_floor_max_ratio(-x0, a0) + 1)
    points = [a0, a1]
    targets = (a0 * eps, a0 * eps_inv)
    while points[-1] not in targets:
        if len(points) > 100_000:
            raise RMTorsionError("sail period not found")
        prev, cur = points[-2], points[-1]
        points.append(cur * (_floor_max_ratio(prev, cur) + 1) - prev)
    unit = eps if points[-1] == targets[0] else eps_inv
    return points, unit


def _mixed_sign_element(field):
    """``w - w'`` for the second basis element ``w``: conjugates of opposite sign."""
    w = field.basis_elements()[1]
    y = w * 2 - w.trace()
    return y if y.sign(0) > 0 else -y


def ideal_min_sail(I) -> Fraction:
    """``min |Nm|`` from the sails of two quadrants (quadratic fields).

    On a quadrant the lattice minimum of ``|x y|`` lies on the boundary of the
    convex hull of the lattice points there, since that hull is contained in
    the convex set ``{|x y| >= min}``.  The mixed quadrant is moved to the
    positive one by multiplying with an element of negative norm.
    """
    pts, _ = positive_sail(I)
    best = min(abs(p.norm()) for p in pts)
    nu = _mixed_sign_element(I.field)
    pts2, _ = positive_sail(I * nu)
    best2 = min(abs(p.norm()) for p in pts2) / abs(nu.norm())
    return min(best, best2)


def ideal_min(I, method="auto") -> Fraction:
    """Exact ``min |Nm(x)|`` over nonzero ``x`` in the ideal (quadratic fields).

    Every nonzero ``x`` has a unit multiple whose embedding ratio lies in a
    fundamental interval for ``eps_plus``; for those, ``|Nm x| <= M`` forces
    ``|sigma_i(x)|^2 <= M * E`` where ``E = max_i sigma_i(eps_plus)``.  The
    box is enumerated completely and norms are compared exactly.

    With ``method="auto"`` a box that would exceed the enumeration cap (large
    fundamental units) is replaced by the sail computation of
    :func:`ideal_min_sail`; ``"box"`` and ``"sail"`` force one route.
    """
    field = I.field
    if field.degree != 2:
        raise UnsupportedDegree("ideal_min is implemented for quadratic fields only")
    eps = field.units.eps_plus
    E = max(eps.embedding_interval(i)[1] for i in range(2))
    b1, b2 = _gauss_reduce(*I.basis)
    M = min(abs(x.norm()) for x in (b1, b2, b1 + b2, b1 - b2))
    if method == "sail":
        return ideal_min_sail(I)
    R = IV.sqrt(to_iv(M * E))
    try:
        pts = lattice_points_in_box([b1, b2], [R, R])
    except BoxTooLarge:
        if method == "box":
            raise
        return ideal_min_sail(I)
    best = M
    for x in pts:
        if not x.is_zero():
            v = abs(x.norm())
            if v < best:
                best = v
    assert best >= ideal_norm(I), "minimum below the ideal norm"
    return best
