"""Cusps of Hilbert modular groups and lower bounds for their canonical depth.

A cusp is a point ``(alpha : beta)`` of P^1(F).  For two distinct cusps the
matrix ``M = [[alpha, gamma], [beta, delta]]`` moves them to infinity and zero,
and the unipotent stabilizers there are the lattices

    Lambda_1 = Delta a (b1^-2  cap  beta^-2 n)
    Lambda_2 = Delta a (b2^-2  cap  delta^-2 n)

with ``Delta = alpha delta - beta gamma``, ``b1 = alpha a + (beta)`` and
``b2 = gamma a + (delta)``.  When ``beta`` (or ``delta``) vanishes the second
condition is vacuous and that factor is dropped.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import sympy

from .congruence import GroupSpec
from . import linalg
from .errors import EqualCusps, NotPrime, RMTorsionError
from .intervals import IV, iv_root, to_iv
from .numberfield import (FieldElement, FractionalIdeal, ideal, ideal_inverse,
                          ideal_min, ideal_norm)


class Cusp:
    """Point of P^1(F) with a canonical integral representative.

    The representative is obtained by scaling the first nonzero coordinate to
    1 and then multiplying by the least positive integer that clears all
    denominators, so proportional inputs give identical stored coordinates.
    """

    __slots__ = ("alpha", "beta")

    def __init__(self, alpha, beta, field=None):
        field = field or (alpha.field if isinstance(alpha, FieldElement) else beta.field)
        alpha, beta = field(alpha), field(beta)
        if alpha.is_zero() and beta.is_zero():
            raise RMTorsionError("(0:0) is not a point of P^1")
        lead = alpha if not alpha.is_zero() else beta
        inv = lead.inverse()
        alpha, beta = alpha * inv, beta * inv
        m = math.lcm(alpha.denominator(), beta.denominator())
        self.alpha = alpha * m
        self.beta = beta * m

    @property
    def field(self):
        return self.alpha.field

    def key(self):
        return self.alpha.coords, self.beta.coords

    def __eq__(self, other):
        return isinstance(other, Cusp) and other.key() == self.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Cusp({self.alpha} : {self.beta})"

    def b_ideal(self, module_ideal):
        """``alpha * a + (beta)``."""
        parts = []
        if not self.alpha.is_zero():
            parts.append(module_ideal * self.alpha)
        if not self.beta.is_zero():
            parts.append(ideal(self.field, self.beta))
        out = parts[0]
        for p in parts[1:]:
            out = out + p
        return out

    def to_json(self):
        return [[str(c) for c in self.alpha.coords], [str(c) for c in self.beta.coords]]

    @classmethod
    def from_json(cls, field, data):
        a, b = data
        return cls(field.element(a), field.element(b))


def _stab(delta, module_ideal, b, coord, level):
    out = b ** -2
    if not coord.is_zero():
        out = out & (ideal(coord.field, coord) ** -2 * level)
    return module_ideal * out * delta


def _determinant(xi1, xi2):
    d = xi1.alpha * xi2.beta - xi1.beta * xi2.alpha
    if d.is_zero():
        raise EqualCusps(f"{xi1} and {xi2} are the same point of P^1")
    return d


def unipotent_stabilizers(xi1: Cusp, xi2: Cusp, spec: GroupSpec):
    """Translation lattices at infinity and zero after moving the cusps there."""
    delta = _determinant(xi1, xi2)
    a = spec.module_ideal
    lam1 = _stab(delta, a, xi1.b_ideal(a), xi1.beta, spec.level)
    lam2 = _stab(delta, a, xi2.b_ideal(a), xi2.beta, spec.level)
    return lam1, lam2


def _plus_level_term(b, coord, level_inv):
    out = b * b
    if not coord.is_zero():
        out = out + ideal(coord.field, coord * coord) * level_inv
    return out


def depth_containment(xi1: Cusp, xi2: Cusp, spec: GroupSpec) -> bool:
    """Exact check of ``(b1^2 + beta^2 n^-1)(b2^2 + delta^2 n^-1)  >=  Delta^2 a^2 n^-1``."""
    delta = _determinant(xi1, xi2)
    a = spec.module_ideal
    ninv = ideal_inverse(spec.level)
    lhs = (_plus_level_term(xi1.b_ideal(a), xi1.beta, ninv)
           * _plus_level_term(xi2.b_ideal(a), xi2.beta, ninv))
    rhs = a * a * ninv * (delta * delta)
    return rhs.issubset(lhs)


@dataclass(frozen=True)
class DepthReport:
    lambda1: FractionalIdeal
    lambda2: FractionalIdeal
    min1: Fraction
    min2: Fraction
    product: Fraction
    level_norm: Fraction
    containment: bool

    @property
    def passed(self):
        return self.containment and self.product >= self.level_norm

    def to_json(self):
        return {"lambda1": self.lambda1.to_json(), "lambda2": self.lambda2.to_json(),
                "min1": str(self.min1), "min2": str(self.min2), "product": str(self.product),
                "level_norm": str(self.level_norm), "containment": self.containment,
                "sqrt_level_norm": str(IV.sqrt(to_iv(self.level_norm))),
                "passed": self.passed}


def depth_report(xi1: Cusp, xi2: Cusp, spec: GroupSpec) -> DepthReport:
    lam1, lam2 = unipotent_stabilizers(xi1, xi2, spec)
    m1, m2 = ideal_min(lam1), ideal_min(lam2)
    return DepthReport(lam1, lam2, m1, m2, m1 * m2, ideal_norm(spec.level),
                       depth_containment(xi1, xi2, spec))


def depth_product_bound(xi1: Cusp, xi2: Cusp, spec: GroupSpec) -> Fraction:
    """``|Lambda_1| * |Lambda_2|`` (minimal nonzero norms), checked against ``|Nm n|``.

    Both the ideal containment behind the bound and the inequality itself are
    asserted; a failure would be a bug, never an expected outcome.
    """
    r = depth_report(xi1, xi2, spec)
    if not r.containment:
        raise AssertionError("ideal containment failed")
    if r.product < r.level_norm:
        raise AssertionError(f"depth product {r.product} < Nm(n) = {r.level_norm}")
    return r.product


def canonical_depth_bound(level, variant="torsion"):
    """Certified interval for the uniform depth bound of the level.

    ``level`` is a GroupSpec, an ideal, or a norm.  The torsion variant gives
    ``|Nm n|^(1/2)``; the principal one gives ``|Nm n|``.
    """
    if isinstance(level, GroupSpec):
        nm = ideal_norm(level.level)
    elif isinstance(level, FractionalIdeal):
        nm = ideal_norm(level)
    else:
        nm = Fraction(level)
    if variant == "principal":
        return to_iv(nm)
    if variant != "torsion":
        raise RMTorsionError("variant must be 'torsion' or 'principal'")
    return IV.sqrt(to_iv(nm))


def _is_prime_ideal(p: FractionalIdeal) -> bool:
    nm = ideal_norm(p)
    if nm.denominator != 1 or nm <= 1 or not p.is_integral():
        return False
    fac = sympy.factorint(int(nm))
    if len(fac) != 1:
        return False
    (q, f), = fac.items()
    if f == 1:
        return True
    # O/p is a field iff every nonzero residue generates the unit ideal with p
    field = p.field
    unit = FractionalIdeal.unit(field)
    pivots = [p.hnf[i][i] for i in range(field.degree)]
    for digits in itertools.product(*(range(m) for m in pivots)):
        if not any(digits):
            continue
        x = field.element(list(digits))
        if p + ideal(field, x) != unit:
            return False
    return True


def ramified_cusp_depth_gamma0_prime(p: FractionalIdeal) -> Fraction:
    """Canonical depth ``|Nm p|`` of the ramified cusps of Gamma_0(p)."""
    if not _is_prime_ideal(p):
        raise NotPrime(f"{p} is not a nonzero prime ideal")
    return ideal_norm(p)


@dataclass(frozen=True)
class StabilizerLattice:
    """A translation lattice with its norm form rescaled so the minimum is 1."""

    lattice: FractionalIdeal
    minimum: Fraction

    @property
    def norm_scale(self) -> Fraction:
        return 1 / self.minimum

    @property
    def normalization_scalar(self):
        """Per-embedding scale factor, ``minimum^(-1/n)`` as an interval."""
        n = self.lattice.field.degree
        return iv_root(to_iv(self.norm_scale), n)

    @property
    def degree(self):
        return self.lattice.field.degree

    def nm(self, x) -> Fraction:
        """Normalized norm form ``Nm_*(x) = Nm(x) / min``."""
        return self.lattice.field(x).norm() * self.norm_scale

    def coords(self, x):
        """Integer coordinates of ``x`` in the HNF basis of the lattice."""
        x = self.lattice.field(x)
        c = linalg.solve_triangular_integral(self.lattice.hnf, [v * self.lattice.denominator for v in x.coords])
        if c is None:
            raise RMTorsionError(f"{x} is not in the lattice")
        return c

    def element(self, coords):
        out = self.lattice.field.zero
        for c, b in zip(coords, self.lattice.basis):
            out = out + b * c
        return out


def normalized_norm_form(lam: FractionalIdeal) -> StabilizerLattice:
    return StabilizerLattice(lam, ideal_min(lam))


