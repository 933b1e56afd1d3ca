"""Hilbert modular groups SL(O_F + a) and their congruence subgroups.

Elements are 2x2 matrices ``[[a, b], [c, d]]`` over F with ``a, d`` in O_F,
``b`` in the inverse of the module ideal and ``c`` in the module ideal.  The
level conditions are exact ideal memberships: ``c`` in ``a*n`` for both
congruence flavours, and additionally ``a - 1`` in ``n`` for gamma1.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BoxTooLarge, NotInAmbientGroup, RMTorsionError
from .numberfield import (DEFAULT_BOX_CAP, FieldElement, FractionalIdeal,
                          TotallyRealField, ideal_norm, lattice_points_in_box)

FLAVORS = ("full", "gamma0", "gamma1")


@dataclass(frozen=True)
class GroupElement:
    a: FieldElement
    b: FieldElement
    c: FieldElement
    d: FieldElement

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise NotInAmbientGroup("determinant is not 1")

    @classmethod
    def from_rows(cls, field, rows):
        (a, b), (c, d) = rows
        return cls(field(a), field(b), field(c), field(d))

    @property
    def field(self):
        return self.a.field

    def __mul__(self, other):
        return GroupElement(self.a * other.a + self.b * other.c,
                            self.a * other.b + self.b * other.d,
                            self.c * other.a + self.d * other.c,
                            self.c * other.b + self.d * other.d)

    def __neg__(self):
        return GroupElement(-self.a, -self.b, -self.c, -self.d)

    def inverse(self):
        return GroupElement(self.d, -self.b, -self.c, self.a)

    def trace(self):
        return self.a + self.d

    def is_identity(self):
        return self.a == 1 and self.d == 1 and self.b.is_zero() and self.c.is_zero()

    def is_upper_triangular(self):
        return self.c.is_zero()

    def key(self):
        return (self.a.coords, self.b.coords, self.c.coords, self.d.coords)

    def embedded(self):
        """Float matrices, one per real embedding, shape ``(n, 2, 2)``."""
        e = [x.approx() for x in (self.a, self.b, self.c, self.d)]
        return np.stack([np.array([[e[0][i], e[1][i]], [e[2][i], e[3][i]]])
                         for i in range(self.field.degree)])


@dataclass(frozen=True)
class GroupSpec:
    field: TotallyRealField
    module_ideal: FractionalIdeal
    level: FractionalIdeal
    flavor: str = "full"

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise RMTorsionError(f"flavor must be one of {FLAVORS}")
        if not self.level.is_integral():
            raise RMTorsionError("level must be an integral ideal")

    @classmethod
    def make(cls, field, module_ideal=None, level=None, flavor="full"):
        unit = FractionalIdeal.unit(field)
        return cls(field, module_ideal or unit, level or unit, flavor)

    @property
    def module_inverse(self):
        return self.module_ideal.inverse()

    @property
    def lower_left_ideal(self):
        if self.flavor == "full":
            return self.module_ideal
        return self.module_ideal * self.level


def in_gamma1_of_module(spec, g):
    O = FractionalIdeal.unit(spec.field)
    return (O.contains(g.a) and O.contains(g.d)
            and spec.module_inverse.contains(g.b) and spec.module_ideal.contains(g.c))


def is_member(spec: GroupSpec, g: GroupElement) -> bool:
    """Membership in the group described by ``spec``.

    Raises NotInAmbientGroup if ``g`` is not even in SL(O_F + a).
    """
    if not in_gamma1_of_module(spec, g):
        raise NotInAmbientGroup("entries violate the SL(O_F + a) lattice conditions")
    if spec.flavor == "full":
        return True
    if not spec.lower_left_ideal.contains(g.c):
        return False
    if spec.flavor == "gamma1":
        return spec.level.contains(g.a - 1)
    return True


def elliptic_free_guarantee(spec: GroupSpec) -> bool:
    """True certifies that a gamma1 group has no elliptic points (|Nm n| > 4^n)."""
    if spec.flavor != "gamma1":
        raise RMTorsionError("the certificate applies to gamma1 only")
    return ideal_norm(spec.level) > 4 ** spec.field.degree


def _bound(H):
    if isinstance(H, float):
        return Fraction(str(H))
    return Fraction(H)


def _in_box(x, H, Hf):
    v = x.approx()
    if np.any(np.abs(v) > Hf + 1e-9):
        return False
    if np.all(np.abs(v) < Hf - 1e-9):
        return True
    return all(x.abs_embedding_le(i, H) for i in range(x.field.degree))


def enumerate_elements(spec: GroupSpec, H, cap=DEFAULT_BOX_CAP):
    """Yield every group element whose entries all have embeddings in ``[-H, H]``.

    Entries are drawn from complete lattice-point enumerations of O_F and of the
    lower-left ideal in the box; ``b`` is then forced by the determinant (or
    ranges over the box points of the inverse module ideal when ``c = 0``).
    Output order is deterministic.
    """
    H = _bound(H)
    if H <= 0:
        raise RMTorsionError("height bound must be positive")
    field = spec.field
    n = field.degree
    Hf = float(H)
    radii = [H] * n
    O = FractionalIdeal.unit(field)
    ints = lattice_points_in_box(O.basis, radii, cap=cap)
    cs = lattice_points_in_box(spec.lower_left_ideal.basis, radii, cap=cap)
    ainv = spec.module_inverse
    if spec.flavor == "gamma1":
        a_list = [a for a in ints if spec.level.contains(a - 1)]
    else:
        a_list = ints
    if len(a_list) * len(ints) * len(cs) > 50 * cap:
        raise BoxTooLarge("too many candidate triples; lower the height bound")

    for c in cs:
        if c.is_zero():
            bs = None
            for a in a_list:
                if abs(a.norm()) != 1:
                    continue
                d = a.inverse()
                if not d.is_integral() or not _in_box(d, H, Hf):
                    continue
                if bs is None:
                    bs = lattice_points_in_box(ainv.basis, radii, cap=cap)
                for b in bs:
                    yield GroupElement(a, b, c, d)
            continue
        cinv = c.inverse()
        for a in a_list:
            for d in ints:
                b = (a * d - 1) * cinv
                if ainv.contains(b) and _in_box(b, H, Hf):
                    yield GroupElement(a, b, c, d)


def min_lower_left_norm(spec: GroupSpec, H, cap=DEFAULT_BOX_CAP):
    """Minimal ``|Nm(c)|`` over enumerated elements with ``c != 0``, or None.

    The value is exact for the box of height ``H`` and an upper bound for the
    minimum over the whole group.
    """
    best = None
    seen = {}
    for g in enumerate_elements(spec, H, cap=cap):
        if g.c.is_zero():
            continue
        key = g.c.coords
        if key not in seen:
            seen[key] = abs(g.c.norm())
        v = seen[key]
        if best is None or v < best:
            best = v
    return best


def spec_from_json(field, data):
    a = FractionalIdeal.from_json(field, data["a"]) if data.get("a") is not None else None
    level = FractionalIdeal.from_json(field, data["level"]) if data.get("level") is not None else None
    return GroupSpec.make(field, a, level, data.get("flavor", "full"))
