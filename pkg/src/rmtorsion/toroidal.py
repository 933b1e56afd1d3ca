"""Fans in the totally positive cone of a translation lattice.

For quadratic fields the canonical smooth fan comes from the boundary of the
convex hull of the nonzero totally positive lattice points.  Consecutive
boundary points ``A_k`` form lattice bases and satisfy
``A_{k-1} + A_{k+1} = b_k A_k`` with ``b_k >= 2``; after one period the totally
positive unit maps ``A_0`` to ``A_m``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import mpmath
import numpy as np

from . import linalg
from .cusps import StabilizerLattice, normalized_norm_form
from .errors import NotFullDimensional, RMTorsionError, UnsupportedDegree
from .intervals import IV, iv_lower, iv_root, iv_upper, to_iv
from .numberfield import FieldElement, FractionalIdeal, ideal_norm, positive_sail

MAX_PERIOD = 10_000


def _as_lattice(lattice):
    if isinstance(lattice, StabilizerLattice):
        return lattice
    if isinstance(lattice, FractionalIdeal):
        return normalized_norm_form(lattice)
    raise TypeError("expected a StabilizerLattice or FractionalIdeal")


@dataclass(frozen=True)
class Cone:
    """Cone spanned by totally positive lattice vectors."""

    generators: tuple

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        if not self.generators:
            raise RMTorsionError("a cone needs at least one generator")

    @property
    def dimension(self):
        return len(self.generators)

    def summed(self) -> FieldElement:
        """``lambda(tau)``, the sum of the generators."""
        out = self.generators[0]
        for g in self.generators[1:]:
            out = out + g
        return out

    def validate(self, lattice):
        lat = _as_lattice(lattice)
        for g in self.generators:
            if not g.is_totally_positive():
                raise RMTorsionError(f"generator {g} is not totally positive")
            c = lat.coords(g)
            if math.gcd(*c) != 1:
                raise RMTorsionError(f"generator {g} is not primitive")
        return True

    def faces(self):
        g = self.generators
        return [Cone(sub) for r in range(1, len(g) + 1) for sub in itertools.combinations(g, r)]

    def coords(self, lattice):
        lat = _as_lattice(lattice)
        return [lat.coords(g) for g in self.generators]


def is_smooth(cone: Cone, lattice) -> bool:
    """True iff the generators form a basis of the lattice (exact determinant)."""
    lat = _as_lattice(lattice)
    n = lat.degree
    if cone.dimension != n:
        raise NotFullDimensional(f"cone has {cone.dimension} generators, need {n}")
    d = linalg.det(cone.coords(lat))
    if d == 0:
        raise NotFullDimensional("generators are linearly dependent")
    return abs(d) == 1


@dataclass
class Fan:
    """One period of a unit-invariant fan.

    ``cones`` are the top-dimensional cones of the period; ``rays`` lists the
    rays (in boundary order for quadratic fields).  ``cycle`` holds ``b_k`` for
    each ray when the fan is a quadratic cusp resolution.
    """

    lattice: StabilizerLattice
    unit: FieldElement
    rays: list
    cones: list
    cycle: list = dc_field(default_factory=list)

    def ray_norms(self):
        return [self.lattice.nm(r) for r in self.rays]

    def to_json(self):
        lat = self.lattice
        return {"lattice": lat.lattice.to_json(),
                "minimum": str(lat.minimum),
                "unit": [str(c) for c in self.unit.coords],
                "rays": [lat.coords(r) for r in self.rays],
                "cones": [[lat.coords(g) for g in c.generators] for c in self.cones],
                "cycle": list(self.cycle)}

    @classmethod
    def from_json(cls, field, data):
        """Inverse of :meth:`to_json`.

        The stored ``minimum`` is used when present.  Otherwise it is computed
        for quadratic fields; in higher degree the ideal norm (a lower bound)
        stands in, which only affects normalized norms, not the fan checks.
        """
        lam = FractionalIdeal.from_json(field, data["lattice"])
        if data.get("minimum") is not None:
            lat = StabilizerLattice(lam, Fraction(data["minimum"]))
        elif field.degree == 2:
            lat = normalized_norm_form(lam)
        else:
            lat = StabilizerLattice(lam, ideal_norm(lam))
        unit = field.element(data["unit"])
        cones = [Cone([lat.element(c) for c in cone]) for cone in data["cones"]]
        rays = [lat.element(r) for r in data.get("rays", [])]
        if not rays:
            seen = []
            for c in cones:
                for g in c.generators:
                    if g not in seen:
                        seen.append(g)
            rays = seen
        return cls(lat, unit, rays, cones, list(data.get("cycle", [])))


def cusp_resolution_fan(lattice, eps_plus: FieldElement | None = None) -> Fan:
    """Canonical smooth unit-invariant fan of a rank-2 translation lattice.

    Walks the boundary of the convex hull of the totally positive lattice
    points from a vertex ``A_0`` until the unit maps ``A_0`` onto the current
    point, recording ``b_k`` from ``A_{k+1} = b_k A_k - A_{k-1}``.
    """
    raw = lattice.lattice if isinstance(lattice, StabilizerLattice) else lattice
    if raw.field.degree != 2:
        raise UnsupportedDegree("cusp resolutions are generated for quadratic fields only; "
                                "supply and validate a fan for higher degree")
    lat = _as_lattice(lattice)
    lam = lat.lattice
    field = lam.field
    eps = eps_plus if eps_plus is not None else field.units.eps_plus
    if not eps.is_totally_positive() or abs(eps.norm()) != 1:
        raise RMTorsionError("the acting unit must be a totally positive unit")
    points, unit = positive_sail(lam, eps)
    m = len(points) - 1
    # b_k for k = 1..m, using A_{m+1} = unit * A_1
    ext = points + [points[1] * unit]
    cycle = []
    for i in range(1, m + 1):
        s = ext[i - 1] + ext[i + 1]
        b = s / ext[i]
        q = b.rational_value()
        if q is None or q.denominator != 1:
            raise AssertionError("cycle relation failed")
        cycle.append(int(q))
    rays = points[:m]
    cones = [Cone((points[i], points[i + 1])) for i in range(m)]
    # report the cycle starting at A_0
    cycle = cycle[-1:] + cycle[:-1]
    return Fan(lat, unit, rays, cones, cycle)


@dataclass(frozen=True)
class FanCheck:
    smooth: bool
    cycle_relation: bool
    unit_invariant: bool
    cycle_at_least_two: bool

    @property
    def passed(self):
        return self.smooth and self.cycle_relation and self.unit_invariant and self.cycle_at_least_two


def check_fan(fan: Fan) -> FanCheck:
    """Exact checks: smooth top cones, the cycle relation and unit invariance."""
    lat = fan.lattice
    for c in fan.cones:
        c.validate(lat)
    smooth = all(is_smooth(c, lat) for c in fan.cones)
    rays = fan.rays
    m = len(rays)
    u = fan.unit
    if fan.lattice.degree != 2:
        inv = all(all(lat.lattice.contains(g * u) and (g * u).is_totally_positive()
                      for g in c.generators) for c in fan.cones)
        return FanCheck(smooth, True, inv, True)
    ext = [rays[-1] * u.inverse()] + list(rays) + [rays[0] * u]
    rel = bool(fan.cycle) and len(fan.cycle) == m and all(
        ext[k] + ext[k + 2] == ext[k + 1] * fan.cycle[k] for k in range(m))
    # consecutive cones share rays and close up under the unit
    chain = all(fan.cones[i].generators == (ext[i + 1], ext[i + 2]) for i in range(m))
    # continuing the recursion for one more period must give the unit translates
    seq = list(rays) + [rays[0] * u]
    inv = chain and rel
    if inv:
        for k in range(m, 2 * m):
            seq.append(seq[k] * fan.cycle[k % m] - seq[k - 1])
        inv = all(seq[m + j] == rays[j] * u for j in range(m)) and seq[2 * m] == rays[0] * u * u
    return FanCheck(smooth, rel, inv, all(b >= 2 for b in fan.cycle))


# -- Lelong numbers -----------------------------------------------------------
@dataclass(frozen=True)
class LelongValue:
    """``(1/2pi) * numerator^(1/n)`` kept as an exact numerator plus an interval."""

    numerator: Fraction
    n: int

    @property
    def interval(self):
        return iv_root(to_iv(self.numerator), self.n) / (2 * IV.pi)

    def __float__(self):
        x = mpmath.mpf(self.numerator.numerator) / self.numerator.denominator
        return float(mpmath.root(x, self.n) / (2 * mpmath.pi))


def lelong_number(tau: Cone, lattice) -> LelongValue:
    lat = _as_lattice(lattice)
    return LelongValue(lat.nm(tau.summed()), lat.degree)


def weighted_multiplicity(orders, tau: Cone, lattice) -> Fraction:
    """``Nm_*(sum_j m_j lambda_j)``."""
    lat = _as_lattice(lattice)
    if len(orders) != tau.dimension or any(int(m) != m or m < 1 for m in orders):
        raise RMTorsionError("orders must be positive integers, one per generator")
    acc = tau.generators[0] * int(orders[0])
    for m, g in zip(orders[1:], tau.generators[1:]):
        acc = acc + g * int(m)
    return lat.nm(acc)


def scaled_embeddings(lattice, vectors):
    """Matrix ``a[j][i] = sigma^j_*(lambda_i)`` (floats) with the uniform normalization."""
    lat = _as_lattice(lattice)
    s = float(lat.normalization_scalar.mid)
    return [[float(v.approx()[j]) * s for v in vectors] for j in range(lat.degree)]


def prelelong_formula(a, zero_set):
    """``prod_j sum_{i in zero_set} a[j][i]`` for an exponent matrix ``a``."""
    out = 1.0
    for row in a:
        out *= sum(row[i] for i in zero_set)
    return out


def radial_liminf(a, x, directions, log_eps=(-250, -500, -1000, -2000), prec=60):
    """Numeric liminf of ``prod_j log|z|^{a^(j)} / log^n |z - x|`` along rays.

    ``z = x + eps * v`` for every direction ``v`` and every ``eps = e^t``; the
    minimum of the ratio over the smallest ``eps`` is returned.  Evaluation is
    done in mpmath so tiny ``eps`` never underflow.
    """
    n = len(a)
    with mpmath.workprec(prec):
        best = None
        t = min(log_eps)
        eps = mpmath.exp(t)
        for v in directions:
            z = [mpmath.mpf(xi) + eps * mpmath.mpf(vi) for xi, vi in zip(x, v)]
            logs = [mpmath.log(abs(zi)) for zi in z]
            num = mpmath.mpf(1)
            for row in a:
                num *= sum(mpmath.mpf(ai) * li for ai, li in zip(row, logs))
            r = eps * mpmath.sqrt(sum(mpmath.mpf(vi) ** 2 for vi in v))
            ratio = num / mpmath.log(r) ** n
            if best is None or ratio < best:
                best = ratio
        return float(best)


def random_directions(rng, count, n):
    out = []
    for _ in range(count):
        v = rng.normal(size=n)
        out.append(list(v / np.linalg.norm(v)))
    return out


# -- nef divisor coefficients -------------------------------------------------
@dataclass(frozen=True)
class BoundaryDivisorData:
    cusp: int
    ray: int
    ray_norm: Fraction
    lelong_coefficient: object
    coefficient: object
    cusp_coefficient: object
    self_intersection: int | None = None

    def to_json(self):
        return {"cusp": self.cusp, "ray": self.ray, "ray_norm": str(self.ray_norm),
                "lelong_coefficient": mpmath.nstr(self.lelong_coefficient.mid, 15),
                "coefficient": mpmath.nstr(self.coefficient.mid, 15),
                "cusp_coefficient": mpmath.nstr(self.cusp_coefficient.mid, 15),
                "self_intersection": self.self_intersection}


def nef_divisor_coefficients(fans, depths, ell, n, depth_bounds=None):
    """Coefficients of ``(K + D) - sum coeff * D_rho`` that is nef modulo the boundary.

    ``fans`` holds one entry per cusp: a :class:`Fan` or a plain list of ray
    norms ``Nm_*(rho)``.  Each ray gets ``(n / (2 pi ell)) (t_* Nm_*(rho))^(1/n)``;
    the per-cusp simplified coefficient ``(n / (2 pi ell)) t_*^(1/n)`` is also
    reported.  ``depth_bounds`` (optional) are checked as ``t_* <= bound``.
    """
    if ell < 1:
        raise RMTorsionError("overlap multiplicity must be at least 1")
    if len(fans) != len(depths):
        raise RMTorsionError("need one depth per cusp")
    out = []
    scale = to_iv(n) / (2 * IV.pi * to_iv(ell))
    for ci, (fan, t) in enumerate(zip(fans, depths)):
        t_iv = IV.mpf(t) if not isinstance(t, (int, Fraction)) else to_iv(t)
        if depth_bounds is not None and depth_bounds[ci] is not None:
            bound = IV.mpf(depth_bounds[ci])
            if iv_lower(t_iv) > iv_upper(bound):
                raise RMTorsionError(f"depth {t} exceeds the canonical depth bound")
        if isinstance(fan, Fan):
            norms = fan.ray_norms()
            selfint = [-b for b in fan.cycle] if fan.cycle else [None] * len(norms)
        else:
            norms = [Fraction(v) for v in fan]
            selfint = [None] * len(norms)
        cusp_coeff = scale * iv_root(t_iv, n)
        for ri, nm in enumerate(norms):
            lel = iv_root(t_iv * to_iv(nm), n)
            out.append(BoundaryDivisorData(ci, ri, nm, lel, scale * lel, cusp_coeff, selfint[ri]))
    return out
