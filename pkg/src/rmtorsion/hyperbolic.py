"""Numerics on products of upper half-planes.

Distances, horoballs, displacement bounds, the Hessian of ``-N^t`` and
volumes of test curves inside horoballs.  Everything here is double precision
unless stated; exact rationals are used where the answer is rational.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
from scipy import integrate, optimize

from .errors import NotSemisimple, RMTorsionError


def _check_upper(z):
    if not z.imag > 0:
        raise RMTorsionError(f"{z} is not in the upper half-plane")


def dist_h(z: complex, w: complex) -> float:
    """Hyperbolic distance in H (curvature -1)."""
    _check_upper(z)
    _check_upper(w)
    r = abs(z - w) / abs(z - w.conjugate())
    return 2.0 * math.atanh(min(r, 1.0))


@dataclass(frozen=True)
class HPoint:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(complex(c) for c in self.coords))
        for c in self.coords:
            _check_upper(c)

    @property
    def n(self):
        return len(self.coords)

    def N(self) -> float:
        return float(np.prod([c.imag for c in self.coords]))


def dist_hn(z: HPoint, w: HPoint) -> float:
    """Kobayashi distance on H^n: the largest coordinate distance."""
    if z.n != w.n:
        raise RMTorsionError("points of different dimension")
    return max(dist_h(a, b) for a, b in zip(z.coords, w.coords))


def N(z: HPoint) -> float:
    return z.N()


def horoball_contains(s, z: HPoint) -> bool:
    """``N(z) > 1/s``."""
    return z.N() > 1.0 / s


@dataclass(frozen=True)
class Isometry:
    """Element of SL_2(R)^n, one 2x2 matrix per factor."""

    matrices: tuple

    def __post_init__(self):
        mats = tuple(np.array(m, dtype=float).reshape(2, 2) for m in self.matrices)
        object.__setattr__(self, "matrices", mats)
        for m in mats:
            if abs(np.linalg.det(m) - 1.0) > 1e-12 * max(1.0, float(np.abs(m).max()) ** 2):
                raise RMTorsionError("factor does not have determinant 1")

    @classmethod
    def from_group_element(cls, g):
        return cls(tuple(g.embedded()))

    def apply(self, z: HPoint) -> HPoint:
        out = []
        for m, c in zip(self.matrices, z.coords):
            out.append((m[0, 0] * c + m[0, 1]) / (m[1, 0] * c + m[1, 1]))
        return HPoint(out)

    def lower_left(self):
        return [m[1, 0] for m in self.matrices]


def translation_distance(z: complex, a: float) -> float:
    """``d(z, z + a)`` for a real translation."""
    _check_upper(z)
    # cosh d = 1 + a^2 / (2 y^2); the asinh form stays accurate for large |a|
    return 2.0 * math.asinh(abs(a) / (2.0 * z.imag))


def semisimple_displacement_bound(g: Isometry) -> float:
    """``log |lambda|`` for the largest eigenvalue over all factors.

    Hyperbolic factors (``|tr| > 2``) and diagonal factors are accepted; any
    other factor raises NotSemisimple.
    """
    best = 0.0
    for m in g.matrices:
        t = m[0, 0] + m[1, 1]
        if abs(t) > 2.0:
            lam = (abs(t) + math.sqrt(t * t - 4.0)) / 2.0
        elif m[0, 1] == 0 and m[1, 0] == 0:
            lam = max(abs(m[0, 0]), abs(m[1, 1]))
        else:
            raise NotSemisimple("factor is elliptic or parabolic")
        best = max(best, math.log(lam))
    return best


def sampled_displacement(g: Isometry, points) -> float:
    """``(1/2) min d(z, g z)`` over the given points."""
    return 0.5 * min(dist_hn(z, g.apply(z)) for z in points)


def ss_injectivity_bound(n, nm) -> float:
    """``(1/n) log |Nm n| - 1``."""
    return math.log(nm) / n - 1.0


@dataclass(frozen=True)
class PshHessian:
    """``I - c Z`` with ``c = t/(1-t)``; the full Hessian is this times ``t(1-t)N^t/4``."""

    t: Fraction
    n: int
    matrix: tuple
    eigenvalues: tuple

    @property
    def psd(self) -> bool:
        return all(e >= 0 for e in self.eigenvalues)

    @property
    def zero_eigenvalues(self) -> int:
        return sum(1 for e in self.eigenvalues if e == 0)

    def prefactor(self, N):
        t = float(self.t)
        return t * (1 - t) * N ** t / 4


def psh_hessian(t, n) -> PshHessian:
    """Hessian factor of ``-N^t`` in the basis ``Im(z_i) d/dz_i`` with exact spectrum.

    The all-ones vector has eigenvalue ``1 - c(n-1)`` and the ``n-1`` vectors
    ``e_1 - e_j`` have eigenvalue ``1 + c``; both facts are checked exactly.
    """
    t = Fraction(t)
    if not 0 < t < 1:
        raise RMTorsionError("t must lie in (0, 1)")
    if n < 2:
        raise RMTorsionError("n must be at least 2")
    c = t / (1 - t)
    M = [[Fraction(1) if i == j else -c for j in range(n)] for i in range(n)]
    lam1 = 1 - c * (n - 1)
    lam2 = 1 + c

    def apply(v):
        return [sum(M[i][j] * v[j] for j in range(n)) for i in range(n)]

    ones = [Fraction(1)] * n
    assert apply(ones) == [lam1 * x for x in ones]
    for j in range(1, n):
        v = [Fraction(0)] * n
        v[0], v[j] = Fraction(1), Fraction(-1)
        assert apply(v) == [lam2 * x for x in v]
    return PshHessian(t, n, tuple(tuple(r) for r in M), tuple([lam1] + [lam2] * (n - 1)))


def neg_power_hessian_numeric(t, y, h=1e-4):
    """Finite-difference complex Hessian of ``-N^t`` at ``z = i*y`` in the renormalized basis.

    Since ``-N^t`` depends only on ``Im z``, ``d^2/dz_i dzbar_j = (1/4) d^2/dy_i dy_j``;
    the renormalized entry multiplies by ``y_i y_j``.
    """
    y = np.asarray(y, dtype=float)
    n = len(y)

    def f(v):
        return -np.prod(v) ** t

    H = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            ei = np.zeros(n)
            ej = np.zeros(n)
            ei[i] = h * y[i]
            ej[j] = h * y[j]
            d = (f(y + ei + ej) - f(y + ei - ej) - f(y - ei + ej) + f(y - ei - ej)) / (4 * h * h)
            H[i, j] = d / 4
    return H


# -- test curves and volumes --------------------------------------------------
@dataclass(frozen=True)
class TestCurve:
    """Holomorphic curve ``z -> (c_i z + i amp_i exp(i freq_i z))_i``.

    With all ``amp_i = 0`` this is a linear geodesic.  ``period`` is the
    translation period in ``x`` over which volumes are measured.
    """

    c: tuple
    amp: tuple = ()
    freq: tuple = ()
    period: float = 1.0
    name: str = ""
    resolution: int = 64

    __test__ = False

    def __post_init__(self):
        n = len(self.c)
        object.__setattr__(self, "c", tuple(float(v) for v in self.c))
        object.__setattr__(self, "amp", tuple(float(v) for v in (self.amp or [0.0] * n)))
        object.__setattr__(self, "freq", tuple(float(v) for v in (self.freq or [1.0] * n)))
        if any(v <= 0 for v in self.c):
            raise RMTorsionError("slopes c_i must be positive")
        if len(self.amp) != n or len(self.freq) != n:
            raise RMTorsionError("amp and freq need one entry per coordinate")

    @property
    def n(self):
        return len(self.c)

    @property
    def is_geodesic(self):
        return all(a == 0 for a in self.amp)

    def imag_parts(self, x, y):
        """``Im f_i(x + iy)`` as an array of shape ``(n,) + shape(x)``."""
        return np.array([c * y + a * np.exp(-k * y) * np.cos(k * x)
                         for c, a, k in zip(self.c, self.amp, self.freq)])

    def density(self, x, y):
        """Pullback of ``sum dx_i ^ dy_i / y_i^2``: ``sum |f_i'|^2 / (Im f_i)^2``."""
        out = 0.0
        for c, a, k in zip(self.c, self.amp, self.freq):
            z = x + 1j * y
            d = c - a * k * np.exp(1j * k * z)
            im = c * y + a * np.exp(-k * y) * np.cos(k * x)
            out = out + abs(d) ** 2 / im ** 2
        return out

    def N(self, x, y):
        return np.prod(self.imag_parts(x, y), axis=0)

    def to_json(self):
        return {"kind": "geodesic" if self.is_geodesic else "perturbed", "name": self.name,
                "c": list(self.c), "amp": list(self.amp), "freq": list(self.freq),
                "period": self.period, "resolution": self.resolution}

    @classmethod
    def from_json(cls, d):
        return cls(tuple(d["c"]), tuple(d.get("amp", ())), tuple(d.get("freq", ())),
                   float(d.get("period", 1.0)), d.get("name", ""), int(d.get("resolution", 64)))


def _entry_height(curve, x, level):
    """Smallest ``Y`` with ``N > level`` on ``y > Y`` (``N`` is increasing there)."""
    if curve.is_geodesic:
        return (level / float(np.prod(curve.c))) ** (1.0 / curve.n)
    g = lambda y: curve.N(x, y) - level
    hi = max(1.0, (level / float(np.prod(curve.c))) ** (1.0 / curve.n))
    while g(hi) <= 0:
        hi *= 2
    # walk down until N drops below the level, staying in the increasing range
    lo = hi
    while g(lo) > 0:
        lo /= 2
        if lo < 1e-12:
            raise RMTorsionError("horoball region does not have a lower boundary")
    return optimize.brentq(g, lo, hi, xtol=1e-15, rtol=1e-15)


def _inner(curve, x, level):
    Y = _entry_height(curve, x, level)
    # substitute u = 1/y so the tail becomes a finite integral
    def f(u):
        if u == 0:
            return float(curve.n)
        return curve.density(x, 1.0 / u) / (u * u)
    val, _ = integrate.quad(f, 0.0, 1.0 / Y, epsabs=1e-13, epsrel=1e-12, limit=200)
    return val


@dataclass(frozen=True)
class VolumeResult:
    value: float
    error: float
    samples: int


def curve_volume_in_horoball(curve: TestCurve, s, period=None, tol=1e-11, max_samples=4096):
    """Volume of the curve inside ``N > 1/s`` over one period in ``x``.

    The inner integral over ``y`` is adaptive quadrature; the outer integral is
    the periodic trapezoid rule, doubled until two levels agree to ``tol``.  The
    last difference is returned as the error estimate.
    """
    T = float(period if period is not None else curve.period)
    level = 1.0 / float(s)
    if curve.is_geodesic:
        # the integrand does not depend on x
        v = T * _inner(curve, 0.0, level)
        return VolumeResult(v, 0.0, 1)
    m = max(4, curve.resolution // 2)
    xs = np.arange(m) * T / m
    vals = [_inner(curve, x, level) for x in xs]
    prev = T * float(np.mean(vals))
    while True:
        mid = (np.arange(m) + 0.5) * T / m
        vals += [_inner(curve, x, level) for x in mid]
        m *= 2
        cur = T * float(np.mean(vals))
        err = abs(cur - prev)
        if err <= tol * max(1.0, abs(cur)) or m >= max_samples:
            return VolumeResult(cur, err, m)
        prev = cur


def geodesic_volume(curve: TestCurve, s, period=None) -> float:
    """Closed form ``n T (s prod c_i)^(1/n)`` for linear geodesics."""
    if not curve.is_geodesic:
        raise RMTorsionError("closed form only for linear geodesics")
    T = float(period if period is not None else curve.period)
    return curve.n * T * (float(s) * float(np.prod(curve.c))) ** (1.0 / curve.n)


@dataclass(frozen=True)
class MultiplicityVerdict:
    lhs: float
    rhs: float
    passed: bool


def boundary_multiplicity_bound(vol, s, strata, lattice=None, n=None, tol=1e-9):
    """Compare ``vol`` with ``n * sum (s Nm_*(lambda(tau)))^(1/n) mult``.

    ``strata`` is a list of ``(tau, mult)`` where ``tau`` is a Cone (needs
    ``lattice``) or directly the value ``Nm_*(lambda(tau))``.
    """
    if lattice is not None:
        from .toroidal import _as_lattice
        lat = _as_lattice(lattice)
        n = lat.degree
    if n is None:
        raise RMTorsionError("need the dimension n or a lattice")
    rhs = 0.0
    for tau, mult in strata:
        if hasattr(tau, "summed"):
            nm = lat.nm(tau.summed())
        else:
            nm = Fraction(tau)
        rhs += (float(s) * float(nm)) ** (1.0 / n) * mult
    rhs *= n
    return MultiplicityVerdict(float(vol), rhs, float(vol) >= rhs - tol * max(1.0, rhs))


def interior_volume_bound(k, r, mult) -> float:
    """``(4 pi)^k / k! * sinh^(2k)(r/2) * mult``."""
    with mpmath.workdps(30):
        v = (4 * mpmath.pi) ** k / mpmath.factorial(k) * mpmath.sinh(mpmath.mpf(r) / 2) ** (2 * k) * mult
        return float(v)


def schwarz_genus_bound(KC, DC, n) -> int:
    """Least ``g >= 0`` with ``2g - 2 >= (K.C - (n-1) D.C) / n``."""
    rhs = (Fraction(KC) - (n - 1) * Fraction(DC)) / n
    return max(0, math.ceil((rhs + 2) / 2))


def gonality_rh_bound(d, g) -> Fraction:
    """``(2g - 2) / d!``, a lower bound for the largest diagonal multiplicity."""
    return Fraction(2 * g - 2, math.factorial(d))


# -- precise invariance sampling ----------------------------------------------
def sample_horoball_points(rng, s, n, count, spread=3.0):
    """Random points with ``N(z) > 1/s`` (log-uniform heights, uniform ``x``)."""
    out = []
    for _ in range(count):
        logs = rng.uniform(-spread, spread, size=n)
        extra = rng.uniform(0.0, spread)
        logs += (-math.log(s) + extra - logs.sum()) / n
        ys = np.exp(logs)
        xs = rng.uniform(-5, 5, size=n)
        out.append(HPoint([complex(x, y) for x, y in zip(xs, ys)]))
    return out


@dataclass(frozen=True)
class InvarianceResult:
    samples: int
    counterexamples: int
    worst_ratio: float


def precise_invariance_check(elements, s, points, rel_tol=1e-9):
    """Check ``N(g z) <= 1 / prod|c_i|`` and ``g z`` outside ``U(s)`` for ``z`` in ``U(s)``.

    ``elements`` are isometries with nonzero lower-left entries; each sample
    pairs one point with one element.
    """
    bad = 0
    worst = 0.0
    for g, z in zip(elements, points):
        c = np.prod(np.abs(g.lower_left()))
        w = g.apply(z)
        bound = 1.0 / c
        ratio = w.N() / bound
        worst = max(worst, ratio)
        if ratio > 1 + rel_tol or horoball_contains(s, w) and horoball_contains(s, z):
            bad += 1
    return InvarianceResult(len(points), bad, worst)
