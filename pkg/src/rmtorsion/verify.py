"""Randomized and exhaustive property suites.

Each suite takes a :class:`SuiteContext` and returns a plain dict with a
``passed`` flag, the number of checks and the tightest observed margins.  All
randomness is derived from ``(seed, suite name)`` so a suite gives the same
report whether it runs alone or with the others.  Reports contain no timings.
"""
from __future__ import annotations

import json
import math
import random
import zlib
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

import numpy as np

from . import thresholds as th
from .congruence import GroupSpec, enumerate_elements, is_member, min_lower_left_norm
from .cusps import Cusp, depth_report, normalized_norm_form
from .errors import RMTorsionError
from .hyperbolic import (HPoint, Isometry, TestCurve, curve_volume_in_horoball, dist_hn,
                         geodesic_volume, precise_invariance_check, psh_hessian,
                         sample_horoball_points)
from .intervals import iv_lower, iv_mid, iv_upper, iv_width
from .numberfield import (FractionalIdeal, elem_norm, field_from_json, ideal, ideal_min,
                          ideal_min_sail, ideal_norm, positive_sail)
from .toroidal import Cone, check_fan, cusp_resolution_fan, lelong_number, prelelong_formula, \
    radial_liminf, random_directions, scaled_embeddings

MAX_FAILURES_SHOWN = 5


# -- fixtures -------------------------------------------------------------------
def _data_dir():
    return resources.files("rmtorsion") / "data"


def load_json_or_toml(path):
    path = str(path)
    with open(path, "rb") as fh:
        raw = fh.read()
    if path.endswith(".toml"):
        try:
            import tomllib
        except ImportError:  # python < 3.11
            import tomli as tomllib
        return tomllib.loads(raw.decode())
    return json.loads(raw)


def shipped_field(name):
    with (_data_dir() / "fields" / f"{name}.json").open() as fh:
        return field_from_json(json.load(fh))


def shipped_curves():
    out = []
    for p in sorted((_data_dir() / "curves").iterdir(), key=lambda p: p.name):
        if p.name.endswith(".json"):
            with p.open() as fh:
                out.append(TestCurve.from_json(json.load(fh)))
    return out


@dataclass
class SuiteContext:
    seed: int = 0
    fields: list | None = None       # overrides the per-suite default fields
    curves: list | None = None
    scale: float = 1.0               # multiplies sample counts
    _cache: dict = field(default_factory=dict)

    def rng(self, name):
        return random.Random(f"{self.seed}:{name}")

    def np_rng(self, name):
        return np.random.default_rng([self.seed & (2 ** 64 - 1), zlib.crc32(name.encode())])

    def count(self, k):
        return max(1, int(round(k * self.scale)))

    def get_fields(self, default):
        """Field objects; entries may also be fixture names, dicts or file paths."""
        out = []
        for spec in (self.fields if self.fields is not None else default):
            key = spec if isinstance(spec, str) else id(spec)
            if key not in self._cache:
                self._cache[key] = _as_field(spec)
            out.append(self._cache[key])
        return out

    def get_curves(self):
        if self.curves is None:
            return shipped_curves()
        return [c if isinstance(c, TestCurve) else TestCurve.from_json(_as_data(c)) for c in self.curves]


def _as_data(spec):
    return spec if isinstance(spec, dict) else load_json_or_toml(spec)


def _as_field(spec):
    from .numberfield import TotallyRealField
    if isinstance(spec, TotallyRealField):
        return spec
    if isinstance(spec, str) and not spec.endswith((".json", ".toml")):
        return shipped_field(spec)
    return field_from_json(_as_data(spec))


class _Tally:
    def __init__(self):
        self.checks = 0
        self.failures = []
        self.margins = {}

    def check(self, ok, what):
        self.checks += 1
        if not ok:
            self.failures.append(what)
        return ok

    def margin(self, key, value, lower=True):
        """Track the smallest (or largest) value seen under ``key``."""
        old = self.margins.get(key)
        if old is None or (value < old if lower else value > old):
            self.margins[key] = value

    def report(self, **extra):
        out = {"passed": not self.failures, "checks": self.checks,
               "failures": len(self.failures),
               "first_failures": self.failures[:MAX_FAILURES_SHOWN],
               "margins": {k: _plain(v) for k, v in sorted(self.margins.items())}}
        out.update(extra)
        return out


def _plain(v):
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else int(v)
    if isinstance(v, float):
        return float(f"{v:.12g}")
    return v


# -- random objects -------------------------------------------------------------
def random_element(rng, F, bound, nonzero=True):
    while True:
        x = F.element([rng.randint(-bound, bound) for _ in range(F.degree)])
        if not nonzero or not x.is_zero():
            return x


def random_ideal(rng, F, bound=20, fractional=True):
    gens = [random_element(rng, F, bound) for _ in range(rng.randint(1, 2))]
    I = ideal(F, *gens)
    if fractional and rng.random() < 0.3:
        I = I * F(Fraction(1, rng.randint(2, 5)))
    return I


def random_level(rng, F, max_norm=10 ** 4, bound=99):
    while True:
        I = random_ideal(rng, F, bound, fractional=False)
        if ideal_norm(I) <= max_norm:
            return I


def random_totally_positive(rng, I, bound=50, _sails={}):
    """Random totally positive element of ``I``.

    In degree 2 every such element is a nonnegative combination of two
    consecutive sail points times a power of the unit, which avoids
    rejection sampling in skewed lattices.
    """
    if I.field.degree == 2:
        key = (I.field.to_json()["min_poly"].__repr__(), I.key())
        if key not in _sails:
            _sails[key] = positive_sail(I)
        points, unit = _sails[key]
        k = rng.randrange(len(points) - 1)
        p, q = 0, 0
        while p == 0 and q == 0:
            p, q = rng.randint(0, bound), rng.randint(0, bound)
        x = points[k] * p + points[k + 1] * q
        e = rng.randint(-2, 2)
        u = unit if e >= 0 else unit.inverse()
        for _ in range(abs(e)):
            x = x * u
        return x
    basis = I.basis
    while True:
        x = basis[0] * rng.randint(-bound, bound)
        for b in basis[1:]:
            x = x + b * rng.randint(-bound, bound)
        if not x.is_zero() and min(x.approx()) > -1e-6 and x.is_totally_positive():
            return x


# -- suites -----------------------------------------------------------------------
def suite_ideals(ctx: SuiteContext):
    """Ideal arithmetic identities, HNF canonicity and norm multiplicativity."""
    t = _Tally()
    rng = ctx.rng("ideals")
    pairs = ctx.count(200)
    for F in ctx.get_fields(["sqrt2", "sqrt3", "sqrt5"]):
        for k in range(pairs):
            I, J = random_ideal(rng, F), random_ideal(rng, F)
            tag = f"{F.label} pair {k}"
            t.check((I & J).inverse() == I.inverse() + J.inverse(), f"{tag}: inverse of intersection")
            s = I + J
            t.check(s * s == I * I + J * J, f"{tag}: square of sum")
            t.check(ideal_norm(I * J) == ideal_norm(I) * ideal_norm(J), f"{tag}: norm multiplicativity")
            # the same lattice from a different generating set has the same HNF
            x, y = random_element(rng, F, 5), random_element(rng, F, 5)
            gens = I.basis
            alt = FractionalIdeal.from_generators(F, [gens[0] * x + gens[1], gens[1], gens[0]] + [gens[0] * y])
            t.check(alt.key() == I.key(), f"{tag}: HNF canonicity")
            same = I.issubset(J) and J.issubset(I)
            t.check(same == (I.key() == J.key()), f"{tag}: equality iff identical HNF")
            a, b = random_element(rng, F, 30), random_element(rng, F, 30)
            t.check(elem_norm(a * b) == elem_norm(a) * elem_norm(b), f"{tag}: element norm")
            if k % 10 == 0:
                m = ideal_min(I)
                t.check(m >= ideal_norm(I), f"{tag}: ideal_min below the norm")
                t.margin("min_over_norm", m / ideal_norm(I))
                P = ideal(F, a)
                t.check(ideal_min(P) == abs(elem_norm(a)), f"{tag}: principal minimum differs from generator norm")
    return t.report()


def suite_congruence(ctx: SuiteContext):
    """Closure under products, the elliptic-free trace argument and antitonicity."""
    t = _Tally()
    rng = ctx.rng("congruence")
    F = ctx.get_fields(["sqrt5"])[0]
    two = ideal(F, 2)
    spec = GroupSpec.make(F, level=two, flavor="gamma0")
    members = list(enumerate_elements(spec, 3))
    for k in range(ctx.count(100)):
        g, h = rng.choice(members), rng.choice(members)
        t.check(is_member(spec, g * h), f"product {k} left the group")
        t.check(is_member(spec, g.inverse()), f"inverse {k} left the group")
    # a level of norm > 4^n: small-trace elements must be unipotent
    level = ideal(F, 5) if F.degree == 2 else ideal(F, 3)
    g1 = GroupSpec.make(F, level=level, flavor="gamma1")
    small = 0
    for g in enumerate_elements(g1, 4):
        tr = g.trace()
        if g.is_identity():
            continue
        if all(tr.abs_embedding_le(i, 2) for i in range(F.degree)):
            small += 1
            one = F.one
            a, b, c, d = g.a - one, g.b, g.c, g.d - one
            sq = (a * a + b * c, a * b + b * d, c * a + d * c, c * b + d * d)
            t.check(all(x.is_zero() for x in sq), f"non-unipotent small-trace element {g.key()}")
    t.margin("small_trace_elements", small)
    # nested levels never lower the minimal lower-left norm
    chain = [FractionalIdeal.unit(F), two, two * two]
    prev = None
    for lv in chain:
        m = min_lower_left_norm(GroupSpec.make(F, level=lv, flavor="gamma0"), 3)
        if prev is not None and m is not None:
            t.check(m >= prev, f"antitonicity failed at {lv.to_json()}")
        prev = m if m is not None else prev
    return t.report()


def suite_cusps(ctx: SuiteContext):
    """Cusp canonicalization and the normalized norm form."""
    t = _Tally()
    rng = ctx.rng("cusps")
    for F in ctx.get_fields(["sqrt2", "sqrt5"]):
        xi = Cusp(random_element(rng, F, 20), random_element(rng, F, 20))
        for k in range(ctx.count(100)):
            c = random_element(rng, F, 10) * F(Fraction(1, rng.randint(1, 7)))
            t.check(Cusp(xi.alpha * c, xi.beta * c) == xi, f"{F.label}: scaling {k} changed the cusp")
        for k in range(ctx.count(10)):
            lat = normalized_norm_form(random_ideal(rng, F))
            t.check(ideal_min_sail(lat.lattice) * lat.norm_scale == 1,
                    f"{F.label}: normalized minimum is not 1")
    return t.report()


def _random_cusp(rng, F):
    while True:
        try:
            return Cusp(random_element(rng, F, 20, nonzero=False), random_element(rng, F, 20, nonzero=False))
        except RMTorsionError:
            continue


def _unimodular_cusps(rng, F):
    """Columns of a short random word in elementary matrices, so ``Delta = 1``."""
    m = [[F.one, F.zero], [F.zero, F.one]]
    for _ in range(rng.randint(1, 4)):
        x = random_element(rng, F, 3)
        if rng.random() < 0.5:
            m = [[m[0][0], m[0][0] * x + m[0][1]], [m[1][0], m[1][0] * x + m[1][1]]]
        else:
            m = [[m[0][0] + m[0][1] * x, m[0][1]], [m[1][0] + m[1][1] * x, m[1][1]]]
    return Cusp(m[0][0], m[1][0]), Cusp(m[0][1], m[1][1])


def _cusp_pair(rng, F, k):
    if k % 3 == 0:
        return Cusp(F.one, F.zero), Cusp(F.zero, F.one)
    if k % 3 == 1:
        return _unimodular_cusps(rng, F)
    x1 = _random_cusp(rng, F)
    x2 = _random_cusp(rng, F)
    while x2 == x1:
        x2 = _random_cusp(rng, F)
    return x1, x2


def suite_depth(ctx: SuiteContext):
    """Depth product against the level norm, with the exact ideal containment."""
    t = _Tally()
    rng = ctx.rng("depth")
    for F in ctx.get_fields(["sqrt2", "sqrt3", "sqrt5"]):
        for k in range(ctx.count(100)):
            level = random_level(rng, F)
            a = FractionalIdeal.unit(F) if k % 4 < 2 else random_ideal(rng, F, 5)
            spec = GroupSpec.make(F, a, level, "gamma1")
            x1, x2 = _cusp_pair(rng, F, k)
            r = depth_report(x1, x2, spec)
            tag = f"{F.label} sample {k}"
            t.check(r.containment, f"{tag}: containment")
            t.check(r.product >= r.level_norm, f"{tag}: product {r.product} < {r.level_norm}")
            t.margin("product_over_level_norm", float(r.product / r.level_norm))
    return t.report()


def suite_psh(ctx: SuiteContext):
    """Spectrum of the Hessian of ``-N^t`` at the critical exponent and just above it."""
    t = _Tally()
    for n in range(2, 9):
        h = psh_hessian(Fraction(1, n), n)
        t.check(h.psd, f"n={n}: not PSD at t=1/n")
        t.check(h.zero_eigenvalues == 1, f"n={n}: {h.zero_eigenvalues} zero eigenvalues")
        t.check(sorted(h.eigenvalues)[1:] == [Fraction(n, n - 1)] * (n - 1), f"n={n}: wrong spectrum")
        bad = psh_hessian(Fraction(1, n) + Fraction(1, 100), n)
        t.check(not bad.psd, f"n={n}: PSD above the critical exponent")
        t.margin("most_negative_above_critical", float(min(bad.eigenvalues)), lower=False)
    return t.report()


def suite_superadditivity(ctx: SuiteContext):
    """``Nm_*(x + y) >= Nm_*(x) + Nm_*(y)`` for totally positive lattice vectors."""
    t = _Tally()
    rng = ctx.rng("superadditivity")
    for F in ctx.get_fields(["sqrt2", "sqrt3", "sqrt5", "sqrt13"]):
        lats = [normalized_norm_form(FractionalIdeal.unit(F))] + \
               [normalized_norm_form(random_ideal(rng, F, 10)) for _ in range(4)]
        for k in range(ctx.count(500)):
            lat = lats[k % len(lats)]
            x = random_totally_positive(rng, lat.lattice)
            y = random_totally_positive(rng, lat.lattice)
            lhs, rhs = lat.nm(x + y), lat.nm(x) + lat.nm(y)
            t.check(lhs >= rhs, f"{F.label} pair {k}")
            t.margin("min_ratio", float(lhs / rhs))
    return t.report()


def _lelong_fixtures(ctx):
    """Twenty cones: per quadratic field two top cones and three rays of the resolution fan."""
    out = []
    for F in ctx.get_fields(["sqrt2", "sqrt3", "sqrt5", "sqrt13"]):
        fan = cusp_resolution_fan(FractionalIdeal.unit(F))
        tops = [fan.cones[i % len(fan.cones)] for i in range(5)]
        for i, top in enumerate(tops):
            if i < 2:
                out.append((F.label, fan.lattice, top, top, [0, 1]))
            else:
                out.append((F.label, fan.lattice, Cone(top.generators[:1]), top, [0]))
    return out


def suite_lelong(ctx: SuiteContext):
    """Closed-form Lelong numbers against numeric radial limits, plus symmetry and monotonicity."""
    t = _Tally()
    rng = ctx.np_rng("lelong")
    for k, (label, lat, tau, top, zero_set) in enumerate(_lelong_fixtures(ctx)):
        n = lat.degree
        a = scaled_embeddings(lat, list(top.generators))
        x = [0.0 if i in zero_set else 0.5 for i in range(n)]
        dirs = random_directions(rng, 16, n)
        numeric = radial_liminf(a, x, dirs) ** (1.0 / n) / (2 * math.pi)
        exact = float(lelong_number(tau, lat))
        formula = prelelong_formula(a, zero_set) ** (1.0 / n) / (2 * math.pi)
        rel = abs(numeric - exact) / exact
        t.check(rel <= 0.05, f"{label} cone {k}: numeric {numeric} vs {exact}")
        t.check(abs(formula - exact) <= 1e-9 * exact, f"{label} cone {k}: exponent matrix mismatch")
        t.margin("max_relative_error", rel, lower=False)
        rev = Cone(tuple(reversed(tau.generators)))
        t.check(lelong_number(rev, lat).numerator == lelong_number(tau, lat).numerator,
                f"{label} cone {k}: order dependence")
        if tau.dimension > 1:
            for face in tau.faces():
                if face.dimension < tau.dimension:
                    t.check(lelong_number(tau, lat).numerator > lelong_number(face, lat).numerator,
                            f"{label} cone {k}: not larger than a face")
    return t.report(fixtures=len(_lelong_fixtures(ctx)))


def suite_volume(ctx: SuiteContext):
    """``s^(-1/n) vol`` is nondecreasing in the depth, and constant on geodesics."""
    t = _Tally()
    ss = np.logspace(-1, 1, 50)
    per_curve = {}
    for curve in ctx.get_curves():
        r = [curve_volume_in_horoball(curve, s).value * s ** (-1.0 / curve.n) for s in ss]
        diffs = np.diff(r)
        t.check(bool(np.all(diffs >= -1e-6)), f"{curve.name}: ratio decreases")
        t.margin("min_step", float(diffs.min()))
        if curve.is_geodesic:
            spread = float(max(r) - min(r))
            t.check(spread <= 1e-6, f"{curve.name}: ratio not constant ({spread})")
            ref = geodesic_volume(curve, 1.0)
            t.check(abs(r[0] - ref) <= 1e-6 * max(1.0, ref), f"{curve.name}: closed form mismatch")
            t.margin("geodesic_spread", spread, lower=False)
        per_curve[curve.name] = {"first": _plain(float(r[0])), "last": _plain(float(r[-1]))}
    return t.report(curves=per_curve)


def suite_thresholds(ctx: SuiteContext):
    t = _Tally()
    pi4 = th.ample_threshold(2, 1)
    t.check(abs(iv_mid(pi4) - math.pi ** 4) <= 1e-12 * math.pi ** 4, "ample(2,1) != pi^4")
    for n in range(1, 9):
        a1, gt = th.ample_threshold(n, 1), th.general_type_threshold(n)
        t.check((iv_lower(a1), iv_upper(a1)) == (iv_lower(gt), iv_upper(gt)), f"n={n}: ample(n,1) != general type")
        an, gg = th.ample_threshold(n, n), th.green_griffiths_threshold(n)
        t.check((iv_lower(an), iv_upper(an)) == (iv_lower(gg), iv_upper(gg)), f"n={n}: ample(n,n) != green griffiths")
        for v in (a1, gg):
            t.check(iv_width(v) <= Fraction(1, 10 ** 12) * iv_lower(v), f"n={n}: interval too wide")
        zero = th.nef_slope_coefficient(n, a1)
        t.check(abs(iv_mid(zero)) <= 1e-10, f"n={n}: slope does not vanish at the threshold")
        t.margin("max_abs_slope_at_threshold", abs(iv_mid(zero)), lower=False)
        grid = [iv_mid(a1) * 10 ** (e / 4) for e in range(-8, 9)]
        vals = [iv_mid(th.nef_slope_coefficient(n, g)) for g in grid]
        t.check(all(u > v for u, v in zip(vals, vals[1:])), f"n={n}: slope not decreasing")
        t.check(vals[0] > 0 > vals[-1], f"n={n}: slope does not change sign")
        p = th.nef_slope_coefficient(n, th._ctx(th.DEFAULT_PREC).sqrt(a1), "principal")
        t.check(abs(iv_mid(p)) <= 1e-10, f"n={n}: principal slope does not vanish")
    t.check(iv_upper(th.general_type_threshold(6)) < 2, "general type threshold at n=6 is not below 2")
    t.check(iv_upper(th.general_type_threshold(7)) < 1, "general type threshold at n=7 is not below 1")
    t.check([th.elliptic_free_threshold(n) for n in (1, 2, 3)] == [4, 16, 64], "4^n")
    t.check(abs(iv_mid(th.minimal_model_threshold("torsion")) / iv_mid(th.minimal_model_threshold("principal"))
                - (2 * math.pi) ** 2) < 1e-9, "minimal model ratio")
    verdicts = {r.name: r.satisfied for r in th.evaluate_level(2, 2000)}
    t.check(verdicts["green_griffiths"] is True, "Nm=2000 should pass green griffiths")
    verdicts = {r.name: r.satisfied for r in th.evaluate_level(2, 100, 1)}
    t.check(verdicts["ample"] is True, "Nm=100 should pass ample at lambda=1")
    verdicts = {r.name: r.satisfied for r in th.evaluate_level(2, 10)}
    t.check(verdicts["elliptic_free"] is False, "Nm=10 is below 4^2")
    return t.report()


def suite_invariance(ctx: SuiteContext):
    """Sampled falsification of precise invariance at depth ``s = min |Nm c|``."""
    t = _Tally()
    rng = ctx.np_rng("invariance")
    F = ctx.get_fields(["sqrt5"])[0]
    groups = [("full", GroupSpec.make(F), 2),
              ("gamma0(2)", GroupSpec.make(F, level=ideal(F, 2), flavor="gamma0"), 3)]
    info = {}
    for name, spec, H in groups:
        elems = [g for g in enumerate_elements(spec, H) if not g.is_upper_triangular()]
        s = float(min_lower_left_norm(spec, H))
        isos = [Isometry.from_group_element(g) for g in elems]
        count = ctx.count(10 ** 4)
        idx = rng.integers(0, len(isos), size=count)
        pts = sample_horoball_points(rng, s, F.degree, count)
        res = precise_invariance_check([isos[i] for i in idx], s, pts)
        t.checks += res.samples - 1
        t.check(res.counterexamples == 0, f"{name}: {res.counterexamples} counterexamples")
        t.margin("worst_ratio", res.worst_ratio, lower=False)
        info[name] = {"depth": _plain(s), "elements": len(elems), "samples": res.samples}
    return t.report(groups=info)


def suite_resolution(ctx: SuiteContext):
    """Unimodular top cones, exact cycle relation and unit invariance of resolution fans."""
    t = _Tally()
    rng = ctx.rng("resolution")
    cycles = {}
    for F in ctx.get_fields(["sqrt2", "sqrt3", "sqrt5", "sqrt13"]):
        lats = [FractionalIdeal.unit(F)] + [random_ideal(rng, F, 6) for _ in range(3)]
        for j, lam in enumerate(lats):
            fan = cusp_resolution_fan(lam)
            c = check_fan(fan)
            tag = f"{F.label} lattice {j}"
            t.check(c.smooth, f"{tag}: non-unimodular cone")
            t.check(c.cycle_relation, f"{tag}: cycle relation")
            t.check(c.unit_invariant, f"{tag}: unit invariance")
            t.check(c.cycle_at_least_two, f"{tag}: b_k < 2")
            if j == 0:
                cycles[F.label] = list(fan.cycle)
    return t.report(cycles=cycles)


def suite_hyperbolic(ctx: SuiteContext):
    """Metric axioms of the Kobayashi distance and isometry invariance."""
    t = _Tally()
    rng = ctx.np_rng("hyperbolic")
    n = 2

    def point():
        return HPoint([complex(x, y) for x, y in zip(rng.normal(size=n), np.exp(rng.normal(size=n)))])

    def isometry():
        mats = []
        for _ in range(n):
            a, b, c = rng.normal(size=3)
            a = a if abs(a) > 0.1 else 1.0
            mats.append([[a, b], [c, (1 + b * c) / a]])
        return Isometry(tuple(mats))

    for _ in range(ctx.count(10 ** 4)):
        x, y, z = point(), point(), point()
        dxy, dyz, dxz = dist_hn(x, y), dist_hn(y, z), dist_hn(x, z)
        t.check(abs(dxy - dist_hn(y, x)) <= 1e-10, "symmetry")
        t.check(dxz <= dxy + dyz + 1e-10, "triangle inequality")
        t.margin("triangle_slack", dxy + dyz - dxz)
    for _ in range(ctx.count(1000)):
        x, y, g = point(), point(), isometry()
        d0, d1 = dist_hn(x, y), dist_hn(g.apply(x), g.apply(y))
        err = abs(d0 - d1)
        t.check(err <= 1e-9 * max(1.0, d0), "isometry invariance")
        t.margin("isometry_error", err, lower=False)
    return t.report()


SUITES = {
    "ideals": suite_ideals,
    "congruence": suite_congruence,
    "cusps": suite_cusps,
    "depth": suite_depth,
    "psh": suite_psh,
    "superadditivity": suite_superadditivity,
    "lelong": suite_lelong,
    "resolution": suite_resolution,
    "hyperbolic": suite_hyperbolic,
    "invariance": suite_invariance,
    "volume": suite_volume,
    "thresholds": suite_thresholds,
}


def run_suites(names=None, ctx: SuiteContext | None = None):
    """Run the named suites (all by default); an exception fails only its suite."""
    ctx = ctx or SuiteContext()
    names = list(SUITES) if not names else list(names)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise RMTorsionError(f"unknown suite(s): {', '.join(unknown)}")
    results = {}
    for name in names:
        try:
            results[name] = SUITES[name](ctx)
        except Exception as exc:  # reported, not raised: a bad fixture fails its suite
            results[name] = {"passed": False, "error": f"{type(exc).__name__}: {exc}"}
    return {"seed": ctx.seed, "suites": results,
            "passed": all(r["passed"] for r in results.values())}


def report_json(report) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"
