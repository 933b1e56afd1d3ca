import math
import random
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from scipy.spatial import ConvexHull

from rmtorsion.cusps import normalized_norm_form
from rmtorsion.errors import NotFullDimensional, RMTorsionError, UnsupportedDegree
from rmtorsion.intervals import iv_lower, iv_upper
from rmtorsion.numberfield import FractionalIdeal, first_sail_point, ideal, real_quadratic_field
from rmtorsion.toroidal import (Cone, Fan, check_fan, cusp_resolution_fan, is_smooth, lelong_number,
                                nef_divisor_coefficients, prelelong_formula, radial_liminf,
                                random_directions, scaled_embeddings, weighted_multiplicity)


# -- oracles -----------------------------------------------------------------------
def minus_cf_cycle(P, D, Q, steps=500):
    """Period of the minus continued fraction of a reduced ``(P + sqrt D) / Q``.

    Needs ``Q | D - P^2`` and ``w > 1 > w' > 0``; every step stays reduced.
    """
    r = math.isqrt(D)
    seen = {}
    out = []
    for k in range(steps):
        if (P, Q) in seen:
            return out[seen[(P, Q)]:]
        seen[(P, Q)] = k
        b = (P + r) // Q + 1
        out.append(b)
        P = b * Q - P
        Q = (P * P - D) // Q
        assert Q > 0
    raise AssertionError("no period found")


def order_cycle(d):
    """Cycle of O_F in Q(sqrt d) from the reduced generator ``w > 1 > w' > 0``."""
    r = math.isqrt(d)
    if d % 4 == 1:
        k = (r - 1) // 2 + 1          # ceil((sqrt d - 1) / 2)
        return minus_cf_cycle(1 + 2 * k, d, 2)
    return minus_cf_cycle(r + 1, d, 1)


def same_cycle(a, b):
    if len(a) != len(b):
        return False
    for c in (b, b[::-1]):
        for s in range(len(c)):
            if list(a) == list(c[s:]) + list(c[:s]):
                return True
    return False


def hull_cycle(fan):
    """``b_k`` from ``A_0`` on, read off a float convex hull of the positive lattice points.

    Hull vertices come from scipy; the lattice points on each edge are filled in
    exactly and the relation ``A_{k-1} + A_{k+1} = b_k A_k`` is solved in integers.
    """
    lat = fan.lattice
    B = np.array([b.approx() for b in lat.lattice.basis]).T       # B[j, i] = sigma_j(b_i)
    start, end = fan.rays[0], fan.rays[0] * fan.unit
    R = 4 * max(max(start.approx()), max(end.approx()))
    bound = int(np.abs(np.linalg.inv(B)).sum(axis=1).max() * R) + 2
    ii, jj = np.meshgrid(np.arange(-bound, bound + 1), np.arange(-bound, bound + 1), indexing="ij")
    coords = np.stack([ii.ravel(), jj.ravel()], axis=1)
    pts = coords @ B.T
    keep = (pts > 1e-9).all(axis=1) & (pts <= R).all(axis=1)
    coords, pts = coords[keep], pts[keep]
    hull = ConvexHull(pts)
    verts = set()
    for eq, simplex in zip(hull.equations, hull.simplices):
        if eq[0] < -1e-12 and eq[1] < -1e-12:
            verts.update(int(v) for v in simplex)
    verts = sorted(verts, key=lambda v: pts[v][0])
    chain = []
    for v, w in zip(verts, verts[1:]):
        step = coords[w] - coords[v]
        g = math.gcd(int(step[0]), int(step[1]))
        chain += [tuple(int(x) for x in coords[v] + step * t // g) for t in range(g)]
    chain.append(tuple(int(x) for x in coords[verts[-1]]))
    i0, i1 = chain.index(tuple(lat.coords(start))), chain.index(tuple(lat.coords(end)))
    if i0 > i1:
        chain, i0, i1 = chain[::-1], len(chain) - 1 - i0, len(chain) - 1 - i1
    seg = [lat.element(c) for c in chain[i0:i1 + 1]]
    # one step before A_0 by unit invariance
    seg = [seg[-2] / fan.unit] + seg
    out = []
    for a, b, c in zip(seg, seg[1:], seg[2:]):
        q = ((a + c) / b).rational_value()
        assert q is not None and q.denominator == 1
        out.append(int(q))
    return out


# -- resolution ---------------------------------------------------------------------
@pytest.mark.parametrize("d,expected", [(2, [4, 2]), (3, [4]), (5, [3]), (13, [5, 2, 2]),
                                        (7, [6, 3]), (19, [10, 2, 3, 2, 2, 3, 2])])
def test_cycle_of_maximal_order(d, expected):
    F = real_quadratic_field(d)
    fan = cusp_resolution_fan(FractionalIdeal.unit(F))
    assert same_cycle(fan.cycle, order_cycle(d))
    assert fan.cycle == expected
    assert check_fan(fan).passed


def test_large_unit_cycle():
    F = real_quadratic_field(94)
    fan = cusp_resolution_fan(FractionalIdeal.unit(F))
    assert same_cycle(fan.cycle, order_cycle(94))
    assert check_fan(fan).passed


@pytest.mark.parametrize("d", [2, 3, 5, 6, 10, 13])
def test_cycle_against_hull(d):
    F = real_quadratic_field(d)
    rng = random.Random(d)
    for _ in range(3):
        g = [F.element([rng.randint(-7, 7), rng.randint(-7, 7)]) for _ in range(2)]
        g = [x for x in g if not x.is_zero()] or [F.one]
        lam = ideal(F, *g)
        fan = cusp_resolution_fan(lam)
        assert fan.cycle == hull_cycle(fan)
        assert check_fan(fan).passed


def test_non_principal_ideal_cycle():
    # (2, sqrt10) = 2 (Z + Z sqrt10/2); reduced generator (8 + sqrt40)/4
    F = real_quadratic_field(10)
    lam = ideal(F, 2, F.element([0, 1]))
    fan = cusp_resolution_fan(lam)
    assert same_cycle(fan.cycle, minus_cf_cycle(8, 40, 4))
    assert check_fan(fan).passed


def test_resolution_unsupported_for_cubic(cubic):
    with pytest.raises(UnsupportedDegree):
        cusp_resolution_fan(FractionalIdeal.unit(cubic))


def test_rays_start_at_first_sail_point(Q5):
    lam = FractionalIdeal.unit(Q5)
    fan = cusp_resolution_fan(lam)
    assert fan.rays[0] == first_sail_point(lam)


def test_fan_json_roundtrip(Q2):
    fan = cusp_resolution_fan(ideal(Q2, Q2.element([1, 2])))
    back = Fan.from_json(Q2, fan.to_json())
    assert back.to_json() == fan.to_json()
    assert check_fan(back).passed


def test_tampered_fan_fails(Q5):
    data = cusp_resolution_fan(FractionalIdeal.unit(Q5)).to_json()
    data["cycle"] = [4]
    assert not check_fan(Fan.from_json(Q5, data)).passed


def test_user_fan_cubic(cubic):
    # the cone spanned by 1, u1, u1*u2 for two totally positive units
    u1, u2 = cubic.units.totally_positive_generators
    one = cubic.one
    data = {"lattice": FractionalIdeal.unit(cubic).to_json(), "minimum": "1",
            "unit": [str(c) for c in u1.coords],
            "cones": [[list(map(int, one.coords)), list(map(int, u1.coords)), list(map(int, (u1 * u2).coords))]]}
    fan = Fan.from_json(cubic, data)
    c = check_fan(fan)
    d = abs(np.linalg.det(np.array([[float(v) for v in x.coords] for x in (one, u1, u1 * u2)])))
    assert c.smooth == (round(d) == 1)
    assert c.unit_invariant


# -- smoothness -----------------------------------------------------------------------
def test_is_smooth(Q5):
    lat = normalized_norm_form(FractionalIdeal.unit(Q5))
    l1, l2 = Q5.one, Q5.element([1, 1])
    assert is_smooth(Cone([l1, l2]), lat)
    assert not is_smooth(Cone([l1, l1 + l2 * 2]), lat)
    eps = Q5.units.eps_plus
    # det of (1, eps) in the basis (1, w) with eps = 1 + w is 1
    assert is_smooth(Cone([Q5.one, eps]), lat)
    with pytest.raises(NotFullDimensional):
        is_smooth(Cone([l1]), lat)
    with pytest.raises(NotFullDimensional):
        is_smooth(Cone([l1, l1 * 3]), lat)


def test_cone_validation(Q2):
    lat = normalized_norm_form(FractionalIdeal.unit(Q2))
    with pytest.raises(RMTorsionError):
        Cone([Q2.element([1, -1])]).validate(lat)        # 1 - sqrt2 < 0
    with pytest.raises(RMTorsionError):
        Cone([Q2(2)]).validate(lat)                        # not primitive


# -- Lelong numbers -------------------------------------------------------------------
def test_lelong_unit_ray(Q5):
    lat = normalized_norm_form(FractionalIdeal.unit(Q5))
    v = lelong_number(Cone([Q5.one]), lat)
    assert float(v) == pytest.approx(1 / (2 * math.pi))
    ref = Fraction(str(1 / (2 * mpmath.mpf(1) * mpmath.pi)))
    assert abs(iv_lower(v.interval) - ref) < Fraction(1, 10 ** 14)
    assert iv_upper(v.interval) - iv_lower(v.interval) < Fraction(1, 10 ** 30)


def test_lelong_surface_formulas(Q2):
    lat = normalized_norm_form(FractionalIdeal.unit(Q2))
    l1, l2 = Q2.one, Q2.element([1, 1])
    (a1, a2), (b1, b2) = scaled_embeddings(lat, [l1, l2])
    two_pi = 2 * math.pi
    assert float(lelong_number(Cone([l1, l2]), lat)) * two_pi == pytest.approx(math.sqrt((a1 + a2) * (b1 + b2)))
    assert float(lelong_number(Cone([l1]), lat)) * two_pi == pytest.approx(math.sqrt(a1 * b1))


def test_lelong_numeric_limit(quadratic_fields):
    lat = normalized_norm_form(FractionalIdeal.unit(quadratic_fields[13]))
    fan = cusp_resolution_fan(lat.lattice)
    rng = np.random.default_rng(0)
    for cone in fan.cones:
        a = scaled_embeddings(lat, list(cone.generators))
        num = radial_liminf(a, [0.0, 0.0], random_directions(rng, 12, 2))
        assert num == pytest.approx(prelelong_formula(a, [0, 1]), rel=0.05)
        assert num ** 0.5 / (2 * math.pi) == pytest.approx(float(lelong_number(cone, lat)), rel=0.05)


def test_lelong_symmetry_and_faces(Q3):
    lat = normalized_norm_form(FractionalIdeal.unit(Q3))
    for cone in cusp_resolution_fan(lat.lattice).cones:
        g = cone.generators
        v = lelong_number(cone, lat).numerator
        assert lelong_number(Cone(g[::-1]), lat).numerator == v
        assert all(lelong_number(Cone([x]), lat).numerator < v for x in g)


def test_weighted_multiplicity(Q5):
    lat = normalized_norm_form(FractionalIdeal.unit(Q5))
    l1, l2 = Q5.one, Q5.units.eps_plus
    tau = Cone([l1, l2])
    assert weighted_multiplicity([1, 1], tau, lat) == lat.nm(l1 + l2)
    w = weighted_multiplicity([2, 1], tau, lat)
    assert w >= 4 * lat.nm(l1) + lat.nm(l2)
    assert weighted_multiplicity([3], Cone([l2]), lat) == 9 * lat.nm(l2)
    with pytest.raises(RMTorsionError):
        weighted_multiplicity([0, 1], tau, lat)


# -- nef coefficients ---------------------------------------------------------------------
def test_nef_coefficients():
    out = nef_divisor_coefficients([[1]], [1], 1, 2)
    assert float(out[0].coefficient.mid) == pytest.approx(1 / math.pi)
    half = nef_divisor_coefficients([[1]], [1], 2, 2)
    assert float(half[0].coefficient.mid) == pytest.approx(0.5 / math.pi)
    deep = nef_divisor_coefficients([[1]], [100], 1, 2, depth_bounds=[100])
    assert float(deep[0].coefficient.mid) == pytest.approx(10 / math.pi)
    with pytest.raises(RMTorsionError):
        nef_divisor_coefficients([[1]], [101], 1, 2, depth_bounds=[100])


def test_nef_coefficients_from_fan(Q5):
    fan = cusp_resolution_fan(FractionalIdeal.unit(Q5))
    out = nef_divisor_coefficients([fan], [4], 1, 2)
    assert [d.self_intersection for d in out] == [-b for b in fan.cycle]
    assert len(out) == len(fan.rays)
