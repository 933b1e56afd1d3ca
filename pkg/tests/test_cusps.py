import random
from fractions import Fraction

import pytest

from rmtorsion.congruence import GroupSpec
from rmtorsion.cusps import (Cusp, canonical_depth_bound, depth_containment, depth_product_bound,
                             depth_report, normalized_norm_form, ramified_cusp_depth_gamma0_prime,
                             unipotent_stabilizers)
from rmtorsion.errors import EqualCusps, NotPrime
from rmtorsion.intervals import iv_lower, iv_upper
from rmtorsion.numberfield import FractionalIdeal, ideal, ideal_min_sail


def _rand_elem(rng, F, B):
    return F.element([rng.randint(-B, B) for _ in range(F.degree)])


def _rand_cusp(rng, F, B=20):
    while True:
        a, b = _rand_elem(rng, F, B), _rand_elem(rng, F, B)
        if not (a.is_zero() and b.is_zero()):
            return Cusp(a, b)


def test_canonical_representative(Q5):
    rng = random.Random(5)
    xi = Cusp(Q5.element([3, -2]), Q5.element([1, 4]))
    for _ in range(100):
        c = _rand_elem(rng, Q5, 12)
        if c.is_zero():
            continue
        c = c * Q5(Fraction(1, rng.randint(1, 9)))
        assert Cusp(xi.alpha * c, xi.beta * c) == xi
        assert Cusp(xi.alpha * c, xi.beta * c).key() == xi.key()


def test_cusp_json_roundtrip(Q2):
    xi = Cusp(Q2.element([1, 1]), Q2.element([0, 3]))
    assert Cusp.from_json(Q2, xi.to_json()) == xi


def test_stabilizers_full_level(Q5):
    O = FractionalIdeal.unit(Q5)
    spec = GroupSpec.make(Q5)
    l1, l2 = unipotent_stabilizers(Cusp(Q5.one, Q5.zero), Cusp(Q5.zero, Q5.one), spec)
    assert l1 == O and l2 == O
    l1, _ = unipotent_stabilizers(Cusp(Q5.one, Q5.one), Cusp(Q5.zero, Q5.one), spec)
    assert l1 == O


def test_stabilizers_level_two(Q5):
    spec = GroupSpec.make(Q5, level=ideal(Q5, 2), flavor="gamma1")
    l1, l2 = unipotent_stabilizers(Cusp(Q5.one, Q5.zero), Cusp(Q5.zero, Q5.one), spec)
    assert l1 == FractionalIdeal.unit(Q5)
    assert l2 == ideal(Q5, 2)


def test_equal_cusps(Q5):
    spec = GroupSpec.make(Q5)
    xi = Cusp(Q5.element([1, 1]), Q5(2))
    with pytest.raises(EqualCusps):
        unipotent_stabilizers(xi, Cusp(Q5.element([2, 2]), Q5(4)), spec)
    with pytest.raises(EqualCusps):
        depth_product_bound(xi, xi, spec)


def test_depth_examples(Q5):
    inf, zero = Cusp(Q5.one, Q5.zero), Cusp(Q5.zero, Q5.one)
    assert depth_product_bound(inf, zero, GroupSpec.make(Q5)) >= 1
    spec = GroupSpec.make(Q5, level=ideal(Q5, 2), flavor="gamma1")
    assert depth_product_bound(inf, zero, spec) == 4
    assert depth_containment(inf, zero, spec)


def test_depth_random_level_three(Q2, Q5):
    rng = random.Random(17)
    for F in (Q2, Q5):
        spec = GroupSpec.make(F, level=ideal(F, 3), flavor="gamma1")
        for _ in range(50):
            x1, x2 = _rand_cusp(rng, F), _rand_cusp(rng, F)
            if x1 == x2:
                continue
            r = depth_report(x1, x2, spec)
            assert r.containment
            assert r.product >= r.level_norm
            assert r.passed


def test_depth_nontrivial_module_ideal(Q2):
    rng = random.Random(2)
    a = ideal(Q2, Q2.element([1, 1]), 3)
    for _ in range(20):
        level = ideal(Q2, _rand_elem(rng, Q2, 9) + Q2(20))
        spec = GroupSpec.make(Q2, a, level, "gamma1")
        x1, x2 = _rand_cusp(rng, Q2, 6), _rand_cusp(rng, Q2, 6)
        if x1 != x2:
            assert depth_report(x1, x2, spec).passed


def test_canonical_depth_bound():
    v = canonical_depth_bound(25)
    assert iv_lower(v) <= 5 <= iv_upper(v)
    v = canonical_depth_bound(1)
    assert iv_lower(v) <= 1 <= iv_upper(v)
    v = canonical_depth_bound(25, "principal")
    assert iv_lower(v) == 25 == iv_upper(v)


def test_ramified_cusp_depth(Q5, Q2):
    r5 = ideal(Q5, Q5.from_power_basis([0, 1]))
    assert ramified_cusp_depth_gamma0_prime(r5) == 5
    assert ramified_cusp_depth_gamma0_prime(ideal(Q2, Q2.element([0, 1]))) == 2
    # (2) is inert in Q(sqrt5): a prime of norm 4
    assert ramified_cusp_depth_gamma0_prime(ideal(Q5, 2)) == 4
    for bad in (FractionalIdeal.unit(Q5), ideal(Q5, 6), ideal(Q2, 2), ideal(Q5, 11)):
        with pytest.raises(NotPrime):
            ramified_cusp_depth_gamma0_prime(bad)


def test_normalized_norm_form(Q5, Q2):
    lat = normalized_norm_form(FractionalIdeal.unit(Q5))
    assert lat.norm_scale == 1
    assert iv_lower(lat.normalization_scalar) <= 1 <= iv_upper(lat.normalization_scalar)
    lat = normalized_norm_form(ideal(Q2, 2))
    assert lat.norm_scale == Fraction(1, 4)
    s = lat.normalization_scalar
    assert iv_lower(s) <= Fraction(1, 2) <= iv_upper(s)
    assert lat.nm(Q2(2)) == 1
    lat = normalized_norm_form(ideal(Q5, Q5.from_power_basis([0, 1])))
    assert lat.norm_scale == Fraction(1, 5)


def test_normalized_minimum_is_one(Q5):
    rng = random.Random(8)
    for _ in range(10):
        lam = ideal(Q5, _rand_elem(rng, Q5, 15) + Q5(31), _rand_elem(rng, Q5, 15) + Q5(1))
        lat = normalized_norm_form(lam)
        assert ideal_min_sail(lam) * lat.norm_scale == 1
