import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rmtorsion.congruence import GroupSpec, enumerate_elements
from rmtorsion.errors import NotSemisimple, RMTorsionError
from rmtorsion.hyperbolic import (HPoint, Isometry, TestCurve, boundary_multiplicity_bound,
                                  curve_volume_in_horoball, dist_h, dist_hn, geodesic_volume,
                                  gonality_rh_bound, horoball_contains, interior_volume_bound,
                                  neg_power_hessian_numeric, precise_invariance_check, psh_hessian,
                                  sample_horoball_points, sampled_displacement,
                                  schwarz_genus_bound, semisimple_displacement_bound,
                                  ss_injectivity_bound, translation_distance)


def test_distance_examples():
    assert dist_h(1j, 2j) == pytest.approx(math.log(2))
    assert dist_h(1j, 1 + 1j) == pytest.approx(2 * math.atanh(1 / math.sqrt(5)))
    assert dist_h(3 + 2j, 3 + 2j) == 0
    with pytest.raises(RMTorsionError):
        dist_h(1j, -1j)


def test_distance_metric_axioms():
    rng = np.random.default_rng(1)
    for _ in range(500):
        z, w, u = (complex(rng.uniform(-3, 3), rng.uniform(0.05, 4)) for _ in range(3))
        assert dist_h(z, w) == pytest.approx(dist_h(w, z))
        assert dist_h(z, u) <= dist_h(z, w) + dist_h(w, u) + 1e-12


def test_kobayashi_distance_is_max():
    z, w = HPoint([1j, 1j]), HPoint([2j, 1 + 1j])
    assert dist_hn(z, w) == pytest.approx(2 * math.atanh(1 / math.sqrt(5)))
    assert dist_hn(z, HPoint([2j, 1j])) == pytest.approx(math.log(2))
    with pytest.raises(RMTorsionError):
        dist_hn(z, HPoint([1j]))


def test_horoball():
    z = HPoint([1j, 1j])
    assert z.N() == 1
    assert horoball_contains(2, z)
    assert not horoball_contains(1, z)


def test_translation_distance():
    for z, a in ((1j, 1.0), (0.3 + 0.2j, -4.0), (2 + 5j, 0.01)):
        assert translation_distance(z, a) == pytest.approx(dist_h(z, z + a))
    # far away the distance grows like 2 log(|a| / y)
    y = 0.1
    for a in (1e3, 1e5):
        assert translation_distance(1j * y, a) - 2 * math.log(a / y) == pytest.approx(0, abs=1e-7)


def test_semisimple_displacement():
    r2 = math.sqrt(2)
    assert semisimple_displacement_bound(Isometry([[[r2, 0], [0, 1 / r2]]])) == pytest.approx(math.log(r2))
    g = Isometry([[[2, 1], [1, 1]]])
    assert semisimple_displacement_bound(g) == pytest.approx(math.log((3 + math.sqrt(5)) / 2))
    with pytest.raises(NotSemisimple):
        semisimple_displacement_bound(Isometry([[[1, 1], [0, 1]]]))
    with pytest.raises(NotSemisimple):
        semisimple_displacement_bound(Isometry([[[0, -1], [1, 0]]]))


def test_sampled_displacement_dominates_bound():
    rng = np.random.default_rng(3)
    g = Isometry([[[2, 1], [1, 1]], [[3, 1], [-1, 0]]])
    pts = [HPoint([complex(rng.uniform(-3, 3), rng.uniform(0.1, 3)) for _ in range(2)]) for _ in range(400)]
    d = sampled_displacement(g, pts)
    assert d >= semisimple_displacement_bound(g) - 1e-12
    # the bound is sharp on the axis of the first factor
    lam = (3 + math.sqrt(5)) / 2
    fixed = (1 + math.sqrt(5)) / 2          # attracting fixed point of [[2,1],[1,1]]
    axis = complex((fixed + (1 - math.sqrt(5)) / 2) / 2, math.sqrt(5) / 2)
    assert dist_h(axis, (2 * axis + 1) / (axis + 1)) == pytest.approx(2 * math.log(lam))


def test_ss_injectivity_bound():
    assert ss_injectivity_bound(2, math.e ** 4) == pytest.approx(1)
    assert ss_injectivity_bound(3, 1) == -1


def test_isometry_invariance_of_distance():
    rng = np.random.default_rng(4)
    g = Isometry([[[2, 1], [1, 1]], [[1, 3], [0, 1]]])
    for _ in range(200):
        z = HPoint([complex(rng.uniform(-2, 2), rng.uniform(0.1, 2)) for _ in range(2)])
        w = HPoint([complex(rng.uniform(-2, 2), rng.uniform(0.1, 2)) for _ in range(2)])
        assert dist_hn(g.apply(z), g.apply(w)) == pytest.approx(dist_hn(z, w), rel=1e-9, abs=1e-12)


def test_isometry_rejects_bad_determinant():
    with pytest.raises(RMTorsionError):
        Isometry([[[2, 0], [0, 1]]])


# -- psh ---------------------------------------------------------------------------
@pytest.mark.parametrize("n", range(2, 9))
def test_psh_boundary(n):
    h = psh_hessian(Fraction(1, n), n)
    assert h.psd
    assert h.zero_eigenvalues == 1
    assert psh_hessian(Fraction(1, n + 1), n).psd
    assert psh_hessian(Fraction(1, n + 1), n).zero_eigenvalues == 0
    assert not psh_hessian(Fraction(1, n) + Fraction(1, 10 ** 6), n).psd


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 8), st.fractions(min_value=Fraction(1, 1000), max_value=Fraction(999, 1000)))
def test_psh_iff_small_exponent(n, t):
    assert psh_hessian(t, n).psd == (t <= Fraction(1, n))


def test_psh_against_finite_differences():
    for t, y in ((Fraction(1, 3), [1.0, 2.0]), (Fraction(1, 4), [0.5, 1.5, 3.0]), (Fraction(1, 2), [1.0, 1.0, 1.0])):
        h = psh_hessian(t, len(y))
        full = h.prefactor(float(np.prod(y))) * np.array(h.matrix, dtype=float)
        num = neg_power_hessian_numeric(float(t), y)
        assert np.allclose(num, full, rtol=1e-5, atol=1e-8)
        eig = np.linalg.eigvalsh(num)
        assert (eig.min() >= -1e-7) == h.psd


def test_psh_rejects_bad_input():
    with pytest.raises(RMTorsionError):
        psh_hessian(1, 3)
    with pytest.raises(RMTorsionError):
        psh_hessian(Fraction(1, 2), 1)


# -- volumes -------------------------------------------------------------------------
def test_geodesic_volume_closed_form():
    for c, T in (([1, 1], 1.0), ([1, 2.618], 1.0), ([0.5, 1, 3], 2.0)):
        g = TestCurve(c, period=T)
        for s in (0.1, 1.0, 7.0):
            v = curve_volume_in_horoball(g, s)
            assert v.value == pytest.approx(geodesic_volume(g, s), rel=1e-9)
            assert v.value * s ** (-1 / len(c)) == pytest.approx(len(c) * T * np.prod(c) ** (1 / len(c)), rel=1e-9)


def test_perturbed_volume_grows_with_horoball():
    g = TestCurve([1, 1], amp=[0, 0.3], freq=[1, 1], period=2 * math.pi, resolution=16)
    vols = [curve_volume_in_horoball(g, s, tol=1e-8).value for s in (0.5, 1.0, 2.0, 4.0)]
    assert all(a < b for a, b in zip(vols, vols[1:]))
    with pytest.raises(RMTorsionError):
        geodesic_volume(g, 1.0)


def test_curve_rejects_nonpositive_slope():
    with pytest.raises(RMTorsionError):
        TestCurve([1, 0])


def test_boundary_multiplicity_examples():
    v = boundary_multiplicity_bound(12.0, 4, [(1, 3)], n=2)
    assert v.rhs == pytest.approx(12) and v.passed
    v = boundary_multiplicity_bound(12.0, 4, [(9, 1)], n=2)
    assert v.rhs == pytest.approx(12) and v.passed
    v = boundary_multiplicity_bound(3.9, 1, [(4, 1)], n=2)
    assert v.rhs == pytest.approx(4) and not v.passed
    assert boundary_multiplicity_bound(0.0, 1, [], n=2).passed
    with pytest.raises(RMTorsionError):
        boundary_multiplicity_bound(1.0, 1, [(1, 1)])


def test_interior_volume_bound():
    assert interior_volume_bound(1, 2, 1) == pytest.approx(17.3554, abs=1e-4)
    assert interior_volume_bound(2, 1, 2) == pytest.approx(11.6436, abs=1e-4)
    assert interior_volume_bound(1, 2, 3) == pytest.approx(3 * interior_volume_bound(1, 2, 1))


def test_schwarz_and_gonality():
    assert schwarz_genus_bound(2, 0, 2) == 2
    assert schwarz_genus_bound(8, 0, 2) == 3
    assert schwarz_genus_bound(-10, 0, 2) == 0
    assert gonality_rh_bound(2, 3) == 2
    assert gonality_rh_bound(3, 7) == 2


# -- invariance ----------------------------------------------------------------------
def test_invariance_for_group_elements(Q5):
    els = [g for g in enumerate_elements(GroupSpec.make(Q5), 2) if not g.c.is_zero()]
    isos = [Isometry.from_group_element(g) for g in els]
    rng = np.random.default_rng(5)
    pts = sample_horoball_points(rng, 1.0, 2, 2000)
    assert all(horoball_contains(1.0, z) for z in pts)
    res = precise_invariance_check([isos[i % len(isos)] for i in range(len(pts))], 1.0, pts)
    assert res.counterexamples == 0
    assert res.worst_ratio <= 1 + 1e-9


def test_invariance_detects_small_lower_left():
    g = Isometry([[[1, 0], [0.1, 1]], [[1, 0], [0.1, 1]]])
    pts = [HPoint([1.5j, 1.5j])]
    assert precise_invariance_check([g], 1.0, pts).counterexamples == 1
