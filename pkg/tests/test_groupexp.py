from __future__ import annotations

import random

import pytest

from semielliptic import BigComplex, Tolerance
from semielliptic import groupexp as G
from semielliptic import weierstrass as W
from semielliptic.numeric import context, pi_times_2i
from semielliptic.verify import random_point

EPS = Tolerance.for_prec(256).eps
STRICT = BigComplex(2) ** -100


def test_neutral_at_a_period(skew):
    p = G.exp_gm_e(0, skew.omega1, skew)
    assert p.is_neutral()
    assert p.projective.equivalent(G.neutral_point(2, 256))


def test_curve_equation(skew):
    rng = random.Random(4)
    for _ in range(10):
        t = BigComplex(rng.uniform(-1, 1))
        p = G.exp_gm_e(t, random_point(rng, skew), skew)
        assert G.curve_residual(p.projective, skew) < STRICT.value.real


def test_periodicity_in_both_factors(skew):
    z = random_point(random.Random(5), skew)
    t = BigComplex(0.3 - 0.2j)
    a = G.exp_gm_e(t, z, skew)
    b = G.exp_gm_e(t + pi_times_2i(256), z + skew.omega2, skew)
    assert a.affine[0].close_to(b.affine[0])
    assert a.projective.equivalent(b.projective)


def test_extension_coordinates(skew):
    z = random_point(random.Random(6), skew)
    v = W.evaluate(z, skew)
    q = G.exp_etilde(-v.zeta, z, skew)
    assert q.normalized()[3] == 0 or abs(q.normalized()[3]) < EPS
    w = BigComplex(0.4 + 0.1j)
    c = G.exp_etilde(w, z, skew).coords
    ratio = c[4].value / c[1].value
    expected = (w.value + v.zeta.value) + 2 * v.wp.value**2 / v.wp_prime.value
    assert abs(ratio - expected) < EPS * abs(expected)


def test_kernel_limit_path(skew):
    """exp_etilde(-eta(w), w + h) tends to the neutral point as h -> 0."""
    ctx = context(256)
    omega = skew.omega1 + skew.omega2
    w = -(skew.eta1 + skew.eta2)
    dists = []
    for k in (10, 20, 40):
        h = BigComplex._wrap(ctx.mpc(1, 1) * ctx.ldexp(1, -k), 256)
        p = G.exp_etilde(w, omega + h, skew)
        dists.append(p.distance(G.neutral_point(4, 256)))
    assert dists[0] > dists[1] > dists[2]
    assert dists[2] < 2**-35


def test_composition(skew):
    z = random_point(random.Random(7), skew)
    g = G.exp_gtilde(0, 0, 0, z, skew)
    assert g.affine[0].is_zero() and g.affine[1] == BigComplex(1)
    assert g.projective.equivalent(G.exp_etilde(0, z, skew))


def test_kernel_point(skew):
    point = G.kernel_point(3, skew.omega1 + 2 * skew.omega2, skew)
    g = G.exp_gtilde(*point, skew)
    assert g.neutral_residual() < STRICT.value.real


def test_torsion_point(skew):
    point = G.torsion_point(1, 2, skew.omega1, skew)
    g = G.exp_gtilde(*point, skew)
    assert g.affine[0].is_zero(EPS) and g.affine[1].close_to(BigComplex(-1))
    assert not g.is_neutral()
    assert G.curve_residual(g.projective, skew) < EPS


def test_projective_points_reject_zero():
    with pytest.raises(ValueError):
        G.ProjectivePoint((BigComplex(0),) * 3)
