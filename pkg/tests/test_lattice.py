from __future__ import annotations

import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from semielliptic import BigComplex, Lattice, Tolerance, detect_cm, lattice_from_invariants, lattice_from_periods
from semielliptic.errors import DegenerateLattice, SingularCurve
from semielliptic.lattice import eta_map, lattice_from_tau
from semielliptic.numeric import context, pi_times_2i
from semielliptic.weierstrass import zeta

EPS = Tolerance.for_prec(256).eps

# 2 * int_0^inf du / sqrt((1+u^2)(2+u^2)), i.e. 2 * int_1^inf dx / sqrt(4x^3 - 4x) after x = 1 + u^2,
# by mpmath.quad at 40 digits
LEMNISCATE_OMEGA1 = "2.622057554292119810464839589891119413683"

# periods (1, 0.3 + 1.1i): 60 sum w^-4 and 140 sum w^-6 over boxes |m|,|n| <= 40, 80, 160
# with two Richardson steps; accurate to roughly 1e-8 and 1e-11 relative
SKEW_G2 = mpmath.mpc("120.05791879926322", "29.370205808775311")
SKEW_G3 = mpmath.mpc("332.83105092435323", "-133.24570489443604")


def rel(a, b):
    return abs(a - b) / abs(b)


def test_square_lattice_from_periods_has_g3_zero():
    L = lattice_from_periods(BigComplex(1), BigComplex(1j))
    assert abs(L.g3.value) < EPS
    assert abs(L.g2.value) > 1


def test_swapped_periods_give_the_same_lattice(skew):
    swapped = lattice_from_periods(skew.omega2, skew.omega1)
    assert swapped.g2.close_to(skew.g2, EPS * abs(skew.g2.value))
    assert swapped.g3.close_to(skew.g3, EPS * abs(skew.g3.value))
    assert swapped.tau.value.imag > 0


def test_legendre_relation(skew):
    assert skew.legendre_residual() < EPS
    lhs = skew.omega2 * skew.eta1 - skew.omega1 * skew.eta2
    assert lhs.close_to(pi_times_2i(256))


def test_lemniscatic_period_matches_quadrature(square):
    ctx = context(256)
    assert abs(square.omega1.value - ctx.mpf(LEMNISCATE_OMEGA1)) < ctx.mpf(10) ** -38
    assert (square.omega2 / square.omega1).close_to(BigComplex(1j))


def test_invariants_match_eisenstein_box_sums(skew):
    assert rel(skew.g2.value, SKEW_G2) < 1e-7
    assert rel(skew.g3.value, SKEW_G3) < 1e-10


def test_invariants_round_trip():
    rng = random.Random(7)
    worst = 0
    for _ in range(20):
        g2 = Fraction(rng.randint(-400, 400), rng.randint(1, 20))
        g3 = Fraction(rng.randint(-400, 400), rng.randint(1, 20))
        if g2**3 == 27 * g3**2:
            continue
        L = lattice_from_invariants(g2, g3)
        back = lattice_from_periods(L.omega1, L.omega2)
        ctx = context(256)
        scale = max(1, abs(g2), abs(g3))
        worst = max(worst, abs(back.g2.value - ctx.mpf(g2.numerator) / g2.denominator) / scale,
                    abs(back.g3.value - ctx.mpf(g3.numerator) / g3.denominator) / scale)
    assert worst < EPS


def test_singular_and_degenerate_inputs_are_rejected():
    with pytest.raises(SingularCurve):
        lattice_from_invariants(3, 1)
    with pytest.raises(DegenerateLattice):
        lattice_from_periods(BigComplex(1), BigComplex(2))


def test_eta_map(skew):
    assert eta_map(skew, 1, 0) == skew.eta1
    assert eta_map(skew, 0, 0).is_zero()
    assert eta_map(skew, 2, 3).close_to(2 * skew.eta1 + 3 * skew.eta2)


def test_eta_map_matches_zeta_shift(skew):
    z = BigComplex(0.21 + 0.13j)
    shifted = z + 2 * skew.omega1 + 3 * skew.omega2
    diff = zeta(shifted, skew) - zeta(z, skew)
    assert diff.close_to(eta_map(skew, 2, 3), EPS * 10)


def test_cm_detection():
    ctx = context(256)
    cm = detect_cm(lattice_from_tau(BigComplex(1j)))
    assert (cm.A, cm.B, cm.C) == (1, 0, 1)
    rho = BigComplex._wrap((1 + ctx.sqrt(3) * 1j) / 2, 256)
    cm = detect_cm(lattice_from_tau(rho))
    assert (cm.A, cm.B, cm.C) == (1, -1, 1)
    assert cm.field_disc == -3


def test_kappa_vanishes_on_the_square_lattice(square):
    cm = detect_cm(square)
    assert cm.is_cm
    assert cm.kappa.is_zero(EPS)
    assert (square.eta1 - BigComplex(1j) * square.eta2).is_zero(EPS)


def test_generic_lattice_has_no_cm(generic):
    assert not detect_cm(generic).is_cm


def test_json_round_trip(skew, square):
    for L in (skew, square):
        back = Lattice.from_json(L.to_json())
        assert back.omega1 == L.omega1 and back.omega2 == L.omega2
        assert back.g2_exact == L.g2_exact


@given(
    st.floats(0.3, 3), st.floats(0, 6.2), st.floats(-0.5, 0.5), st.floats(0.6, 3)
)
def test_legendre_holds_on_random_lattices(r, theta, x, y):
    ctx = context(256)
    w1 = ctx.mpf(r) * ctx.expj(ctx.mpf(theta))
    w2 = w1 * ctx.mpc(x, y)
    L = lattice_from_periods(BigComplex._wrap(w1, 256), BigComplex._wrap(w2, 256))
    assert L.legendre_residual() < EPS
    # homogeneity: g2 scales like w^-4
    half = lattice_from_periods(L.omega1 / 2, L.omega2 / 2)
    assert (half.g2 / 16).close_to(L.g2, EPS * (1 + abs(L.g2.value)))
