from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from semielliptic import BigComplex, Tolerance, division_value, psi, torsion_values
from semielliptic import weierstrass as W
from semielliptic.errors import PoleAtLatticePoint, PreconditionViolated
from semielliptic.verify import random_point

EPS = Tolerance.for_prec(256).eps
X = sympy.Symbol("X")


def test_small_division_polynomials():
    assert psi(1, 4, 0).coeffs == (1,) and psi(1, 4, 0).y_power == 0
    two = psi(2, 4, 0)
    assert two.y_power == 1 and two.coeffs == (Fraction(-1),)
    assert psi(3, 4, 0).x_part() == sympy.Poly(3 * X**4 - 6 * X**2 - 1, X)
    assert [psi(n, 1, 2).degree for n in range(1, 8)] == [0, 0, 4, 6, 12, 16, 24]


@given(st.integers(1, 9))
def test_leading_coefficient(n):
    """psi_n leads with n X^((n^2-1)/2) for odd n and -(n/2) Y X^((n^2-4)/2) for even n."""
    p = psi(n, Fraction(3, 2), Fraction(-5, 7))
    assert p.coeffs[-1] == (n if n % 2 else -Fraction(n, 2))
    assert p.degree == ((n * n - 1) // 2 if n % 2 else (n * n - 4) // 2)


def test_psi_matches_sigma_quotient(square):
    """f_{n,1}(z) = psi_n(wp(z), wp'(z))."""
    rng = random.Random(3)
    for n in (2, 3, 4):
        p = psi(n, 4, 0)
        for _ in range(3):
            z = random_point(rng, square)
            v = W.evaluate(z, square)
            lhs = W.f_nm(z, (n, 1), square).value
            rhs = p.evaluate(v.wp.value, v.wp_prime.value)
            assert abs(lhs - rhs) < EPS * abs(lhs)


def test_two_torsion(generic):
    t = torsion_values(generic, 2, 1, 0)
    x = t.wp_t.value
    assert abs(4 * x**3 - x - 2) < EPS
    assert t.zeta_shift.is_zero(EPS)
    assert t.wp_certificate.degree <= 3
    assert t.wp_certificate.residual < EPS


def test_three_torsion_on_the_square_lattice(square):
    t = torsion_values(square, 3, 1, 0)
    roots = sympy.Poly(3 * X**4 - 6 * X**2 - 1, X).nroots(n=60)
    assert min(abs(complex(t.wp_t.value) - complex(r)) for r in roots) < 1e-50
    assert t.wp_certificate.degree <= 4


def test_torsion_needs_exact_invariants(skew):
    with pytest.raises(PreconditionViolated):
        torsion_values(skew, 2, 1, 0)


def test_torsion_rejects_periods(square):
    with pytest.raises(PoleAtLatticePoint):
        torsion_values(square, 2, 2, 4)


def test_division_by_two(square):
    p = BigComplex(0.37 + 0.21j)
    d = division_value(p, 2, square)
    assert d.certificate.degree <= 4
    assert d.certificate.residual < EPS
    assert d.wp_d.close_to(W.wp(p / 2, square))


def test_division_by_three_matches_direct_evaluation(square):
    p = BigComplex(0.41 - 0.33j)
    d = division_value(p, 3, square, zeta_certificate=False)
    assert d.wp_d.close_to(W.wp(p / 3, square), EPS * 10)
    assert d.certificate.degree <= 9


def test_division_rejects_lattice_points(square):
    with pytest.raises(PoleAtLatticePoint):
        division_value(square.omega1, 2, square)
