"""Exact division polynomials and algebraicity certificates.

:func:`psi` returns the division polynomial psi_n for the curve
Y^2 = 4X^3 - g2 X - g3 with exact rational g2, g3, as P_n(X) times an
optional factor Y.  Evaluated at (wp(z), wp'(z)) it equals
sigma(nz)/sigma(z)^(n^2).

Certificates are integer relations among monomials in the value being
certified and the generators of the base field, found by bounded LLL
searches that raise the degree before the height.  Each certificate
carries its budgets; a failed search proves nothing.
"""

from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import sympy

from ._psi import division_sequence, p3_coefficients, p4_coefficients
from .errors import CertificateNotFound, PoleAtLatticePoint, PreconditionViolated
from .intrel import (
    DEFAULT_DEGREE,
    DEFAULT_HEIGHT,
    integer_relation,
    is_real_data,
    monomial_values,
    required_bits,
)
from .lattice import Lattice
from .numeric import BigComplex, Tolerance, context, rounded, to_decimal
from .weierstrass import _on_lattice, _with_prec, raw_values

_X = sympy.Symbol("X")
_psi_cache: dict = {}
_psi_lock = threading.Lock()
CERT_HEIGHT = 10**6
MAX_CERT_PREC = 4096


# ------------------------------------------------------------- psi_n exact


@dataclass(frozen=True)
class CurvePolynomial:
    """Y^e * sum_k coeffs[k] X^k with e in {0, 1} and exact rational coefficients."""

    n: int
    coeffs: tuple[Fraction, ...]     # constant term first
    y_power: int
    g2: Fraction
    g3: Fraction

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def x_part(self) -> sympy.Poly:
        return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(self.coeffs)], _X)

    def evaluate(self, x, y):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + _to_ctx_fraction(x, c)
        return acc * y if self.y_power else acc

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "y_power": self.y_power,
            "coeffs": [str(c) for c in self.coeffs],
            "g2": str(self.g2),
            "g3": str(self.g3),
        }


def _to_ctx_fraction(x, c: Fraction):
    if c.denominator == 1:
        return c.numerator
    return x.context.mpf(c.numerator) / c.denominator


def psi(n: int, g2, g3) -> CurvePolynomial:
    """Division polynomial psi_n over Q for exact rational g2, g3 (cached)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    g2, g3 = Fraction(g2), Fraction(g3)
    key = (n, g2, g3)
    hit = _psi_cache.get(key)
    if hit is not None:
        return hit
    poly = _psi_poly(n, g2, g3)
    coeffs = tuple(Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs()))
    result = CurvePolynomial(n, coeffs, 0 if n % 2 else 1, g2, g3)
    with _psi_lock:
        return _psi_cache.setdefault(key, result)


def _psi_poly(n: int, g2: Fraction, g3: Fraction) -> sympy.Poly:
    G2 = sympy.Rational(g2.numerator, g2.denominator)
    G3 = sympy.Rational(g3.numerator, g3.denominator)
    dom = sympy.QQ

    def poly(coeffs):
        return sympy.Poly(list(reversed(coeffs)), _X, domain=dom)

    base = {
        0: sympy.Poly(0, _X, domain=dom),
        1: sympy.Poly(1, _X, domain=dom),
        2: sympy.Poly(-1, _X, domain=dom),
        3: poly(p3_coefficients(G2, G3)),
        4: poly(p4_coefficients(G2, G3)),
    }
    f = poly([-G3, -G2, 0, 4])
    return division_sequence(n, base, lambda a, b: a * b, lambda a, b: a - b, lambda a: -a, f * f)


# ---------------------------------------------------------- certificates


@dataclass(frozen=True)
class AlgebraicityCertificate:
    """An integer polynomial relation sum c * prod v_i^e_i = 0 among named values.

    ``variables[0]`` is the certified quantity; the remaining names are base
    field generators.  ``degree`` is the degree in the certified quantity.
    """

    value: BigComplex
    variables: tuple[str, ...]
    terms: tuple[tuple[int, tuple[int, ...]], ...]
    residual: object
    degree: int
    height: int
    height_bound: int = 0
    degree_bound: int = 0
    prec: int = 0

    def evaluate(self, values: Sequence):
        """The relation at ``values`` (raw mpmath numbers or BigComplex, in variable order)."""
        raw = [v.value if isinstance(v, BigComplex) else v for v in values]
        ctx = raw[0].context
        return ctx.fsum(c * _monomial(raw, e) for c, e in self.terms)

    def polynomial(self) -> sympy.Expr:
        syms = sympy.symbols(self.variables)
        return sum(c * sympy.Mul(*[s**k for s, k in zip(syms, e)]) for c, e in self.terms)

    def to_json(self) -> dict:
        return {
            "value": self.value.to_json_value(),
            "variables": list(self.variables),
            "terms": [{"coeff": str(c), "exponents": list(e)} for c, e in self.terms],
            "polynomial": str(self.polynomial()),
            "residual": to_decimal(self.residual, 64),
            "degree": self.degree,
            "height": self.height,
            "budgets": {"height": self.height_bound, "degree": self.degree_bound, "precision": self.prec},
        }


def _monomial(raw, exps):
    term = 1
    for v, e in zip(raw, exps):
        if e:
            term = term * v**e
    return term


def _certificate(value, names, exps, rel, degree_bound, height_bound, prec, raw) -> AlgebraicityCertificate:
    terms = tuple((c, tuple(e)) for c, e in zip(rel.coefficients, exps) if c)
    deg = max(e[0] for _, e in terms)
    ctx = context(prec)
    residual = abs(ctx.fsum(c * _monomial(raw, e) for c, e in terms))
    return AlgebraicityCertificate(
        value, tuple(names), terms, residual, deg, rel.height, height_bound, degree_bound, prec
    )


def _search(raw, names, exponent_sets, value, degree_bound, height_bound, prec, accept=None):
    """Try each exponent set in order; return the first accepted certificate or None."""
    for exps in exponent_sets:
        mons = monomial_values(raw, exps, prec)
        if len(mons) < 2:
            continue
        rel = integer_relation(mons, height_bound, prec=prec)
        if rel is None:
            continue
        if accept is not None and not accept(rel, exps):
            continue
        return _certificate(value, names, exps, rel, degree_bound, height_bound, prec, raw)
    return None


def _involves_first(rel, exps) -> bool:
    return any(c and e[0] for c, e in zip(rel.coefficients, exps))


def minimal_polynomial_probe(
    x,
    deg_bound: int = DEFAULT_DEGREE,
    height_bound: int = DEFAULT_HEIGHT,
    base_values: Sequence = (),
    base_degree: int = 1,
) -> Optional[AlgebraicityCertificate]:
    """Polynomial with integer coefficients, of degree <= deg_bound in x, vanishing at x.

    The coefficients may be polynomials of total degree <= ``base_degree``
    in ``base_values``.  The degree in x is raised before anything else;
    ``None`` means nothing was found within the budget.
    """
    if deg_bound < 1 or height_bound < 1:
        raise ValueError("bounds must be >= 1")
    xb = x if isinstance(x, BigComplex) else BigComplex(x)
    prec = min([xb.prec] + [b.prec for b in base_values if isinstance(b, BigComplex)])
    ctx = context(prec)
    raw = [xb.value] + [b.value if isinstance(b, BigComplex) else ctx.mpc(b) for b in base_values]
    names = ["X"] + [f"b{i + 1}" for i in range(len(base_values))]
    base_exps = [e for e in itertools.product(range(base_degree + 1), repeat=len(base_values)) if sum(e) <= base_degree]
    n_terms = (deg_bound + 1) * len(base_exps)
    from .intrel import check_budget

    check_budget(n_terms, height_bound, prec, is_real_data(raw))
    sets = [[(j,) + b for j in range(d + 1) for b in base_exps] for d in range(1, deg_bound + 1)]
    return _search(raw, names, sets, xb, deg_bound, height_bound, prec, _involves_first)


def _exact_invariants(L: Lattice):
    if not L.is_exact:
        raise PreconditionViolated("certificates need g2, g3 given as exact rationals")
    return L.g2_exact, L.g3_exact


def _cert_lattice(L: Lattice, n_terms: int, height_bound: int, real: bool) -> Lattice:
    # real=True is the conservative choice when the data type is not yet known
    need = 2 * math.ceil(required_bits(n_terms, height_bound, real)) + 32
    if need <= L.prec:
        return L
    prec = -(-need // 64) * 64
    if prec > MAX_CERT_PREC:
        raise CertificateNotFound(f"certificate search would need {prec} bits")
    return _with_prec(L, prec)


@dataclass(frozen=True)
class TorsionValues:
    wp_t: BigComplex
    zeta_shift: BigComplex
    wp_certificate: AlgebraicityCertificate
    zeta_certificate: AlgebraicityCertificate


def torsion_values(L: Lattice, m: int, a: int, b: int, height_bound: int = CERT_HEIGHT) -> TorsionValues:
    """wp(w/m) and zeta(w/m) - eta(w)/m for w = a*omega1 + b*omega2, with certificates over Q(g2, g3)."""
    if m < 2:
        raise ValueError("m must be >= 2")
    if a % m == 0 and b % m == 0:
        raise PoleAtLatticePoint("w/m is a period")
    _exact_invariants(L)
    deg_bound = max(3, (m * m - 1) // 2)
    H = _cert_lattice(L, 4 * deg_bound, height_bound, True)
    k = H.kernel()
    w = a * k.user_w1 + b * k.user_w2
    eta = a * k.user_eta1 + b * k.user_eta2
    v = raw_values(H, w / m)
    x, y = v.wp, v.wpp
    zs = v.zeta - eta / m
    prec = H.prec
    xb = BigComplex._wrap(x, prec)
    wp_cert = _search(
        [x], ["X"], [[(j,) for j in range(d + 1)] for d in range(1, deg_bound + 1)], xb, deg_bound, height_bound, prec,
        _involves_first,
    )
    if wp_cert is None:
        raise CertificateNotFound(f"no polynomial of degree <= {deg_bound}, height <= {height_bound} for wp(w/m)")
    zeta_cert = _zeta_shift_certificate(H, zs, x, y, wp_cert.degree, height_bound)
    return TorsionValues(BigComplex._wrap(x, L.prec), BigComplex._wrap(zs, L.prec), wp_cert, zeta_cert)


def _zeta_shift_certificate(H: Lattice, zs, x, y, deg_x: int, height_bound: int) -> AlgebraicityCertificate:
    """Express zs in Q(X, Y) over a linearly independent monomial basis of Q(X, Y)."""
    prec = H.prec
    eps = Tolerance.for_prec(prec).eps
    zb = BigComplex._wrap(zs, prec)
    raw = [zs, x, y]
    names = ["Z", "X", "Y"]
    if abs(zs) < eps:
        terms = ((1, (1, 0, 0)),)
        return AlgebraicityCertificate(zb, tuple(names), terms, abs(zs), 1, 1, height_bound, 1, prec)
    y_in_qx = abs(y) < eps
    if not y_in_qx:
        exps = [(0, 0, 1)] + [(0, j, 0) for j in range(deg_x)]
        rel = integer_relation(monomial_values(raw, exps, prec), height_bound, prec=prec)
        y_in_qx = rel is not None and rel.coefficients[0] != 0
    ys = (0,) if y_in_qx else (0, 1)
    basis = [(j, e) for e in ys for j in range(deg_x)]
    exps = [(1, j, e) for j, e in basis] + [(0, j, e) for j, e in basis]
    cert = _search(raw, names, [exps], zb, deg_x, height_bound, prec, _involves_first)
    if cert is None:
        raise CertificateNotFound("no relation expressing the zeta shift in Q(X, Y) at this budget")
    return cert


@dataclass(frozen=True)
class DivisionValues:
    wp_d: BigComplex
    zeta_d: BigComplex
    certificate: AlgebraicityCertificate
    zeta_certificate: Optional[AlgebraicityCertificate] = None


def division_value(p, m: int, L: Lattice, height_bound: int = CERT_HEIGHT, zeta_certificate: bool = True) -> DivisionValues:
    """wp(p/m) and zeta(p/m) - zeta(p)/m, certified over Q(g2, g3, wp(p)) (and wp(p/m), wp'(p/m) for zeta)."""
    if m < 2:
        raise ValueError("m must be >= 2")
    _exact_invariants(L)
    lctx = L.kernel().ctx
    if _on_lattice(L, rounded(lctx, p.value) if isinstance(p, BigComplex) else lctx.mpc(p)):
        raise PoleAtLatticePoint("p lies on the lattice, where wp(p) has a pole")
    deg_bound = m * m
    H = _cert_lattice(L, max(2 * (deg_bound + 1), 4 * (m + 1)), height_bound, True)
    k = H.kernel()
    ctx = k.ctx
    pr = rounded(ctx, p.value) if isinstance(p, BigComplex) else ctx.mpc(p)
    full = raw_values(H, pr)
    part = raw_values(H, pr / m)
    X, Y, P = part.wp, part.wpp, full.wp
    zd = part.zeta - full.zeta / m
    prec = H.prec
    xb = BigComplex._wrap(X, prec)
    sets = [[(j, e) for e in (0, 1) for j in range(d + 1)] for d in range(1, deg_bound + 1)]
    cert = _search([X, P], ["X", "wp_p"], sets, xb, deg_bound, height_bound, prec, _involves_first)
    if cert is None:
        raise CertificateNotFound(f"no relation of degree <= {deg_bound} in wp(p/m) at height <= {height_bound}")
    zcert = None
    if zeta_certificate:
        raw = [zd, X, Y]
        zsets = [[(1, j, e) for e in (0, 1) for j in range(d + 1)] + [(0, j, e) for e in (0, 1) for j in range(d + 1)]
                 for d in range(0, m + 1)]
        zcert = _search(raw, ["Z", "X", "Y"], zsets, BigComplex._wrap(zd, prec), deg_bound, height_bound, prec,
                        _involves_first)
        if zcert is None:
            raise CertificateNotFound("no relation for zeta(p/m) - zeta(p)/m over Q(g2, g3, wp(p/m), wp'(p/m))")
    return DivisionValues(BigComplex._wrap(X, L.prec), BigComplex._wrap(zd, L.prec), cert, zcert)
