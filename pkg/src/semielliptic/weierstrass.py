"""Weierstrass sigma, zeta, wp and wp' with their algebraic identities.

Evaluation reduces z into the centred period cell of the reduced basis
with exact integer bookkeeping, evaluates theta_1 and three derivatives
there, and restores z through the quasi-periodicity laws

    sigma(z0 + w) = eps(w) sigma(z0) exp(eta(w) (z0 + w/2)),
    zeta(z0 + w)  = zeta(z0) + eta(w),

with eps(w) = (-1)^(a + b + ab) for w = a*w1 + b*w2.  zeta, wp and wp' come
from the differentiated theta series, never from numerical differentiation.

Residuals reported by the identity checks are relative when the reference
quantity exceeds 1 in modulus and absolute otherwise.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ._psi import p_jets, psi_log_derivatives
from .errors import (
    DegenerateAddition,
    InterpolationFailure,
    NotCM,
    PoleAtLatticePoint,
    ZeroMultiplier,
)
from .lattice import LATTICE_GUARD, CMData, Kernel, Lattice, detect_cm
from .numeric import BigComplex, Tolerance, context, rounded, scratch_context, to_mpc

CM_HELD_OUT = 5
CM_SAMPLE_SEED = 20240611


# ------------------------------------------------------------------ types


@dataclass(frozen=True)
class WeierstrassValues:
    """(sigma, zeta, wp, wp') at z, with the differential-equation residual."""

    z: BigComplex
    sigma: BigComplex
    zeta: BigComplex
    wp: BigComplex
    wp_prime: BigComplex
    ode_residual: object

    def to_json(self) -> dict:
        from .numeric import to_decimal

        return {
            "precision": self.wp.prec,
            "z": self.z.to_json_value(),
            "sigma": self.sigma.to_json_value(),
            "zeta": self.zeta.to_json_value(),
            "wp": self.wp.to_json_value(),
            "wp_prime": self.wp_prime.to_json_value(),
            "ode_residual": to_decimal(self.ode_residual, 64),
        }


@dataclass(frozen=True)
class RationalMultiplier:
    """The multiplier n/m with m >= 1.

    The pair is kept as given (only the sign is moved onto n) because the
    sigma quotient f_{n,m} depends on the pair and not just on n/m; use
    :meth:`reduced` for the lowest-terms representative.
    """

    n: int
    m: int = 1

    def __post_init__(self):
        if self.m == 0:
            raise ValueError("m must be nonzero")
        if self.m < 0:
            object.__setattr__(self, "n", -self.n)
            object.__setattr__(self, "m", -self.m)

    @classmethod
    def of(cls, value) -> "RationalMultiplier":
        f = Fraction(value)
        return cls(f.numerator, f.denominator)

    @property
    def value(self) -> Fraction:
        return Fraction(self.n, self.m)

    def reduced(self) -> "RationalMultiplier":
        return RationalMultiplier.of(self.value)


@dataclass(frozen=True)
class EndomorphismElement:
    """alpha = r1 + r2*tau in the CM field (r2 = 0 for plain rationals)."""

    r1: Fraction
    r2: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "r1", Fraction(self.r1))
        object.__setattr__(self, "r2", Fraction(self.r2))
        if self.r1 == 0 and self.r2 == 0:
            raise ValueError("alpha must be nonzero")

    def denominator(self, C: int = 1) -> int:
        """Least m > 0 with m*r1 and m*r2/C integral."""
        a = self.r1.denominator
        b = (self.r2 / C).denominator
        return a * b // math.gcd(a, b)

    def power(self, k: int, A: int, B: int, C: int) -> tuple[Fraction, Fraction]:
        """alpha^k in the basis {1, tau}, using C tau^2 = -A - B tau."""
        x, y = Fraction(1), Fraction(0)
        for _ in range(k):
            # (x + y tau)(r1 + r2 tau) = x r1 + (x r2 + y r1) tau + y r2 tau^2
            t2 = y * self.r2
            x, y = x * self.r1 - t2 * Fraction(A, C), x * self.r2 + y * self.r1 - t2 * Fraction(B, C)
        return x, y


# ----------------------------------------------------------- core numerics


def _rel(diff, ref):
    return abs(diff) / max(1, abs(ref))


@dataclass(frozen=True)
class _Raw:
    sigma: object
    zeta: object
    wp: object
    wpp: object
    kernel: Kernel


def _kernel_for(L: Lattice, zr) -> tuple[Kernel, object, int, int]:
    k = L.kernel()
    z0, a, b = k.reduce(zr)
    extra = (abs(a) + abs(b) + 1).bit_length()
    if extra > 8:
        # the quasi-periodicity exponent grows like |a w|^2; keep its absolute error small
        k = L.kernel(L.prec + LATTICE_GUARD + 2 * extra)
        z0, a, b = k.reduce(zr)
    return k, z0, a, b


def _pole_radius(L: Lattice, k: Kernel):
    return Tolerance.for_prec(L.prec).eps * abs(k.w1)


def raw_values(L: Lattice, z, *, sigma_only: bool = False, reduce: bool = True) -> _Raw:
    """sigma, zeta, wp, wp' at z as mpmath numbers at the kernel precision."""
    k = L.kernel()
    zr = rounded(k.ctx, z.value) if isinstance(z, BigComplex) else to_mpc(z, k.ctx)
    if reduce:
        k, z0, a, b = _kernel_for(L, zr)
        zr = rounded(k.ctx, zr)
    else:
        z0, a, b = zr, 0, 0
        # unreduced series: terms first grow like exp(|Im v|^2 / (pi Im tau))
        x, y = k.coordinates(zr)
        growth = int(abs(y) ** 2 * float(k.tau.imag) * 4.6) + 1
        k = L.kernel(L.prec + LATTICE_GUARD + growth)
        zr = rounded(k.ctx, zr)
        z0 = zr
    ctx = k.ctx
    small = abs(z0) <= _pole_radius(L, k)
    if small and not sigma_only:
        raise PoleAtLatticePoint("z lies on the period lattice")
    t0, t1, t2, t3 = k.thetas(z0)
    pw = ctx.pi / k.w1
    sig = (k.w1 / ctx.pi) * ctx.exp(k.eta1 * z0 * z0 / (2 * k.w1)) * t0 / k.dtheta1
    if a or b:
        w = a * k.w1 + b * k.w2
        eta = a * k.eta1 + b * k.eta2
        sign = -1 if (a + b + a * b) % 2 else 1
        sig = sign * sig * ctx.exp(eta * (z0 + w / 2))
    else:
        eta = ctx.zero
    if sigma_only and (small or t0 == 0):
        return _Raw(sig, None, None, None, k)
    A = t1 / t0
    Bq = t2 / t0
    Cq = t3 / t0
    zeta = k.eta1 * z0 / k.w1 + pw * A + eta
    wp = -k.eta1 / k.w1 - pw * pw * (Bq - A * A)
    wpp = -pw**3 * (Cq - 3 * A * Bq + 2 * A**3)
    return _Raw(sig, zeta, wp, wpp, k)


def _invariants(L: Lattice, ctx):
    g2 = to_mpc(L.g2_exact, ctx) if L.g2_exact is not None else rounded(ctx, L.kernel().g2)
    g3 = to_mpc(L.g3_exact, ctx) if L.g3_exact is not None else rounded(ctx, L.kernel().g3)
    return g2, g3


def _big(x, L: Lattice) -> BigComplex:
    return BigComplex._wrap(x, L.prec)


def ode_residual(L: Lattice, wp, wpp, ctx):
    g2, g3 = _invariants(L, ctx)
    return _rel(wpp * wpp - (4 * wp**3 - g2 * wp - g3), wpp * wpp)


def evaluate(z, L: Lattice) -> WeierstrassValues:
    """All four Weierstrass values at z (raises at lattice points)."""
    r = raw_values(L, z)
    zb = z if isinstance(z, BigComplex) else BigComplex(z, L.prec)
    return WeierstrassValues(
        zb.with_prec(min(zb.prec, L.prec)), _big(r.sigma, L), _big(r.zeta, L), _big(r.wp, L), _big(r.wpp, L),
        ode_residual(L, r.wp, r.wpp, r.kernel.ctx),
    )


# name that does not shadow the builtin eval
eval_point = evaluate


def sigma(z, L: Lattice) -> BigComplex:
    """sigma(z); entire, so lattice points give 0."""
    return _big(raw_values(L, z, sigma_only=True).sigma, L)


def zeta(z, L: Lattice) -> BigComplex:
    return _big(raw_values(L, z).zeta, L)


def wp(z, L: Lattice) -> BigComplex:
    return _big(raw_values(L, z).wp, L)


def wp_prime(z, L: Lattice) -> BigComplex:
    return _big(raw_values(L, z).wpp, L)


def evaluate_unreduced(z, L: Lattice) -> WeierstrassValues:
    """Same values from the theta series at z itself, skipping argument reduction.

    Slower and only sensible for moderate |z|; kept as an independent path
    for checking the reduction bookkeeping.
    """
    r = raw_values(L, z, reduce=False)
    zb = z if isinstance(z, BigComplex) else BigComplex(z, L.prec)
    return WeierstrassValues(
        zb, _big(r.sigma, L), _big(r.zeta, L), _big(r.wp, L), _big(r.wpp, L),
        ode_residual(L, r.wp, r.wpp, r.kernel.ctx),
    )


# ------------------------------------------------------------- periodicity


def quasi_period_sign(a: int, b: int) -> int:
    """eps(a w1 + b w2): +1 when w/2 is a period, else -1."""
    return -1 if (a + b + a * b) % 2 else 1


def periodicity_residuals(z, a: int, b: int, L: Lattice):
    """Residuals of the wp, zeta and sigma laws under the shift w = a*omega1 + b*omega2.

    The shifted side is evaluated by the theta series at the unreduced argument,
    so the laws are tested rather than reproduced by the reduction step.
    """
    k = L.kernel()
    ctx = k.ctx
    zr = rounded(ctx, z.value) if isinstance(z, BigComplex) else to_mpc(z, ctx)
    w = a * k.user_w1 + b * k.user_w2
    eta = a * k.user_eta1 + b * k.user_eta2
    v1 = raw_values(L, zr)
    v2 = raw_values(L, zr + w, reduce=False)
    ctx = v2.kernel.ctx if v2.kernel.wprec > v1.kernel.wprec else v1.kernel.ctx
    r_wp = _rel(v2.wp - v1.wp, v1.wp)
    r_zeta = _rel(v2.zeta - v1.zeta - eta, v2.zeta)
    rhs = quasi_period_sign(a, b) * v1.sigma * ctx.exp(eta * (zr + w / 2))
    r_sigma = _rel(v2.sigma - rhs, v2.sigma)
    return r_wp, r_zeta, r_sigma


# ---------------------------------------------------------------- addition


@dataclass(frozen=True)
class AdditionValues:
    """Right-hand sides of the addition formulae and their residuals.

    ``sigma_ratio`` is sigma(z1+z2) sigma(z1-z2) / (sigma(z1)^2 sigma(z2)^2)
    formed from sigma values; it should equal wp(z2) - wp(z1).
    """

    wp_sum: BigComplex
    zeta_combo: BigComplex
    sigma_ratio: BigComplex
    wp_residual: object
    zeta_residual: object
    sigma_residual: object


def addition_values(z1, z2, L: Lattice) -> AdditionValues:
    k = L.kernel()
    ctx = k.ctx
    z1r = rounded(ctx, z1.value) if isinstance(z1, BigComplex) else to_mpc(z1, ctx)
    z2r = rounded(ctx, z2.value) if isinstance(z2, BigComplex) else to_mpc(z2, ctx)
    a = raw_values(L, z1r)
    b = raw_values(L, z2r)
    if _rel(a.wp - b.wp, a.wp) < Tolerance.for_prec(L.prec).eps:
        raise DegenerateAddition("wp(z1) = wp(z2): z2 is congruent to +-z1")
    s = raw_values(L, z1r + z2r)
    d = raw_values(L, z1r - z2r, sigma_only=True)
    slope = (a.wpp - b.wpp) / (a.wp - b.wp)
    wp_sum = slope * slope / 4 - a.wp - b.wp
    zeta_combo = slope / 2
    ratio = s.sigma * d.sigma / (a.sigma**2 * b.sigma**2)
    return AdditionValues(
        _big(wp_sum, L), _big(zeta_combo, L), _big(ratio, L),
        _rel(wp_sum - s.wp, s.wp),
        _rel(zeta_combo - (s.zeta - a.zeta - b.zeta), s.zeta),
        _rel(ratio - (b.wp - a.wp), ratio),
    )


# ------------------------------------------------------ rational multiples


def _as_multiplier(r) -> RationalMultiplier:
    if isinstance(r, RationalMultiplier):
        return r
    if isinstance(r, tuple):
        return RationalMultiplier(*r)
    return RationalMultiplier.of(r)


def _zr(L: Lattice, z):
    ctx = L.kernel().ctx
    return rounded(ctx, z.value) if isinstance(z, BigComplex) else to_mpc(z, ctx)


def _f_raw(L: Lattice, zr, n: int, m: int):
    ctx = L.kernel().ctx
    base = raw_values(L, zr, sigma_only=True)
    if abs(base.sigma) == 0 or _on_lattice(L, zr):
        raise PoleAtLatticePoint("f_{n,m} needs z off the lattice")
    if n == 0:
        return ctx.zero
    if n == m:
        return ctx.one
    top = raw_values(L, zr * n / m if m != 1 else zr * n, sigma_only=True).sigma
    return top ** (m * m) / base.sigma ** (n * n)


def _on_lattice(L: Lattice, zr) -> bool:
    k = L.kernel()
    z0, _, _ = k.reduce(zr)
    return abs(z0) <= _pole_radius(L, k)


def f_nm(z, r, L: Lattice) -> BigComplex:
    """f_{n,m}(z) = sigma(nz/m)^(m^2) / sigma(z)^(n^2)."""
    r = _as_multiplier(r)
    return _big(_f_raw(L, _zr(L, z), r.n, r.m), L)


def f_nm_periodicity_residual(z, r, L: Lattice, shift: tuple[int, int] = (1, 1)):
    """|f(z + m w) - f(z)| for w = shift[0]*omega1 + shift[1]*omega2 (relative when large)."""
    r = _as_multiplier(r)
    k = L.kernel()
    zr = _zr(L, z)
    w = shift[0] * k.user_w1 + shift[1] * k.user_w2
    f0 = _f_raw(L, zr, r.n, r.m)
    f1 = _f_raw(L, zr + r.m * w, r.n, r.m)
    return _rel(f1 - f0, f0)


def division_log_derivatives(L: Lattice, zr, n: int, m: int):
    """(f, (log f)', (log f)'') for f = f_{n,m} at z, via division polynomials at z/m."""
    u = raw_values(L, zr / m)
    ctx = u.kernel.ctx
    g2, g3 = _invariants(L, ctx)
    x, y = u.wp, u.wpp
    jets = p_jets({abs(n), m}, x, g2, g3)
    pn, l1n, l2n = psi_log_derivatives(n, x, y, g2, jets)
    pm, l1m, l2m = psi_log_derivatives(m, x, y, g2, jets)
    f = pn ** (m * m) / pm ** (n * n)
    d1 = (m * m * l1n - n * n * l1m) / m
    d2 = (m * m * l2n - n * n * l2m) / (m * m)
    return f, d1, d2


def numeric_log_derivatives(L: Lattice, zr, n: int, m: int):
    """(f, (log f)', (log f)'') by five-point central differences of f at doubled precision.

    The step is 2^(-prec/2) and the working precision 2*prec + 64 bits, so
    both truncation (h^4) and cancellation (2^-wprec / h^2) stay far below
    2^-prec.
    """
    hi = _with_prec(L, 2 * L.prec + 64)
    ctx = hi.kernel().ctx
    z = rounded(ctx, zr)
    h = ctx.ldexp(1, -(L.prec // 2))
    fv = [_f_raw(hi, z + j * h, n, m) for j in (-2, -1, 0, 1, 2)]
    f = fv[2]
    d1 = (fv[0] - 8 * fv[1] + 8 * fv[3] - fv[4]) / (12 * h)
    d2 = (-fv[0] + 16 * fv[1] - 30 * fv[2] + 16 * fv[3] - fv[4]) / (12 * h * h)
    return f, d1 / f, (d2 * f - d1 * d1) / (f * f)


def _with_prec(L: Lattice, prec: int) -> Lattice:
    """The same lattice rebuilt at a higher precision (cached on ``L``)."""
    from .lattice import lattice_from_invariants, lattice_from_periods

    def build():
        exact = (L.g2_exact, L.g3_exact) if L.is_exact else None
        if L._source[0] == "periods":
            return lattice_from_periods(L._source[1], L._source[2], prec, exact_invariants=exact)
        if exact:
            return lattice_from_invariants(exact[0], exact[1], prec)
        return lattice_from_invariants(L._source[1], L._source[2], prec)

    return L.cached(("lattice", prec), build)


@dataclass(frozen=True)
class MultiplicationValues:
    """Rational-multiplication right-hand sides at z for the multiplier n/m, with residuals."""

    wp_rm: BigComplex
    zeta_rm: BigComplex
    sigma_pow_residual: object
    wp_residual: object
    zeta_residual: object
    f: BigComplex


def rational_multiply(z, r, L: Lattice, method: str = "analytic") -> MultiplicationValues:
    """wp(nz/m) and zeta(nz/m) from values at z and f_{n,m}, f', f''.

    ``method="analytic"`` differentiates f through division polynomials;
    ``method="numeric"`` uses central differences at doubled precision.
    """
    r = _as_multiplier(r)
    n, m = r.n, r.m
    if n == 0:
        raise ZeroMultiplier("n = 0 maps everything to the lattice")
    zr = _zr(L, z)
    base = raw_values(L, zr)
    target = raw_values(L, zr * n / m)
    ctx = base.kernel.ctx
    if method == "analytic":
        f, d1, d2 = division_log_derivatives(L, zr, n, m)
    elif method == "numeric":
        f, d1, d2 = numeric_log_derivatives(L, zr, n, m)
        f, d1, d2 = rounded(ctx, f), rounded(ctx, d1), rounded(ctx, d2)
    else:
        raise ValueError(f"unknown method {method!r}")
    wp_rm = base.wp - d2 / (n * n)
    zeta_rm = base.zeta * ctx.mpf(n) / m + d1 / (m * n)
    lhs = target.sigma ** (m * m)
    sig_res = _rel(lhs - base.sigma ** (n * n) * f, lhs)
    return MultiplicationValues(
        _big(wp_rm, L), _big(zeta_rm, L), sig_res,
        _rel(wp_rm - target.wp, target.wp), _rel(zeta_rm - target.zeta, target.zeta), _big(f, L),
    )


# ------------------------------------------------------ complex multiplication


@dataclass(frozen=True)
class CMPolynomials:
    """wp(C tau z) = P(wp(z)) / Q(wp(z)); Q monic of degree AC - 1, P of degree AC."""

    p: tuple            # raw coefficients, constant term first
    q: tuple
    held_out_residual: object
    wprec: int

    def coefficients(self, prec: int) -> tuple[list[BigComplex], list[BigComplex]]:
        return [BigComplex._wrap(c, prec) for c in self.p], [BigComplex._wrap(c, prec) for c in self.q]


def _horner(coeffs, x):
    acc = 0 * x
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _horner_d(coeffs, x):
    return _horner([i * c for i, c in enumerate(coeffs)][1:], x) if len(coeffs) > 1 else 0 * x


def _kappa(k: Kernel, cm: CMData):
    # kappa at the kernel precision: (A eta1 - C tau eta2) / omega2
    tau = k.user_w2 / k.user_w1
    return (cm.A * k.user_eta1 - cm.C * tau * k.user_eta2) / k.user_w2


def _cm(L: Lattice, cm: Optional[CMData]) -> CMData:
    cm = detect_cm(L) if cm is None else cm
    if not cm.is_cm:
        raise NotCM("the lattice has no complex multiplication at the searched height")
    return cm


def _sample_points(L: Lattice, alpha, count: int):
    k = L.kernel()
    ctx = k.ctx
    rng = random.Random(CM_SAMPLE_SEED)
    pts = []
    while len(pts) < count:
        x = ctx.mpf(rng.randint(1, 10**6)) / 10**6 - ctx.mpf(0.5)
        y = ctx.mpf(rng.randint(1, 10**6)) / 10**6 - ctx.mpf(0.5)
        z = x * k.w1 + y * k.w2
        if abs(z) < abs(k.w1) / 20 or _on_lattice_r(k, alpha * z, abs(k.w1) / 20):
            continue
        pts.append(z)
    return pts


def _on_lattice_r(k: Kernel, z, radius) -> bool:
    z0, _, _ = k.reduce(z)
    return abs(z0) < radius


def cm_polynomials(L: Lattice, cm: Optional[CMData] = None) -> CMPolynomials:
    """Reconstruct P, Q once per lattice from 2*AC samples plus held-out checks."""
    cm = _cm(L, cm)
    return L.cached(("cm_pq", cm.A, cm.B, cm.C), lambda: _reconstruct(L, cm))


def _reconstruct(L: Lattice, cm: CMData) -> CMPolynomials:
    k = L.kernel()
    ctx = k.ctx
    tau = k.user_w2 / k.user_w1
    alpha = cm.C * tau
    N = cm.A * cm.C
    unknowns = 2 * N
    pts = _sample_points(L, alpha, unknowns + CM_HELD_OUT)
    xs, ys = [], []
    for z in pts:
        xs.append(raw_values(L, z).wp)
        ys.append(raw_values(L, alpha * z).wp)
    sc = scratch_context(k.wprec + 64)
    rows, rhs = [], []
    for x, y in zip(xs[:unknowns], ys[:unknowns]):
        x, y = sc.mpc(x), sc.mpc(y)
        rows.append([x**i for i in range(N + 1)] + [-y * x**i for i in range(N - 1)])
        rhs.append(y * x ** (N - 1))
    try:
        sol = sc.lu_solve(sc.matrix(rows), sc.matrix(rhs))
    except ZeroDivisionError as exc:
        raise InterpolationFailure("sample system is singular") from exc
    p = tuple(rounded(ctx, sol[i]) for i in range(N + 1))
    q = tuple(rounded(ctx, sol[N + 1 + i]) for i in range(N - 1)) + (ctx.one,)
    worst = ctx.zero
    for x, y in zip(xs[unknowns:], ys[unknowns:]):
        worst = max(worst, _rel(_horner(p, x) / _horner(q, x) - y, y))
    if worst >= Tolerance.for_prec(L.prec).eps:
        raise InterpolationFailure(f"held-out residual {ctx.nstr(worst, 5)} exceeds tolerance")
    return CMPolynomials(p, q, worst, k.wprec)


@dataclass(frozen=True)
class CMMultiplyValues:
    """Multiplication-by-C*tau right-hand sides at z, with residuals against direct evaluation."""

    wp_cm: BigComplex
    zeta_cm: BigComplex
    sigma_cm_residual: object
    wp_residual: object
    zeta_residual: object


def cm_multiply(z, L: Lattice, cm: Optional[CMData] = None) -> CMMultiplyValues:
    """Multiplication by C*tau: wp, zeta (scaled back by 1/(C tau)) and the sigma identity."""
    cm = _cm(L, cm)
    pq = cm_polynomials(L, cm)
    k = L.kernel()
    ctx = k.ctx
    zr = _zr(L, z)
    tau = k.user_w2 / k.user_w1
    alpha = cm.C * tau
    kappa = _kappa(k, cm)
    base = raw_values(L, zr)
    target = raw_values(L, alpha * zr)
    x, y = base.wp, base.wpp
    qx = _horner(pq.q, x)
    if abs(qx) < Tolerance.for_prec(L.prec).eps:
        raise PoleAtLatticePoint("wp(z) is a root of Q: C tau z lies on the lattice")
    wp_cm = _horner(pq.p, x) / qx
    rhs2 = cm.A * cm.C * base.zeta - kappa * alpha * zr + y * _horner_d(pq.q, x) / (2 * qx)
    zeta_cm = rhs2 / alpha
    lhs3 = target.sigma**2
    rhs3 = alpha**2 * base.sigma ** (2 * cm.A * cm.C) * ctx.exp(-kappa * alpha * zr * zr) * qx
    return CMMultiplyValues(
        _big(wp_cm, L), _big(zeta_cm, L), _rel(lhs3 - rhs3, lhs3),
        _rel(wp_cm - target.wp, target.wp), _rel(alpha * target.zeta - rhs2, rhs2),
    )


# ---------------------------------------------------------------------- Xi


@dataclass(frozen=True)
class XiValues:
    beta1: BigComplex
    beta2: BigComplex
    xi_value: BigComplex
    is_constant: bool


def _is_zero_invariant(L: Lattice, exact, value) -> bool:
    if exact is not None:
        return exact == 0
    return abs(value.value) < Tolerance.for_prec(L.prec).eps


def _as_alpha(alpha) -> EndomorphismElement:
    if isinstance(alpha, EndomorphismElement):
        return alpha
    if isinstance(alpha, tuple):
        return EndomorphismElement(*alpha)
    return EndomorphismElement(Fraction(alpha))


def xi_constant(alpha: EndomorphismElement, L: Lattice, cm: Optional[CMData] = None) -> bool:
    """Whether Xi_alpha is constant: alpha = +-1, alpha^4 = 1 with g3 = 0, or alpha^6 = 1 with g2 = 0."""
    if alpha.r2 == 0:
        return abs(alpha.r1) == 1
    A, B, C = cm.A, cm.B, cm.C
    if alpha.power(4, A, B, C) == (1, 0) and _is_zero_invariant(L, L.g3_exact, L.g3):
        return True
    if alpha.power(6, A, B, C) == (1, 0) and _is_zero_invariant(L, L.g2_exact, L.g2):
        return True
    return False


def xi(z, alpha, L: Lattice, cm: Optional[CMData] = None) -> XiValues:
    """Xi_alpha(z) = zeta(alpha z) - beta1 zeta(z) - beta2 z with the CM coefficients beta1, beta2."""
    alpha = _as_alpha(alpha)
    k = L.kernel()
    ctx = k.ctx
    zr = _zr(L, z)
    tau = k.user_w2 / k.user_w1
    r1 = ctx.mpf(alpha.r1.numerator) / alpha.r1.denominator
    r2 = ctx.mpf(alpha.r2.numerator) / alpha.r2.denominator
    if alpha.r2 != 0:
        cm = _cm(L, cm)
        beta1 = r1 + cm.A / (cm.C * tau) * r2
        beta2 = -_kappa(k, cm) * r2 / cm.C
    else:
        beta1 = ctx.mpc(r1)
        beta2 = ctx.mpc(0)
    a = r1 + r2 * tau
    za = raw_values(L, a * zr)
    base = raw_values(L, zr)
    value = za.zeta - beta1 * base.zeta - beta2 * zr
    return XiValues(_big(beta1, L), _big(beta2, L), _big(value, L), xi_constant(alpha, L, cm))


# ------------------------------------------------------- elliptic logarithm


def elliptic_log(x, L: Lattice) -> BigComplex:
    """Some u with wp(u) = x, from Carlson's R_F and a Newton polish.

    u is determined up to sign and periods.  Raises PoleAtLatticePoint when x is
    a half-period value, where wp' vanishes and the inverse is not locally unique.
    """
    k = L.kernel()
    ctx = k.ctx
    xr = rounded(ctx, x.value) if isinstance(x, BigComplex) else to_mpc(x, ctx)
    g2, g3 = _invariants(L, ctx)
    sc = scratch_context(ctx.prec)
    roots = [rounded(ctx, r) for r in sc.polyroots([4, 0, -g2, -g3], maxsteps=200, extraprec=ctx.prec)]
    u = rounded(ctx, sc.elliprf(*(xr - e for e in roots)))
    tol = Tolerance.for_prec(L.prec).eps
    for _ in range(8):
        r = raw_values(L, u)
        if abs(r.wpp) < tol * max(1, abs(r.wp)):
            raise PoleAtLatticePoint("wp' vanishes at the requested value")
        step = (r.wp - xr) / r.wpp
        u = u - step
        if abs(step) < ctx.ldexp(1, -ctx.prec + 8) * max(1, abs(u)):
            break
    if _rel(raw_values(L, u).wp - xr, xr) > tol:
        raise InterpolationFailure("elliptic logarithm did not converge")
    return _big(u, L)
