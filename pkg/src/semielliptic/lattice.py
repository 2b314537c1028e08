"""Period lattices: construction, invariants, quasi-periods and CM data.

A :class:`Lattice` reports a user-facing basis (omega1, omega2) with
Im(omega2/omega1) > 0.  Internally every evaluation uses a reduced basis
whose period ratio lies in the standard fundamental domain
(|Re tau| <= 1/2, |tau| >= 1), so the theta series converge geometrically
with ratio at most exp(-pi*sqrt(3)/2).  The integer change of basis between
the two is kept exactly.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import sympy

from ._theta import theta1_derivatives, theta_nulls
from .errors import (
    DegenerateLattice,
    InsufficientPrecision,
    PrecisionLoss,
    SingularCurve,
)
from .intrel import relation_candidates, normalize, check_budget
from .numeric import (
    DEFAULT_PREC,
    GUARD_BITS,
    BigComplex,
    Tolerance,
    context,
    rounded,
    scratch_context,
    to_mpc,
)

LATTICE_GUARD = 64
MAX_REDUCTION_STEPS = 10_000


@dataclass(frozen=True)
class Kernel:
    """Working-precision data of the reduced basis (raw mpmath numbers)."""

    wprec: int
    w1: object            # reduced periods
    w2: object
    tau: object
    q: object             # exp(i pi tau)
    q14: object           # exp(i pi tau / 4)
    dtheta1: object       # theta_1'(0)
    eta1: object          # quasi-periods of the reduced basis
    eta2: object
    g2: object
    g3: object
    user_w1: object       # reported basis at working precision
    user_w2: object
    user_eta1: object
    user_eta2: object
    matrix: tuple         # reduced = matrix * reported

    @property
    def ctx(self):
        return context(self.wprec)

    def thetas(self, z0):
        ctx = self.ctx
        v = ctx.pi * rounded(ctx, z0) / self.w1
        return theta1_derivatives(ctx, v, self.q, self.q14, self.wprec)

    def coordinates(self, z):
        """Real coordinates (x, y) with z = x*w1 + y*w2 in the reduced basis."""
        ctx = self.ctx
        r = rounded(ctx, z) / self.w1
        y = r.imag / self.tau.imag
        x = r.real - y * self.tau.real
        return x, y

    def reduce(self, z):
        """Split z = z0 + a*w1 + b*w2 with z0 in the centred cell; returns (z0, a, b)."""
        ctx = self.ctx
        z = rounded(ctx, z)
        x, y = self.coordinates(z)
        a = int(ctx.floor(x + ctx.mpf(0.5)))
        b = int(ctx.floor(y + ctx.mpf(0.5)))
        return z - a * self.w1 - b * self.w2, a, b


@dataclass(frozen=True)
class Lattice:
    """Period lattice Z*omega1 + Z*omega2 with its invariants and quasi-periods."""

    omega1: BigComplex
    omega2: BigComplex
    tau: BigComplex
    g2: BigComplex
    g3: BigComplex
    eta1: BigComplex
    eta2: BigComplex
    prec: int
    g2_exact: Optional[Fraction] = None
    g3_exact: Optional[Fraction] = None
    reduction: tuple = ((1, 0), (0, 1))
    orientation_flipped: bool = False
    _source: tuple = field(default=(), repr=False, compare=False)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)
    _lock: object = field(default_factory=threading.Lock, repr=False, compare=False)

    def kernel(self, wprec: int | None = None) -> Kernel:
        """Working-precision data, computed once per precision."""
        wprec = self.prec + LATTICE_GUARD if wprec is None else max(int(wprec), self.prec + LATTICE_GUARD)
        wprec = -(-wprec // 32) * 32
        return self.cached(("kernel", wprec), lambda: self._make_kernel(wprec))

    def cached(self, key, factory):
        """Single-assignment cache: the first completed value for ``key`` wins."""
        cache = self._cache
        if key in cache:
            return cache[key]
        value = factory()
        with self._lock:
            return cache.setdefault(key, value)

    def _make_kernel(self, wprec: int) -> Kernel:
        kind = self._source[0]
        if kind == "periods" or wprec <= self._source[3]:
            w1, w2 = self._source[1:3] if kind == "periods" else self._source[4:6]
        else:
            w1, w2 = _realign(self, wprec)
        return _build_kernel(w1, w2, wprec)

    @property
    def is_exact(self) -> bool:
        return self.g2_exact is not None and self.g3_exact is not None

    @property
    def discriminant(self) -> BigComplex:
        return self.g2**3 - 27 * self.g3**2

    def legendre_residual(self):
        """|omega2*eta1 - omega1*eta2 - 2*pi*i| at the lattice precision."""
        k = self.kernel()
        ctx = k.ctx
        return abs(k.user_w2 * k.user_eta1 - k.user_w1 * k.user_eta2 - ctx.mpc(0, 2 * ctx.pi))

    def to_json(self, cm: "CMData | None" = None) -> dict:
        out = {
            "precision": self.prec,
            "omega1": self.omega1.to_json_value(),
            "omega2": self.omega2.to_json_value(),
            "tau": self.tau.to_json_value(),
            "g2": self.g2.to_json_value(),
            "g3": self.g3.to_json_value(),
            "eta1": self.eta1.to_json_value(),
            "eta2": self.eta2.to_json_value(),
        }
        if self.is_exact:
            out["g2_exact"] = str(self.g2_exact)
            out["g3_exact"] = str(self.g3_exact)
        if cm is not None:
            out["cm"] = cm.to_json()
        return out

    @classmethod
    def from_json(cls, payload: dict, prec: int | None = None) -> "Lattice":
        """Rebuild from :meth:`to_json` output."""
        p = int(prec or payload.get("precision", DEFAULT_PREC))
        if "g2_exact" in payload and "g3_exact" in payload:
            # exact invariants determine the same canonical basis at any precision
            return lattice_from_invariants(Fraction(payload["g2_exact"]), Fraction(payload["g3_exact"]), p)
        w1 = BigComplex.from_json_value(payload["omega1"], p)
        w2 = BigComplex.from_json_value(payload["omega2"], p)
        return lattice_from_periods(w1, w2, p)


def _build_kernel(w1, w2, wprec: int) -> Kernel:
    ctx = context(wprec)
    w1, w2 = rounded(ctx, w1), rounded(ctx, w2)
    tau = w2 / w1
    if abs(tau.imag) <= ctx.ldexp(abs(tau), -(wprec // 2)):
        raise DegenerateLattice("omega2/omega1 is real")
    uw1, uw2 = w1, w2
    # fundamental-domain reduction, tracking (r1, r2) = M (w1, w2)
    m = [[1, 0], [0, 1]]
    half = ctx.mpf(0.5)
    for _ in range(MAX_REDUCTION_STEPS):
        n = int(ctx.nint(tau.real))
        if n:
            w2 = w2 - n * w1
            m[1] = [m[1][0] - n * m[0][0], m[1][1] - n * m[0][1]]
            tau = w2 / w1
        if abs(tau) < 1 - ctx.ldexp(1, -wprec // 2):
            w1, w2 = w2, -w1
            m = [m[1], [-m[0][0], -m[0][1]]]
            tau = w2 / w1
            continue
        if abs(tau.real) <= half:
            break
    else:
        raise PrecisionLoss("period ratio reduction did not terminate")
    ipt = ctx.mpc(0, ctx.pi) * tau
    q = ctx.exp(ipt)
    q14 = ctx.exp(ipt / 4)
    d = theta1_derivatives(ctx, ctx.zero, q, q14, wprec)
    d1, d3 = d[1], d[3]
    eta1 = -(ctx.pi**2 / (3 * w1)) * d3 / d1
    # eta2 = 2*zeta(w2/2) from the in-cell theta formula
    t = theta1_derivatives(ctx, ctx.pi * tau / 2, q, q14, wprec)
    eta2 = eta1 * tau + 2 * (ctx.pi / w1) * t[1] / t[0]
    th2, th3, th4 = theta_nulls(ctx, q, q14, wprec)
    p = ctx.pi**2 / (3 * w1 * w1)
    e1 = p * (th3**4 + th4**4)
    e2 = p * (th2**4 - th4**4)
    e3 = -p * (th2**4 + th3**4)
    g2 = 2 * (e1 * e1 + e2 * e2 + e3 * e3)
    g3 = 4 * e1 * e2 * e3
    # reported basis = inverse(M) * reduced; M is unimodular with det 1
    (a, b), (c, dd) = m
    ue1 = dd * eta1 - b * eta2
    ue2 = -c * eta1 + a * eta2
    return Kernel(
        wprec=wprec, w1=w1, w2=w2, tau=tau, q=q, q14=q14, dtheta1=d1,
        eta1=eta1, eta2=eta2, g2=g2, g3=g3, user_w1=uw1, user_w2=uw2,
        user_eta1=ue1, user_eta2=ue2, matrix=((a, b), (c, dd)),
    )


def _to_big(x, prec: int) -> BigComplex:
    return x if isinstance(x, BigComplex) else BigComplex(x, prec)


def _exact_rational(x) -> Optional[Fraction]:
    if isinstance(x, bool):
        return None
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError:
            return None
    return None


def _finish(w1, w2, wprec, prec, source, exact=None, flipped=False) -> Lattice:
    k = _build_kernel(w1, w2, wprec)
    big = lambda v: BigComplex._wrap(v, prec)  # noqa: E731
    g2 = BigComplex(exact[0], prec) if exact else big(k.g2)
    g3 = BigComplex(exact[1], prec) if exact else big(k.g3)
    lat = Lattice(
        omega1=big(k.user_w1), omega2=big(k.user_w2), tau=big(k.user_w2 / k.user_w1),
        g2=g2, g3=g3, eta1=big(k.user_eta1), eta2=big(k.user_eta2), prec=prec,
        g2_exact=exact[0] if exact else None, g3_exact=exact[1] if exact else None,
        reduction=k.matrix, orientation_flipped=flipped, _source=source,
    )
    lat._cache[("kernel", wprec)] = k
    if lat.legendre_residual() >= Tolerance.for_prec(prec).eps:
        raise PrecisionLoss("Legendre relation check failed; increase precision")
    return lat


def lattice_from_periods(omega1, omega2, prec: int = DEFAULT_PREC, *, exact_invariants=None) -> Lattice:
    """Lattice with basis (omega1, omega2), negating omega2 if needed so Im(tau) > 0."""
    prec = int(prec)
    ctx = context(prec)
    w1 = to_mpc(omega1, ctx)
    w2 = to_mpc(omega2, ctx)
    if w1 == 0 or w2 == 0:
        raise DegenerateLattice("a period is zero")
    tau = w2 / w1
    if abs(tau.imag) < Tolerance.for_prec(prec).eps * abs(tau):
        raise DegenerateLattice("omega2/omega1 is real")
    flipped = tau.imag < 0
    if flipped:
        w2 = -w2
    wprec = -(-(prec + LATTICE_GUARD) // 32) * 32
    source = ("periods", w1, w2, prec)
    return _finish(w1, w2, wprec, prec, source, exact_invariants, flipped)


def _cut_distance(ctx, lam):
    # distance of lam to (-inf, 0] U [1, inf), the branch cuts of K(lam) and K(1 - lam)
    d0 = abs(lam.imag) if lam.real <= 0 else abs(lam)
    d1 = abs(lam.imag) if lam.real >= 1 else abs(lam - 1)
    return min(d0, d1)


def _periods_from_invariants(g2, g3, wprec: int):
    """A period basis for the cubic 4x^3 - g2 x - g3 (not yet oriented or reduced)."""
    sc = scratch_context(wprec + GUARD_BITS)
    roots = sc.polyroots([4, 0, -sc.mpc(g2), -sc.mpc(g3)], maxsteps=200, extraprec=2 * wprec)
    best = None
    for i, j, k in ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)):
        e1, e2, e3 = roots[i], roots[j], roots[k]
        lam = (e2 - e3) / (e1 - e3)
        # prefer labellings far from the cuts; among near-ties, a real positive e1 - e3
        key = (sc.nint(_cut_distance(sc, lam) * 2**20), (e1 - e3).real > 0, -abs((e1 - e3).imag))
        if best is None or key > best[0]:
            best = (key, e1, e3, lam)
    _, e1, e3, lam = best
    s = sc.sqrt(e1 - e3)
    w1 = 2 * sc.ellipk(lam) / s
    w2 = 2j * sc.ellipk(1 - lam) / s
    ctx = context(wprec)
    return rounded(ctx, w1), rounded(ctx, w2)


def _oriented(ctx, w1, w2):
    return (w1, -w2) if (w2 / w1).imag < 0 else (w1, w2)


def _canonical_basis(g2, g3, wprec: int):
    ctx = context(wprec)
    w1, w2 = _oriented(ctx, *_periods_from_invariants(g2, g3, wprec))
    k = _build_kernel(w1, w2, wprec)
    r1, r2 = k.w1, k.w2
    if r1.real < 0 or (r1.real == 0 and r1.imag < 0):
        r1, r2 = -r1, -r2
    return r1, r2


def _realign(lat: Lattice, wprec: int):
    """Recompute the reported basis at higher precision from the invariants."""
    ctx = context(wprec)
    g2 = lat.g2_exact if lat.g2_exact is not None else lat._source[1]
    g3 = lat.g3_exact if lat.g3_exact is not None else lat._source[2]
    r1, r2 = _canonical_basis(to_mpc(g2, ctx), to_mpc(g3, ctx), wprec)
    k = _build_kernel(r1, r2, wprec)
    out = []
    for w in (lat._source[4], lat._source[5]):
        x, y = k.coordinates(ctx.mpc(w))
        a, b = int(ctx.nint(x)), int(ctx.nint(y))
        out.append(a * r1 + b * r2)
    return out[0], out[1]


def lattice_from_invariants(g2, g3, prec: int = DEFAULT_PREC) -> Lattice:
    """Lattice of 4x^3 - g2 x - g3, reported in its reduced basis.

    Periods come from complete elliptic integrals of the first kind between
    the roots, with the root labelling chosen to keep the modulus away from
    the branch cuts.  The result is checked by recomputing g2, g3 from the
    periods; a mismatch raises :class:`PrecisionLoss`.
    """
    prec = int(prec)
    ex2, ex3 = _exact_rational(g2), _exact_rational(g3)
    exact = (ex2, ex3) if ex2 is not None and ex3 is not None else None
    wprec = -(-(prec + LATTICE_GUARD) // 32) * 32
    ctx = context(wprec)
    G2 = to_mpc(ex2 if ex2 is not None else g2, ctx)
    G3 = to_mpc(ex3 if ex3 is not None else g3, ctx)
    disc = G2**3 - 27 * G3**2
    eps = Tolerance.for_prec(prec).eps
    if abs(disc) < eps * max(1, abs(G2) ** 3, abs(G3) ** 2):
        raise SingularCurve("g2^3 = 27 g3^2: the cubic has a repeated root")
    w1, w2 = _canonical_basis(G2, G3, wprec)
    source = ("invariants", G2, G3, wprec, w1, w2)
    lat = _finish(w1, w2, wprec, prec, source, exact)
    k = lat.kernel(wprec)
    scale = max(1, abs(G2), abs(G3))
    if abs(k.g2 - G2) > eps * scale or abs(k.g3 - G3) > eps * scale:
        raise PrecisionLoss("period computation failed the invariant round trip")
    return lat


def eta_map(L: Lattice, a: int, b: int) -> BigComplex:
    """eta(a*omega1 + b*omega2) = a*eta1 + b*eta2."""
    k = L.kernel()
    return BigComplex._wrap(a * k.user_eta1 + b * k.user_eta2, L.prec)


# --------------------------------------------------------------------- CM


@dataclass(frozen=True)
class CMData:
    """Complex multiplication data: A + B*tau + C*tau^2 = 0 and kappa."""

    is_cm: bool
    A: int = 0
    B: int = 0
    C: int = 0
    kappa: Optional[BigComplex] = None
    field_disc: Optional[int] = None
    residual: object = None
    height_bound: int = 0
    prec: int = 0

    @property
    def norm_c_tau(self) -> int:
        """Degree of multiplication by C*tau, its norm A*C."""
        return self.A * self.C

    @property
    def field_degree(self) -> int:
        return 2 if self.is_cm else 1

    def to_json(self) -> dict:
        out = {"is_cm": self.is_cm, "height_bound": self.height_bound, "precision": self.prec}
        if self.is_cm:
            out.update(
                A=self.A, B=self.B, C=self.C, kappa=self.kappa.to_json_value(), field_disc=self.field_disc
            )
        return out


def fundamental_discriminant(disc: int) -> int:
    core = int(sympy.ntheory.factor_.core(abs(disc)))
    d = -core if disc < 0 else core
    return d if d % 4 == 1 else 4 * d


def detect_cm(L: Lattice, height_bound: int = 10**6) -> CMData:
    """Search for A + B*tau + C*tau^2 = 0 with coprime integers of height <= height_bound.

    A relation is accepted when its residual is below eps while the next
    best candidate stays above sqrt(eps).  A residual below eps without that
    separation is ambiguous and raises :class:`InsufficientPrecision`.
    ``is_cm = False`` is a bounded-search statement only.
    """
    if height_bound < 1:
        raise ValueError("height_bound must be >= 1")
    return L.cached(("cm", height_bound), lambda: _detect_cm(L, height_bound))


def _detect_cm(L: Lattice, height_bound: int) -> CMData:
    prec = L.prec
    check_budget(3, height_bound, prec, real=False)
    k = L.kernel()
    ctx = k.ctx
    tau = k.user_w2 / k.user_w1
    eps = Tolerance.for_prec(prec).eps
    cands = relation_candidates([ctx.mpc(1), tau, tau * tau], k.wprec)
    scale = max(1, abs(tau) ** 2)
    best, second = cands[0], cands[1]
    res = best.residual / scale
    separated = second.effective / scale > ctx.sqrt(eps)
    height = max(abs(c) for c in best.coefficients)
    if height <= height_bound and res < eps and (res < eps * eps or separated):
        if not separated:
            raise InsufficientPrecision("CM relation candidates are not separated at this precision")
        A, B, C = normalize(best.coefficients)
        if C < 0:
            A, B, C = -A, -B, -C
        if C == 0:
            raise DegenerateLattice("tau satisfies a linear relation; the lattice is degenerate")
        kappa = (A * k.user_eta1 - C * tau * k.user_eta2) / k.user_w2
        return CMData(
            True, A, B, C, BigComplex._wrap(kappa, prec), fundamental_discriminant(B * B - 4 * A * C),
            residual=res, height_bound=height_bound, prec=prec,
        )
    return CMData(False, residual=res, height_bound=height_bound, prec=prec)


def lattice_from_tau(tau, prec: int = DEFAULT_PREC) -> Lattice:
    """Convenience: the lattice Z + Z*tau."""
    return lattice_from_periods(1, tau, prec)
