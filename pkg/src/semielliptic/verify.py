"""Identity-check suites behind the ``verify`` command.

Each suite evaluates both sides of a family of identities at seeded random
points and reports the largest residual per identity against the tolerance
2^(-prec/2).
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

from .divpoly import minimal_polynomial_probe
from .errors import CertificateNotFound, NotCM
from .lattice import CMData, Lattice, detect_cm, lattice_from_invariants, lattice_from_periods
from .numeric import BigComplex, Tolerance, context, scratch_context, to_decimal
from .weierstrass import (
    _rel,
    addition_values,
    cm_multiply,
    cm_polynomials,
    evaluate,
    f_nm,
    periodicity_residuals,
    rational_multiply,
    raw_values,
)

SUITES = ("cm", "legendre", "periodicity", "table1", "table2", "table3")
MULTIPLIERS = ((2, 1), (3, 1), (-2, 1), (1, 2), (2, 3), (5, 3))
CM_INVARIANTS = ((4, 0), (0, 4))


@dataclass(frozen=True)
class Check:
    identity: str
    max_residual: object
    threshold: object
    samples: int

    @property
    def passed(self) -> bool:
        return self.max_residual < self.threshold

    def to_json(self) -> dict:
        return {
            "identity": self.identity,
            "max_residual": to_decimal(self.max_residual, 64),
            "threshold": to_decimal(self.threshold, 64),
            "samples": self.samples,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class SuiteResult:
    name: str
    checks: tuple[Check, ...]
    note: str = ""

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        out = {"suite": self.name, "pass": self.passed, "checks": [c.to_json() for c in self.checks]}
        if self.note:
            out["note"] = self.note
        return out


# ---------------------------------------------------------------- sampling


def random_lattice(rng: random.Random, prec: int) -> Lattice:
    """omega1 = r e^(i theta), tau in a box above the real axis."""
    ctx = context(prec)
    r = ctx.mpf(0.5) + 1.5 * ctx.mpf(rng.random())
    theta = 2 * ctx.pi * ctx.mpf(rng.random())
    tau = ctx.mpc(rng.random() - 0.5, 0.8 + 1.2 * rng.random())
    w1 = r * ctx.expjpi(theta / ctx.pi)
    return lattice_from_periods(BigComplex._wrap(w1, prec), BigComplex._wrap(w1 * tau, prec), prec)


def random_point(rng: random.Random, L: Lattice, spread: float = 0.5) -> BigComplex:
    """u*omega1 + v*omega2 with u, v uniform in [-spread, spread], kept away from the lattice."""
    k = L.kernel()
    ctx = k.ctx
    while True:
        u = ctx.mpf(rng.uniform(-spread, spread))
        v = ctx.mpf(rng.uniform(-spread, spread))
        z = u * k.user_w1 + v * k.user_w2
        z0, _, _ = k.reduce(z)
        if abs(z0) > abs(k.w1) / 16:
            return BigComplex._wrap(z, L.prec)


def _check(name: str, residuals, prec: int) -> Check:
    residuals = list(residuals)
    return Check(name, max(residuals), Tolerance.for_prec(prec).eps, len(residuals))


# ------------------------------------------------------------------ suites


def legendre_suite(lattices, prec: int, rng, samples: int) -> SuiteResult:
    res = [L.legendre_residual() for L in lattices]
    return SuiteResult("legendre", (_check("omega2*eta1 - omega1*eta2 = 2*pi*i", res, prec),))


def periodicity_suite(lattices, prec: int, rng, samples: int) -> SuiteResult:
    rows = [[], [], []]
    for L in lattices:
        for _ in range(samples):
            z = random_point(rng, L)
            a, b = rng.randint(-6, 6), rng.randint(-6, 6)
            for row, r in zip(rows, periodicity_residuals(z, a, b, L)):
                row.append(r)
    names = ("wp(z+w) = wp(z)", "zeta(z+w) = zeta(z) + eta(w)", "sigma(z+w) = eps(w) exp(eta(w)(z+w/2)) sigma(z)")
    return SuiteResult("periodicity", tuple(_check(n, r, prec) for n, r in zip(names, rows)))


def table1_suite(lattices, prec: int, rng, samples: int) -> SuiteResult:
    rows = [[], [], []]
    for L in lattices:
        for _ in range(samples):
            z1, z2 = random_point(rng, L), random_point(rng, L)
            v = addition_values(z1, z2, L)
            for row, r in zip(rows, (v.wp_residual, v.zeta_residual, v.sigma_residual)):
                row.append(r)
    names = (
        "wp(z1+z2) = ((wp'(z1)-wp'(z2))/(wp(z1)-wp(z2)))^2/4 - wp(z1) - wp(z2)",
        "zeta(z1+z2) - zeta(z1) - zeta(z2) = (wp'(z1)-wp'(z2))/(2(wp(z1)-wp(z2)))",
        "sigma(z1+z2) sigma(z1-z2) / (sigma(z1)^2 sigma(z2)^2) = wp(z2) - wp(z1)",
    )
    return SuiteResult("table1", tuple(_check(n, r, prec) for n, r in zip(names, rows)))


def table2_suite(lattices, prec: int, rng, samples: int) -> SuiteResult:
    checks = []
    for n, m in MULTIPLIERS:
        rows = [[], [], []]
        for L in lattices:
            for _ in range(samples):
                v = rational_multiply(random_point(rng, L), (n, m), L)
                for row, r in zip(rows, (v.wp_residual, v.zeta_residual, v.sigma_pow_residual)):
                    row.append(r)
        tag = f"{n}/{m}"
        checks += [
            _check(f"wp({tag} z) from f_{{{n},{m}}}", rows[0], prec),
            _check(f"zeta({tag} z) from f_{{{n},{m}}}", rows[1], prec),
            _check(f"sigma({tag} z)^{m * m} = sigma(z)^{n * n} f_{{{n},{m}}}(z)", rows[2], prec),
        ]
    res = []
    for L in lattices:
        for _ in range(samples):
            z = random_point(rng, L)
            res.append(_rel(f_nm(z, (2, 1), L).value + evaluate(z, L).wp_prime.value, 1))
    checks.append(_check("f_{2,1} = -wp'", res, prec))
    return SuiteResult("table2", tuple(checks))


def kappa_residual(L: Lattice, cm: CMData, degree: int = 4, height: int = 10**6):
    """|A eta1 - C tau eta2 - kappa omega2| with kappa replaced by the algebraic number it certifies as.

    The numerical kappa is matched to a root of its minimal polynomial over
    Q, recomputed from exact integers, so the residual tests the relation and
    not the formula that produced kappa.
    """
    k = L.kernel()
    ctx = k.ctx
    cert = minimal_polynomial_probe(cm.kappa, degree, height)
    if cert is None:
        raise CertificateNotFound("kappa has no small minimal polynomial at this budget")
    coeffs = [0] * (cert.degree + 1)
    for c, (e,) in cert.terms:
        coeffs[e] = c
    if cert.degree == 0 or all(c == 0 for c in coeffs[1:]):
        raise CertificateNotFound("degenerate kappa certificate")
    sc = scratch_context(k.wprec)
    top = max(i for i, c in enumerate(coeffs) if c)
    nz = min(i for i, c in enumerate(coeffs) if c)
    roots = [sc.mpc(0)] if nz else []
    if top > nz:
        roots += list(sc.polyroots(list(reversed(coeffs[nz: top + 1])), maxsteps=200, extraprec=k.wprec))
    kappa = min(roots, key=lambda r: abs(r - cm.kappa.value))
    tau = k.user_w2 / k.user_w1
    return abs(cm.A * k.user_eta1 - cm.C * tau * k.user_eta2 - ctx.mpc(kappa) * k.user_w2)


def _cm_lattices(prec: int, lattice: Optional[Lattice]):
    if lattice is not None:
        cm = detect_cm(lattice)
        return [(lattice, cm)] if cm.is_cm else []
    out = []
    for g2, g3 in CM_INVARIANTS:
        L = lattice_from_invariants(g2, g3, prec)
        out.append((L, detect_cm(L)))
    return out


def table3_suite(pairs, prec: int, rng, samples: int) -> SuiteResult:
    if not pairs:
        return SuiteResult("table3", (), note="lattice has no complex multiplication; nothing to check")
    held, rows = [], [[], [], []]
    for L, cm in pairs:
        held.append(cm_polynomials(L, cm).held_out_residual)
        for _ in range(samples):
            v = cm_multiply(random_point(rng, L), L, cm)
            for row, r in zip(rows, (v.wp_residual, v.zeta_residual, v.sigma_cm_residual)):
                row.append(r)
    return SuiteResult(
        "table3",
        (
            _check("P/Q reconstruction, held-out points", held, prec),
            _check("wp(C tau z) = P(wp(z))/Q(wp(z))", rows[0], prec),
            _check("C tau zeta(C tau z) = AC zeta(z) - kappa C tau z + wp'(z) Q'(wp(z))/(2Q(wp(z)))", rows[1], prec),
            _check("sigma(C tau z)^2 = (C tau)^2 sigma(z)^(2AC) exp(-kappa C tau z^2) Q(wp(z))", rows[2], prec),
        ),
    )


def cm_suite(pairs, prec: int, rng, samples: int) -> SuiteResult:
    if not pairs:
        return SuiteResult("cm", (), note="lattice has no complex multiplication; nothing to check")
    checks = [_check("A eta1 - C tau eta2 - kappa omega2 = 0 (kappa algebraic)", [kappa_residual(L, cm) for L, cm in pairs], prec)]
    for L, cm in pairs:
        ctx = L.kernel().ctx
        g2z = L.g2_exact == 0 if L.g2_exact is not None else abs(L.g2.value) < Tolerance.for_prec(prec).eps
        g3z = L.g3_exact == 0 if L.g3_exact is not None else abs(L.g3.value) < Tolerance.for_prec(prec).eps
        autos = []
        if g3z:
            autos.append((ctx.mpc(0, 1), 2, 3, "i"))
        if g2z:
            autos.append((ctx.expjpi(ctx.mpf(1) / 3), 4, 5, "zeta6"))
        for unit, kw, kz, name in autos:
            r_wp, r_zeta = [], []
            for _ in range(samples):
                z = random_point(rng, L).value
                a, b = raw_values(L, unit * z), raw_values(L, z)
                r_wp.append(_rel(a.wp - unit**kw * b.wp, a.wp))
                r_zeta.append(_rel(a.zeta - unit**kz * b.zeta, a.zeta))
            checks += [
                _check(f"wp({name} z) = {name}^{kw} wp(z)", r_wp, prec),
                _check(f"zeta({name} z) = {name}^{kz} zeta(z)", r_zeta, prec),
            ]
    return SuiteResult("cm", tuple(checks))


_SUITE_FUNCS: dict[str, Callable] = {
    "legendre": legendre_suite,
    "periodicity": periodicity_suite,
    "table1": table1_suite,
    "table2": table2_suite,
    "table3": table3_suite,
    "cm": cm_suite,
}


def run_suite(name: str, prec: int, seed: int, lattice: Optional[Lattice] = None,
              lattices: int = 3, samples: int = 5) -> SuiteResult:
    """One suite on ``lattice`` or on ``lattices`` seeded random lattices."""
    if name not in _SUITE_FUNCS:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    rng = random.Random(f"{seed}:{name}")
    if name in ("table3", "cm"):
        return _SUITE_FUNCS[name](_cm_lattices(prec, lattice), prec, rng, samples)
    pool = [lattice] if lattice is not None else [random_lattice(rng, prec) for _ in range(lattices)]
    return _SUITE_FUNCS[name](pool, prec, rng, samples)


def run_suites(names, prec: int, seed: int, lattice: Optional[Lattice] = None, **kw) -> list[SuiteResult]:
    """Run suites concurrently; results come back sorted by suite name."""
    names = sorted(set(names))
    with ThreadPoolExecutor(max_workers=len(names)) as pool:
        futures = {n: pool.submit(run_suite, n, prec, seed, lattice, **kw) for n in names}
        return [futures[n].result() for n in names]
