"""Acceptance gate: thirteen criteria at their stated sample counts and tolerances.

Each test prints one line ``criterion NN PASS|FAIL: <detail>``.  Run with
``pytest tests/test_acceptance.py -v`` (or ``python tests/test_acceptance.py``).
"""

from __future__ import annotations

import random
import time
from functools import lru_cache

import mpmath
import pytest
import sympy

from semielliptic import (
    BigComplex,
    conjecture_bound,
    detect_cm,
    division_value,
    integer_relation,
    lattice_from_invariants,
    lattice_from_periods,
    torsion_values,
)
from semielliptic import groupexp as G
from semielliptic import weierstrass as W
from semielliptic.errors import DegenerateAddition
from semielliptic.numeric import context, pi_times_2i
from semielliptic.verify import MULTIPLIERS, kappa_residual, random_lattice, random_point
from semielliptic.weierstrass import EndomorphismElement

TWO = mpmath.mpf(2)
TOL128 = TWO**-128
TOL100 = TWO**-100
SEED = 20250101


@pytest.fixture
def report(capsys):
    def emit(number: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\ncriterion {number:02d} {'PASS' if ok else 'FAIL'}: {detail}")

    return emit


def worst(values):
    return max(values) if values else mpmath.mpf(0)


def fmt(x) -> str:
    return mpmath.nstr(x, 3) if x else "0"


def log2(x) -> str:
    return f"2^{float(mpmath.log(x, 2)):.0f}" if x else "0"


# ------------------------------------------------ criteria 1-4 at any precision


@lru_cache(maxsize=None)
def legendre_residuals(prec: int):
    rng = random.Random(f"{SEED}:legendre")
    start = time.perf_counter()
    res = [random_lattice(rng, prec).legendre_residual() for _ in range(50)]
    return worst(res), time.perf_counter() - start


@lru_cache(maxsize=None)
def shared_lattices(prec: int):
    rng = random.Random(f"{SEED}:lattices")
    return tuple(random_lattice(rng, prec) for _ in range(3))


@lru_cache(maxsize=None)
def periodicity_residuals(prec: int):
    rng = random.Random(f"{SEED}:periodicity")
    rows, minus = [[], [], []], 0
    for L in shared_lattices(prec):
        for k in range(25):
            z = random_point(rng, L)
            a, b = rng.randint(-5, 5), rng.randint(-5, 5)
            if k < 5:
                a, b = 2 * a + 1, 2 * b + 1      # both odd: eps = -1
            if (a, b) == (0, 0):
                a = 1
            minus += W.quasi_period_sign(a, b) == -1
            for row, r in zip(rows, W.periodicity_residuals(z, a, b, L)):
                row.append(r)
    return tuple(worst(r) for r in rows), minus


@lru_cache(maxsize=None)
def addition_residuals(prec: int):
    rng = random.Random(f"{SEED}:addition")
    rows = [[], [], []]
    for L in shared_lattices(prec):
        for _ in range(25):
            v = W.addition_values(random_point(rng, L), random_point(rng, L), L)
            for row, r in zip(rows, (v.wp_residual, v.zeta_residual, v.sigma_residual)):
                row.append(r)
    return tuple(worst(r) for r in rows)


@lru_cache(maxsize=None)
def multiplication_residuals(prec: int):
    rng = random.Random(f"{SEED}:multiplication")
    L = shared_lattices(prec)[0]
    out = {}
    for n, m in MULTIPLIERS:
        rows = [[], [], []]
        for _ in range(10):
            v = W.rational_multiply(random_point(rng, L), (n, m), L)
            for row, r in zip(rows, (v.wp_residual, v.zeta_residual, v.sigma_pow_residual)):
                row.append(r)
        out[(n, m)] = tuple(worst(r) for r in rows)
    f21 = []
    for _ in range(10):
        z = random_point(rng, L)
        f, d = W.f_nm(z, (2, 1), L).value, W.wp_prime(z, L).value
        f21.append(abs(f + d) / max(1, abs(d)))
    return out, worst(f21)


def criteria_1_to_4(prec: int) -> dict[str, object]:
    out = {"legendre": legendre_residuals(prec)[0]}
    for name, r in zip(("periodicity wp", "periodicity zeta", "periodicity sigma"), periodicity_residuals(prec)[0]):
        out[name] = r
    for name, r in zip(("addition wp", "addition zeta", "addition sigma"), addition_residuals(prec)):
        out[name] = r
    table, f21 = multiplication_residuals(prec)
    for (n, m), rows in table.items():
        for name, r in zip(("wp", "zeta", "sigma"), rows):
            out[f"multiply {n}/{m} {name}"] = r
    out["f21 = -wp'"] = f21
    return out


# ------------------------------------------------------------------ criteria


def test_criterion_01_legendre(report):
    res, seconds = legendre_residuals(256)
    ok = res < TOL128 and seconds < 60
    report(1, ok, f"Legendre on 50 lattices, max residual {fmt(res)} ({log2(res)}), {seconds:.2f} s")
    assert ok


def test_criterion_02_periodicity(report):
    rows, minus = periodicity_residuals(256)
    ok = all(r < TOL128 for r in rows) and minus > 0
    report(2, ok, f"75 shifts ({minus} with eps = -1), max residuals wp {fmt(rows[0])}, "
                  f"zeta {fmt(rows[1])}, sigma {fmt(rows[2])}")
    assert ok


def test_criterion_03_addition(report):
    rows = addition_residuals(256)
    L = shared_lattices(256)[0]
    z = random_point(random.Random(1), L)
    try:
        W.addition_values(z, -z, L)
        degenerate = False
    except DegenerateAddition:
        degenerate = True
    ok = all(r < TOL128 for r in rows) and degenerate
    report(3, ok, f"75 pairs, max residuals {', '.join(fmt(r) for r in rows)}; (z, -z) raises: {degenerate}")
    assert ok


def test_criterion_04_multiplication(report):
    table, f21 = multiplication_residuals(256)
    top = worst([r for rows in table.values() for r in rows])
    ok = top < TOL100 and f21 < TOL100
    report(4, ok, f"n/m in {{2, 3, -2, 1/2, 2/3, 5/3}} at 10 z, max residual {fmt(top)}; f_21 + wp' max {fmt(f21)}")
    assert ok


def test_criterion_05_sigma_quotient_facts(report):
    rng = random.Random(f"{SEED}:fnm")
    res = []
    for L in shared_lattices(256):
        for _ in range(4):
            z = random_point(rng, L)
            for m in (1, 2, 3, 5):
                res.append(abs(W.f_nm(z, (0, m), L).value))
                res.append(abs(W.f_nm(z, (m, m), L).value - 1))
                res.append(abs(W.f_nm(z, (-m, m), L).value - (-1) ** m))
            for n, m in ((2, 1), (3, 1), (1, 2), (2, 3), (5, 3)):
                f = W.f_nm(z, (n, m), L).value
                res.append(abs(W.f_nm(z, (-n, m), L).value - (-1) ** m * f) / max(1, abs(f)))
                for shift in ((1, 0), (0, 1), (1, -2)):
                    res.append(W.f_nm_periodicity_residual(z, (n, m), L, shift))
    top = worst(res)
    ok = top < TOL128
    report(5, ok, f"{len(res)} checks of f_(0,m), f_(m,m), f_(-m,m), f_(-n,m) and m*Omega periodicity, max {fmt(top)}")
    assert ok


def test_criterion_06_complex_multiplication(report):
    rng = random.Random(f"{SEED}:cm")
    held, rows, kap = [], [], []
    kappa_square = None
    for g2, g3 in ((4, 0), (0, 4)):
        L = lattice_from_invariants(g2, g3, 256)
        cm = detect_cm(L)
        held.append(W.cm_polynomials(L, cm).held_out_residual)
        for _ in range(10):
            v = W.cm_multiply(random_point(rng, L), L, cm)
            rows += [v.wp_residual, v.zeta_residual, v.sigma_cm_residual]
        kap.append(kappa_residual(L, cm))
        if (g2, g3) == (4, 0):
            kappa_square = abs(cm.kappa.value)
    ok = worst(held) < TOL100 and worst(rows) < TOL100 and kappa_square < TOL128 and worst(kap) < TOL128
    report(6, ok, f"held-out {fmt(worst(held))}, rows {fmt(worst(rows))}, |kappa| on (4,0) {fmt(kappa_square)}, "
                  f"kappa relation {fmt(worst(kap))}")
    assert ok


def test_criterion_07_automorphisms(report):
    rng = random.Random(f"{SEED}:auto")
    ctx = context(256)
    res = []
    for (g2, g3), unit, kw, kz in (((4, 0), ctx.mpc(0, 1), 2, 3), ((0, 4), ctx.expjpi(ctx.mpf(1) / 3), 4, 5)):
        L = lattice_from_invariants(g2, g3, 256)
        u = BigComplex._wrap(unit, 256)
        for _ in range(10):
            z = random_point(rng, L)
            a, b = W.evaluate(u * z, L), W.evaluate(z, L)
            res.append(abs(a.wp.value - unit**kw * b.wp.value) / max(1, abs(a.wp.value)))
            res.append(abs(a.zeta.value - unit**kz * b.zeta.value) / max(1, abs(a.zeta.value)))
    top = worst(res)
    ok = top < TOL128
    report(7, ok, f"wp(iz) = -wp(z), zeta(iz) = -i zeta(z), and the zeta6 pair at 10 z each, max {fmt(top)}")
    assert ok


def _expected_constant(alpha, g2_zero: bool, g3_zero: bool) -> bool:
    near = lambda x: abs(x) < TWO**-100
    if near(alpha - 1) or near(alpha + 1):
        return True
    return (g3_zero and near(alpha**4 - 1)) or (g2_zero and near(alpha**6 - 1))


def test_criterion_08_xi_constancy(report):
    rng = random.Random(f"{SEED}:xi")
    mismatches, xi_zero, checked = [], [], 0
    for g2, g3 in ((1, 2), (4, 0), (0, 4)):
        L = lattice_from_invariants(g2, g3, 256)
        cm = detect_cm(L)
        k = L.kernel()
        tau = k.user_w2 / k.user_w1
        pairs = [(r1, 0) for r1 in (1, -1, 2, -2, 3)]
        if cm.is_cm:
            pairs += [(r1, r2) for r1 in range(-2, 3) for r2 in (-2, -1, 1, 2)]
        zs = [random_point(rng, L) for _ in range(2)]
        for r1, r2 in pairs:
            alpha = EndomorphismElement(r1, r2)
            want = _expected_constant(r1 + r2 * tau, g2 == 0, g3 == 0)
            values = [W.xi(z, alpha, L, cm) for z in zs]
            checked += 1
            if values[0].is_constant != want:
                mismatches.append((g2, g3, r1, r2))
            if want:
                xi_zero += [abs(v.xi_value.value) for v in values]
    L = lattice_from_invariants(1, 2, 256)
    z1, z2 = random_point(rng, L), random_point(rng, L)
    spread = abs(W.xi(z1, 2, L).xi_value.value - W.xi(z2, 2, L).xi_value.value)
    ok = not mismatches and worst(xi_zero) < TOL128 and spread > TWO**-10
    report(8, ok, f"{checked} multipliers on 3 lattices, {len(mismatches)} misclassified, "
                  f"max |xi| on constants {fmt(worst(xi_zero))}, alpha = 2 spread {fmt(spread)}")
    assert ok


def test_criterion_09_certificates(report):
    L = lattice_from_invariants(1, 2, 256)
    two = torsion_values(L, 2, 1, 0)
    x = two.wp_t.value
    cubic_res = abs(4 * x**3 - x - 2)
    X = sympy.Symbol("X")
    divides = sympy.rem(sympy.Poly(4 * X**3 - X - 2, X), sympy.Poly(two.wp_certificate.polynomial(), X)).is_zero
    v = W.evaluate(L.omega1 / 2, L)
    zeta_half = abs(v.zeta.value - L.eta1.value / 2)
    three = torsion_values(L, 3, 1, 0)
    square_three = torsion_values(lattice_from_invariants(4, 0, 256), 3, 0, 1)
    p = BigComplex("0.31+0.47j", 256)
    div = division_value(p, 2, L)
    ok = (
        cubic_res < TOL128 and divides and zeta_half < TOL128
        and three.wp_certificate.degree <= 4 and square_three.wp_certificate.degree <= 4
        and div.certificate.degree <= 4 and div.certificate.residual < TOL128
    )
    report(9, ok, f"wp(w1/2) cubic residual {fmt(cubic_res)}, certificate divides cubic: {divides}, "
                  f"zeta(w1/2) - eta1/2 = {fmt(zeta_half)}, 3-torsion degrees {three.wp_certificate.degree} and "
                  f"{square_three.wp_certificate.degree}, 2-division degree {div.certificate.degree}")
    assert ok


def test_criterion_10_relation_engine(report):
    rng = random.Random(f"{SEED}:planted")
    ctx = context(512)
    recovered = 0
    for _ in range(100):
        xs = [ctx.mpf(rng.getrandbits(512)) / TWO**512 for _ in range(7)]
        while True:
            coeffs = [rng.randint(-1000, 1000) for _ in range(8)]
            if coeffs[7] != 0 and sympy.igcd(*coeffs) == 1:
                break
        x8 = -sum(c * x for c, x in zip(coeffs, xs)) / coeffs[7]
        values = [BigComplex._wrap(x, 512) for x in xs + [x8]]
        rel = integer_relation(values, 10**3, prec=512)
        if rel is not None and rel.coefficients in (tuple(coeffs), tuple(-c for c in coeffs)):
            recovered += 1
    L = lattice_from_periods(BigComplex("1", 512), BigComplex("0.3+1.1j", 512), 512)
    leg = integer_relation([L.omega2 * L.eta1, L.omega1 * L.eta2, pi_times_2i(512)], 10**6)
    legendre = leg is not None and leg.coefficients == (1, -1, -1)
    ok = recovered == 100 and legendre
    report(10, ok, f"{recovered}/100 planted 8-term relations recovered; Legendre as (1, -1, -1): {legendre}")
    assert ok


def test_criterion_11_case_taxonomy(report):
    prec = 512
    L = lattice_from_invariants(1, 2, prec)
    t_exc, t_gen = pi_times_2i(prec), BigComplex(1, prec)
    p = BigComplex("0.7313+0.2j", prec)
    h1, h2 = L.omega1 / 2, L.omega2 / 2
    cases = {
        ("T", "P"): ([t_exc], [h1, h2]),
        ("T*", "P"): ([t_gen], [h1, h2]),
        ("T", "P~"): ([t_exc], [h1, p]),
        ("T*", "P~"): ([t_gen], [h1, p]),
        ("T", "P*"): ([t_exc], [p]),
        ("T*", "P*"): ([t_gen], [p]),
    }
    hand = {
        ("T", "P"): lambda s, n, d: s + 2 * n - 1,
        ("T*", "P"): lambda s, n, d: s + 2 * n,
        ("T", "P~"): lambda s, n, d: s + 2 * n + 1,
        ("T*", "P~"): lambda s, n, d: s + 2 * n + 2,
        ("T", "P*"): lambda s, n, d: s + 4 // d - 1 + 2 * n,
        ("T*", "P*"): lambda s, n, d: s + 4 // d + 2 * n,
    }
    bad = []
    for tags, (ts, ps) in cases.items():
        r = conjecture_bound(ts, ps, L)
        conj21 = r.s + 2 * r.n - (1 if tags == ("T", "P") else 0)
        if (r.t_case, r.p_case) != tags or r.bound_etc != hand[tags](r.s, r.n, r.field_degree) \
                or r.bound_conj21 != conj21 or r.exceptional != (tags == ("T", "P")):
            bad.append(tags)
    sq = lattice_from_invariants(4, 0, prec)
    q = BigComplex("0.41-0.23j", prec)
    special = [
        conjecture_bound([], [p], L).bound_conj21 == 2,
        conjecture_bound([t_gen], [p], L).bound_conj21 == 3,
        conjecture_bound([pi_times_2i(prec)], [sq.omega1 / 2], sq).bound_conj21 == 2,
        conjecture_bound([], [p, q], L).bound_conj21 == 4,
    ]
    ok = not bad and all(special)
    report(11, ok, f"six case tags and bounds, mismatches {bad or 'none'}; two- and three-number specializations 2, 3, "
                   f"CM exception 2, 4: {special}")
    assert ok


def test_criterion_12_group_exponential(report):
    rng = random.Random(f"{SEED}:groupexp")
    L = shared_lattices(256)[1]
    neutral, curve = [], []
    for _ in range(20):
        a = rng.randint(-9, 9)
        omega = rng.randint(-6, 6) * L.omega1 + rng.randint(-6, 6) * L.omega2
        g = G.exp_gtilde(*G.kernel_point(a, omega, L), L)
        neutral.append(g.neutral_residual())
        curve.append(G.curve_residual(g.projective, L))
    for _ in range(20):
        g = G.exp_gtilde(rng.random(), rng.random(), rng.random(), random_point(rng, L), L)
        curve.append(G.curve_residual(g.projective, L))
        e = G.exp_gm_e(rng.random(), random_point(rng, L), L)
        curve.append(G.curve_residual(e.projective, L))
    for m in (2, 3, 5):
        g = G.exp_gtilde(*G.torsion_point(1, m, L.omega1 + L.omega2, L), L)
        curve.append(G.curve_residual(g.projective, L))
    ok = worst(neutral) < TOL100 and worst(curve) < TOL100
    report(12, ok, f"20 kernel points, max neutral residual {fmt(worst(neutral))}; {len(curve)} curve points, "
                   f"max curve residual {fmt(worst(curve))}")
    assert ok


def test_criterion_13_precision_scaling(report):
    low, high = criteria_1_to_4(256), criteria_1_to_4(512)
    shortfalls = []
    least = None
    for name, r_low in low.items():
        r_high = high[name]
        if r_low == 0:
            good = r_high == 0
            factor = None
        else:
            factor = r_low / r_high if r_high else mpmath.inf
            good = factor >= TWO**100
            least = factor if least is None else min(least, factor)
        if not good:
            shortfalls.append(name)
    ok = not shortfalls
    report(13, ok, f"{len(low)} max residuals rerun at 512 bits, smallest shrink factor {log2(least)}, "
                   f"shortfalls {shortfalls or 'none'}")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
