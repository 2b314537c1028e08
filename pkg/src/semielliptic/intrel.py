"""Integer relation search by progressive-precision LLL.

Given complex numbers x_1..x_N known to ``prec`` bits, look for a nonzero
integer vector c with sum c_j x_j = 0 at tolerance.  The numbers are first
quantized once to fixed-point Gaussian integers.  LLL then runs on the
rows [u_i | 2^K (U x)_i] for K = 64, 128, ... up to nearly the full
precision, where U is the unimodular transform found by the previous stage
(identity at the start).  Carrying U in the left block keeps the final
coefficients as short as a single full-precision reduction would, while
most of the work happens on small integers.

A result is a statement about a bounded search: "no relation" means none
of height <= the bound was visible at the working precision.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

from mpmath.libmp import mpf_shift, to_int

from ._lll import lll_reduce
from .errors import InsufficientPrecision
from .numeric import BigComplex, Tolerance, context, to_decimal

DEFAULT_HEIGHT = 10**6
DEFAULT_DEGREE = 8
DEFAULT_RELATION_PREC = 512
STAGE_BITS = 64
COMBO_LIMIT = 4


@dataclass(frozen=True)
class IntegerRelation:
    """Nonzero integer vector c with |sum c_j x_j| = residual."""

    coefficients: tuple[int, ...]
    residual: object
    height: int
    prec: int = 0

    def __post_init__(self):
        if not any(self.coefficients):
            raise ValueError("relation coefficients are all zero")

    def to_json(self) -> dict:
        return {
            "coeffs": [str(c) for c in self.coefficients],
            "residual": to_decimal(self.residual, 64),
            "height": self.height,
        }


@dataclass(frozen=True)
class Candidate:
    coefficients: tuple[int, ...]
    residual: object
    effective: object   # residual, floored at the resolution limit for this height


def _values(xs, prec: int | None):
    if prec is None:
        precs = [x.prec for x in xs if isinstance(x, BigComplex)]
        prec = min(precs) if precs else DEFAULT_RELATION_PREC
    ctx = context(prec)
    return [x.value if isinstance(x, BigComplex) else ctx.mpc(x) for x in xs], prec


def is_real_data(values) -> bool:
    return all(v.imag == 0 for v in values)


def required_bits(n_terms: int, height_bound: int, real: bool) -> float:
    """Heuristic precision (in bits of tolerance) an LLL search needs.

    A relation of height H among N numbers separates from spurious lattice
    vectors once the tolerance exponent exceeds roughly (N - r)/r * log2(2H),
    where r = 1 for real and 2 for complex data; 16 bits of margin are added.
    """
    r = 1 if real else 2
    return max(n_terms - r, 0) / r * math.log2(2 * height_bound) + 16


def check_budget(n_terms: int, height_bound: int, prec: int, real: bool) -> None:
    need = required_bits(n_terms, height_bound, real)
    if need > prec / 2:
        raise InsufficientPrecision(
            f"relation search over {n_terms} numbers at height {height_bound} needs about "
            f"{2 * math.ceil(need)} bits of precision, have {prec}"
        )


def _fixed(x, bits: int) -> int:
    return int(to_int(mpf_shift(x._mpf_, bits), "n"))


def _quantize(values, bits: int, real: bool):
    # fixed-point Gaussian integers round(2^bits * v), computed exactly
    return [(_fixed(v.real, bits), 0 if real else _fixed(v.imag, bits)) for v in values]


def _shift(x: int, s: int) -> int:
    # round(x / 2^s) to nearest
    if s <= 0:
        return x << -s
    return (x + (1 << (s - 1))) >> s


def relation_candidates(values, prec: int) -> list[Candidate]:
    """Rows of the final unimodular transform, sorted by residual."""
    n = len(values)
    ctx = context(prec)
    real = is_real_data(values)
    top = max((ctx.mag(v) for v in values if v != 0), default=0)
    kmax = max(prec - 8, STAGE_BITS)
    quant = _quantize(values, kmax - top, real)
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    stages = list(range(STAGE_BITS, kmax, STAGE_BITS)) + [kmax]
    for k in stages:
        rows = []
        for i in range(n):
            re = sum(c * q[0] for c, q in zip(u[i], quant))
            im = sum(c * q[1] for c, q in zip(u[i], quant))
            tail = [_shift(re, kmax - k)] if real else [_shift(re, kmax - k), _shift(im, kmax - k)]
            rows.append(list(u[i]) + tail)
        u = [row[:n] for row in lll_reduce(rows)]
    # a candidate cannot be resolved below height * 2^-kmax * max|x|: rank by that floor
    floor = ctx.ldexp(1, top - kmax)
    cands = []
    for row in u:
        res = abs(ctx.fsum(c * v for c, v in zip(row, values) if c))
        cands.append(Candidate(tuple(row), res, max(res, floor * max(map(abs, row)))))
    cands.sort(key=lambda c: (c.effective, c.residual))
    return cands


def normalize(coeffs: Sequence[int]) -> tuple[int, ...]:
    """Divide out the content and make the first nonzero entry positive."""
    g = 0
    for c in coeffs:
        g = math.gcd(g, c)
    if g == 0:
        return tuple(coeffs)
    out = [c // g for c in coeffs]
    for c in out:
        if c:
            if c < 0:
                out = [-x for x in out]
            break
    return tuple(out)


def _order_key(coeffs):
    return (max(abs(c) for c in coeffs), tuple(-c for c in coeffs))


def _best_relation(rows: list[tuple[int, ...]], values, tol, ctx):
    pool = rows
    if len(rows) <= COMBO_LIMIT:
        pool = []
        for mult in itertools.product(range(-2, 3), repeat=len(rows)):
            if not any(mult):
                continue
            vec = [sum(m * r[j] for m, r in zip(mult, rows)) for j in range(len(values))]
            if any(vec):
                pool.append(tuple(vec))
    best = None
    for vec in pool:
        vec = normalize(vec)
        res = abs(ctx.fsum(c * v for c, v in zip(vec, values) if c))
        if res >= tol:
            continue
        key = _order_key(vec)
        if best is None or key < best[0]:
            best = (key, vec, res)
    return best


def integer_relation(
    xs: Sequence,
    height_bound: int = DEFAULT_HEIGHT,
    eps=None,
    *,
    prec: int | None = None,
) -> IntegerRelation | None:
    """Smallest-height integer relation among ``xs`` with residual < eps.

    ``eps`` defaults to 2^(-prec/2).  It is applied relative to the largest
    |x_j| when that exceeds 1 and absolutely otherwise.  Ties in height are
    broken lexicographically (larger leading coefficients first), after
    normalizing so the first nonzero coefficient is positive.  Returns
    ``None`` when no relation of height <= ``height_bound`` is visible.
    """
    if len(xs) < 2:
        raise ValueError("need at least two numbers")
    values, prec = _values(xs, prec)
    real = is_real_data(values)
    check_budget(len(values), height_bound, prec, real)
    ctx = context(prec)
    tol = (Tolerance.for_prec(prec).eps if eps is None else eps) * max(1, max(abs(v) for v in values))
    cands = relation_candidates(values, prec)
    rows = [c.coefficients for c in cands if c.residual < tol]
    if not rows:
        return None
    best = _best_relation(rows, values, tol, ctx)
    if best is None or best[0][0] > height_bound:
        return None
    _, vec, res = best
    return IntegerRelation(vec, res, max(abs(c) for c in vec), prec)


def monomial_values(values: Sequence, exponents: Sequence[Sequence[int]], prec: int):
    ctx = context(prec)
    raw = [v.value if isinstance(v, BigComplex) else ctx.mpc(v) for v in values]
    out = []
    for exps in exponents:
        term = ctx.mpc(1)
        for v, e in zip(raw, exps):
            if e:
                term *= v**e
        out.append(term)
    return out


def monomial_relation(
    values: Sequence,
    exponents: Sequence[Sequence[int]],
    height_bound: int = DEFAULT_HEIGHT,
    eps=None,
    *,
    prec: int | None = None,
) -> IntegerRelation | None:
    """Integer relation among the monomials prod values_i^e_i listed in ``exponents``."""
    if prec is None:
        prec = min(v.prec for v in values if isinstance(v, BigComplex))
    mons = monomial_values(values, exponents, prec)
    return integer_relation(mons, height_bound, eps, prec=prec)


def polynomial_relation(x, deg_bound: int = DEFAULT_DEGREE, height_bound: int = DEFAULT_HEIGHT, eps=None, *, prec=None):
    """Lowest-degree integer polynomial vanishing at ``x``, searching degree before height.

    Returns (relation, degree) with ``relation.coefficients`` listed from the
    constant term upward, or ``None`` after exhausting ``deg_bound``.
    """
    if prec is None:
        prec = x.prec if isinstance(x, BigComplex) else DEFAULT_RELATION_PREC
    for d in range(1, deg_bound + 1):
        rel = monomial_relation([x], [(j,) for j in range(d + 1)], height_bound, eps, prec=prec)
        if rel is not None:
            coeffs = list(rel.coefficients)
            while coeffs and coeffs[-1] == 0:
                coeffs.pop()
            if len(coeffs) < 2:
                continue
            if coeffs[-1] < 0:
                coeffs = [-c for c in coeffs]
            return IntegerRelation(tuple(coeffs), rel.residual, rel.height, prec), len(coeffs) - 1
    return None
