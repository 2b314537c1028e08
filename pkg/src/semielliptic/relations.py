"""Linear independence over Q and over the CM field, case tags and bounds.

Linear relations over the endomorphism field k = Q(tau) of a CM lattice
are found as integer relations among the numbers x_j and w*x_j, where
w = C*tau is integral (A + B*tau + C*tau^2 = 0).  Elements of k are then
written u + v*w with rational u, v.

Every negative answer is a statement about a bounded search: reports keep
the height bound and working precision next to each "no relation".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import sympy

from .errors import PreconditionViolated
from .intrel import DEFAULT_HEIGHT, integer_relation, monomial_values, required_bits
from .lattice import CMData, Lattice, detect_cm
from .numeric import BigComplex, Tolerance, context, pi_times_2i, rounded, to_decimal, to_mpc
from .weierstrass import _on_lattice, _with_prec, raw_values

TWO_PI_I = "2*pi*i"
CASE_T, CASE_T_STAR = "T", "T*"
CASE_P, CASE_P_TILDE, CASE_P_STAR = "P", "P~", "P*"
STRESS_DEGREE = 3
STRESS_HEIGHT = 10**4
MAX_STRESS_PREC = 2048


# --------------------------------------------------------------- k-numbers


@dataclass(frozen=True)
class KNumber:
    """u + v*w in k, with w = C*tau a root of w^2 + B*w + A*C."""

    u: Fraction
    v: Fraction = Fraction(0)
    B: int = 0
    AC: int = 0

    def __mul__(self, other: "KNumber") -> "KNumber":
        u = self.u * other.u - self.v * other.v * self.AC
        v = self.u * other.v + self.v * other.u - self.v * other.v * self.B
        return KNumber(u, v, self.B, self.AC)

    def __neg__(self) -> "KNumber":
        return KNumber(-self.u, -self.v, self.B, self.AC)

    def inverse(self) -> "KNumber":
        norm = self.u * self.u - self.B * self.u * self.v + self.AC * self.v * self.v
        if norm == 0:
            raise ZeroDivisionError("zero element of k")
        return KNumber((self.u - self.B * self.v) / norm, -self.v / norm, self.B, self.AC)

    def __truediv__(self, other: "KNumber") -> "KNumber":
        return self * other.inverse()

    def __str__(self) -> str:
        if not self.v:
            return str(self.u)
        return f"{self.u} + {self.v}*Ctau"


def _coeff_str(c) -> str:
    if isinstance(c, tuple):
        return f"{c[0]} + {c[1]}*Ctau"
    return str(c)


# ------------------------------------------------------------ result types


@dataclass(frozen=True)
class LinearRelation:
    """sum c_j x_j = 0 with integer c_j, or Gaussian-like pairs (a, b) = a + b*C*tau over k."""

    labels: tuple[str, ...]
    coefficients: tuple
    residual: object
    height: int
    field_tag: str = "Q"

    def __post_init__(self):
        if not any(c != 0 and c != (0, 0) for c in self.coefficients):
            raise ValueError("relation coefficients are all zero")

    def to_json(self) -> dict:
        return {
            "labels": list(self.labels),
            "coeffs": [_coeff_str(c) for c in self.coefficients],
            "residual": to_decimal(self.residual, 64),
            "height": self.height,
            "field": self.field_tag,
        }


@dataclass(frozen=True)
class Expansion:
    """label = sum coeff * term, coefficients exact in Q or k."""

    label: str
    terms: tuple[tuple[str, object], ...]
    residual: object

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "terms": [{"term": t, "coeff": str(c)} for t, c in self.terms],
            "residual": to_decimal(self.residual, 64),
        }


@dataclass(frozen=True)
class IndependenceReport:
    field_tag: str
    rank: int
    basis_indices: tuple[int, ...]
    relations: tuple[LinearRelation, ...]
    modulo: str
    height_bound: int
    prec: int
    expansions: tuple[Expansion, ...] = ()

    @property
    def status(self) -> str:
        budget = f"height <= {self.height_bound} at {self.prec} bits"
        if self.relations:
            return f"{len(self.relations)} relation(s) found; remaining elements show no relation of {budget}"
        return f"no relation of {budget}; this does not prove independence"

    def to_json(self) -> dict:
        return {
            "field": self.field_tag,
            "rank": self.rank,
            "basis_indices": list(self.basis_indices),
            "modulo": self.modulo,
            "relations": [r.to_json() for r in self.relations],
            "expansions": [e.to_json() for e in self.expansions],
            "budgets": {"height": self.height_bound},
            "precision": self.prec,
            "status": self.status,
        }


# ------------------------------------------------------------ span search


def _prec_of(values: Sequence, default: int) -> int:
    precs = [v.prec for v in values if isinstance(v, BigComplex)]
    return min(precs + [default])


def _raw(values: Sequence, ctx):
    return [rounded(ctx, v.value) if isinstance(v, BigComplex) else to_mpc(v, ctx) for v in values]


def _span(items, labels, moduli, mod_labels, cm: Optional[CMData], height_bound: int, prec: int):
    """Greedy basis of span(items) modulo span_Q(moduli), over Q or (if cm) over k."""
    ctx = context(prec)
    eps = Tolerance.for_prec(prec).eps
    w = None
    if cm is not None:
        w = cm.C * rounded(ctx, cm_tau(cm, ctx))
    basis: list[int] = []
    relations: list[LinearRelation] = []
    expansions: list[Expansion] = []
    for idx, x in enumerate(items):
        vals = list(moduli)
        for j in basis:
            vals += [items[j], w * items[j]] if w is not None else [items[j]]
        new = [x, w * x] if w is not None else [x]
        rel = None
        if len(vals) == 0:
            if abs(x) < eps:
                rel = (1,) + ((0,) if w is not None else ())
                res = abs(x)
        else:
            found = integer_relation(vals + new, height_bound, prec=prec)
            if found is not None and any(found.coefficients[len(vals):]):
                rel, res = found.coefficients, found.residual
        if rel is None:
            basis.append(idx)
            continue
        rel_labels, coeffs = _relation_terms(rel, labels, mod_labels, basis, idx, w is not None)
        height = max(abs(c) for c in rel)
        relations.append(LinearRelation(rel_labels, coeffs, res, height, "k" if w is not None else "Q"))
        expansions.append(_expansion(labels[idx], rel_labels, coeffs, res, cm))
    return basis, relations, expansions


def cm_tau(cm: CMData, ctx):
    # the root of A + B t + C t^2 in the upper half plane
    disc = ctx.mpc(cm.B * cm.B - 4 * cm.A * cm.C)
    root = (-cm.B + ctx.sqrt(disc)) / (2 * cm.C)
    return root if root.imag > 0 else (-cm.B - ctx.sqrt(disc)) / (2 * cm.C)


def _relation_terms(rel, labels, mod_labels, basis, idx, over_k):
    out_labels = list(mod_labels)
    coeffs = list(rel[: len(mod_labels)])
    pos = len(mod_labels)
    for j in basis + [idx]:
        out_labels.append(labels[j])
        if over_k:
            coeffs.append((rel[pos], rel[pos + 1]))
            pos += 2
        else:
            coeffs.append(rel[pos])
            pos += 1
    return tuple(out_labels), tuple(coeffs)


def _expansion(label, rel_labels, coeffs, res, cm) -> Expansion:
    """Solve the relation for its last element."""
    if cm is None:
        lead = Fraction(coeffs[-1])
        terms = tuple((l, -Fraction(c) / lead) for l, c in zip(rel_labels[:-1], coeffs[:-1]) if c)
        return Expansion(label, terms, res)
    B, AC = cm.B, cm.A * cm.C

    def kn(c):
        if isinstance(c, tuple):
            return KNumber(Fraction(c[0]), Fraction(c[1]), B, AC)
        return KNumber(Fraction(c), Fraction(0), B, AC)

    lead = kn(coeffs[-1])
    terms = tuple(
        (l, -(kn(c) / lead)) for l, c in zip(rel_labels[:-1], coeffs[:-1]) if c != 0 and c != (0, 0)
    )
    return Expansion(label, terms, res)


def _labels(prefix: str, n: int) -> list[str]:
    return [f"{prefix}{i + 1}" for i in range(n)]


def q_independence(
    ts: Sequence,
    include_two_pi_i: bool = False,
    height_bound: int = DEFAULT_HEIGHT,
    *,
    prec: Optional[int] = None,
    labels: Optional[Sequence[str]] = None,
) -> IndependenceReport:
    """Rank and basis of span_Q(ts), optionally modulo 2*pi*i*Q."""
    if not ts:
        raise ValueError("ts must be nonempty")
    prec = prec or _prec_of(ts, 512)
    ctx = context(prec)
    items = _raw(ts, ctx)
    labels = list(labels or _labels("t", len(ts)))
    moduli, mod_labels = ([pi_times_2i(prec).value], [TWO_PI_I]) if include_two_pi_i else ([], [])
    basis, rels, exps = _span(items, labels, moduli, mod_labels, None, height_bound, prec)
    return IndependenceReport(
        "Q", len(basis), tuple(basis), tuple(rels), "two_pi_i" if include_two_pi_i else "nothing",
        height_bound, prec, tuple(exps),
    )


def k_independence(
    ps: Sequence,
    L: Lattice,
    modulo_lattice: bool = False,
    height_bound: int = DEFAULT_HEIGHT,
    *,
    cm: Optional[CMData] = None,
    prec: Optional[int] = None,
    labels: Optional[Sequence[str]] = None,
) -> IndependenceReport:
    """Rank and basis of span_k(ps), optionally modulo Q*omega1 + Q*omega2."""
    if not ps:
        raise ValueError("ps must be nonempty")
    cm = cm if cm is not None else detect_cm(L)
    prec = prec or min(_prec_of(ps, L.prec), L.prec)
    ctx = context(prec)
    items = _raw(ps, ctx)
    labels = list(labels or _labels("p", len(ps)))
    if modulo_lattice:
        moduli = [rounded(ctx, L.omega1.value), rounded(ctx, L.omega2.value)]
        mod_labels = ["omega1", "omega2"]
    else:
        moduli, mod_labels = [], []
    basis, rels, exps = _span(items, labels, moduli, mod_labels, cm if cm.is_cm else None, height_bound, prec)
    return IndependenceReport(
        "k" if cm.is_cm else "Q", len(basis), tuple(basis), tuple(rels),
        "lattice_tensor_Q" if modulo_lattice else "nothing", height_bound, prec, tuple(exps),
    )


# -------------------------------------------------------- case taxonomy


@dataclass(frozen=True)
class CaseClassification:
    t_case: str
    p_case: str
    t_evidence: str     # "relation found" certifies T; otherwise the tag is provisional
    p_evidence: str
    t_report: Optional[IndependenceReport]
    p_report: Optional[IndependenceReport]
    cm: CMData


def _check_preconditions(ts, ps, L, cm, height_bound, prec):
    if ts:
        rep = q_independence(ts, False, height_bound, prec=prec)
        if rep.relations:
            raise PreconditionViolated("the t's are Q-linearly dependent", rep.relations[0])
    if ps:
        ctx = L.kernel().ctx
        for i, p in enumerate(_raw(ps, ctx)):
            if _on_lattice(L, p):
                raise PreconditionViolated(f"p{i + 1} lies on the lattice")
        rep = k_independence(ps, L, False, height_bound, cm=cm, prec=prec)
        if rep.relations:
            raise PreconditionViolated("the p's are linearly dependent over the endomorphism field", rep.relations[0])


def _evidence(report: Optional[IndependenceReport]) -> str:
    if report is None:
        return "empty input"
    if report.relations:
        return "relation found"
    return f"no relation at height <= {report.height_bound}, {report.prec} bits (provisional)"


def classify_case(
    ts: Sequence, ps: Sequence, L: Lattice, height_bound: int = DEFAULT_HEIGHT, *, prec: Optional[int] = None
) -> CaseClassification:
    """(T or T*, P or P~ or P*) for Q-independent ts and k-independent ps off the lattice."""
    cm = detect_cm(L)
    _check_preconditions(ts, ps, L, cm, height_bound, prec)
    t_rep = q_independence(ts, True, height_bound, prec=prec) if ts else None
    t_case = CASE_T if t_rep is not None and t_rep.rank < len(ts) else CASE_T_STAR
    p_rep = k_independence(ps, L, True, height_bound, cm=cm, prec=prec) if ps else None
    if p_rep is None:
        p_case = CASE_P_STAR
    else:
        inter = len(ps) - p_rep.rank
        full = 2 // cm.field_degree
        p_case = CASE_P if inter >= full else (CASE_P_TILDE if inter else CASE_P_STAR)
    return CaseClassification(t_case, p_case, _evidence(t_rep), _evidence(p_rep), t_rep, p_rep, cm)


@dataclass(frozen=True)
class ConjectureReport:
    s: int
    n: int
    s_prime: int
    n_prime: int
    t_case: str
    p_case: str
    exceptional: bool
    bound_conj21: int
    bound_etc: Fraction
    field_degree: int
    K_generators: tuple[tuple[str, BigComplex], ...]
    relations: tuple[LinearRelation, ...]
    evidence: dict
    height_bound: int
    prec: int

    def to_json(self) -> dict:
        return {
            "s": self.s,
            "n": self.n,
            "s_prime": self.s_prime,
            "n_prime": self.n_prime,
            "t_case": self.t_case,
            "p_case": self.p_case,
            "exceptional": self.exceptional,
            "bound_conj21": self.bound_conj21,
            "bound_etc": int(self.bound_etc) if self.bound_etc.denominator == 1 else str(self.bound_etc),
            "field_degree": self.field_degree,
            "K_generators": [{"label": l, "value": v.to_json_value()} for l, v in self.K_generators],
            "relations": [r.to_json() for r in self.relations],
            "evidence": dict(self.evidence),
            "budgets": {"height": self.height_bound},
            "precision": self.prec,
        }


def bound_from_reduction(s_prime: int, n_prime: int, field_degree: int) -> Fraction:
    """s' + 4/[k:Q] + 2n'."""
    return s_prime + Fraction(4, field_degree) + 2 * n_prime


def k_generators(ts: Sequence, ps: Sequence, L: Lattice, prec: Optional[int] = None):
    """Labelled numeric values of t, e^t, g2, g3, p, wp(p), zeta(p)."""
    prec = prec or L.prec
    H = _with_prec(L, prec) if prec > L.prec else L
    ctx = H.kernel().ctx
    out = []
    tv = _raw(ts, ctx)
    pv = _raw(ps, ctx)
    for i, t in enumerate(tv):
        out.append((f"t{i + 1}", t))
    for i, t in enumerate(tv):
        out.append((f"exp(t{i + 1})", ctx.exp(t)))
    k = H.kernel()
    out.append(("g2", to_mpc(H.g2_exact, ctx) if H.g2_exact is not None else k.g2))
    out.append(("g3", to_mpc(H.g3_exact, ctx) if H.g3_exact is not None else k.g3))
    vals = [raw_values(H, p) for p in pv]
    for i, p in enumerate(pv):
        out.append((f"p{i + 1}", p))
    for i, v in enumerate(vals):
        out.append((f"wp(p{i + 1})", v.wp))
    for i, v in enumerate(vals):
        out.append((f"zeta(p{i + 1})", v.zeta))
    return [(label, BigComplex._wrap(v, prec)) for label, v in out]


def conjecture_bound(
    ts: Sequence, ps: Sequence, L: Lattice, height_bound: int = DEFAULT_HEIGHT, *, prec: Optional[int] = None
) -> ConjectureReport:
    """Case tags and the two transcendence-degree lower bounds the conjectures predict."""
    cls = classify_case(ts, ps, L, height_bound, prec=prec)
    s, n = len(ts), len(ps)
    s_prime = cls.t_report.rank if cls.t_report is not None else 0
    n_prime = cls.p_report.rank if cls.p_report is not None else 0
    exceptional = cls.t_case == CASE_T and cls.p_case == CASE_P
    rels = (cls.t_report.relations if cls.t_report else ()) + (cls.p_report.relations if cls.p_report else ())
    used = min([r.prec for r in (cls.t_report, cls.p_report) if r is not None] + [L.prec])
    return ConjectureReport(
        s, n, s_prime, n_prime, cls.t_case, cls.p_case, exceptional,
        s + 2 * n - (1 if exceptional else 0),
        bound_from_reduction(s_prime, n_prime, cls.cm.field_degree),
        cls.cm.field_degree,
        tuple(k_generators(ts, ps, L)),
        tuple(rels),
        {"t_case": cls.t_evidence, "p_case": cls.p_evidence},
        height_bound, used,
    )


@dataclass(frozen=True)
class Reduction:
    ts_basis: tuple[int, ...]
    ps_basis: tuple[int, ...]
    t_witnesses: tuple[Expansion, ...]
    p_witnesses: tuple[Expansion, ...]

    def to_json(self) -> dict:
        return {
            "ts_basis": list(self.ts_basis),
            "ps_basis": list(self.ps_basis),
            "t_witnesses": [e.to_json() for e in self.t_witnesses],
            "p_witnesses": [e.to_json() for e in self.p_witnesses],
        }


def reduce_to_basis(
    ts: Sequence, ps: Sequence, L: Lattice, height_bound: int = DEFAULT_HEIGHT, *, prec: Optional[int] = None
) -> Reduction:
    """Bases of span_Q(ts) mod 2*pi*i*Q and span_k(ps) mod the lattice, with expansions of the rest."""
    t_rep = q_independence(ts, True, height_bound, prec=prec) if ts else None
    p_rep = k_independence(ps, L, True, height_bound, prec=prec) if ps else None
    return Reduction(
        t_rep.basis_indices if t_rep else (),
        p_rep.basis_indices if p_rep else (),
        t_rep.expansions if t_rep else (),
        p_rep.expansions if p_rep else (),
    )


# ------------------------------------------------------------ stress tests


CONJECTURES = ("2.1", "2.3", "2.4", "2.5", "2.9")


@dataclass(frozen=True)
class Budgets:
    degree: int = STRESS_DEGREE
    height: int = STRESS_HEIGHT
    prec: Optional[int] = None


@dataclass(frozen=True)
class StressInstance:
    """Inputs for a stress test.

    ``ts`` and ``ps`` are exact-ish inputs (strings, rationals, numbers) so they
    can be re-evaluated at whatever precision the search needs.  ``overrides``
    replaces named numbers by synthetic values, given as callables ctx -> value
    or as anything :func:`to_mpc` accepts.
    """

    lattice: Lattice
    ts: tuple = ()
    ps: tuple = ()
    alpha: object = None
    overrides: dict = field(default_factory=dict)


@dataclass(frozen=True)
class StressReport:
    conjecture_id: str
    labels: tuple[str, ...]
    expected: int
    independent: tuple[str, ...]
    dependencies: tuple[tuple[str, str, object], ...]   # (label, relation, residual)
    violation: bool
    budgets: Budgets
    prec: int

    @property
    def verdict(self) -> str:
        if self.violation:
            return "violation: relations found reduce the independent count below the predicted bound"
        return (
            f"no violation found at budget (degree <= {self.budgets.degree}, "
            f"height <= {self.budgets.height}, {self.prec} bits)"
        )

    def to_json(self) -> dict:
        return {
            "conjecture": self.conjecture_id,
            "numbers": list(self.labels),
            "expected_independent": self.expected,
            "independent": list(self.independent),
            "dependencies": [
                {"label": l, "relation": r, "residual": to_decimal(res, 64)} for l, r, res in self.dependencies
            ],
            "violation": self.violation,
            "verdict": self.verdict,
            "budgets": {"degree": self.budgets.degree, "height": self.budgets.height},
            "precision": self.prec,
        }


def _exponents(k: int, degree: int):
    """All exponent vectors of length k with total degree <= degree, constant first."""
    if k == 0:
        return [()]
    out = []
    for e in range(degree + 1):
        out += [(e,) + rest for rest in _exponents(k - 1, degree - e)]
    return sorted(out, key=lambda v: (sum(v), tuple(-x for x in v)))


def independence_screen(numbers, expected: int, budgets: Budgets, prec: int):
    """Greedy bounded algebraic-independence screen.

    A number joins the independent set unless a polynomial relation of total
    degree <= budgets.degree and height <= budgets.height ties it to the set.
    Degree is raised before height.  The screen stops once ``expected``
    numbers have passed.
    """
    independent: list[int] = []
    deps = []
    for idx, (label, value) in enumerate(numbers):
        if len(independent) >= expected:
            break
        chosen = [numbers[j][1] for j in independent] + [value]
        found = None
        for d in range(1, budgets.degree + 1):
            exps = _exponents(len(chosen), d)
            rel = integer_relation(monomial_values(chosen, exps, prec), budgets.height, prec=prec)
            if rel is not None and any(c and e[-1] for c, e in zip(rel.coefficients, exps)):
                found = rel, exps
                break
        if found is None:
            independent.append(idx)
            continue
        rel, exps = found
        names = [sympy.Symbol(numbers[j][0]) for j in independent] + [sympy.Symbol(label)]
        poly = sum(c * sympy.Mul(*[s**k for s, k in zip(names, e)]) for c, e in zip(rel.coefficients, exps) if c)
        deps.append((label, str(poly), rel.residual))
    return [numbers[j][0] for j in independent], deps


def _stress_numbers(conjecture_id: str, inst: StressInstance, prec: int):
    L = inst.lattice
    gens = dict(k_generators(inst.ts, inst.ps, L, prec))
    s, n = len(inst.ts), len(inst.ps)
    ts = [f"t{i + 1}" for i in range(s)]
    ps = [f"p{i + 1}" for i in range(n)]
    if conjecture_id == "2.1":
        labels = ts + [f"exp({t})" for t in ts] + ["g2", "g3"] + ps + [f"wp({p})" for p in ps] + [f"zeta({p})" for p in ps]
    elif conjecture_id == "2.3":
        labels = ["g2", "g3"] + ps + [f"wp({p})" for p in ps] + [f"zeta({p})" for p in ps]
    elif conjecture_id == "2.4":
        labels = [f"exp({t})" for t in ts] + [f"wp({p})" for p in ps] + [f"zeta({p})" for p in ps]
    elif conjecture_id == "2.5":
        labels = ts + ps
    else:
        if inst.alpha is None or n != 1:
            raise PreconditionViolated("the zeta test needs one p and an algebraic alpha")
        H = _with_prec(L, prec) if prec > L.prec else L
        ctx = H.kernel().ctx
        alpha = to_mpc(inst.alpha, ctx)
        _check_alpha(alpha, H, ctx)
        ap = alpha * _raw(inst.ps, ctx)[0]
        if _on_lattice(H, ap):
            raise PreconditionViolated("alpha*p lies on the lattice")
        gens["zeta(alpha*p1)"] = BigComplex._wrap(raw_values(H, ap).zeta, prec)
        labels = ["zeta(alpha*p1)"]
    ctx = context(prec)
    out = []
    for label in labels:
        if label in inst.overrides:
            ov = inst.overrides[label]
            v = ov(ctx) if callable(ov) else to_mpc(ov, ctx)
            out.append((label, BigComplex._wrap(v, prec)))
        else:
            out.append((label, gens[label]))
    return out


def _check_alpha(alpha, L: Lattice, ctx) -> None:
    eps = Tolerance.for_prec(L.prec).eps
    for root in (0, 1, -1):
        if abs(alpha - root) < eps:
            raise PreconditionViolated("alpha must differ from 0, 1 and -1")
    k = L.kernel()
    g2 = to_mpc(L.g2_exact, ctx) if L.g2_exact is not None else k.g2
    g3 = to_mpc(L.g3_exact, ctx) if L.g3_exact is not None else k.g3
    if abs(g3) < eps and abs(alpha**4 - 1) < eps:
        raise PreconditionViolated("alpha^4 = 1 on a curve with g3 = 0")
    if abs(g2) < eps and abs(alpha**6 - 1) < eps:
        raise PreconditionViolated("alpha^6 = 1 on a curve with g2 = 0")


def _expected(conjecture_id: str, inst: StressInstance, height: int) -> int:
    s, n = len(inst.ts), len(inst.ps)
    if conjecture_id == "2.1":
        return conjecture_bound(inst.ts, inst.ps, inst.lattice, height).bound_conj21
    if conjecture_id == "2.3":
        return 2 * n
    if conjecture_id == "2.4":
        return s + 2 * n
    if conjecture_id == "2.5":
        return s + n
    return 1


def stress_test(conjecture_id: str, instance: StressInstance, budgets: Budgets = Budgets()) -> StressReport:
    """Bounded search for algebraic relations that would contradict a conjecture.

    The expected number of algebraically independent values is screened
    greedily; a violation means relations were found that leave fewer
    independent numbers than predicted.
    """
    if conjecture_id not in CONJECTURES:
        raise ValueError(f"unknown conjecture id {conjecture_id!r}; choose from {', '.join(CONJECTURES)}")
    expected = _expected(conjecture_id, instance, DEFAULT_HEIGHT)
    terms = math.comb(max(expected, 1) + budgets.degree, budgets.degree)
    need = 2 * math.ceil(required_bits(terms, budgets.height, True)) + 32
    prec = max(instance.lattice.prec, budgets.prec or 0, need)
    prec = -(-prec // 64) * 64
    if prec > MAX_STRESS_PREC:
        raise PreconditionViolated(f"stress budget would need {prec} bits; lower the degree or height")
    numbers = _stress_numbers(conjecture_id, instance, prec)
    independent, deps = independence_screen(numbers, expected, budgets, prec)
    return StressReport(
        conjecture_id, tuple(l for l, _ in numbers), expected, tuple(independent), tuple(deps),
        len(independent) < expected, budgets, prec,
    )
