"""Command-line front end: ``semielliptic <command> [options]``.

Every command prints one JSON document (or a flattened csv/text view).
Errors print a JSON error object and exit with 2 for precondition
violations, 3 for precision failures and 4 for parse errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
from importlib import resources
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import groupexp, relations, verify
from .errors import ExprSyntaxError, PreconditionViolated, SemiEllipticError
from .expr import Scope, evaluate, parse
from .intrel import DEFAULT_DEGREE, DEFAULT_HEIGHT
from .lattice import CMData, Lattice, detect_cm, lattice_from_invariants, lattice_from_periods
from .numeric import DEFAULT_PREC, MIN_PREC, BigComplex, context
from .weierstrass import _with_prec
from .weierstrass import evaluate as eval_point

OUTPUTS = ("json", "csv", "text")


def load_schema(name: str) -> dict:
    """JSON schema for a command's report (``error`` for error objects)."""
    text = resources.files("semielliptic").joinpath("schemas", f"{name}.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


@dataclass(frozen=True)
class RunConfig:
    prec: int = DEFAULT_PREC
    tol: Optional[int] = None           # decimal digits; None means 2^(-prec/2)
    height_bound: int = DEFAULT_HEIGHT
    deg_bound: int = DEFAULT_DEGREE
    seed: int = 0
    output: str = "json"

    def __post_init__(self):
        if self.prec < MIN_PREC:
            raise PreconditionViolated(f"precision must be at least {MIN_PREC} bits")
        if self.height_bound < 1 or self.deg_bound < 1:
            raise PreconditionViolated("bounds must be >= 1")
        if self.output not in OUTPUTS:
            raise PreconditionViolated(f"output must be one of {', '.join(OUTPUTS)}")


# ----------------------------------------------------------------- inputs


def split_top_level(text: str) -> list[str]:
    """Split on commas that are not inside parentheses."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur.append(ch)
    tail = "".join(cur).strip()
    if tail or parts:
        parts.append(tail)
    return [p for p in parts if p]


def read_values_file(path: str) -> list[str]:
    """One expression per line; '#' starts a comment."""
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def _number(text: str, prec: int) -> BigComplex:
    return evaluate(parse(text), Scope(prec))


def build_lattice(args, cfg: RunConfig) -> Optional[Lattice]:
    if getattr(args, "lattice_file", None):
        payload = json.loads(Path(args.lattice_file).read_text(encoding="utf-8"))
        return Lattice.from_json(payload.get("lattice", payload), cfg.prec)
    if getattr(args, "invariants", None):
        g2, g3 = args.invariants
        return lattice_from_invariants(_exact_or_value(g2, cfg.prec), _exact_or_value(g3, cfg.prec), cfg.prec)
    if getattr(args, "periods", None):
        w1, w2 = args.periods
        return lattice_from_periods(_number(w1, cfg.prec), _number(w2, cfg.prec), cfg.prec)
    return None


def _exact_or_value(text: str, prec: int):
    from fractions import Fraction

    try:
        return Fraction(text.strip())
    except ValueError:
        return _number(text, prec)


def _require_lattice(L: Optional[Lattice]) -> Lattice:
    if L is None:
        raise PreconditionViolated("this command needs --periods, --invariants or --lattice-file")
    return L


def _tol(cfg: RunConfig):
    return None if cfg.tol is None else context(cfg.prec).mpf(10) ** (-cfg.tol)


# --------------------------------------------------------------- commands


def cmd_lattice(args, cfg: RunConfig) -> tuple[int, dict]:
    L = _require_lattice(build_lattice(args, cfg))
    return 0, L.to_json(cm=detect_cm(L, cfg.height_bound))


def cmd_eval(args, cfg: RunConfig) -> tuple[int, dict]:
    L = _require_lattice(build_lattice(args, cfg))
    scope = Scope(cfg.prec, L, _bindings(args.bind, cfg.prec, L))
    z = evaluate(parse(args.at, scope.bindings), scope)
    out = eval_point(z, L).to_json()
    out["precision"] = cfg.prec
    return 0, out


def _bindings(items: Sequence[str], prec: int, L: Optional[Lattice]) -> dict:
    out: dict = {}
    for item in items or ():
        if "=" not in item:
            raise ExprSyntaxError("binding must look like name=expression", 0)
        name, text = item.split("=", 1)
        out[name.strip()] = evaluate(parse(text, out), Scope(prec, L, out))
    return out


def cmd_verify(args, cfg: RunConfig) -> tuple[int, dict]:
    L = build_lattice(args, cfg)
    names = verify.SUITES if args.suite == "all" else (args.suite,)
    results = verify.run_suites(names, cfg.prec, cfg.seed, L, lattices=args.lattices, samples=args.samples)
    ok = all(r.passed for r in results)
    return (0 if ok else 1), {
        "pass": ok,
        "suites": [r.to_json() for r in results],
        "precision": cfg.prec,
        "seed": cfg.seed,
    }


def _values(texts: Sequence[str], prec: int, L: Optional[Lattice]) -> list[BigComplex]:
    scope = Scope(prec, L, {})
    return [evaluate(parse(t, scope.bindings), scope) for t in texts]


def cmd_relations(args, cfg: RunConfig) -> tuple[int, dict]:
    L = build_lattice(args, cfg)
    texts = read_values_file(args.values)
    if not texts:
        raise PreconditionViolated(f"{args.values} holds no expressions")
    vals = _values(texts, cfg.prec, L)
    if args.field == "k" or args.modulo == "lattice":
        L = _require_lattice(L)
        if args.modulo == "2pii":
            raise PreconditionViolated("--modulo 2pii applies to --field q only")
        cm = detect_cm(L, cfg.height_bound) if args.field == "k" else CMData(False)
        rep = relations.k_independence(vals, L, args.modulo == "lattice", cfg.height_bound, cm=cm, prec=cfg.prec, labels=texts)
    else:
        rep = relations.q_independence(vals, args.modulo == "2pii", cfg.height_bound, prec=cfg.prec, labels=texts)
    return 0, rep.to_json()


def cmd_conjecture(args, cfg: RunConfig) -> tuple[int, dict]:
    L = _require_lattice(build_lattice(args, cfg))
    ts = _values(split_top_level(args.t or ""), cfg.prec, L)
    ps = _values(split_top_level(args.p or ""), cfg.prec, L)
    rep = relations.conjecture_bound(ts, ps, L, cfg.height_bound, prec=cfg.prec)
    out = rep.to_json()
    if args.stress:
        # the search may need more bits than --prec, so inputs are re-evaluated at the cap
        H = _with_prec(L, relations.MAX_STRESS_PREC)
        hp = relations.MAX_STRESS_PREC
        inst = relations.StressInstance(
            H,
            tuple(_values(split_top_level(args.t or ""), hp, H)),
            tuple(_values(split_top_level(args.p or ""), hp, H)),
            _number(args.alpha, hp) if args.alpha else None,
        )
        budgets = relations.Budgets(degree=min(cfg.deg_bound, relations.STRESS_DEGREE), height=min(cfg.height_bound, relations.STRESS_HEIGHT))
        out["stress"] = relations.stress_test(args.stress, inst, budgets).to_json()
    return 0, out


def cmd_expmap(args, cfg: RunConfig) -> tuple[int, dict]:
    L = _require_lattice(build_lattice(args, cfg))
    vals = _values(split_top_level(args.at), cfg.prec, L)
    want = 2 if args.group == "gme" else 4
    if len(vals) != want:
        raise PreconditionViolated(f"--group {args.group} takes {want} comma-separated values, got {len(vals)}")
    point = groupexp.exp_gm_e(*vals, L) if args.group == "gme" else groupexp.exp_gtilde(*vals, L)
    out = point.to_json()
    out["group"] = args.group
    out["neutral"] = point.is_neutral(_tol(cfg))
    out["neutral_residual"] = str(point.neutral_residual())
    out["curve_residual"] = str(groupexp.curve_residual(point.projective, L))
    out["precision"] = cfg.prec
    return 0, out


COMMANDS = {
    "lattice": cmd_lattice,
    "eval": cmd_eval,
    "verify": cmd_verify,
    "relations": cmd_relations,
    "conjecture": cmd_conjecture,
    "expmap": cmd_expmap,
}


# ----------------------------------------------------------------- output


def flatten(obj, prefix: str = "") -> list[tuple[str, str]]:
    if isinstance(obj, dict):
        if set(obj) == {"re", "im"}:
            im = obj["im"]
            sign = "-" if im.startswith("-") else "+"
            return [(prefix, f"{obj['re']} {sign} {im.lstrip('-')}i")]
        rows = []
        for k, v in obj.items():
            rows += flatten(v, f"{prefix}.{k}" if prefix else str(k))
        return rows
    if isinstance(obj, list):
        rows = []
        for i, v in enumerate(obj):
            rows += flatten(v, f"{prefix}[{i}]")
        return rows
    return [(prefix, json.dumps(obj) if isinstance(obj, bool) or obj is None else str(obj))]


def render(report: dict, output: str) -> str:
    if output == "json":
        return json.dumps(report, indent=2)
    rows = flatten(report)
    if output == "text":
        return "\n".join(f"{k}: {v}" for k, v in rows)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    writer.writerows(rows)
    return buf.getvalue().rstrip("\n")


# ----------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec", type=int, default=DEFAULT_PREC, help="working precision in bits")
    common.add_argument("--tol", type=_tol_arg, default=None, help="tolerance in decimal digits, or 'auto' for 2^(-prec/2)")
    common.add_argument("--height-bound", type=int, default=DEFAULT_HEIGHT)
    common.add_argument("--deg-bound", type=int, default=DEFAULT_DEGREE)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--output", choices=OUTPUTS, default="json")
    src = common.add_mutually_exclusive_group()
    src.add_argument("--periods", nargs=2, metavar=("W1", "W2"))
    src.add_argument("--invariants", nargs=2, metavar=("G2", "G3"))
    src.add_argument("--lattice-file", metavar="JSON")

    parser = argparse.ArgumentParser(prog="semielliptic", description="Weierstrass functions, relations and conjecture bounds.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("lattice", parents=[common], help="lattice data as JSON")
    p = sub.add_parser("eval", parents=[common], help="sigma, zeta, wp, wp' at a point")
    p.add_argument("--at", required=True)
    p.add_argument("--bind", action="append", default=[], metavar="NAME=EXPR")
    p = sub.add_parser("verify", parents=[common], help="identity checks with max residuals")
    p.add_argument("--suite", choices=("all",) + verify.SUITES, default="all")
    p.add_argument("--lattices", type=int, default=3, help="random lattices per suite when none is given")
    p.add_argument("--samples", type=int, default=5, help="random points per lattice")
    p = sub.add_parser("relations", parents=[common], help="linear independence report")
    p.add_argument("--values", required=True, metavar="FILE")
    p.add_argument("--field", choices=("q", "k"), default="q")
    p.add_argument("--modulo", choices=("none", "2pii", "lattice"), default="none")
    p = sub.add_parser("conjecture", parents=[common], help="case tags and transcendence-degree bounds")
    p.add_argument("--t", default="", help="comma-separated expressions")
    p.add_argument("--p", default="", help="comma-separated expressions")
    p.add_argument("--stress", choices=relations.CONJECTURES)
    p.add_argument("--alpha", help="multiplier for the zeta stress test")
    p = sub.add_parser("expmap", parents=[common], help="exponential map of G_m x E or G~")
    p.add_argument("--group", choices=("gme", "gtilde"), required=True)
    p.add_argument("--at", required=True, help="t,z for gme or z0,z1,w,z for gtilde")
    return parser


def _tol_arg(text: str) -> Optional[int]:
    if text == "auto":
        return None
    try:
        digits = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected a number of decimal digits or 'auto'") from None
    if digits < 1:
        raise argparse.ArgumentTypeError("tolerance digits must be >= 1")
    return digits


def _config(args) -> RunConfig:
    return RunConfig(args.prec, args.tol, args.height_bound, args.deg_bound, args.seed, args.output)


def run_command(cmd: str, cfg: RunConfig, args: argparse.Namespace) -> tuple[int, dict]:
    """Exit code and report for one command; library errors become error objects."""
    if cmd not in COMMANDS:
        raise ValueError(f"unknown command {cmd!r}; choose from {', '.join(COMMANDS)}")
    try:
        return COMMANDS[cmd](args, cfg)
    except SemiEllipticError as exc:
        return exc.exit_code, exc.to_json()
    except (ValueError, ZeroDivisionError) as exc:
        return 2, {"error": type(exc).__name__, "message": str(exc)}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
    except SemiEllipticError as exc:
        print(json.dumps(exc.to_json(), indent=2))
        return exc.exit_code
    code, report = run_command(args.command, cfg, args)
    print(render(report, cfg.output) if "error" not in report else json.dumps(report, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
