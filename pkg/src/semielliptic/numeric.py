"""Fixed-precision complex scalars and elementary functions.

Every scalar in the library is a :class:`BigComplex` carrying its own working
precision in bits.  Arithmetic between values of different precision rounds
to the smaller one, so accuracy is never silently inflated.

Internally all numerics run on per-precision :class:`mpmath.MPContext`
instances obtained from :func:`context`.  Those shared contexts are never
mutated after creation, which is what makes the pure functions of this
package safe to call from several threads at once.  Routines from mpmath
that temporarily raise their own precision (root finders, linear solvers,
elliptic integrals) must be run on a :func:`scratch_context` instead.
"""

from __future__ import annotations

import math
import numbers
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath.libmp import mpc_pos, mpf_pos

from .errors import DivisionByZero, LogOfZero, NumericOverflow, PrecisionUnderflow

MIN_PREC = 64
GUARD_BITS = 32
DEFAULT_PREC = int(os.environ.get("SEMIELLIPTIC_PREC", "256"))

__all__ = [
    "BigComplex",
    "Tolerance",
    "arith",
    "context",
    "elementary",
    "pi_times_2i",
    "scratch_context",
    "to_decimal",
]


@lru_cache(maxsize=None)
def context(prec: int) -> mpmath.MPContext:
    """Shared context at ``prec`` bits.  Do not change its precision."""
    prec = int(prec)
    if prec < MIN_PREC:
        raise PrecisionUnderflow(f"precision {prec} < {MIN_PREC} bits")
    ctx = mpmath.MPContext()
    ctx.prec = prec
    return ctx


def scratch_context(prec: int) -> mpmath.MPContext:
    """A private context for mpmath routines that adjust ``ctx.prec``."""
    ctx = mpmath.MPContext()
    ctx.prec = int(prec)
    return ctx


def rounded(ctx, value):
    """Round an mpf/mpc (possibly from another context) to ``ctx.prec``."""
    if hasattr(value, "_mpc_"):
        return ctx.make_mpc(mpc_pos(value._mpc_, ctx.prec, "n"))
    if hasattr(value, "_mpf_"):
        return ctx.make_mpc((mpf_pos(value._mpf_, ctx.prec, "n"), mpmath.libmp.fzero))
    return to_mpc(value, ctx)


def to_mpc(value, ctx):
    """Convert any supported scalar to an ``ctx.mpc`` rounded to ``ctx.prec``."""
    if isinstance(value, BigComplex):
        return rounded(ctx, value._v)
    if isinstance(value, Fraction):
        return ctx.mpc(ctx.fdiv(value.numerator, value.denominator))
    if isinstance(value, str):
        text = value.strip().replace("i", "j") if "j" not in value else value.strip()
        try:
            v = ctx.mpmathify(text)
        except (ValueError, TypeError) as exc:
            raise ValueError(f"cannot parse number {value!r}") from exc
        return rounded(ctx, v)
    if hasattr(value, "_mpc_") or hasattr(value, "_mpf_"):
        return rounded(ctx, value)
    if isinstance(value, numbers.Number):
        return ctx.mpc(ctx.convert(value))
    raise TypeError(f"unsupported scalar type {type(value).__name__}")


def _finite(v) -> bool:
    return mpmath.isfinite(v.real) and mpmath.isfinite(v.imag)


class BigComplex:
    """Immutable arbitrary-precision complex number with a precision tag."""

    __slots__ = ("_v", "_prec")

    def __init__(self, value=0, prec: int = DEFAULT_PREC):
        prec = int(prec)
        ctx = context(prec)
        v = to_mpc(value, ctx)
        if not _finite(v):
            raise NumericOverflow(f"non-finite value {value!r}")
        object.__setattr__(self, "_v", v)
        object.__setattr__(self, "_prec", prec)

    @classmethod
    def _wrap(cls, v, prec: int) -> "BigComplex":
        ctx = context(prec)
        v = rounded(ctx, v)
        if not _finite(v):
            raise NumericOverflow("operation produced a non-finite value")
        obj = object.__new__(cls)
        object.__setattr__(obj, "_v", v)
        object.__setattr__(obj, "_prec", int(prec))
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("BigComplex is immutable")

    def __reduce__(self):
        return (BigComplex, (self.to_json_value(), self._prec))

    @property
    def prec(self) -> int:
        return self._prec

    @property
    def value(self):
        """The underlying ``mpmath.mpc``."""
        return self._v

    @property
    def re(self):
        return self._v.real

    @property
    def im(self):
        return self._v.imag

    def with_prec(self, prec: int) -> "BigComplex":
        return BigComplex._wrap(self._v, prec)

    def _other(self, other):
        if isinstance(other, BigComplex):
            return other._v, min(self._prec, other._prec)
        if isinstance(other, (numbers.Number, Fraction)) or hasattr(other, "_mpf_") or hasattr(other, "_mpc_"):
            return to_mpc(other, context(self._prec)), self._prec
        return None, None

    def _binary(self, other, op, reflected=False):
        w, prec = self._other(other)
        if w is None:
            return NotImplemented
        a, b = (w, self._v) if reflected else (self._v, w)
        return arith_raw(a, b, op, prec)

    def __add__(self, other):
        return self._binary(other, "add")

    def __radd__(self, other):
        return self._binary(other, "add", True)

    def __sub__(self, other):
        return self._binary(other, "sub")

    def __rsub__(self, other):
        return self._binary(other, "sub", True)

    def __mul__(self, other):
        return self._binary(other, "mul")

    def __rmul__(self, other):
        return self._binary(other, "mul", True)

    def __truediv__(self, other):
        return self._binary(other, "div")

    def __rtruediv__(self, other):
        return self._binary(other, "div", True)

    def __neg__(self):
        return BigComplex._wrap(-self._v, self._prec)

    def __pos__(self):
        return self

    def __pow__(self, exponent):
        if isinstance(exponent, int):
            ctx = context(self._prec)
            if exponent < 0 and self._v == 0:
                raise DivisionByZero("0 raised to a negative power")
            return BigComplex._wrap(ctx.power(self._v, exponent), self._prec)
        return elementary(self, "power", exponent)

    def __abs__(self):
        return abs(self._v)

    def __complex__(self):
        return complex(self._v)

    def __eq__(self, other):
        # exact comparison of the stored binary values; use close_to for tolerances
        if isinstance(other, BigComplex):
            return self._v == other._v
        w, _ = self._other(other)
        return NotImplemented if w is None else self._v == w

    def __hash__(self):
        return hash((self._v.real, self._v.imag))

    def conjugate(self) -> "BigComplex":
        return BigComplex._wrap(self._v.conjugate(), self._prec)

    def close_to(self, other, eps=None) -> bool:
        tol = Tolerance.for_prec(self._prec).eps if eps is None else eps
        return abs(self - other) < tol

    def is_zero(self, eps=None) -> bool:
        tol = Tolerance.for_prec(self._prec).eps if eps is None else eps
        return abs(self._v) < tol

    def __repr__(self):
        return f"BigComplex({mpmath.nstr(self._v, 20)}, prec={self._prec})"

    def __str__(self):
        return mpmath.nstr(self._v, 20)

    def to_json_value(self) -> dict:
        return {"re": to_decimal(self._v.real, self._prec), "im": to_decimal(self._v.imag, self._prec)}

    @classmethod
    def from_json_value(cls, payload, prec: int) -> "BigComplex":
        if isinstance(payload, dict):
            ctx = context(prec)
            return cls(ctx.mpc(ctx.mpf(payload["re"]), ctx.mpf(payload["im"])), prec)
        return cls(payload, prec)


def decimal_digits(prec: int) -> int:
    return int(math.ceil(prec * math.log10(2))) + 2


def to_decimal(x, prec: int) -> str:
    """Decimal string carrying the full binary precision of ``x``."""
    return mpmath.nstr(x, decimal_digits(prec), strip_zeros=False, min_fixed=-1, max_fixed=1) if x != 0 else "0.0"


def arith_raw(a, b, op: str, prec: int) -> BigComplex:
    ctx = context(prec)
    if op == "add":
        r = ctx.fadd(a, b)
    elif op == "sub":
        r = ctx.fsub(a, b)
    elif op == "mul":
        r = ctx.fmul(a, b)
    elif op == "div":
        if b == 0:
            raise DivisionByZero("division by zero")
        r = ctx.fdiv(a, b)
    else:
        raise ValueError(f"unknown operation {op!r}")
    return BigComplex._wrap(r, prec)


def arith(a: BigComplex, b: BigComplex, op: str) -> BigComplex:
    """``a op b`` for op in add/sub/mul/div, at the smaller of the two precisions."""
    if a.prec < MIN_PREC or b.prec < MIN_PREC:
        raise PrecisionUnderflow("operands below minimum precision")
    return arith_raw(a.value, b.value, op, min(a.prec, b.prec))


def elementary(z: BigComplex, f: str, w=None) -> BigComplex:
    """Principal-branch exp, log, sqrt and power.

    Results are within 4 ulp (relative, at ``z.prec``) of the true value;
    mpmath evaluates these with internal guard bits and rounds once.
    ``power`` computes ``exp(w*log z)`` on the principal branch, with
    ``0**w = 0`` for ``Re(w) > 0``.
    """
    prec = z.prec
    ctx = context(prec)
    v = z.value
    if f == "exp":
        return BigComplex._wrap(ctx.exp(v), prec)
    if f == "log":
        if v == 0:
            raise LogOfZero("log(0)")
        return BigComplex._wrap(ctx.log(v), prec)
    if f == "sqrt":
        return BigComplex._wrap(ctx.sqrt(v), prec)
    if f == "power":
        if w is None:
            raise ValueError("power requires an exponent")
        if isinstance(w, BigComplex):
            prec = min(prec, w.prec)
            ctx = context(prec)
        wv = to_mpc(w, ctx)
        if v == 0:
            if wv.real > 0:
                return BigComplex(0, prec)
            raise LogOfZero("0 raised to a power with non-positive real part")
        if wv.imag == 0 and wv.real == int(wv.real):
            return BigComplex._wrap(ctx.power(v, int(wv.real)), prec)
        return BigComplex._wrap(ctx.exp(wv * ctx.log(v)), prec)
    raise ValueError(f"unknown elementary function {f!r}")


@lru_cache(maxsize=64)
def pi_times_2i(prec: int) -> BigComplex:
    """The constant 2*pi*i at ``prec`` bits (cached per precision)."""
    ctx = context(prec)
    return BigComplex._wrap(ctx.mpc(0, 2 * ctx.pi), prec)


@dataclass(frozen=True)
class Tolerance:
    """Acceptance threshold for "= 0" checks: |residual| < eps."""

    eps: object

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise ValueError("tolerance must lie in (0, 1)")

    @classmethod
    def for_prec(cls, prec: int) -> "Tolerance":
        return _tolerance_cache(int(prec))

    def accepts(self, residual) -> bool:
        return residual < self.eps


@lru_cache(maxsize=None)
def _tolerance_cache(prec: int) -> Tolerance:
    # 2^(-prec/2); half the bits are kept as a guard band for truncation error
    return Tolerance(mpmath.mpf(2) ** (-mpmath.mpf(prec) / 2))
