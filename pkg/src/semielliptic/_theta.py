"""Jacobi theta series with nome q = exp(i*pi*tau).

Only what the Weierstrass layer needs: theta_1 and its first three
derivatives in one pass, and the three null values theta_2, theta_3,
theta_4.  All inputs are raw mpmath numbers living in ``ctx``.
"""

from __future__ import annotations

from .errors import PrecisionLoss

MAX_TERMS = 100_000


def _small(ctx, term, total, wprec: int) -> bool:
    # |term| <= 2^-wprec |total|, treating exact zeros as converged
    if term == 0:
        return True
    if total == 0:
        return False
    return ctx.mag(term) + wprec < ctx.mag(total)


def theta1_derivatives(ctx, v, q, q14, wprec: int):
    """(theta_1, theta_1', theta_1'', theta_1''') at ``v``.

    Uses theta_1(v) = 2 q^(1/4) sum_n (-1)^n q^(n(n+1)) sin((2n+1)v).  The
    sines and cosines of odd multiples come from the angle-addition
    recurrence, which keeps full relative accuracy for small ``v``.
    """
    s, c = ctx.sin(v), ctx.cos(v)
    s2, c2 = 2 * s * c, 1 - 2 * s * s
    q2 = q * q
    weight = ctx.mpf(1)   # (-1)^n q^(n(n+1))
    step = q2             # q^(2(n+1))
    sums = [ctx.zero] * 4
    k = 1                 # 2n+1
    for n in range(MAX_TERMS):
        k2 = k * k
        terms = (weight * s, weight * k * c, -weight * k2 * s, -weight * k2 * k * c)
        sums = [a + b for a, b in zip(sums, terms)]
        if n > 0 and all(_small(ctx, t, a, wprec) for t, a in zip(terms, sums)):
            break
        weight = -weight * step
        step *= q2
        s, c = s * c2 + c * s2, c * c2 - s * s2
        k += 2
    else:
        raise PrecisionLoss("theta series did not converge")
    f = 2 * q14
    return tuple(f * a for a in sums)


def theta_nulls(ctx, q, q14, wprec: int):
    """(theta_2(0), theta_3(0), theta_4(0))."""
    th2 = ctx.mpf(1)
    th3 = ctx.mpf(1)
    th4 = ctx.mpf(1)
    # theta_2 = 2 q^(1/4) sum_{n>=0} q^(n(n+1)); theta_3/4 = 1 + 2 sum_{n>=1} (+-1)^n q^(n^2)
    p2 = ctx.mpf(1)   # q^(n(n+1))
    p3 = ctx.mpf(1)   # q^(n^2)
    sign = 1
    for n in range(1, MAX_TERMS):
        p2 = p2 * q ** (2 * n)
        p3 = p3 * q ** (2 * n - 1)
        sign = -sign
        th2 += p2
        th3 += 2 * p3
        th4 += 2 * sign * p3
        if _small(ctx, p2, th2, wprec) and _small(ctx, p3, th3, wprec + 2):
            break
    else:
        raise PrecisionLoss("theta null series did not converge")
    return 2 * q14 * th2, th3, th4
