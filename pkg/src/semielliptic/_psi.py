"""Division-polynomial recurrence shared by the exact and numeric paths.

For the curve Y^2 = F(X) = 4X^3 - g2 X - g3 with (X, Y) = (wp(u), wp'(u)),
psi_n(u) = sigma(n u) / sigma(u)^(n^2) equals P_n(X) for odd n and Y*P_n(X)
for even n.  The recurrence below works on P_n only, so Y never appears in
a denominator:

    P_{2k+1} = F^2 P_{k+2} P_k^3 - P_{k-1} P_{k+1}^3      (k even)
    P_{2k+1} = P_{k+2} P_k^3 - F^2 P_{k-1} P_{k+1}^3      (k odd)
    P_{2k}   = -P_k (P_{k+2} P_{k-1}^2 - P_{k-2} P_{k+1}^2)

The ring is pluggable: sympy polynomials for exact work, or second-order
jets (value, d/dX, d^2/dX^2) for numerics.
"""

from __future__ import annotations

from typing import Callable


def p3_coefficients(g2, g3):
    """Coefficients of P_3, constant term first (g2, g3 must not be Python ints)."""
    return [-g2 * g2 / 16, -3 * g3, -3 * g2 / 2, 0, 3]


def p4_coefficients(g2, g3):
    """Coefficients of P_4 (psi_4 = Y * P_4), constant term first."""
    return [
        -(g2**3 / 32 - g3 * g3),
        g2 * g3 / 2,
        5 * g2 * g2 / 8,
        10 * g3,
        5 * g2 / 2,
        0,
        -2,
    ]


def division_sequence(
    n: int,
    base: dict,
    mul: Callable,
    sub: Callable,
    neg: Callable,
    f_squared,
    memo: dict | None = None,
):
    """P_n via the recurrence, with ``base`` holding P_0..P_4."""
    memo = dict(base) if memo is None else memo
    for k, v in base.items():
        memo.setdefault(k, v)

    def get(k: int):
        if k in memo:
            return memo[k]
        if k < 0:
            val = neg(get(-k))
        elif k % 2:
            j = (k - 1) // 2
            a = mul(get(j + 2), cube(get(j)))
            b = mul(get(j - 1), cube(get(j + 1)))
            val = sub(mul(f_squared, a), b) if j % 2 == 0 else sub(a, mul(f_squared, b))
        else:
            j = k // 2
            inner = sub(mul(get(j + 2), sq(get(j - 1))), mul(get(j - 2), sq(get(j + 1))))
            val = neg(mul(get(j), inner))
        memo[k] = val
        return val

    def sq(x):
        return mul(x, x)

    def cube(x):
        return mul(x, mul(x, x))

    return get(n)


# ------------------------------------------------------------ numeric jets


def jet_mul(a, b):
    return (a[0] * b[0], a[1] * b[0] + a[0] * b[1], a[2] * b[0] + 2 * a[1] * b[1] + a[0] * b[2])


def jet_sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def jet_neg(a):
    return (-a[0], -a[1], -a[2])


def poly_jet(coeffs, x):
    """(p(x), p'(x), p''(x)) by Horner's scheme on the jet of x."""
    v = d1 = d2 = 0 * x
    for c in reversed(coeffs):
        d2 = d2 * x + 2 * d1
        d1 = d1 * x + v
        v = v * x + c
    return (v, d1, d2)


def p_jets(ns, x, g2, g3) -> dict:
    """{n: (P_n, dP_n/dX, d^2P_n/dX^2)} at the numeric point X = x."""
    zero = 0 * x
    one = zero + 1
    g2 = g2 + zero
    g3 = g3 + zero
    base = {
        0: (zero, zero, zero),
        1: (one, zero, zero),
        2: (-one, zero, zero),
        3: poly_jet([c + zero for c in p3_coefficients(g2, g3)], x),
        4: poly_jet([c + zero for c in p4_coefficients(g2, g3)], x),
    }
    f = poly_jet([-g3, -g2, zero, 4 + zero], x)
    f2 = jet_mul(f, f)
    memo = dict(base)
    return {n: division_sequence(n, base, jet_mul, jet_sub, jet_neg, f2, memo) for n in ns}


def psi_log_derivatives(n: int, x, y, g2, jets: dict):
    """(psi_n, (log psi_n)', (log psi_n)'') in u, from the X-jets of P_n.

    Uses X' = Y and Y' = 6X^2 - g2/2 along u -> (wp(u), wp'(u)).
    """
    p, px, pxx = jets[abs(n)]
    sign = -1 if n < 0 else 1
    yp = 6 * x * x - g2 / 2
    if abs(n) % 2:
        psi = p
        d1 = px * y
        d2 = pxx * y * y + px * yp
    else:
        psi = y * p
        d1 = yp * p + y * y * px
        d2 = y * (12 * x * p + 3 * yp * px + y * y * pxx)
    l1 = d1 / psi
    l2 = d2 / psi - l1 * l1
    return sign * psi, l1, l2
