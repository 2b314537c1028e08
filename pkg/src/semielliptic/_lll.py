"""Integral LLL reduction (exact arithmetic, no floating Gram-Schmidt)."""

from __future__ import annotations

from gmpy2 import mpz


def lll_reduce(basis: list[list[int]], delta: tuple[int, int] = (99, 100)) -> list[list[int]]:
    """Return an LLL-reduced basis of the lattice spanned by the rows of ``basis``.

    The rows must be linearly independent.  All arithmetic is exact, using
    the integral formulation (subdeterminants ``d`` and scaled Gram-Schmidt
    coefficients ``lam``), so the result does not depend on any float
    precision.  ``delta`` is the Lovasz constant as a fraction.
    """
    b = [[mpz(v) for v in row] for row in basis]
    n = len(b)
    if n <= 1:
        return [[int(v) for v in row] for row in b]
    dn, dd = (mpz(delta[0]), mpz(delta[1]))

    def dot(u, v):
        return sum((x * y for x, y in zip(u, v)), mpz(0))

    d = [mpz(0)] * (n + 1)
    d[0] = mpz(1)
    lam = [[mpz(0)] * n for _ in range(n)]

    def red(k, l):
        dl = d[l + 1]
        lk = lam[k][l]
        if 2 * abs(lk) > dl:
            q = (2 * lk + dl) // (2 * dl)
            bk, bl = b[k], b[l]
            for i in range(len(bk)):
                bk[i] -= q * bl[i]
            lam[k][l] = lk - q * dl
            lrow, krow = lam[l], lam[k]
            for i in range(l):
                krow[i] -= q * lrow[i]

    def swap(k, kmax):
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lk = lam[k][k - 1]
        B = (d[k - 1] * d[k + 1] + lk * lk) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lk * t) // d[k]
            lam[i][k - 1] = (B * t + lk * lam[i][k]) // d[k + 1]
        d[k] = B

    d[1] = dot(b[0], b[0])
    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = dot(b[k], b[j])
                for i in range(j):
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = u
                else:
                    if u == 0:
                        raise ValueError("basis rows are linearly dependent")
                    d[k + 1] = u
        red(k, k - 1)
        lk = lam[k][k - 1]
        if dd * d[k + 1] * d[k - 1] < dn * d[k] * d[k] - dd * lk * lk:
            swap(k, kmax)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return [[int(v) for v in row] for row in b]
