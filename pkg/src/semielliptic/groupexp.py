"""Exponential maps of G_m x E, of the extension E~ and of G~ = G_a x G_m x E~.

Projective coordinates carry the factor sigma(z)^3, which clears the poles
of wp, wp' and zeta.  At lattice points the product 0 * infinity is replaced
by its limit: [0:1:0] on E, and [0:1:0:0:c] on E~ with c = w + eta(omega),
which is the neutral point [0:1:0:0:0] exactly on the kernel w = -eta(omega).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .lattice import Lattice
from .numeric import BigComplex, Tolerance, context, rounded, to_mpc
from .weierstrass import _invariants, _on_lattice, raw_values


@dataclass(frozen=True)
class ProjectivePoint:
    """Homogeneous coordinates, compared up to a common nonzero scalar."""

    coords: tuple[BigComplex, ...]

    def __post_init__(self):
        if len(self.coords) not in (3, 5):
            raise ValueError("projective points here live in P^2 or P^4")
        if all(abs(c.value) == 0 for c in self.coords):
            raise ValueError("all homogeneous coordinates are zero")

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    @property
    def prec(self) -> int:
        return min(c.prec for c in self.coords)

    def normalized(self) -> list:
        """Raw coordinates scaled so the largest in modulus is exactly 1."""
        raw = [c.value for c in self.coords]
        pivot = max(raw, key=abs)
        return [x / pivot for x in raw]

    def distance(self, other: "ProjectivePoint"):
        """Largest coordinate difference after normalizing both points."""
        if self.dim != other.dim:
            raise ValueError("points live in different projective spaces")
        a = self.normalized()
        raw = [c.value for c in other.coords]
        # scale the other point by the same pivot index so the comparison is consistent
        i = max(range(len(a)), key=lambda j: abs(a[j]))
        if raw[i] == 0:
            return context(self.prec).mpf(1)
        b = [x / raw[i] for x in raw]
        return max(abs(x - y) for x, y in zip(a, b))

    def equivalent(self, other: "ProjectivePoint", eps=None) -> bool:
        eps = Tolerance.for_prec(min(self.prec, other.prec)).eps if eps is None else eps
        return self.distance(other) < eps

    def to_json(self) -> dict:
        return {"coords": [c.to_json_value() for c in self.coords], "dim": self.dim}


@dataclass(frozen=True)
class GroupPoint:
    affine: tuple[BigComplex, ...]
    projective: ProjectivePoint

    def neutral_residual(self):
        """Distance to the neutral element (affine (1) or (0, 1), projective [0:1:0...])."""
        prec = self.projective.prec
        neutral = neutral_point(self.projective.dim, prec)
        target = (1,) if len(self.affine) == 1 else (0, 1)
        aff = max(abs(a.value - t) for a, t in zip(self.affine, target))
        return max(aff, self.projective.distance(neutral))

    def is_neutral(self, eps=None) -> bool:
        eps = Tolerance.for_prec(self.projective.prec).eps if eps is None else eps
        return self.neutral_residual() < eps

    def to_json(self) -> dict:
        return {"affine": [a.to_json_value() for a in self.affine], "projective": self.projective.to_json()}


def neutral_point(dim: int, prec: int) -> ProjectivePoint:
    return ProjectivePoint(tuple(BigComplex(1 if i == 1 else 0, prec) for i in range(dim + 1)))


def _point(values, prec: int) -> ProjectivePoint:
    return ProjectivePoint(tuple(BigComplex._wrap(v, prec) for v in values))


def _arg(L: Lattice, x):
    ctx = L.kernel().ctx
    return rounded(ctx, x.value) if isinstance(x, BigComplex) else to_mpc(x, ctx)


def _lattice_eta(L: Lattice, zr):
    k = L.kernel()
    _, a, b = k.reduce(zr)
    return a * k.eta1 + b * k.eta2


def _elliptic_part(L: Lattice, zr, w=None):
    ctx = L.kernel().ctx
    if _on_lattice(L, zr):
        coords = [ctx.zero, ctx.one, ctx.zero]
        if w is not None:
            coords += [ctx.zero, w + _lattice_eta(L, zr)]
        return coords
    r = raw_values(L, zr)
    s3 = r.sigma**3
    coords = [s3 * r.wp, s3 * r.wpp, s3]
    if w is not None:
        shifted = w + r.zeta
        coords += [s3 * shifted, s3 * (shifted * r.wpp + 2 * r.wp * r.wp)]
    return coords


def exp_gm_e(t, z, L: Lattice) -> GroupPoint:
    """(t, z) -> (e^t, sigma(z)^3 [wp(z) : wp'(z) : 1])."""
    ctx = L.kernel().ctx
    tr, zr = _arg(L, t), _arg(L, z)
    return GroupPoint((BigComplex._wrap(ctx.exp(tr), L.prec),), _point(_elliptic_part(L, zr), L.prec))


def exp_etilde(w, z, L: Lattice) -> ProjectivePoint:
    """(w, z) -> sigma(z)^3 [wp : wp' : 1 : w + zeta : (w + zeta) wp' + 2 wp^2]."""
    return _point(_elliptic_part(L, _arg(L, z), _arg(L, w)), L.prec)


def exp_gtilde(z0, z1, w, z, L: Lattice) -> GroupPoint:
    """(z0, z1, w, z) -> ((z0, e^z1), exp_etilde(w, z))."""
    ctx = L.kernel().ctx
    affine = (BigComplex._wrap(_arg(L, z0), L.prec), BigComplex._wrap(ctx.exp(_arg(L, z1)), L.prec))
    return GroupPoint(affine, exp_etilde(w, z, L))


def curve_residual(point: ProjectivePoint, L: Lattice):
    """|Y^2 Z - 4X^3 + g2 X Z^2 + g3 Z^3| on the normalized first three coordinates."""
    ctx = context(point.prec)
    g2, g3 = _invariants(L, ctx)
    x, y, z = point.normalized()[:3]
    return abs(y * y * z - (4 * x**3 - g2 * x * z * z - g3 * z**3))


def kernel_point(a: int, omega, L: Lattice) -> tuple[BigComplex, BigComplex, BigComplex, BigComplex]:
    """(0, 2*pi*i*a, -eta(omega), omega) for a lattice vector omega."""
    ctx = L.kernel().ctx
    wr = _arg(L, omega)
    eta = _lattice_eta(L, wr)
    big = lambda v: BigComplex._wrap(v, L.prec)
    return big(ctx.zero), big(2j * ctx.pi * a), big(-eta), big(wr)


def torsion_point(a: int, m: int, omega, L: Lattice):
    """(0, 2*pi*i*a/m, -eta(omega)/m, omega/m)."""
    z0, z1, w, z = kernel_point(a, omega, L)
    return z0, z1 / m, w / m, z / m
