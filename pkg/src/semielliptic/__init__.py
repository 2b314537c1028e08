"""Weierstrass sigma, zeta and wp at arbitrary precision, with identity checks,
integer-relation searches and transcendence-degree bound bookkeeping."""

from __future__ import annotations

from .divpoly import AlgebraicityCertificate, division_value, minimal_polynomial_probe, psi, torsion_values
from .errors import (
    ParseError,
    PrecisionError,
    PreconditionError,
    PreconditionViolated,
    SemiEllipticError,
)
from .groupexp import GroupPoint, ProjectivePoint, exp_etilde, exp_gm_e, exp_gtilde
from .intrel import IntegerRelation, integer_relation
from .lattice import CMData, Lattice, detect_cm, lattice_from_invariants, lattice_from_periods, lattice_from_tau
from .numeric import BigComplex, Tolerance
from .relations import (
    ConjectureReport,
    IndependenceReport,
    classify_case,
    conjecture_bound,
    k_independence,
    q_independence,
    stress_test,
)
from .weierstrass import (
    WeierstrassValues,
    addition_values,
    cm_multiply,
    cm_polynomials,
    elliptic_log,
    evaluate,
    rational_multiply,
    sigma,
    wp,
    wp_prime,
    xi,
    zeta,
)

__all__ = [name for name in dir() if not name.startswith("_") and name != "annotations"]
