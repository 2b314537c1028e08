from __future__ import annotations

import pytest

from semielliptic import BigComplex, conjecture_bound, k_independence, lattice_from_invariants, q_independence
from semielliptic.errors import PreconditionViolated
from semielliptic.numeric import context, pi_times_2i
from semielliptic.relations import (
    Budgets,
    KNumber,
    StressInstance,
    classify_case,
    reduce_to_basis,
    stress_test,
)

PREC = 512
TWO_PI_I = pi_times_2i(PREC)
P_GENERIC = BigComplex("0.7313+0.2j", PREC)


def big(x):
    return BigComplex._wrap(x, PREC)


@pytest.fixture(scope="module")
def lat():
    return lattice_from_invariants(1, 2, PREC)


@pytest.fixture(scope="module")
def sq():
    return lattice_from_invariants(4, 0, PREC)


def test_two_pi_i_collapses_modulo_itself():
    ts = [TWO_PI_I, BigComplex(1, PREC)]
    assert q_independence(ts).rank == 2
    rep = q_independence(ts, include_two_pi_i=True)
    assert rep.rank == 1 and rep.basis_indices == (1,)


def test_rational_multiple():
    rep = q_independence([BigComplex(1, PREC), BigComplex(2, PREC)])
    assert rep.rank == 1
    assert rep.relations[0].coefficients == (2, -1)


def test_logs_are_independent_at_budget():
    ctx = context(PREC)
    rep = q_independence([big(ctx.log(2)), big(ctx.log(3))], height_bound=10**6)
    assert rep.rank == 2 and not rep.relations
    assert "10^6" in rep.status or "1000000" in rep.status


def test_half_periods_collapse_modulo_the_lattice(lat):
    rep = k_independence([lat.omega1 / 2, lat.omega2 / 2], lat, modulo_lattice=True)
    assert rep.rank == 0


def test_doubled_point(lat):
    rep = k_independence([P_GENERIC, 2 * P_GENERIC], lat)
    assert rep.rank == 1
    assert rep.relations[0].coefficients in ((2, -1), (-2, 1))


def test_cm_field_relation(sq):
    p = P_GENERIC
    rep = k_independence([p, BigComplex(1j, PREC) * p], sq)
    assert rep.rank == 1 and rep.field_tag == "k"
    assert k_independence([p, BigComplex(1j, PREC) * p], lat_no_cm()).rank == 2


def lat_no_cm():
    return lattice_from_invariants(1, 2, PREC)


def test_k_number_arithmetic():
    i = KNumber(0, 1, 0, 1)        # w = tau with w^2 + 1 = 0
    assert i * i == KNumber(-1, 0, 0, 1)
    x = KNumber(3, 2, 0, 1)
    assert x * x.inverse() == KNumber(1, 0, 0, 1)


def test_case_tags(lat):
    one = BigComplex(1, PREC)
    assert _tags(classify_case([TWO_PI_I], [lat.omega1 / 2, lat.omega2 / 2], lat)) == ("T", "P")
    assert _tags(classify_case([one], [lat.omega1 / 2], lat)) == ("T*", "P~")
    assert _tags(classify_case([one], [P_GENERIC], lat)) == ("T*", "P*")


def _tags(c):
    return c.t_case, c.p_case


def test_preconditions(lat):
    one = BigComplex(1, PREC)
    with pytest.raises(PreconditionViolated) as err:
        classify_case([one, 2 * one], [], lat)
    assert err.value.relation is not None
    with pytest.raises(PreconditionViolated):
        classify_case([], [lat.omega1], lat)


def test_bounds(lat, sq):
    one = BigComplex(1, PREC)
    exc = conjecture_bound([TWO_PI_I], [lat.omega1 / 2, lat.omega2 / 2], lat)
    assert exc.exceptional and exc.bound_conj21 == 4
    assert conjecture_bound([one], [P_GENERIC], lat).bound_conj21 == 3
    assert conjecture_bound([], [P_GENERIC], lat).bound_conj21 == 2
    assert conjecture_bound([], [], lat).bound_etc == 4
    assert conjecture_bound([], [], sq).bound_etc == 2


def test_reduction_witnesses(lat):
    one = BigComplex(1, PREC)
    r = reduce_to_basis([one, TWO_PI_I + 3], [P_GENERIC, P_GENERIC + lat.omega1], lat)
    assert r.ts_basis == (0,) and r.ps_basis == (0,)
    (tw,) = r.t_witnesses
    assert dict((t, str(c)) for t, c in tw.terms) == {"2*pi*i": "1", "t1": "3"}
    (pw,) = r.p_witnesses
    assert dict((t, str(c)) for t, c in pw.terms) == {"omega1": "1", "p1": "1"}


def test_reduction_of_independent_inputs(lat):
    ctx = context(PREC)
    r = reduce_to_basis([big(ctx.log(2))], [P_GENERIC], lat)
    assert not r.t_witnesses and not r.p_witnesses


def test_stress_no_violation_on_generic_values():
    L = lattice_from_invariants(4, 0)
    rep = stress_test("2.4", StressInstance(L, (1,), ("0.5",)), Budgets(degree=3, height=10**4))
    assert not rep.violation
    assert rep.independent == ("exp(t1)", "wp(p1)", "zeta(p1)")


def test_stress_screen_for_two_n():
    L = lattice_from_invariants(4, 0)
    rep = stress_test("2.3", StressInstance(L, (), ("0.4+0.1j",)))
    assert len(rep.independent) >= 2 and not rep.violation


def test_stress_planted_violation_is_detected():
    L = lattice_from_invariants(4, 0)
    inst = StressInstance(L, (), ("0.5",), alpha=2, overrides={"zeta(alpha*p1)": lambda ctx: 1 + ctx.sqrt(2)})
    rep = stress_test("2.9", inst)
    assert rep.violation and rep.dependencies


def test_stress_rejects_unknown_ids():
    with pytest.raises(ValueError):
        stress_test("9.9", StressInstance(lattice_from_invariants(4, 0)))
