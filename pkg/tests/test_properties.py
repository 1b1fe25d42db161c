"""Randomized laws: ideal arithmetic, resolutions and both pipelines."""

import random

from hypothesis import HealthCheck, given, settings, strategies as st

from toricvres.bracket import bracket_labels, choose_k, run_bracket
from toricvres.cells import build_dual_complex
from toricvres.corpus import random_ideal
from toricvres.fan import builtin_fan
from toricvres.monomials import Monomial, MonomialIdeal, colon_fixpoint, intersect_all, polarize
from toricvres.resolution import (BettiTable, betti_via_koszul_strands, lattice_resolution, minimize,
                                  taylor_complex, verify_resolution)
from toricvres.shorten import run_short

NV = 3
FAST = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
SLOW = settings(max_examples=15, deadline=None, suppress_health_check=[HealthCheck.too_slow])

exps = st.tuples(*[st.integers(0, 4)] * NV)
monomials = exps.map(Monomial)
ideals = st.lists(exps, min_size=1, max_size=6).map(lambda g: MonomialIdeal(g, NV))


def minimal(I):
    return all(a == b or not a.divides(b) for a in I.gens for b in I.gens)


@FAST
@given(ideals, ideals, monomials)
def test_operations_stay_minimal(I, J, m):
    for K in (I & J, I + J, I.colon(m), I.saturate(m), I.bracket_power(2), I.multiply(m)):
        assert minimal(K)


@FAST
@given(ideals, ideals, ideals)
def test_intersection_laws(I, J, K):
    assert I & J == J & I
    assert (I & J) & K == I & (J & K)
    for g in (I & J).gens:
        assert g in I and g in J


@FAST
@given(ideals, monomials)
def test_saturation_is_colon_fixpoint(I, m):
    if m.is_one():
        return
    sat = I.saturate(m)
    assert sat == colon_fixpoint(I, m)
    assert sat.saturate(m) == sat


@FAST
@given(ideals, ideals)
def test_saturation_by_ideal_distributes(I, J):
    if any(g.is_one() for g in J.gens):
        return
    assert I.saturate_ideal(J) == intersect_all(I.saturate(g) for g in J.gens)


@FAST
@given(ideals, monomials)
def test_membership_via_colon(I, m):
    assert (m in I) == I.colon(m).is_unit()


@FAST
@given(ideals)
def test_polarization_roundtrip(I):
    P = polarize(I)
    assert P.depolarize() == I
    assert all(max(g.exps) <= 1 for g in P.ideal.gens)


@SLOW
@given(ideals)
def test_oracle_equivalence(I):
    if I.is_unit():
        return
    tay = minimize(taylor_complex(I))
    assert verify_resolution(tay, I)
    for p in (2, 32003):
        assert BettiTable.from_resolution(minimize(taylor_complex(I, p))) == betti_via_koszul_strands(I, p)
    assert lattice_resolution(I).ranks == tay.ranks
    pol = polarize(I).ideal
    assert BettiTable.from_resolution(lattice_resolution(pol)).totals == BettiTable.from_resolution(tay).totals


@SLOW
@given(ideals)
def test_minimize_idempotent(I):
    F = minimize(taylor_complex(I))
    F.check()
    assert minimize(F).ranks == F.ranks


FANS = {name: builtin_fan(name) for name in ("p1p1", "p2p1", "hirzebruch2")}


@SLOW
@given(st.sampled_from(sorted(FANS)), st.integers(0, 10**6))
def test_intersection_law_on_cones(name, seed):
    f = FANS[name]
    I = random_ideal(f, random.Random(seed))
    k = choose_k(I)
    labels = {c: lab.ideal for c, lab in bracket_labels(I, f, k).items()}
    cones = build_dual_complex(f).cells
    for a in cones:
        for b in cones:
            assert labels[a] & labels[b] == labels[a & b]


@SLOW
@given(st.sampled_from(sorted(FANS)), st.integers(0, 10**6))
def test_pipelines(name, seed):
    f = FANS[name]
    I = random_ideal(f, random.Random(seed))
    br = run_bracket(I, f)
    assert br.ok, [c for c in br.checks if not c.passed]
    assert br.pdim <= f.dim + 1
    sr = run_short(I, f)
    assert sr.ok, [c for c in sr.checks if not c.passed]
    assert sr.pdim <= f.dim
    assert sr.J.saturate_ideal(f.irrelevant_ideal()) == I
    assert set(sr.certificate_kinds) <= {"closure", "whole"}
