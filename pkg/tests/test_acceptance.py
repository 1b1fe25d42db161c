"""Acceptance criteria 1-8; each prints one PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import time

import pytest

from toricvres.bracket import bracket_labels, run_bracket
from toricvres.corpus import run_corpus
from toricvres.fan import BUILTIN_TEXT, builtin_fan, parse_fan, validate_fan
from toricvres.monomials import parse_ideal
from toricvres.resolution import BettiTable, betti, minimal_resolution, pdim
from toricvres.shorten import run_short

from conftest import EXAMPLE, P2P1, label


@pytest.fixture
def verdict(capsys):
    def say(n, ok, detail=""):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip())
        return ok
    return say


def cone(f, *names):
    return frozenset(f.ray_index(n) for n in names)


def test_criterion_1_bracket_labels(verdict):
    t0 = time.perf_counter()
    f = builtin_fan("p2p1")
    I = parse_ideal(EXAMPLE, f.names)
    got = {c: lab.ideal for c, lab in bracket_labels(I, f, 6, f.maximal_cones()).items()}
    want = {
        cone(f, "x0", "x1", "x2"): label("x3^6*x4^6", "<x2, x1^4>"),
        cone(f, "x0", "x2", "x3"): label("x1^6*x4^6", "<x2*x3, x2^2, x0^2, x3^3>"),
        cone(f, "x0", "x1", "x3"): label("x2^6*x4^6", "<x3, x1^4>"),
        cone(f, "x1", "x2", "x4"): label("x0^6*x3^6", "<x2, x1^4*x4, x1^5>"),
        cone(f, "x2", "x3", "x4"): label("x0^6*x1^6", "<1>"),
        cone(f, "x1", "x3", "x4"): label("x0^6*x2^6", "<x3, x1^4*x4, x1^5>"),
    }
    dt = time.perf_counter() - t0
    ok = got == want and dt < 5
    verdict(1, ok, f"six labels exact in {dt:.2f}s")
    assert got == want
    assert dt < 5


def test_criterion_2_shorten_labels(verdict):
    f = builtin_fan("p2p1")
    I = parse_ideal(EXAMPLE, f.names)
    run = run_short(I, f, "x0")
    got = {v: run.complex.labels[v] for v in run.vertices}
    want = {
        cone(f, "x2", "x3", "x4"): label("x1^6", "<x2*x3, x2^2, x0^2, x3^3>"),
        cone(f, "x1", "x3", "x4"): label("x2^6", "<x3, x1^4*x4, x1^5>"),
        cone(f, "x1", "x2", "x4"): label("x3^6", "<x1*x2, x4^2, x1^5>"),
    }
    bad = [f"{f.format_cone(v)}: got {got[v].format(P2P1)}, expected {want[v].format(P2P1)}"
           for v in want if got.get(v) != want[v]]
    verdict(2, not bad, "; ".join(bad) if bad else "three vertex labels exact")
    assert not bad


@pytest.mark.parametrize("p", [2, 32003])
def test_criterion_3_ranks(verdict, p):
    t0 = time.perf_counter()
    f = builtin_fan("p2p1")
    I = parse_ideal(EXAMPLE, f.names)
    run = run_short(I, f, "x0", p)
    labs = [run.complex.labels[cone(f, *v)] for v in
            (("x2", "x3", "x4"), ("x1", "x3", "x4"), ("x1", "x2", "x4"))]
    ranks = [minimal_resolution(J, p).ranks for J in labs]
    meets = [labs[0] & labs[1], labs[0] & labs[2], labs[1] & labs[2], labs[0] & labs[1] & labs[2]]
    principal = all(m.is_principal() for m in meets)
    tot = run.total.ranks
    dt = time.perf_counter() - t0
    ok = ranks == [(4, 5, 2), (3, 3, 1), (3, 3, 1)] and principal and tot == (10, 14, 5) and dt < 30
    verdict(3, ok, f"p={p}: label ranks {ranks}, meets principal={principal}, Tot {tot}, {dt:.2f}s")
    assert ranks == [(4, 5, 2), (3, 3, 1), (3, 3, 1)]
    assert principal
    assert tot == (10, 14, 5)
    assert dt < 30


def test_criterion_4_theorem_bound(verdict):
    f = builtin_fan("p2p1")
    I = parse_ideal(EXAMPLE, f.names)
    run = run_short(I, f, "x0")
    sat = run.J.saturate_ideal(f.irrelevant_ideal())
    ok = run.pdim == 3 == f.dim and sat == I
    verdict(4, ok, f"pdim S/J = {run.pdim}, J:B^inf == I is {sat == I}")
    assert run.pdim == 3 == f.dim
    assert sat == I


def test_criterion_5_lemma_bound(verdict):
    f = builtin_fan("p2p1")
    I = parse_ideal(EXAMPLE, f.names)
    run = run_bracket(I, f, 6)
    totals = run.betti.totals
    b4 = totals[4] if len(totals) > 4 else 0
    ok = run.pdim <= 4 and b4 <= 1 and run.ok
    verdict(5, ok, f"pdim S/(I∩B^[6]) = {run.pdim}, beta_4 = {b4}, betti {totals}")
    assert run.pdim <= 4
    assert b4 <= 1
    assert run.ok


def test_criterion_6_micro_examples(verdict):
    xy = ["x", "y"]
    ci = parse_ideal("<x^2, y^2>", xy)
    ex = parse_ideal("<x*y^2, x^2*y>", xy)
    b1, b2 = betti(ci).totals, betti(ex).totals
    ok = b1 == b2 == (1, 2, 1) and pdim(ci) == pdim(ex) == 2
    verdict(6, ok, f"{b1}, {b2}")
    assert b1 == (1, 2, 1)
    assert b2 == (1, 2, 1)
    assert pdim(ci) == pdim(ex) == 2


def test_criterion_7_property_suite(verdict):
    t0 = time.perf_counter()
    fans = ["p1p1", "p2p1", "hirzebruch2"]
    rows = run_corpus(fans, 25, seed=0)
    dt = time.perf_counter() - t0
    bad = [r for r in rows if not r.ok]
    per_fan = {name: sum(1 for r in rows if r.fan == name) for name in fans}
    bounds = all(r.pdim_bracket <= r.n + 1 and r.pdim_short <= r.n for r in rows if r.ok)
    ok = not bad and bounds and dt < 600 and min(per_fan.values()) >= 25
    detail = f"{len(rows) - len(bad)}/{len(rows)} ideals {per_fan} in {dt:.1f}s"
    if bad:
        detail += f"; first failure {bad[0].fan} {bad[0].ideal}: {bad[0].failures}"
    verdict(7, ok, detail)
    assert not bad
    assert bounds
    assert dt < 600


def _mutation_classes():
    dropped = parse_fan(BUILTIN_TEXT["p2p1"].replace("cone x1 x3 x4\n", ""))
    dependent = parse_fan(BUILTIN_TEXT["p2p1"].replace("ray x1 1 0 1", "ray x1 1 0 0"))
    weighted = parse_fan("dim 2\nray x0 1 0\nray x1 0 1\nray x2 -1 -2\n"
                         "cone x0 x1\ncone x1 x2\ncone x0 x2\n")
    return [
        ("dropped maximal cone", validate_fan(dropped).failure_class, "completeness"),
        ("dependent rays", validate_fan(dependent).failure_class, "simplicial"),
        ("non-unimodular cone", validate_fan(weighted, require_smooth=True).failure_class, "smoothness"),
    ]


def test_criterion_8_fan_validation(verdict):
    names = ["p1", "p2", "p1p1", "p2p1", "hirzebruch2"]
    bundled = {n: validate_fan(builtin_fan(n), require_smooth=True).ok for n in names}
    muts = _mutation_classes()
    ok = all(bundled.values()) and all(got == want for _, got, want in muts)
    verdict(8, ok, f"bundled {bundled}; mutations " +
            ", ".join(f"{name} -> {got}" for name, got, _ in muts))
    assert all(bundled.values())
    for name, got, want in muts:
        assert got == want, name


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
