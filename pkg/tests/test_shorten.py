import pytest

from toricvres.cells import ComplexError
from toricvres.fan import builtin_fan
from toricvres.monomials import colon_fixpoint, intersect_all, parse_ideal
from toricvres.report import NotSaturatedError, PreconditionError
from toricvres.shorten import (default_tau, j_label, j_tilde, report_vpdim_bound, reshorten,
                               run_short, s_of_sigma)

from conftest import ideal, label


def cone(f, *names):
    return frozenset(f.ray_index(n) for n in names)


def test_s_of_sigma(p2p1):
    inside, maximal = s_of_sigma(p2p1, cone(p2p1, "x1", "x2", "x4"), "x0")
    assert {p2p1.format_cone(c) for c in maximal} == {"{x0,x1,x2}", "{x1,x2,x4}"}
    assert all(c <= cone(p2p1, "x0", "x1", "x2", "x4") for c in inside)
    assert frozenset() in inside


def test_s_of_sigma_p1():
    f = builtin_fan("p1")
    inside, maximal = s_of_sigma(f, cone(f, "x1"), "x0")
    assert set(inside) == {frozenset(), cone(f, "x0"), cone(f, "x1")}
    assert set(maximal) == {cone(f, "x0"), cone(f, "x1")}


def test_s_of_sigma_rejects_cones(p2p1):
    with pytest.raises(ComplexError):
        s_of_sigma(p2p1, cone(p2p1, "x1", "x2"), "x0")


def test_s_of_sigma_single_ray(p2p1):
    inside, _ = s_of_sigma(p2p1, cone(p2p1, "x4"), "x0")
    assert set(inside) == {frozenset(), cone(p2p1, "x4"), cone(p2p1, "x0")}


def test_j_tilde(p2p1, example):
    assert j_tilde(example, p2p1, cone(p2p1, "x2", "x3", "x4"), "x0", 6) == \
        ideal("<x2*x3, x2^2, x0^2, x3^3>")
    assert j_tilde(example, p2p1, cone(p2p1, "x1", "x3", "x4"), "x0", 6) == \
        ideal("<x3, x1^4*x4, x1^5>")


def test_j_tilde_third_vertex(p2p1, example):
    sigma = cone(p2p1, "x1", "x2", "x4")
    got = j_tilde(example, p2p1, sigma, "x0", 6)
    oracle = intersect_all(colon_fixpoint(example, m) for m in
                           (p2p1.complement_monomial(cone(p2p1, "x0", "x1", "x2")),
                            p2p1.complement_monomial(sigma)))
    assert got == oracle == ideal("<x2, x1^4*x4, x1^5>")


def test_j_label(p2p1, example):
    assert j_label(example, p2p1, cone(p2p1, "x2", "x3", "x4"), "x0", 6).ideal == \
        label("x1^6", "<x2*x3, x2^2, x0^2, x3^3>")
    assert j_label(example, p2p1, cone(p2p1, "x1", "x3", "x4"), "x0", 6).ideal == \
        label("x2^6", "<x3, x1^4*x4, x1^5>")


def test_edge_label_is_meet(short_x0, p2p1):
    labs = short_x0.complex.labels
    a, b = cone(p2p1, "x2", "x3", "x4"), cone(p2p1, "x1", "x2", "x4")
    edge = cone(p2p1, "x2", "x4")
    assert labs[edge] == labs[a] & labs[b]
    assert labs[edge] == label("x1^6*x3^6", "<1>")


def test_run_example(short_x0, p2p1, example):
    run = short_x0
    assert run.ok, [c for c in run.checks if not c.passed]
    ranks = {p2p1.format_cone(v): run.columns[v].ranks for v in run.vertices}
    assert ranks == {"{x2,x3,x4}": (4, 5, 2), "{x1,x3,x4}": (3, 3, 1), "{x1,x2,x4}": (3, 3, 1)}
    for c in run.complex.complex.cells:
        if len(c) < 3:
            assert run.complex.labels[c].is_principal()
    assert run.total.ranks == (10, 14, 5)
    assert run.pdim == 3
    assert run.J.saturate_ideal(p2p1.irrelevant_ideal()) == example
    assert report_vpdim_bound(run) == 3
    assert run.certificate_kinds.get("whole", 0) >= 1


def test_run_tau_x4(p2p1, example):
    run = run_short(example, p2p1, "x4")
    assert run.ok
    assert run.pdim <= 3
    assert run.J.saturate_ideal(p2p1.irrelevant_ideal()) == example


def test_p1_smallest():
    f = builtin_fan("p1")
    I = parse_ideal("<x0>", f.names)
    run = run_short(I, f, "x0")
    assert run.ok
    assert run.complex.complex.cells == (cone(f, "x1"),)
    assert run.J.is_principal()
    assert run.pdim == 1 == report_vpdim_bound(run)


def test_default_tau(p2p1):
    assert default_tau(p2p1) == 0


def test_preconditions(p2p1, example):
    with pytest.raises(NotSaturatedError):
        run_short(ideal("<x3*x4, x0*x3>"), p2p1)
    with pytest.raises(PreconditionError):
        run_short(example, p2p1, "x0", k=3)
    with pytest.raises(PreconditionError):
        run_short(parse_ideal("<1>", p2p1.names), p2p1)
    with pytest.raises(KeyError):
        run_short(example, p2p1, "x7")


def test_not_iterable(short_x0):
    with pytest.raises(NotSaturatedError):
        reshorten(short_x0)


def test_char_two(p2p1, example):
    run = run_short(example, p2p1, "x0", p=2)
    assert run.ok and run.total.ranks == (10, 14, 5)
