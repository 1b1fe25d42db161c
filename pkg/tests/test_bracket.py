import pytest

from toricvres.bracket import bracket_labels, choose_k, run_bracket, stabilization_sweep
from toricvres.fan import builtin_fan
from toricvres.monomials import MonomialIdeal, parse_ideal
from toricvres.report import IrrelevantIdealError, NotSaturatedError, PreconditionError

from conftest import ideal, label


def test_choose_k(example):
    assert choose_k(example) == 6
    assert choose_k(parse_ideal("<x>", ["x"])) == 2
    assert choose_k(parse_ideal("<x^3*y>", ["x", "y"])) == 4
    with pytest.raises(PreconditionError):
        choose_k(MonomialIdeal.zero(2))


def test_labels(p2p1, example):
    labels = bracket_labels(example, p2p1, 6, p2p1.maximal_cones())
    names = p2p1.names
    lab = labels[p2p1.cone(["x0", "x1", "x2"])]
    assert lab.ideal == label("x3^6*x4^6", "<x2, x1^4>")
    assert lab.cofactor.format(names) == "x3^6*x4^6"
    assert labels[p2p1.cone(["x0", "x1", "x3"])].ideal == label("x2^6*x4^6", "<x3, x1^4>")
    top = labels[p2p1.cone(["x4", "x2", "x3"])]
    assert top.ideal == label("x0^6*x1^6", "<1>")
    assert top.format(names) == "x0^6*x1^6*<1>"


def test_run_example(bracket6, p2p1):
    assert bracket6.ok, [c for c in bracket6.checks if not c.passed]
    assert bracket6.pdim <= p2p1.dim + 1
    totals = bracket6.betti.totals
    assert len(totals) <= 5 and (len(totals) < 5 or totals[4] <= 1)
    assert bracket6.certificate_kinds == {"closure": bracket6.certificate_kinds["closure"]}


def test_label_sum(bracket6, p2p1, example):
    from toricvres.monomials import sum_all
    vs = sum_all((bracket6.labels[c].ideal for c in p2p1.maximal_cones()), 5)
    assert vs == example & p2p1.irrelevant_ideal().bracket_power(6)


def test_p1_point():
    f = builtin_fan("p1")
    I = parse_ideal("<x0>", f.names)
    run = run_bracket(I, f)
    assert run.ok
    assert run.pdim <= 2


def test_not_saturated(p2p1):
    I = ideal("<x3*x4, x0*x3>")
    with pytest.raises(NotSaturatedError) as err:
        run_bracket(I, p2p1)
    assert err.value.saturation == ideal("<x3>")
    assert "x3" in str(err.value)
    run = run_bracket(I, p2p1, check_saturation=False)
    assert run.ok


def test_irrelevant(p2p1):
    with pytest.raises(IrrelevantIdealError):
        run_bracket(p2p1.irrelevant_ideal(), p2p1)
    with pytest.raises(PreconditionError):
        run_bracket(MonomialIdeal.zero(5), p2p1)


def test_k_below_threshold(p2p1, example):
    with pytest.raises(PreconditionError):
        run_bracket(example, p2p1, 5)
    assert run_bracket(example, p2p1, 7).ok


def test_sweep_stable(p2p1, example):
    sw = stabilization_sweep(example, p2p1, 6, 8, polarization=True)
    vectors = {t for _, t in sw.rows}
    assert len(vectors) == 1
    assert sw.stabilized_at == 6
    assert all(sw.polarization.values())


def test_sweep_principal_p1():
    f = builtin_fan("p1")
    sw = stabilization_sweep(parse_ideal("<x0^2>", f.names), f, 3, 6)
    assert len({t for _, t in sw.rows}) == 1


def test_sweep_below_threshold(p2p1, example):
    with pytest.raises(PreconditionError):
        stabilization_sweep(example, p2p1, 5, 6)
    sw = stabilization_sweep(example, p2p1, 2, 7, allow_below=True)
    rows = dict(sw.rows)
    assert rows[6] == rows[7] == (1, 15, 24, 11, 1)
    # the totals are not monotone in k below the threshold
    assert rows[3] == (1, 11, 18, 9, 1) and rows[4] == (1, 11, 17, 8, 1)
    assert not sw.monotone


def test_report(bracket6):
    rep = bracket6.report()
    assert rep["k"] == 6
    assert rep["labels"]["{x0,x1,x2}"] == "x3^6*x4^6*<x1^4, x2>"
    assert rep["pdim"] == bracket6.pdim
