import pytest

from toricvres.bracket import bracket_labels
from toricvres.cells import (ComplexError, LabeledComplex, build_dual_complex, build_tilde_complex,
                             check_boundary_squares, homology_dims, is_contractible_certificate,
                             labeled_chain_complex)
from toricvres.fan import builtin_fan, parse_fan
from toricvres.monomials import MonomialIdeal

from conftest import mono

FANS = ["p1", "p2", "p1p1", "p2p1", "hirzebruch2"]


def shape(cx):
    return [len(cx.cells_of_dim(d)) for d in range(cx.dim + 1)]


def test_p1_dual():
    cx = build_dual_complex(builtin_fan("p1"))
    assert shape(cx) == [2, 1]
    assert frozenset() in cx


def test_p2p1_dual_shape(p2p1):
    cx = build_dual_complex(p2p1)
    assert shape(cx) == [6, 9, 5, 1]
    assert sorted(cx.vertices) == sorted(p2p1.maximal_cones())


def test_p1p1_is_a_square():
    assert shape(build_dual_complex(builtin_fan("p1p1"))) == [4, 4, 1]


@pytest.mark.parametrize("name", FANS)
def test_boundary_squares_and_acyclic(name):
    cx = build_dual_complex(builtin_fan(name))
    assert check_boundary_squares(cx, 32003)
    assert check_boundary_squares(cx, 2)
    assert not any(homology_dims(cx))
    assert cx.euler_characteristic() == 1


@pytest.mark.parametrize("name", FANS)
def test_tilde_complexes_acyclic(name):
    f = builtin_fan(name)
    delta = build_dual_complex(f)
    for t in range(f.nrays):
        tilde = build_tilde_complex(delta, t)
        assert check_boundary_squares(tilde)
        assert not any(homology_dims(tilde))
        for c in tilde.cells:
            assert t not in c and not f.is_cone(c | {t})
            assert all(face in tilde for face, _ in delta.boundary[c] if not f.is_cone(face | {t}))


def test_tilde_example(p2p1):
    tilde = build_tilde_complex(build_dual_complex(p2p1), "x0")
    verts = {p2p1.format_cone(v) for v in tilde.vertices}
    assert verts == {"{x1,x2,x4}", "{x1,x3,x4}", "{x2,x3,x4}"}
    assert shape(tilde) == [3, 3, 1]


def test_tilde_p1():
    f = builtin_fan("p1")
    tilde = build_tilde_complex(build_dual_complex(f), "x0")
    assert tilde.cells == (f.cone(["x1"]),)


def test_tilde_empty_is_an_error():
    # a ray lying in every maximal cone (not a complete fan)
    f = parse_fan("dim 1\nray x0 1\ncone x0\n")
    with pytest.raises(ComplexError):
        build_tilde_complex(build_dual_complex(f), "x0")
    with pytest.raises(KeyError):
        build_tilde_complex(build_dual_complex(builtin_fan("p1")), "x7")


def test_incidence_sign_rule(p2p1):
    cx = build_dual_complex(p2p1)
    gamma = p2p1.cone(["x1", "x3"])
    sigma = p2p1.cone(["x1", "x3", "x4"])
    # x4 sits at position 2 in the sorted cone
    assert cx.incidence(sigma, gamma) == 1
    sigma = p2p1.cone(["x0", "x1", "x3"])
    assert cx.incidence(sigma, gamma) == 1
    assert cx.incidence(p2p1.cone(["x1", "x3"]), p2p1.cone(["x3"])) == 1
    assert cx.incidence(p2p1.cone(["x1", "x3"]), p2p1.cone(["x1"])) == -1


def bracket_lc(f, I, k):
    delta = build_dual_complex(f)
    return LabeledComplex(delta, {c: lab.ideal for c, lab in bracket_labels(I, f, k).items()})


def test_strands_bracket(p2p1, example):
    lc = bracket_lc(p2p1, example, 6)
    assert not lc.strand((0, 0, 0, 0, 0))
    active = lc.strand(mono("x2*x3^6*x4^6"))
    v = p2p1.cone(["x0", "x1", "x2"])
    assert active == build_dual_complex(p2p1).closure(v) == {v}
    cert = is_contractible_certificate(lc.complex, active)
    assert cert.kind == "closure" and cert.cell == v
    for _, _, cert in lc.certify_strands():
        assert cert.kind == "closure"


def test_strand_whole_on_tilde(short_x0, p2p1):
    lc = short_x0.complex
    m = mono("x1^6*x2^6*x3^6*x4^6")
    active = lc.strand(m)
    assert active == frozenset(lc.complex.cells)
    assert is_contractible_certificate(lc.complex, active).kind == "whole"


def test_homology_examples():
    f = builtin_fan("p1")
    cx = build_dual_complex(f)
    assert homology_dims(cx, cx.vertices) == [1, 0]
    assert homology_dims(cx, cx.closure(f.cone(["x0"]))) == [0, 0]
    sq = build_dual_complex(builtin_fan("p1p1"))
    ring = [c for c in sq.cells if c]
    assert homology_dims(sq, ring) == [0, 1, 0]


def test_not_contractible_certificate():
    f = builtin_fan("p1")
    cx = build_dual_complex(f)
    x0 = MonomialIdeal([(1, 0)], 2)
    lc = LabeledComplex(cx, {f.cone(["x0"]): x0, f.cone(["x1"]): x0,
                             frozenset(): MonomialIdeal([(2, 0)], 2)})
    cert = is_contractible_certificate(cx, lc.strand((1, 0)))
    assert cert.kind == "not-contractible" and cert.homology == (1, 0)
    assert not cert.ok


def test_containment_violation_reported():
    f = builtin_fan("p1")
    cx = build_dual_complex(f)
    lc = LabeledComplex(cx, {f.cone(["x0"]): MonomialIdeal([(2, 0)], 2),
                             f.cone(["x1"]): MonomialIdeal([(1, 0)], 2),
                             frozenset(): MonomialIdeal([(1, 0)], 2)})
    assert lc.containment_violations() == [(frozenset(), f.cone(["x0"]))]
    with pytest.raises(ComplexError):
        labeled_chain_complex(lc)


def test_chain_description_shapes(p2p1, example, short_x0):
    desc = labeled_chain_complex(bracket_lc(p2p1, example, 6))
    assert [len(level) for level in desc] == [6, 9, 5, 1]
    desc = labeled_chain_complex(short_x0.complex)
    assert [len(level) for level in desc] == [3, 3, 1]
    f = builtin_fan("p1")
    tilde = build_tilde_complex(build_dual_complex(f), "x0")
    I = MonomialIdeal([(1, 0)], 2)
    assert labeled_chain_complex(LabeledComplex(tilde, {tilde.cells[0]: I})) == [[(tilde.cells[0], I)]]


def test_unlabeled_cell_rejected(p2p1):
    with pytest.raises(ComplexError):
        LabeledComplex(build_dual_complex(p2p1), {})


def test_dump_json(short_x0):
    js = short_x0.complex.to_json()
    assert js["tau"] == "x0"
    assert len(js["cells"]) == 7
    assert {a["sign"] for a in js["augmentation"]} <= {1, -1}
