import pytest

from toricvres.fan import builtin_fan
from toricvres.monomials import MonomialIdeal, parse_ideal, parse_monomial

EXAMPLE = "<x2*x3, x1^4*x2^2*x4, x0^2*x1^4*x4, x1^5*x2^2, x0^2*x1^5, x1^4*x3^3*x4, x1^5*x3^3>"
P2P1 = ["x0", "x1", "x2", "x3", "x4"]


def ideal(text, names=P2P1):
    return parse_ideal(text, names)


def mono(text, names=P2P1):
    return parse_monomial(text, names)


def label(cofactor, quotient, names=P2P1):
    """``cofactor * <quotient>`` as a plain ideal."""
    return parse_ideal(quotient, names).multiply(parse_monomial(cofactor, names))


@pytest.fixture(scope="session")
def p2p1():
    return builtin_fan("p2p1")


@pytest.fixture(scope="session")
def example(p2p1):
    return parse_ideal(EXAMPLE, p2p1.names)


@pytest.fixture(scope="session")
def short_x0(p2p1, example):
    from toricvres.shorten import run_short
    return run_short(example, p2p1, "x0")


@pytest.fixture(scope="session")
def bracket6(p2p1, example):
    from toricvres.bracket import run_bracket
    return run_bracket(example, p2p1, 6)
