"""Monomials and monomial ideals in a polynomial ring with the fine grading.

Monomials are exponent vectors; ideals are stored by their minimal generators in
a canonical order (decreasing lex, ``x0 > x1 > ...``) so that equal ideals compare
equal and hash identically.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

# exponents are treated as unsigned 32-bit values
MAX_EXPONENT = 2**32 - 1


class MonomialError(ValueError):
    pass


class ParseError(ValueError):
    pass


def _checked(exps: Iterable[int]) -> tuple[int, ...]:
    out = tuple(int(e) for e in exps)
    for e in out:
        if e < 0:
            raise MonomialError(f"negative exponent in {out}")
        if e > MAX_EXPONENT:
            raise OverflowError(f"exponent {e} exceeds {MAX_EXPONENT}")
    return out


@dataclass(frozen=True, order=True, slots=True)
class Monomial:
    exps: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "exps", _checked(self.exps))

    @classmethod
    def one(cls, nvars: int) -> Monomial:
        return cls((0,) * nvars)

    @classmethod
    def var(cls, i: int, nvars: int, power: int = 1) -> Monomial:
        e = [0] * nvars
        e[i] = power
        return cls(tuple(e))

    @classmethod
    def squarefree(cls, support: Iterable[int], nvars: int) -> Monomial:
        e = [0] * nvars
        for i in support:
            e[i] = 1
        return cls(tuple(e))

    @property
    def nvars(self) -> int:
        return len(self.exps)

    @property
    def degree(self) -> int:
        return sum(self.exps)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(i for i, e in enumerate(self.exps) if e)

    def is_one(self) -> bool:
        return not any(self.exps)

    def _same_ring(self, other: Monomial):
        if len(self.exps) != len(other.exps):
            raise MonomialError(
                f"ambient size mismatch: {len(self.exps)} vs {len(other.exps)}")

    def divides(self, other: Monomial) -> bool:
        self._same_ring(other)
        return all(a <= b for a, b in zip(self.exps, other.exps))

    def lcm(self, other: Monomial) -> Monomial:
        self._same_ring(other)
        return Monomial(tuple(max(a, b) for a, b in zip(self.exps, other.exps)))

    def gcd(self, other: Monomial) -> Monomial:
        self._same_ring(other)
        return Monomial(tuple(min(a, b) for a, b in zip(self.exps, other.exps)))

    def __mul__(self, other: Monomial) -> Monomial:
        self._same_ring(other)
        return Monomial(tuple(a + b for a, b in zip(self.exps, other.exps)))

    def __truediv__(self, other: Monomial) -> Monomial:
        """Exact quotient; raises if ``other`` does not divide ``self``."""
        if not other.divides(self):
            raise MonomialError("inexact monomial division")
        return Monomial(tuple(a - b for a, b in zip(self.exps, other.exps)))

    def quotient(self, other: Monomial) -> Monomial:
        # self / gcd(self, other)
        self._same_ring(other)
        return Monomial(tuple(max(a - b, 0) for a, b in zip(self.exps, other.exps)))

    def __pow__(self, k: int) -> Monomial:
        if k < 0:
            raise MonomialError("negative power")
        return Monomial(tuple(a * k for a in self.exps))

    def format(self, names: Sequence[str]) -> str:
        return format_monomial(self, names)


def lcm(a: Monomial, b: Monomial) -> Monomial:
    return a.lcm(b)


def gcd(a: Monomial, b: Monomial) -> Monomial:
    return a.gcd(b)


def _divides(a: tuple, b: tuple) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def minimalize(exps: Iterable[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Minimal elements under divisibility, in canonical (decreasing lex) order."""
    kept: list[tuple[int, ...]] = []
    for e in sorted(set(exps), key=sum):
        if not any(_divides(g, e) for g in kept):
            kept.append(e)
    kept.sort(reverse=True)
    return kept


@dataclass(frozen=True, slots=True)
class MonomialIdeal:
    """A monomial ideal given by its minimal generators.

    The zero ideal has no generators; the unit ideal is generated by ``1``.
    """

    nvars: int
    gens: tuple[Monomial, ...]

    def __init__(self, gens: Iterable[Monomial | Sequence[int]], nvars: int | None = None):
        raw = [g.exps if isinstance(g, Monomial) else _checked(g) for g in gens]
        if nvars is None:
            if not raw:
                raise MonomialError("nvars required for the zero ideal")
            nvars = len(raw[0])
        for e in raw:
            if len(e) != nvars:
                raise MonomialError(f"generator {e} not in a ring with {nvars} variables")
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "gens", tuple(Monomial(e) for e in minimalize(raw)))

    @classmethod
    def zero(cls, nvars: int) -> MonomialIdeal:
        return cls([], nvars)

    @classmethod
    def unit(cls, nvars: int) -> MonomialIdeal:
        return cls([Monomial.one(nvars)], nvars)

    @classmethod
    def principal(cls, m: Monomial) -> MonomialIdeal:
        return cls([m], m.nvars)

    def __repr__(self):
        return f"MonomialIdeal({[g.exps for g in self.gens]!r}, nvars={self.nvars})"

    def __len__(self):
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)

    def is_zero(self) -> bool:
        return not self.gens

    def is_unit(self) -> bool:
        return len(self.gens) == 1 and self.gens[0].is_one()

    def is_principal(self) -> bool:
        return len(self.gens) == 1

    def _same_ring(self, other):
        n = other.nvars
        if n != self.nvars:
            raise MonomialError(f"ambient size mismatch: {self.nvars} vs {n}")

    def contains(self, m: Monomial) -> bool:
        self._same_ring(m)
        e = m.exps
        return any(_divides(g.exps, e) for g in self.gens)

    __contains__ = contains

    def contains_ideal(self, other: MonomialIdeal) -> bool:
        return all(self.contains(g) for g in other.gens)

    def intersect(self, other: MonomialIdeal) -> MonomialIdeal:
        self._same_ring(other)
        return MonomialIdeal(
            [tuple(map(max, a.exps, b.exps)) for a in self.gens for b in other.gens],
            self.nvars)

    __and__ = intersect

    def __add__(self, other: MonomialIdeal) -> MonomialIdeal:
        self._same_ring(other)
        return MonomialIdeal(self.gens + other.gens, self.nvars)

    def multiply(self, m: Monomial) -> MonomialIdeal:
        return MonomialIdeal([g * m for g in self.gens], self.nvars)

    def colon(self, m: Monomial) -> MonomialIdeal:
        """``I : m``; generated by ``g / gcd(g, m)``."""
        self._same_ring(m)
        return MonomialIdeal([g.quotient(m) for g in self.gens], self.nvars)

    def saturate(self, m: Monomial) -> MonomialIdeal:
        """``I : m^inf``, by zeroing the exponents of the variables dividing ``m``."""
        self._same_ring(m)
        supp = m.support
        return MonomialIdeal(
            [tuple(0 if i in supp else e for i, e in enumerate(g.exps)) for g in self.gens],
            self.nvars)

    def saturate_ideal(self, other: MonomialIdeal) -> MonomialIdeal:
        """``I : J^inf`` as the intersection of the saturations by each generator of ``J``."""
        self._same_ring(other)
        if other.is_zero():
            raise MonomialError("saturation by the zero ideal")
        result = None
        for g in other.gens:
            s = self.saturate(g)
            result = s if result is None else result.intersect(s)
        return result

    def bracket_power(self, k: int) -> MonomialIdeal:
        if k < 1:
            raise MonomialError(f"bracket power needs k >= 1, got {k}")
        return MonomialIdeal([g ** k for g in self.gens], self.nvars)

    def lcm_of_gens(self) -> Monomial:
        out = Monomial.one(self.nvars)
        for g in self.gens:
            out = out.lcm(g)
        return out

    def max_exponent(self) -> int:
        return max((max(g.exps, default=0) for g in self.gens), default=0)

    def format(self, names: Sequence[str]) -> str:
        return format_ideal(self, names)


def intersect_all(ideals: Iterable[MonomialIdeal]) -> MonomialIdeal:
    it = iter(ideals)
    out = next(it)
    for J in it:
        out = out.intersect(J)
    return out


def sum_all(ideals: Iterable[MonomialIdeal], nvars: int) -> MonomialIdeal:
    gens = []
    for J in ideals:
        gens.extend(J.gens)
    return MonomialIdeal(gens, nvars)


def colon_fixpoint(I: MonomialIdeal, m: Monomial, max_iter: int = 10_000) -> MonomialIdeal:
    """``I : m^inf`` by repeated colon until the ideal stops changing."""
    cur = I
    for _ in range(max_iter):
        nxt = cur.colon(m)
        if nxt == cur:
            return cur
        cur = nxt
    raise RuntimeError("colon iteration did not stabilize")


# -- polarization -----------------------------------------------------------

@dataclass(frozen=True)
class Polarization:
    ideal: MonomialIdeal
    names: tuple[str, ...]
    # origin[v] = index of the original variable that new variable v specializes to
    origin: tuple[int, ...]
    # (i, j) -> variable index of y_{i,j}; i >= 2
    extra: dict

    def depolarize(self, J: MonomialIdeal | None = None) -> MonomialIdeal:
        J = self.ideal if J is None else J
        n = max(self.origin) + 1 if self.origin else 0
        out = []
        for g in J.gens:
            e = [0] * n
            for v, a in enumerate(g.exps):
                e[self.origin[v]] += a
            out.append(tuple(e))
        return MonomialIdeal(out, n)


def polarize(I: MonomialIdeal, names: Sequence[str] | None = None) -> Polarization:
    """Squarefree polarization; ``x_j^a`` becomes ``x_j * y_{2,j} * ... * y_{a,j}``.

    The new variables follow the original ones in ``(j, i)`` order.
    """
    n = I.nvars
    names = tuple(names) if names is not None else tuple(f"x{j}" for j in range(n))
    top = [max((g.exps[j] for g in I.gens), default=0) for j in range(n)]
    extra = {}
    new_names = list(names)
    origin = list(range(n))
    for j in range(n):
        for i in range(2, top[j] + 1):
            extra[(i, j)] = len(new_names)
            new_names.append(f"y_{i}_{names[j]}")
            origin.append(j)
    N = len(new_names)
    gens = []
    for g in I.gens:
        e = [0] * N
        for j, a in enumerate(g.exps):
            if a:
                e[j] = 1
                for i in range(2, a + 1):
                    e[extra[(i, j)]] = 1
        gens.append(tuple(e))
    return Polarization(MonomialIdeal(gens, N), tuple(new_names), tuple(origin), extra)


# -- text grammar -----------------------------------------------------------

_FACTOR = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\^\s*(\d+))?\s*$")


def format_monomial(m: Monomial, names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, m.exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def format_ideal(I: MonomialIdeal, names: Sequence[str]) -> str:
    if I.is_zero():
        return "<0>"
    return "<" + ", ".join(format_monomial(g, names) for g in I.gens) + ">"


def parse_monomial(text: str, names: Sequence[str]) -> Monomial:
    index = {name: i for i, name in enumerate(names)}
    e = [0] * len(names)
    text = text.strip()
    if text == "1":
        return Monomial(tuple(e))
    if not text:
        raise ParseError("empty monomial")
    for factor in text.split("*"):
        match = _FACTOR.match(factor)
        if not match:
            raise ParseError(f"bad factor {factor!r} in {text!r}")
        name, power = match.group(1), match.group(2)
        if name not in index:
            raise ParseError(f"unknown variable {name!r}")
        e[index[name]] += int(power) if power is not None else 1
    return Monomial(tuple(e))


def _split_literal(text: str) -> list[str]:
    text = text.strip()
    if not (text.startswith("<") and text.endswith(">")):
        raise ParseError(f"ideal literal must look like <m1, m2, ...>: {text!r}")
    body = text[1:-1].strip()
    if not body:
        raise ParseError("empty ideal literal; use <0> for the zero ideal")
    return [p.strip() for p in body.split(",")]


def parse_ideal(text: str, names: Sequence[str]) -> MonomialIdeal:
    parts = _split_literal(text)
    if parts == ["0"]:
        return MonomialIdeal.zero(len(names))
    return MonomialIdeal([parse_monomial(p, names) for p in parts], len(names))


def variables_in(text: str) -> list[str]:
    """Variable names of an ideal literal in order of first appearance."""
    seen: list[str] = []
    for part in _split_literal(text):
        if part in ("0", "1"):
            continue
        for factor in part.split("*"):
            match = _FACTOR.match(factor)
            if not match:
                raise ParseError(f"bad factor {factor!r}")
            if match.group(1) not in seen:
                seen.append(match.group(1))
    return seen


def lcm_lattice(points: Iterable[tuple[int, ...]], include_bottom: bool = True) -> list[tuple[int, ...]]:
    """All joins (componentwise max) of nonempty subsets of ``points``.

    Sorted by total degree, so every element comes after everything below it.
    """
    lattice: set[tuple[int, ...]] = set()
    n = None
    for p in set(points):
        n = len(p)
        new = {p}
        for q in lattice:
            new.add(tuple(map(max, p, q)))
        lattice |= new
    if include_bottom and n is not None:
        lattice.add((0,) * n)
    return sorted(lattice, key=lambda e: (sum(e), e))
