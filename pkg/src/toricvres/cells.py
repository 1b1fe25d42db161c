"""The cell complex dual to the cone poset of a fan, its labelings and strands.

A cone ``sigma`` gives a cell ``[sigma]`` of dimension ``n - |sigma|``; the
faces of ``[gamma]`` are the cells ``[sigma]`` with ``sigma`` containing
``gamma``. Maximal cones are the vertices and the origin cone is the top cell.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import linalg
from .fan import Cone, Fan, cone_key
from .monomials import Monomial, MonomialIdeal, lcm_lattice

HOMOLOGY_CELL_CAP = 2**20


class ComplexError(ValueError):
    pass


@dataclass(frozen=True)
class CellComplex:
    """A subcomplex of the dual complex of ``fan`` (all of it when ``tau`` is None)."""

    fan: Fan
    cells: tuple[Cone, ...]
    tau: int | None = None
    # facets of each cell with incidence signs: cell -> ((face, sign), ...)
    boundary: Mapping = field(repr=False, compare=False, default=None)
    # augmentation sign of each vertex: orientation of its maximal cone, so
    # that the augmented cellular chain complex squares to zero
    vertex_sign: Mapping = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "_cellset", frozenset(self.cells))

    def cell_dim(self, c: Cone) -> int:
        return self.fan.dim - len(c)

    @property
    def dim(self) -> int:
        return max((self.cell_dim(c) for c in self.cells), default=-1)

    def cells_of_dim(self, d: int) -> list[Cone]:
        return [c for c in self.cells if self.cell_dim(c) == d]

    @property
    def vertices(self) -> list[Cone]:
        return self.cells_of_dim(0)

    def __contains__(self, c) -> bool:
        return frozenset(c) in self._cellset

    def closure(self, c: Cone) -> frozenset:
        """The cell and all of its faces."""
        return frozenset(s for s in self.cells if c <= s)

    def incidence(self, face: Cone, cell: Cone) -> int:
        return dict(self.boundary.get(cell, ())).get(face, 0)

    def boundary_matrix(self, d: int, cells=None) -> np.ndarray:
        """Matrix of the boundary from dimension ``d`` to ``d - 1``; ``d = 0`` is the augmentation."""
        pool = self.cells if cells is None else [c for c in self.cells if c in cells]
        src = [c for c in pool if self.cell_dim(c) == d]
        if d == 0:
            return np.array([[self.vertex_sign[c] for c in src]], dtype=np.int64).reshape(1, len(src))
        dst = [c for c in pool if self.cell_dim(c) == d - 1]
        row = {c: i for i, c in enumerate(dst)}
        M = np.zeros((len(dst), len(src)), dtype=np.int64)
        for j, c in enumerate(src):
            for face, sign in self.boundary[c]:
                if face in row:
                    M[row[face], j] = sign
        return M

    def euler_characteristic(self) -> int:
        return sum((-1) ** self.cell_dim(c) for c in self.cells)

    def format_cell(self, c: Cone) -> str:
        return "[" + self.fan.format_cone(c) + "]"


def _incidences(fan: Fan, cells: list[Cone]) -> tuple[dict, dict]:
    cellset = set(cells)
    n = fan.dim
    vertex_sign = {c: fan.orientation(c) for c in cells if len(c) == n}
    boundary = {}
    for c in cells:
        faces = []
        for rho in range(fan.nrays):
            if rho in c:
                continue
            s = c | {rho}
            if s not in cellset:
                continue
            sign = -1 if sorted(s).index(rho) % 2 else 1
            faces.append((s, sign))
        faces.sort(key=lambda fs: cone_key(fs[0]))
        boundary[c] = tuple(faces)
    return boundary, vertex_sign


def build_dual_complex(fan: Fan) -> CellComplex:
    cells = fan.all_cones()
    boundary, vsign = _incidences(fan, cells)
    return CellComplex(fan, tuple(cells), None, boundary, vsign)


def build_tilde_complex(delta: CellComplex, tau) -> CellComplex:
    """Cells ``[sigma]`` of ``delta`` such that ``sigma + {tau}`` is not a cone."""
    fan = delta.fan
    t = fan.ray_index(tau)
    cells = [c for c in delta.cells if not fan.is_cone(c | {t})]
    if not cells:
        raise ComplexError(f"no cell survives for tau={fan.names[t]}; choose another ray")
    cellset = set(cells)
    boundary = {c: tuple((f, s) for f, s in delta.boundary[c] if f in cellset) for c in cells}
    vsign = {c: delta.vertex_sign[c] for c in cells if c in delta.vertex_sign}
    return CellComplex(fan, tuple(cells), t, boundary, vsign)


def check_boundary_squares(cx: CellComplex, p: int = linalg.DEFAULT_CHAR) -> bool:
    for d in range(1, cx.dim + 1):
        A = cx.boundary_matrix(d - 1)
        B = cx.boundary_matrix(d)
        if A.size and B.size and np.any((A @ B) % p):
            return False
    return True


def homology_dims(cx: CellComplex, active=None, p: int = linalg.DEFAULT_CHAR) -> list[int]:
    """Reduced homology dimensions over F_p of the subcomplex on ``active`` cells.

    Entry ``d`` is the dimension of the reduced ``H_d``. The empty subcomplex
    returns all zeros (its augmented chain complex is zero).
    """
    cells = set(cx.cells if active is None else active)
    if len(cells) > HOMOLOGY_CELL_CAP:
        raise ComplexError("complex too large for the homology fallback")
    top = cx.dim
    if not cells:
        return [0] * (top + 1)
    counts = [sum(1 for c in cells if cx.cell_dim(c) == d) for d in range(top + 2)]
    ranks = [linalg.rank(cx.boundary_matrix(d, cells), p) if counts[d] else 0
             for d in range(top + 2)]
    return [counts[d] - ranks[d] - ranks[d + 1] for d in range(top + 1)]


# -- certificates -----------------------------------------------------------

@dataclass(frozen=True)
class Certificate:
    """Why a strand is contractible (or the homology showing it is not).

    kind is one of ``closure`` (closure of ``cell``), ``whole`` (the whole
    complex, itself acyclic), ``homology`` (only vanishing homology was
    observed), ``not-contractible`` or ``empty``.
    """

    kind: str
    cell: Cone | None = None
    homology: tuple[int, ...] | None = None

    @property
    def ok(self) -> bool:
        return self.kind in ("closure", "whole", "homology", "empty")

    def describe(self, cx: CellComplex) -> str:
        if self.kind == "closure":
            return f"closure of {cx.format_cell(self.cell)}"
        if self.homology is not None:
            return f"{self.kind} {list(self.homology)}"
        return self.kind


def is_contractible_certificate(cx: CellComplex, active, p: int = linalg.DEFAULT_CHAR,
                                whole_acyclic: bool | None = None) -> Certificate:
    active = frozenset(active)
    if not active:
        return Certificate("empty")
    whole = active == frozenset(cx.cells)
    if whole and whole_acyclic is None:
        whole_acyclic = not any(homology_dims(cx, None, p))
    # on the full dual complex everything is the closure of the top cell, so
    # "whole" is only reported for subcomplexes
    if whole and whole_acyclic and cx.tau is not None:
        return Certificate("whole")
    core = frozenset.intersection(*active)
    if core in active and active == cx.closure(core):
        return Certificate("closure", core)
    if whole and whole_acyclic:
        return Certificate("whole")
    h = tuple(homology_dims(cx, active, p))
    if any(h):
        return Certificate("not-contractible", None, h)
    return Certificate("homology", None, h)


# -- labelings --------------------------------------------------------------

@dataclass
class LabeledComplex:
    complex: CellComplex
    labels: dict  # Cone -> MonomialIdeal

    def __post_init__(self):
        missing = [c for c in self.complex.cells if c not in self.labels]
        if missing:
            raise ComplexError(f"unlabeled cells: {[self.complex.format_cell(c) for c in missing]}")

    def containment_violations(self) -> list[tuple[Cone, Cone]]:
        """Pairs (cell, face) where the cell's label is not inside the face's label."""
        bad = []
        for c in self.complex.cells:
            for face, _ in self.complex.boundary[c]:
                if not self.labels[face].contains_ideal(self.labels[c]):
                    bad.append((c, face))
        return bad

    def check_containment(self):
        bad = self.containment_violations()
        if bad:
            c, f = bad[0]
            cx = self.complex
            raise ComplexError(
                f"label of {cx.format_cell(c)} not contained in label of its face {cx.format_cell(f)}")

    def strand(self, alpha) -> frozenset:
        m = alpha if isinstance(alpha, Monomial) else Monomial(tuple(alpha))
        return frozenset(c for c in self.complex.cells if self.labels[c].contains(m))

    def is_face_closed(self, active) -> bool:
        return all(face in active for c in active for face, _ in self.complex.boundary[c])

    def probe_degrees(self) -> list[tuple[int, ...]]:
        pts = {g.exps for lab in self.labels.values() for g in lab.gens}
        return lcm_lattice(pts)

    def vertex_sum(self) -> MonomialIdeal:
        n = self.complex.fan.nrays
        gens = [g for v in self.complex.vertices for g in self.labels[v].gens]
        return MonomialIdeal(gens, n)

    def certify_strands(self, p: int = linalg.DEFAULT_CHAR):
        """Certificate for every distinct nonempty strand over the probe lattice.

        Returns a list of (alpha, active cells, certificate).
        """
        cx = self.complex
        whole = not any(homology_dims(cx, None, p))
        out = []
        seen: dict[frozenset, Certificate] = {}
        for alpha in self.probe_degrees():
            active = self.strand(alpha)
            if not active:
                continue
            if not self.is_face_closed(active):
                raise ComplexError(f"strand at {alpha} is not face-closed")
            if active not in seen:
                seen[active] = is_contractible_certificate(cx, active, p, whole)
            out.append((alpha, active, seen[active]))
        return out

    def chain_description(self) -> list[list[tuple[Cone, MonomialIdeal]]]:
        """Per cell dimension, the (cell, label) summands of the complex of ideals."""
        self.check_containment()
        cx = self.complex
        return [[(c, self.labels[c]) for c in cx.cells_of_dim(d)] for d in range(cx.dim + 1)]

    def to_json(self) -> dict:
        cx = self.complex
        names = cx.fan.names
        return {
            "tau": None if cx.tau is None else names[cx.tau],
            "cells": [{"cone": [names[i] for i in sorted(c)], "cell_dim": cx.cell_dim(c),
                       "label": self.labels[c].format(names)} for c in cx.cells],
            "incidences": [{"cell": [names[i] for i in sorted(c)],
                            "face": [names[i] for i in sorted(f)], "sign": s}
                           for c in cx.cells for f, s in cx.boundary[c]],
            "augmentation": [{"vertex": [names[i] for i in sorted(v)], "sign": s}
                             for v, s in sorted(cx.vertex_sign.items(), key=lambda kv: cone_key(kv[0]))],
        }


def labeled_chain_complex(lc: LabeledComplex):
    return lc.chain_description()
