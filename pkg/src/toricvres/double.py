"""Comparison maps between resolutions, double complexes of labeled cells and their totalization.

Columns of the double complex are minimal resolutions of the cell labels and
rows are comparison maps lifting the label inclusions. Lifted comparison maps
only commute with each other up to homotopy, so the total differential gets
the usual perturbation terms: components from a cell to cells ``j`` levels
down that shift resolution degree by ``j - 1``. When the rows happen to square
to zero on the nose those terms vanish and the total differential is the plain
``vertical + signed horizontal`` one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import linalg
from .cells import CellComplex, LabeledComplex
from .fan import Cone, cone_key
from .monomials import MonomialIdeal
from .resolution import FreeComplex, ResolutionError, minimal_resolution, taylor_complex


class ComparisonError(ValueError):
    pass


def _leq(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _add_into(acc: dict, vec: dict, scale: int, p: int) -> None:
    for k, v in vec.items():
        nv = (acc.get(k, 0) + scale * v) % p
        if nv:
            acc[k] = nv
        else:
            acc.pop(k, None)


def _apply(m: dict, vec: dict, p: int) -> dict:
    out: dict = {}
    for b, a in vec.items():
        _add_into(out, m.get(b, {}), a, p)
    return out


@dataclass
class ChainMap:
    """Degree-preserving chain map ``src -> dst``; ``maps[i]`` is ``{src idx: {dst idx: scalar}}``."""

    src: FreeComplex
    dst: FreeComplex
    maps: list[dict]

    def apply(self, i: int, vec: dict) -> dict:
        if i >= len(self.maps):
            return {}
        return _apply(self.maps[i], vec, self.src.p)

    def defects(self) -> list[str]:
        P, Q, p = self.src, self.dst, self.src.p
        out = []
        for i, m in enumerate(self.maps):
            for b, img in m.items():
                for e in img:
                    if not _leq(Q.degs[i][e], P.degs[i][b]):
                        out.append(f"inhomogeneous image of basis {b} in degree {i}")
        for b in range(P.size(0)):
            s = sum(Q.aug[e] * v for e, v in self.apply(0, {b: 1}).items()) % p
            if s != P.aug[b] % p:
                out.append(f"augmentation not preserved on basis {b}")
        for i in range(1, len(P.degs)):
            for b in range(P.size(i)):
                lhs = self.apply(i - 1, P.apply(i, {b: 1}))
                img = self.apply(i, {b: 1})
                rhs = Q.apply(i, img) if img and i < len(Q.degs) else {}
                if lhs != rhs:
                    out.append(f"square fails on basis {b} in degree {i}")
        return out

    def commutes(self) -> bool:
        return not self.defects()


def taylor_comparison_map(src: MonomialIdeal, dst: MonomialIdeal, p: int = linalg.DEFAULT_CHAR,
                          P: FreeComplex | None = None, Q: FreeComplex | None = None) -> ChainMap:
    """Simplicial comparison map between Taylor complexes for ``src`` contained in ``dst``.

    Each generator of ``src`` goes to the first generator of ``dst`` (canonical
    order) dividing it; a subset goes to its image subset with the sign of the
    sorting permutation, or to zero when two generators collide.
    """
    if not dst.contains_ideal(src):
        raise ComparisonError("source ideal is not contained in the target ideal")
    P = P or taylor_complex(src, p)
    Q = Q or taylor_complex(dst, p)
    dgens = [g for g in dst.gens]
    f = []
    for g in src.gens:
        f.append(next(j for j, h in enumerate(dgens) if h.divides(g)))
    qindex = [{s: j for j, s in enumerate(level)} for level in Q.tags]
    maps = []
    for i, level in enumerate(P.tags):
        m = {}
        for b, s in enumerate(level):
            img = [f[a] for a in s]
            if len(set(img)) < len(img):
                m[b] = {}
                continue
            order = sorted(range(len(img)), key=lambda t: img[t])
            inversions = sum(1 for x, y in itertools.combinations(order, 2) if x > y)
            key = tuple(sorted(img))
            m[b] = {qindex[i][key]: p - 1 if inversions % 2 else 1}
        maps.append(m)
    cm = ChainMap(P, Q, maps)
    bad = cm.defects()
    if bad:
        raise ComparisonError(f"comparison map does not commute: {bad[0]}")
    return cm


def lift_comparison(P: FreeComplex, Q: FreeComplex) -> ChainMap:
    """Lift the inclusion ``image(P) ⊆ image(Q)`` to a chain map between resolutions.

    Degree 0 uses the first generator of ``Q`` dividing each generator of
    ``P``; higher degrees are solved strand by strand.
    """
    p = P.p
    maps: list[dict] = []
    m0 = {}
    for b, deg in enumerate(P.degs[0]):
        a = P.aug[b] % p
        if not a:
            m0[b] = {}
            continue
        e = next((e for e, g in enumerate(Q.degs[0]) if Q.aug[e] % p and _leq(g, deg)), None)
        if e is None:
            raise ComparisonError(f"generator {deg} has no divisor in the target ideal")
        m0[b] = {e: a * pow(Q.aug[e], -1, p) % p}
    maps.append(m0)
    for i in range(1, len(P.degs)):
        mi = {}
        for b, deg in enumerate(P.degs[i]):
            target = _apply(maps[i - 1], P.apply(i, {b: 1}), p)
            y = Q.lift(i - 1, deg, target)
            if y is None:
                raise ComparisonError(f"cannot lift basis {b} in degree {i}")
            mi[b] = y
        maps.append(mi)
    return ChainMap(P, Q, maps)


def _empty_column(nvars: int, p: int) -> FreeComplex:
    return FreeComplex(p, nvars, [[]], [{}], [])


@dataclass
class DoubleComplex:
    """Resolutions of cell labels (columns) joined by signed comparison maps (rows)."""

    complex: CellComplex
    columns: dict  # Cone -> FreeComplex
    horizontal: dict  # (cell, face) -> ChainMap
    p: int
    labels: dict = field(default_factory=dict)

    @property
    def nvars(self) -> int:
        return self.complex.fan.nrays

    def cell_dim(self, c: Cone) -> int:
        return self.complex.cell_dim(c)

    def check_shape(self) -> None:
        cx = self.complex
        for c in cx.cells:
            if c not in self.columns:
                raise ResolutionError(f"no column for cell {cx.format_cell(c)}")
            for face, _ in cx.boundary[c]:
                if (c, face) not in self.horizontal:
                    raise ResolutionError(f"no row map {cx.format_cell(c)} -> {cx.format_cell(face)}")

    def row_square_defects(self) -> list[tuple[Cone, Cone]]:
        """Pairs (cell, codim-2 face) where the signed rows do not compose to zero."""
        cx, p = self.complex, self.p
        bad = []
        for c in cx.cells:
            col = self.columns[c]
            twos = {}
            for g, e1 in cx.boundary[c]:
                for h, e2 in cx.boundary[g]:
                    twos.setdefault(h, []).append((g, e1 * e2))
            for h, paths in twos.items():
                for i in range(len(col.degs)):
                    ok = True
                    for b in range(col.size(i)):
                        acc: dict = {}
                        for g, s in paths:
                            v = self.horizontal[(g, h)].apply(i, self.horizontal[(c, g)].apply(i, {b: 1}))
                            _add_into(acc, v, s, p)
                        if acc:
                            ok = False
                            break
                    if not ok:
                        bad.append((c, h))
                        break
        return bad

    def columns_exact(self) -> bool:
        from .resolution import verify_resolution
        return all(verify_resolution(self.columns[c], self.labels[c])
                   for c in self.complex.cells if c in self.labels and not self.labels[c].is_zero())


def double_complex(lc: LabeledComplex, p: int = linalg.DEFAULT_CHAR, method: str = "auto") -> DoubleComplex:
    lc.check_containment()
    cx = lc.complex
    n = cx.fan.nrays
    cache: dict[MonomialIdeal, FreeComplex] = {}
    columns = {}
    for c in cx.cells:
        lab = lc.labels[c]
        if lab not in cache:
            cache[lab] = _empty_column(n, p) if lab.is_zero() else minimal_resolution(lab, p, method)
        columns[c] = cache[lab]
    horizontal = {}
    for c in cx.cells:
        for face, _ in cx.boundary[c]:
            horizontal[(c, face)] = lift_comparison(columns[c], columns[face])
    return DoubleComplex(cx, columns, horizontal, p, dict(lc.labels))


def total_complex(D: DoubleComplex) -> FreeComplex:
    """Totalize ``D``; the basis of ``Tot_k`` is tagged ``(cell, i, index)`` with ``cell_dim + i = k``."""
    D.check_shape()
    cx, p = D.complex, D.p
    cols = D.columns
    cells = sorted(cx.cells, key=lambda c: (cx.cell_dim(c), cone_key(c)))
    sgn = {c: -1 if cx.cell_dim(c) % 2 else 1 for c in cells}
    by_size: dict[int, list] = {}
    for c in cells:
        by_size.setdefault(len(c), []).append(c)
    cellset = set(cells)

    # delta[j][(F, H)][i] = {b: {e: v}} from column F degree i to column H degree i+j-1
    delta: dict[int, dict] = {1: {}}
    for c in cells:
        for face, eps in cx.boundary[c]:
            cm = D.horizontal[(c, face)]
            delta[1][(c, face)] = [{b: {e: v * eps % p for e, v in img.items()} for b, img in m.items()}
                                   for m in cm.maps]

    def comp(j, F, H, i, vec):
        """Component ``delta_j`` from (F, i) to H applied to ``vec``."""
        if j == 0:
            if F != H or i < 1 or not vec:
                return {}
            return {k: v * sgn[F] % p for k, v in cols[F].apply(i, vec).items()}
        maps = delta.get(j, {}).get((F, H))
        if maps is None or i >= len(maps):
            return {}
        return _apply(maps[i], vec, p)

    top = max(len(c) for c in cells) - min(len(c) for c in cells)
    for j in range(2, top + 1):
        delta[j] = {}
        for F in cells:
            PF = cols[F]
            targets = [H for H in by_size.get(len(F) + j, []) if F <= H]
            for H in targets:
                mids = {a: [G for G in by_size.get(len(F) + a, []) if F <= G <= H]
                        for a in range(1, j)}
                maps: list[dict] = []
                delta[j][(F, H)] = maps
                for i in range(len(PF.degs)):
                    mi = {}
                    for b, deg in enumerate(PF.degs[i]):
                        unit = {b: 1}
                        rhs: dict = {}
                        for a in range(1, j):
                            for G in mids[j - a]:
                                _add_into(rhs, comp(a, G, H, i + j - a - 1,
                                                    comp(j - a, F, G, i, unit)), 1, p)
                        if i >= 1:
                            _add_into(rhs, comp(j, F, H, i - 1, comp(0, F, F, i, unit)), 1, p)
                        if not rhs:
                            mi[b] = {}
                            continue
                        target = {k: (-v * sgn[H]) % p for k, v in rhs.items()}
                        y = cols[H].lift(i + j - 2, deg, target)
                        if y is None:
                            raise ResolutionError(
                                f"perturbation obstruction from {cx.format_cell(F)} to {cx.format_cell(H)}")
                        mi[b] = y
                    maps.append(mi)
            # drop identically zero components
        delta[j] = {k: v for k, v in delta[j].items() if any(any(img for img in m.values()) for m in v)}

    # assemble
    L = max(cx.cell_dim(c) + len(cols[c].degs) - 1 for c in cells if cols[c].size(0)) + 1
    tags: list[list] = [[] for _ in range(L)]
    for c in cells:
        for i in range(len(cols[c].degs)):
            for b in range(cols[c].size(i)):
                k = cx.cell_dim(c) + i
                tags[k].append((c, i, b))
    index = [{t: n for n, t in enumerate(level)} for level in tags]
    degs = [[cols[c].degs[i][b] for (c, i, b) in level] for level in tags]
    d: list[dict] = [{}]
    for k in range(1, L):
        dk = {}
        for n, (F, i, b) in enumerate(tags[k]):
            col: dict = {}
            unit = {b: 1}
            if i >= 1:
                for e, v in comp(0, F, F, i, unit).items():
                    col[index[k - 1][(F, i - 1, e)]] = v
            for j in delta:
                for H in by_size.get(len(F) + j, []):
                    if H not in cellset or not F <= H:
                        continue
                    for e, v in comp(j, F, H, i, unit).items():
                        t = index[k - 1][(H, i + j - 1, e)]
                        col[t] = (col.get(t, 0) + v) % p
            dk[n] = {r: v for r, v in col.items() if v}
        d.append(dk)
    aug = []
    for (c, i, b) in tags[0]:
        aug.append(cx.vertex_sign[c] * cols[c].aug[b] % p)
    T = FreeComplex(p, D.nvars, degs, d, aug, tags)
    T.check()
    return T


def higher_terms_present(D: DoubleComplex) -> bool:
    """True when the rows do not square to zero and perturbation terms are needed."""
    return bool(D.row_square_defects())
