"""Finely graded free complexes over the polynomial ring and their Betti numbers.

A :class:`FreeComplex` resolves an *ideal*: ``F_0`` maps onto the ideal through
the augmentation, so ``F_i`` corresponds to ``beta_{i+1}(S/I)``. Entries of the
differentials are stored as scalars mod ``p``; the monomial part of an entry is
forced by homogeneity (source degree minus target degree).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .monomials import Monomial, MonomialIdeal, lcm_lattice

TAYLOR_CAP = 20
# above this many generators minimal resolutions come from the lattice method
TAYLOR_AUTO_LIMIT = 8


class ResolutionError(ValueError):
    pass


def _leq(a, b) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


@dataclass
class FreeComplex:
    """Free complex ``F_L -> ... -> F_0 -> S`` with fine multidegrees.

    ``d[i]`` (``i >= 1``) maps ``F_i`` to ``F_{i-1}`` as ``{col: {row: scalar}}``;
    ``aug[j]`` is the scalar multiplying ``x^deg`` for the ``j``-th basis element
    of ``F_0``. ``tags`` optionally records where each basis element came from.
    """

    p: int
    nvars: int
    degs: list[list[tuple[int, ...]]]
    d: list[dict]
    aug: list[int]
    tags: list[list] | None = None
    _dense: dict = field(default_factory=dict, repr=False, compare=False)
    _degarr: dict = field(default_factory=dict, repr=False, compare=False)
    _strands: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        while len(self.degs) > 1 and not self.degs[-1]:
            self.degs.pop()
            self.d.pop()
            if self.tags:
                self.tags.pop()

    @property
    def ranks(self) -> tuple[int, ...]:
        r = [len(b) for b in self.degs]
        while r and r[-1] == 0:
            r.pop()
        return tuple(r)

    @property
    def length(self) -> int:
        """Index of the last nonzero module (``-1`` for the zero complex)."""
        return len(self.ranks) - 1

    def rank_string(self) -> str:
        return "0" + "".join(f"→S^{r}" for r in reversed(self.ranks))

    def entry(self, i: int, row: int, col: int) -> tuple[int, Monomial]:
        v = self.d[i].get(col, {}).get(row, 0)
        e = tuple(a - b for a, b in zip(self.degs[i][col], self.degs[i - 1][row]))
        return v, Monomial(tuple(max(x, 0) for x in e))

    def image_ideal(self) -> MonomialIdeal:
        return MonomialIdeal([g for g, a in zip(self.degs[0], self.aug) if a % self.p], self.nvars)

    def degree_array(self, i: int) -> np.ndarray:
        if i not in self._degarr:
            if i < 0:
                arr = np.zeros((1, self.nvars), dtype=np.int64)
            elif i < len(self.degs) and self.degs[i]:
                arr = np.array(self.degs[i], dtype=np.int64)
            else:
                arr = np.zeros((0, self.nvars), dtype=np.int64)
            self._degarr[i] = arr
        return self._degarr[i]

    def size(self, i: int) -> int:
        if i < 0:
            return 1
        return len(self.degs[i]) if i < len(self.degs) else 0

    def dense(self, i: int) -> np.ndarray:
        """Scalar matrix of ``d_i`` (``i = 0`` is the augmentation, a single row)."""
        if i not in self._dense:
            rows, cols = self.size(i - 1), self.size(i)
            M = np.zeros((rows, cols), dtype=np.int64)
            if i == 0:
                M[0, :] = np.array(self.aug[:cols], dtype=np.int64) % self.p
            elif cols:
                for c, col in self.d[i].items():
                    for r, v in col.items():
                        M[r, c] = v
            self._dense[i] = M
        return self._dense[i]

    def strand(self, i: int, alpha) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Rows, columns and submatrix of ``d_i`` in multidegree ``alpha``."""
        key = (i, alpha)
        if key not in self._strands:
            a = np.asarray(alpha, dtype=np.int64)
            rows = np.flatnonzero(np.all(self.degree_array(i - 1) <= a, axis=1))
            cols = np.flatnonzero(np.all(self.degree_array(i) <= a, axis=1))
            sub = self.dense(i)[np.ix_(rows, cols)]
            self._strands[key] = (rows, cols, sub)
        return self._strands[key]

    def apply(self, i: int, vec: dict) -> dict:
        """``d_i`` applied to a vector ``{basis index: scalar}`` of ``F_i``."""
        out: dict = {}
        if i <= 0:
            raise ValueError("apply() is for i >= 1")
        p = self.p
        for c, a in vec.items():
            for r, v in self.d[i].get(c, {}).items():
                out[r] = (out.get(r, 0) + a * v) % p
        return {r: v for r, v in out.items() if v}

    def lift(self, i: int, alpha, target: dict) -> dict | None:
        """Some ``y`` in ``F_{i+1}`` of degree ``alpha`` with ``d_{i+1} y = target``.

        ``i = -1`` lifts through the augmentation (``target`` is ``{0: scalar}``).
        Returns None if ``target`` is not a boundary.
        """
        if not target:
            return {}
        if i + 1 >= len(self.degs) or self.size(i + 1) == 0:
            return None
        rows, cols, sub = self.strand(i + 1, tuple(alpha))
        pos = {int(r): k for k, r in enumerate(rows)}
        b = np.zeros(len(rows), dtype=np.int64)
        for r, v in target.items():
            if r not in pos:
                return None
            b[pos[r]] = v
        x = linalg.solve(sub, b, self.p)
        if x is None:
            return None
        return {int(cols[k]): int(v) for k, v in enumerate(x) if v}

    def check(self) -> None:
        """Raise unless entries are homogeneous and consecutive maps compose to zero."""
        p = self.p
        for i in range(1, len(self.degs)):
            for c, col in self.d[i].items():
                for r, v in col.items():
                    if v % p and not _leq(self.degs[i - 1][r], self.degs[i][c]):
                        raise ResolutionError(f"inhomogeneous entry in d_{i} at ({r}, {c})")
        for i in range(1, len(self.degs)):
            A, B = self.dense(i - 1), self.dense(i)
            if A.size and B.size and np.any((A @ B) % p):
                raise ResolutionError(f"d_{i - 1} d_{i} != 0")

    def multigraded_ranks(self) -> dict:
        """``{(i, alpha): count}`` for the basis of each ``F_i``."""
        out: dict = {}
        for i, degs in enumerate(self.degs):
            for a in degs:
                out[(i, a)] = out.get((i, a), 0) + 1
        return out

    def to_json(self, names=None) -> dict:
        from .monomials import format_monomial
        names = names or [f"x{j}" for j in range(self.nvars)]
        return {
            "ranks": list(self.ranks),
            "degrees": [[format_monomial(Monomial(a), names) for a in degs] for degs in self.degs],
        }


# -- Taylor complex -----------------------------------------------------------

def taylor_complex(I: MonomialIdeal, p: int = linalg.DEFAULT_CHAR, cap: int = TAYLOR_CAP) -> FreeComplex:
    gens = [g.exps for g in I.gens]
    r = len(gens)
    if r == 0:
        raise ResolutionError("the zero ideal has no Taylor complex")
    if r > cap:
        raise ResolutionError(f"{r} generators exceed the Taylor cap of {cap}")
    subsets = [list(itertools.combinations(range(r), k)) for k in range(1, r + 1)]
    index = [{s: j for j, s in enumerate(level)} for level in subsets]
    degs = []
    for level in subsets:
        degs.append([tuple(map(max, *(gens[a] for a in s))) if len(s) > 1 else gens[s[0]]
                     for s in level])
    d: list[dict] = [{}]
    for k in range(1, r):
        dk = {}
        below = index[k - 1]
        for j, s in enumerate(subsets[k]):
            col = {}
            for pos in range(len(s)):
                face = s[:pos] + s[pos + 1:]
                col[below[face]] = 1 if pos % 2 == 0 else p - 1
            dk[j] = col
        d.append(dk)
    tags = [[s for s in level] for level in subsets]
    return FreeComplex(p, I.nvars, degs, d, [1] * r, tags)


# -- minimization -------------------------------------------------------------

def minimize(F: FreeComplex) -> FreeComplex:
    """Cancel unit entries (equal source and target degree) until none remain.

    Works upwards in homological degree; the result is homotopy equivalent to
    ``F`` and, if ``F`` is a resolution, is the minimal resolution.
    """
    p = F.p
    L = len(F.degs)
    cols = [None] + [{c: dict(v) for c, v in F.d[i].items()} for i in range(1, L)]
    rows: list = [None]
    for i in range(1, L):
        R: dict = {}
        for c, col in cols[i].items():
            for r in col:
                R.setdefault(r, set()).add(c)
        rows.append(R)
    alive = [set(range(len(F.degs[i]))) for i in range(L)]

    for i in range(1, L):
        D, R = cols[i], rows[i]
        degs_src, degs_dst = F.degs[i], F.degs[i - 1]
        while True:
            pivot = None
            for c in sorted(D):
                for r, v in D[c].items():
                    if v and degs_src[c] == degs_dst[r]:
                        pivot = (c, r)
                        break
                if pivot:
                    break
            if pivot is None:
                break
            c, r = pivot
            col_c = D[c]
            inv = pow(col_c[r], -1, p)
            for c2 in list(R.get(r, ())):
                if c2 == c:
                    continue
                f = D[c2][r] * inv % p
                tgt = D[c2]
                for r2, v in col_c.items():
                    if r2 == r:
                        continue
                    nv = (tgt.get(r2, 0) - f * v) % p
                    if nv:
                        tgt[r2] = nv
                        R.setdefault(r2, set()).add(c2)
                    elif r2 in tgt:
                        del tgt[r2]
                        R[r2].discard(c2)
                del tgt[r]
            for r2 in col_c:
                R[r2].discard(c)
            del D[c]
            R.pop(r, None)
            alive[i].discard(c)
            alive[i - 1].discard(r)
            if i + 1 < L:
                for c3 in list(rows[i + 1].get(c, ())):
                    del cols[i + 1][c3][c]
                rows[i + 1].pop(c, None)
            if i - 1 >= 1:
                for r3 in cols[i - 1].get(r, {}):
                    rows[i - 1][r3].discard(r)
                cols[i - 1].pop(r, None)

    keep = [sorted(a) for a in alive]
    new_index = [{old: new for new, old in enumerate(k)} for k in keep]
    degs = [[F.degs[i][j] for j in keep[i]] for i in range(L)]
    tags = [[F.tags[i][j] for j in keep[i]] for i in range(L)] if F.tags else None
    d: list[dict] = [{}]
    for i in range(1, L):
        di = {}
        for c in keep[i]:
            col = cols[i].get(c, {})
            di[new_index[i][c]] = {new_index[i - 1][r]: v for r, v in col.items() if v}
        d.append(di)
    aug = [F.aug[j] for j in keep[0]]
    return FreeComplex(p, F.nvars, degs, d, aug, tags)


# -- lattice method -----------------------------------------------------------

def lattice_resolution(I: MonomialIdeal, p: int = linalg.DEFAULT_CHAR) -> FreeComplex:
    """Minimal resolution built syzygy by syzygy over the lcm lattice of ``I``.

    At each lattice degree (in a linear extension of the order) the kernel of
    the current last map is compared with what earlier syzygies already
    generate there, and a basis of the difference becomes new generators.
    """
    if I.is_zero():
        raise ResolutionError("cannot resolve the zero ideal")
    gens = [g.exps for g in I.gens]
    lattice = lcm_lattice(gens, include_bottom=False)
    F = FreeComplex(p, I.nvars, [list(gens)], [{}], [1] * len(gens))
    i = 0
    while True:
        new_degs: list = []
        new_cols: list[dict] = []
        new_arr = []
        for alpha in lattice:
            rows, cols, sub = F.strand(i, alpha)
            if cols.size == 0:
                continue
            K = linalg.nullspace(sub, p)
            if K.shape[0] == 0:
                continue
            a = np.asarray(alpha)
            W = [v[cols] for v, dg in zip(new_arr, new_degs) if _leq(dg, alpha)]
            r = linalg.rank(np.array(W), p) if W else 0
            for k in K:
                if r == K.shape[0]:
                    break
                trial = np.array(W + [k])
                if linalg.rank(trial, p) > r:
                    W.append(k)
                    r += 1
                    full = np.zeros(F.size(i), dtype=np.int64)
                    full[cols] = k
                    new_arr.append(full)
                    new_degs.append(tuple(int(x) for x in a))
                    new_cols.append({int(cols[j]): int(x) for j, x in enumerate(k) if x})
        if not new_degs:
            break
        F.degs.append(new_degs)
        F.d.append(dict(enumerate(new_cols)))
        F._dense.clear()
        F._degarr.clear()
        F._strands.clear()
        i += 1
    return FreeComplex(p, I.nvars, F.degs, F.d, F.aug)


def minimal_resolution(I: MonomialIdeal, p: int = linalg.DEFAULT_CHAR, method: str = "auto") -> FreeComplex:
    if I.is_zero():
        raise ResolutionError("cannot resolve the zero ideal")
    if method == "auto":
        method = "taylor" if len(I.gens) <= TAYLOR_AUTO_LIMIT else "lattice"
    if method == "taylor":
        return minimize(taylor_complex(I, p))
    if method == "lattice":
        return lattice_resolution(I, p)
    raise ValueError(f"unknown method {method!r}")


# -- Betti numbers ------------------------------------------------------------

@dataclass(frozen=True)
class BettiTable:
    """Multigraded Betti numbers of ``S/I``: ``{(i, alpha): beta}``."""

    nvars: int
    entries: tuple  # sorted ((i, alpha), value) pairs

    @classmethod
    def from_dict(cls, nvars: int, d: dict) -> BettiTable:
        return cls(nvars, tuple(sorted((k, v) for k, v in d.items() if v)))

    @classmethod
    def from_resolution(cls, F: FreeComplex) -> BettiTable:
        """Ranks of a minimal resolution of ``I`` read as Betti numbers of ``S/I``."""
        d = {(0, (0,) * F.nvars): 1}
        for (i, a), v in F.multigraded_ranks().items():
            d[(i + 1, a)] = d.get((i + 1, a), 0) + v
        return cls.from_dict(F.nvars, d)

    def as_dict(self) -> dict:
        return dict(self.entries)

    @property
    def totals(self) -> tuple[int, ...]:
        top = max((i for (i, _), _ in self.entries), default=-1)
        out = [0] * (top + 1)
        for (i, _), v in self.entries:
            out[i] += v
        return tuple(out)

    @property
    def pdim(self) -> int:
        return len(self.totals) - 1

    def to_json(self, names=None) -> list:
        from .monomials import format_monomial
        names = names or [f"x{j}" for j in range(self.nvars)]
        return [{"i": i, "alpha": list(a), "monomial": format_monomial(Monomial(a), names),
                 "value": v} for (i, a), v in self.entries]


def _reduced_homology_simplicial(faces: list[tuple[int, ...]], p: int) -> list[int]:
    """Reduced homology of a simplicial complex given by all of its faces (incl. the empty face).

    Entry ``d + 1`` holds ``dim H~_d`` for ``d = -1, 0, ...``.
    """
    by_size: dict[int, list] = {}
    for f in faces:
        by_size.setdefault(len(f), []).append(f)
    if not by_size:
        return []
    top = max(by_size)
    index = {s: {f: j for j, f in enumerate(by_size.get(s, []))} for s in range(top + 2)}
    ranks = [0] * (top + 2)
    for s in range(1, top + 1):
        src = by_size.get(s, [])
        if not src:
            continue
        M = np.zeros((len(index[s - 1]), len(src)), dtype=np.int64)
        for j, f in enumerate(src):
            for pos in range(s):
                M[index[s - 1][f[:pos] + f[pos + 1:]], j] = 1 if pos % 2 == 0 else p - 1
        ranks[s] = linalg.rank(M, p)
    return [len(by_size.get(s, [])) - ranks[s] - ranks[s + 1] for s in range(top + 1)]


def koszul_complex_at(I: MonomialIdeal, alpha) -> list[tuple[int, ...]]:
    """Faces ``b`` (squarefree, inside the support of ``alpha``) with ``x^(alpha - b)`` in ``I``."""
    supp = [j for j, a in enumerate(alpha) if a]
    faces = []
    for k in range(len(supp) + 1):
        for b in itertools.combinations(supp, k):
            e = list(alpha)
            for j in b:
                e[j] -= 1
            if I.contains(Monomial(tuple(e))):
                faces.append(b)
    return faces


def betti_via_koszul_strands(I: MonomialIdeal, p: int = linalg.DEFAULT_CHAR) -> BettiTable:
    """``beta_{i,alpha}(I) = dim H~_{i-1}(K^alpha(I))`` over the lcm lattice of ``I``."""
    if I.is_zero() or I.is_unit():
        raise ResolutionError("Betti numbers need a proper nonzero ideal")
    out = {(0, (0,) * I.nvars): 1}
    for alpha in lcm_lattice([g.exps for g in I.gens], include_bottom=False):
        h = _reduced_homology_simplicial(koszul_complex_at(I, alpha), p)
        # h[s] is H~_{s-1}; beta_{s}(I) at alpha, i.e. beta_{s+1}(S/I)
        for s, v in enumerate(h):
            if v:
                out[(s + 1, alpha)] = out.get((s + 1, alpha), 0) + v
    return BettiTable.from_dict(I.nvars, out)


def betti(I: MonomialIdeal, p: int = linalg.DEFAULT_CHAR, method: str = "auto") -> BettiTable:
    if I.is_zero() or I.is_unit():
        raise ResolutionError("Betti numbers need a proper nonzero ideal")
    if method == "koszul" or (method == "auto" and len(I.gens) > TAYLOR_AUTO_LIMIT
                              and I.nvars <= 12):
        return betti_via_koszul_strands(I, p)
    m = "taylor" if method == "auto" else method
    return BettiTable.from_resolution(minimal_resolution(I, p, m))


def pdim(I: MonomialIdeal, p: int = linalg.DEFAULT_CHAR, method: str = "auto") -> int:
    """Projective dimension of ``S/I``."""
    return betti(I, p, method).pdim


# -- verification -------------------------------------------------------------

def resolution_defects(F: FreeComplex, I: MonomialIdeal, limit: int = 5) -> list[str]:
    """Multidegrees where ``F -> I`` fails to be a resolution (empty if it is one)."""
    try:
        F.check()
    except ResolutionError as exc:
        return [str(exc)]
    pts = {a for degs in F.degs for a in degs} | {g.exps for g in I.gens}
    if not pts:
        return []
    p = F.p
    L = len(F.degs)
    out = []
    for alpha in lcm_lattice(pts):
        ranks = []
        for i in range(L + 1):
            if i < L and F.size(i):
                _, cols, sub = F.strand(i, alpha)
                ranks.append(linalg.rank(sub, p) if sub.size else 0)
            else:
                ranks.append(0)
        expected_s = 0 if I.contains(Monomial(alpha)) else 1
        if 1 - ranks[0] != expected_s:
            out.append(f"cokernel mismatch at {alpha}")
        for i in range(L):
            n_i = int(np.all(F.degree_array(i) <= np.asarray(alpha), axis=1).sum()) if F.size(i) else 0
            h = n_i - ranks[i] - ranks[i + 1]
            if h:
                out.append(f"H_{i} has dimension {h} at {alpha}")
        if len(out) >= limit:
            break
    return out


def verify_resolution(F: FreeComplex, I: MonomialIdeal) -> bool:
    return not resolution_defects(F, I)
