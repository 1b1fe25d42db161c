"""Complete simplicial fans, stored as ray vectors plus cones given by ray subsets."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

import numpy as np

from .monomials import Monomial, MonomialIdeal

Cone = frozenset  # frozenset[int] of ray indices


class FanError(ValueError):
    failure_class = "structure"


class FanParseError(FanError):
    failure_class = "parse"


class FanStructureError(FanError):
    failure_class = "structure"


class NotSimplicialError(FanError):
    failure_class = "simplicial"


class IncompleteFanError(FanError):
    failure_class = "completeness"


class NotSmoothError(FanError):
    failure_class = "smoothness"


FAILURE_ORDER = ("structure", "simplicial", "completeness", "smoothness")
_ERRORS = {
    "structure": FanStructureError,
    "simplicial": NotSimplicialError,
    "completeness": IncompleteFanError,
    "smoothness": NotSmoothError,
}


def cone_key(c) -> tuple:
    return (len(c), tuple(sorted(c)))


@dataclass(frozen=True)
class Fan:
    dim: int
    names: tuple[str, ...]
    rays: tuple[tuple[int, ...], ...]
    maximal: tuple[Cone, ...]
    cones: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        cones = {frozenset()}
        for m in self.maximal:
            for r in range(len(m) + 1):
                cones.update(frozenset(s) for s in itertools.combinations(sorted(m), r))
        object.__setattr__(self, "cones", frozenset(cones))

    @classmethod
    def from_names(cls, dim, rays: dict[str, tuple[int, ...]], maximal: list[list[str]]) -> Fan:
        names = tuple(rays)
        index = {n: i for i, n in enumerate(names)}
        try:
            cones = tuple(frozenset(index[n] for n in c) for c in maximal)
        except KeyError as exc:
            raise FanStructureError(f"cone uses unknown ray {exc.args[0]!r}") from None
        return cls(dim, names, tuple(tuple(v) for v in rays.values()), cones)

    @property
    def nrays(self) -> int:
        return len(self.rays)

    def ray_index(self, name: str | int) -> int:
        if isinstance(name, int):
            if not 0 <= name < self.nrays:
                raise KeyError(f"no ray with index {name}")
            return name
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown ray {name!r}") from None

    def cone(self, names) -> Cone:
        c = frozenset(self.ray_index(n) for n in names)
        if c not in self.cones:
            raise KeyError(f"{self.format_cone(c)} is not a cone of the fan")
        return c

    def is_cone(self, subset) -> bool:
        return frozenset(subset) in self.cones

    def intersect(self, a: Cone, b: Cone) -> Cone:
        return frozenset(a) & frozenset(b)

    def cones_of_dim(self, d: int) -> list[Cone]:
        return sorted((c for c in self.cones if len(c) == d), key=cone_key)

    def all_cones(self) -> list[Cone]:
        return sorted(self.cones, key=cone_key)

    def maximal_cones(self) -> list[Cone]:
        return self.cones_of_dim(self.dim)

    def format_cone(self, c) -> str:
        return "{" + ",".join(self.names[i] for i in sorted(c)) + "}"

    def complement_monomial(self, c) -> Monomial:
        c = frozenset(c)
        if c not in self.cones:
            raise KeyError(f"{self.format_cone(c)} is not a cone of the fan")
        return Monomial.squarefree((i for i in range(self.nrays) if i not in c), self.nrays)

    def irrelevant_ideal(self) -> MonomialIdeal:
        return MonomialIdeal([self.complement_monomial(c) for c in self.maximal_cones()], self.nrays)

    def irrelevant_ideal_all_cones(self) -> MonomialIdeal:
        return MonomialIdeal([self.complement_monomial(c) for c in self.cones], self.nrays)

    def ray_matrix(self, c) -> np.ndarray:
        return np.array([self.rays[i] for i in sorted(c)], dtype=float)

    def orientation(self, c) -> int:
        """Sign of the determinant of the rays of a maximal cone in index order."""
        det = np.linalg.det(self.ray_matrix(c))
        if abs(det) < 0.5:
            raise NotSimplicialError(f"cone {self.format_cone(c)} is degenerate")
        return 1 if det > 0 else -1

    def to_text(self) -> str:
        lines = [f"dim {self.dim}"]
        for n, v in zip(self.names, self.rays):
            lines.append("ray " + n + " " + " ".join(str(x) for x in v))
        for c in self.maximal:
            lines.append("cone " + " ".join(self.names[i] for i in sorted(c)))
        return "\n".join(lines) + "\n"


# -- file format ------------------------------------------------------------

def parse_fan(text: str) -> Fan:
    dim = None
    rays: dict[str, tuple[int, ...]] = {}
    maximal: list[list[str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        try:
            if head == "dim":
                if len(rest) != 1:
                    raise ValueError("expected 'dim N'")
                dim = int(rest[0])
                if dim < 1:
                    raise ValueError("dimension must be positive")
            elif head == "ray":
                if dim is None:
                    raise ValueError("'ray' before 'dim'")
                if len(rest) != dim + 1:
                    raise ValueError(f"expected a name and {dim} coordinates")
                name = rest[0]
                if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
                    raise ValueError(f"bad ray name {name!r}")
                if name in rays:
                    raise ValueError(f"duplicate ray name {name!r}")
                rays[name] = tuple(int(x) for x in rest[1:])
            elif head == "cone":
                if not rest:
                    raise ValueError("empty cone")
                maximal.append(rest)
            else:
                raise ValueError(f"unknown directive {head!r}")
        except ValueError as exc:
            raise FanParseError(f"line {lineno}: {exc}") from None
    if dim is None:
        raise FanParseError("missing 'dim' line")
    if not rays:
        raise FanParseError("no rays")
    for c in maximal:
        for n in c:
            if n not in rays:
                raise FanParseError(f"cone uses unknown ray {n!r}")
    return Fan.from_names(dim, rays, maximal)


BUILTIN_TEXT = {
    "p1": """\
dim 1
ray x0 1
ray x1 -1
cone x0
cone x1
""",
    "p2": """\
dim 2
ray x0 1 0
ray x1 0 1
ray x2 -1 -1
cone x0 x1
cone x1 x2
cone x0 x2
""",
    "p1p1": """\
dim 2
ray x0 1 0
ray x1 -1 0
ray x2 0 1
ray x3 0 -1
cone x0 x2
cone x0 x3
cone x1 x2
cone x1 x3
""",
    "p2p1": """\
# P^2 x P^1: x0, x4 span the P^1 factor, x1, x2, x3 the P^2 factor
dim 3
ray x0 0 1 0
ray x1 1 0 1
ray x2 -1 0 0
ray x3 0 0 -1
ray x4 0 -1 0
cone x0 x1 x2
cone x0 x2 x3
cone x0 x1 x3
cone x1 x2 x4
cone x2 x3 x4
cone x1 x3 x4
""",
}


def hirzebruch_text(a: int) -> str:
    return f"""\
dim 2
ray x0 1 0
ray x1 0 1
ray x2 -1 {a}
ray x3 0 -1
cone x0 x1
cone x1 x2
cone x2 x3
cone x0 x3
"""


def builtin_fan(name: str) -> Fan:
    if name in BUILTIN_TEXT:
        return parse_fan(BUILTIN_TEXT[name])
    m = re.fullmatch(r"hirzebruch(\d+)", name)
    if m:
        return parse_fan(hirzebruch_text(int(m.group(1))))
    raise KeyError(f"unknown builtin fan {name!r}")


BUILTIN_NAMES = ("p1", "p2", "p1p1", "p2p1", "hirzebruch<a>")


def load_fan(source: str) -> Fan:
    """A builtin name or a path to a fan file."""
    try:
        return builtin_fan(source)
    except KeyError:
        pass
    try:
        with open(source, encoding="utf-8") as fh:
            return parse_fan(fh.read())
    except OSError as exc:
        raise FanParseError(f"cannot read fan {source!r}: {exc}") from None


# -- validation -------------------------------------------------------------

@dataclass
class Check:
    name: str
    failure_class: str
    passed: bool
    detail: str = ""


@dataclass
class ValidationReport:
    checks: list[Check]
    warnings: list[str]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failure_class(self) -> str | None:
        failed = {c.failure_class for c in self.checks if not c.passed}
        for cls in FAILURE_ORDER:
            if cls in failed:
                return cls
        return None

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def raise_if_failed(self):
        cls = self.failure_class
        if cls is not None:
            first = next(c for c in self.checks if not c.passed and c.failure_class == cls)
            raise _ERRORS[cls](f"{first.name}: {first.detail}")

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "failure_class": self.failure_class,
            "checks": [{"name": c.name, "class": c.failure_class, "passed": c.passed,
                        "detail": c.detail} for c in self.checks],
            "warnings": list(self.warnings),
        }


def validate_fan(fan: Fan, require_smooth: bool = False, samples: int = 1000,
                 seed: int = 0) -> ValidationReport:
    checks: list[Check] = []
    warnings: list[str] = []
    n = fan.dim

    def add(name, cls, ok, detail=""):
        checks.append(Check(name, cls, bool(ok), detail))

    bad_len = [i for i, v in enumerate(fan.rays) if len(v) != n]
    add("ray-dimension", "structure", not bad_len,
        ", ".join(fan.names[i] for i in bad_len))
    zero = [fan.names[i] for i, v in enumerate(fan.rays) if not any(v)]
    add("nonzero-rays", "structure", not zero, ", ".join(zero))
    seen: dict[tuple, str] = {}
    dups = []
    for name, v in zip(fan.names, fan.rays):
        if v in seen:
            dups.append(f"{seen[v]}={name}")
        seen[v] = name
    add("distinct-rays", "structure", not dups, ", ".join(dups))
    wrong = [fan.format_cone(c) for c in fan.maximal if len(c) != n]
    add("maximal-cone-size", "structure", not wrong, ", ".join(wrong))
    dup_cones = len(set(fan.maximal)) != len(fan.maximal)
    add("distinct-cones", "structure", not dup_cones)
    unused = [fan.names[i] for i in range(fan.nrays) if not any(i in c for c in fan.maximal)]
    add("rays-used", "structure", not unused, ", ".join(unused))
    structural_ok = all(c.passed for c in checks)

    simplicial_ok = False
    if structural_ok:
        degenerate = [fan.format_cone(c) for c in fan.maximal
                      if np.linalg.matrix_rank(fan.ray_matrix(c)) < n]
        simplicial_ok = not degenerate
        add("simplicial", "simplicial", simplicial_ok,
            "linearly dependent rays in " + ", ".join(degenerate) if degenerate else "")

    if structural_ok:
        count: dict[frozenset, int] = {}
        for c in fan.maximal:
            for facet in itertools.combinations(sorted(c), n - 1):
                count[frozenset(facet)] = count.get(frozenset(facet), 0) + 1
        unpaired = sorted((f for f, k in count.items() if k != 2), key=cone_key)
        add("facet-pairing", "completeness", not unpaired,
            "facets not in exactly two maximal cones: "
            + ", ".join(f"{fan.format_cone(f)} ({count[f]})" for f in unpaired) if unpaired else "")

    if structural_ok and simplicial_ok:
        rng = np.random.default_rng(seed)
        V = rng.standard_normal((samples, n))
        hits = np.zeros(samples, dtype=int)
        for c in fan.maximal:
            coeffs = np.linalg.solve(fan.ray_matrix(c).T, V.T)
            hits += (coeffs.min(axis=0) >= -1e-9)
        uncovered = V[np.argmax(hits == 0)] if np.any(hits == 0) else None
        overlapping = V[np.argmax(hits > 1)] if np.any(hits > 1) else None
        add("coverage", "completeness", uncovered is None,
            f"direction {np.round(uncovered, 4).tolist()} lies in no maximal cone"
            if uncovered is not None else f"{samples} sampled directions covered")
        add("no-overlap", "structure", overlapping is None,
            f"direction {np.round(overlapping, 4).tolist()} lies in two maximal cones"
            if overlapping is not None else "")
        dets = {c: round(abs(np.linalg.det(fan.ray_matrix(c)))) for c in fan.maximal}
        singular = [f"{fan.format_cone(c)} (|det|={d})" for c, d in dets.items() if d != 1]
        if require_smooth:
            add("smooth", "smoothness", not singular, ", ".join(singular))
        elif singular:
            warnings.append("not smooth: " + ", ".join(singular))
    return ValidationReport(checks, warnings)


def ensure_valid(fan: Fan, require_smooth: bool = False) -> Fan:
    validate_fan(fan, require_smooth).raise_if_failed()
    return fan
