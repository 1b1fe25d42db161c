"""Virtual resolutions of length at most n built on the subcomplex of cells avoiding a ray tau."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from . import linalg
from .bracket import Label, certificate_checks, check_input, choose_k
from .cells import CellComplex, ComplexError, LabeledComplex, build_dual_complex, build_tilde_complex, homology_dims
from .double import double_complex, total_complex
from .fan import Cone, Fan
from .monomials import Monomial, MonomialIdeal, intersect_all, sum_all
from .report import CertificateError, CheckResult, PreconditionError
from .resolution import BettiTable, FreeComplex, betti, minimize, verify_resolution


def s_of_sigma(fan: Fan, sigma, tau) -> tuple[list[Cone], list[Cone]]:
    """Cones inside ``sigma ∪ {tau}`` and the inclusion-maximal ones among them."""
    t = fan.ray_index(tau)
    rays = frozenset(sigma) | {t}
    if fan.is_cone(rays):
        raise ComplexError(f"{fan.format_cone(rays)} is a cone, so the cell is not in the subcomplex")
    inside = [c for c in fan.all_cones() if c <= rays]
    maximal = [c for c in inside if not any(c < d for d in inside)]
    return inside, maximal


def _hat(fan: Fan, rays) -> Monomial:
    return Monomial.squarefree((i for i in range(fan.nrays) if i not in rays), fan.nrays)


def j_tilde(I: MonomialIdeal, fan: Fan, sigma, tau, k: int | None = None) -> MonomialIdeal:
    """Intersection of ``I : x_gamma_hat^inf`` over the maximal cones ``gamma`` inside ``sigma ∪ {tau}``."""
    _, maximal = s_of_sigma(fan, sigma, tau)
    out = intersect_all(I.saturate(_hat(fan, g)) for g in maximal)
    if k is not None:
        alt = intersect_all(I.colon(_hat(fan, g) ** k) for g in maximal)
        if alt != out:
            raise CertificateError(f"saturation and k-th colon disagree for {fan.format_cone(sigma)}")
    return out


def j_label(I: MonomialIdeal, fan: Fan, sigma, tau, k: int) -> Label:
    t = fan.ray_index(tau)
    cof = _hat(fan, frozenset(sigma) | {t}) ** k
    return Label(cof, j_tilde(I, fan, sigma, tau, k))


def default_tau(fan: Fan, delta: CellComplex | None = None) -> int:
    delta = delta or build_dual_complex(fan)
    for t in range(fan.nrays):
        try:
            build_tilde_complex(delta, t)
        except ComplexError:
            continue
        return t
    raise PreconditionError("no ray leaves a nonempty subcomplex")


@dataclass
class ShortRun:
    ideal: MonomialIdeal
    fan: Fan
    tau: int
    k: int
    p: int
    labels: dict
    complex: LabeledComplex
    J: MonomialIdeal
    columns: dict = field(default_factory=dict)
    total: FreeComplex | None = None
    minimal: FreeComplex | None = None
    betti: BettiTable | None = None
    certificate_kinds: dict = field(default_factory=dict)
    checks: list[CheckResult] = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def pdim(self) -> int:
        """Projective dimension of ``S/J``."""
        return self.betti.pdim

    @property
    def vertices(self) -> list[Cone]:
        return self.complex.complex.vertices

    def vertex_labels(self) -> dict:
        return {v: self.labels[v] for v in self.vertices}

    def report(self) -> dict:
        names = self.fan.names
        fmt = self.fan.format_cone
        return {
            "tau": names[self.tau],
            "k": self.k,
            "char": self.p,
            "J": self.J.format(names),
            "vertex_labels": {fmt(v): lab.format(names) for v, lab in self.vertex_labels().items()},
            "cell_labels": {fmt(c): lab.format(names) for c, lab in self.labels.items()},
            "column_ranks": {fmt(c): list(F.ranks) for c, F in self.columns.items()},
            "tot_ranks": list(self.total.ranks) if self.total else None,
            "betti": list(self.betti.totals) if self.betti else None,
            "pdim": self.pdim if self.betti else None,
            "vpdim_upper_bound": report_vpdim_bound(self) if self.betti else None,
            "certificates": self.certificate_kinds,
            "saturation_ok": next((c.passed for c in self.checks if c.name == "saturation"), None),
        }


def run_short(I: MonomialIdeal, fan: Fan, tau=None, p: int = linalg.DEFAULT_CHAR,
              k: int | None = None, method: str = "auto") -> ShortRun:
    p = linalg.check_char(p)
    check_input(I, fan, True)
    if I.is_unit():
        raise PreconditionError("the unit ideal is not allowed")
    kmin = choose_k(I)
    if k is None:
        k = kmin
    elif k < kmin:
        raise PreconditionError(f"k={k} is below the safe threshold {kmin}")
    n = fan.dim
    delta = build_dual_complex(fan)
    t = default_tau(fan, delta) if tau is None else fan.ray_index(tau)
    try:
        tilde = build_tilde_complex(delta, t)
    except ComplexError as exc:
        raise PreconditionError(str(exc)) from None

    t0 = time.perf_counter()
    labels = {c: j_label(I, fan, c, t, k) for c in tilde.cells}
    lc = LabeledComplex(tilde, {c: lab.ideal for c, lab in labels.items()})
    J = sum_all((lc.labels[v] for v in tilde.vertices), fan.nrays)
    run = ShortRun(I, fan, t, k, p, labels, lc, J)
    checks = run.checks
    fmt = fan.format_cone

    h = homology_dims(tilde, None, p)
    checks.append(CheckResult("subcomplex-acyclic", not any(h), h))
    bad = None
    compared = 0
    for a, b in itertools.combinations(tilde.cells, 2):
        c = a & b
        if c not in tilde:
            continue
        compared += 1
        if lc.labels[a] & lc.labels[b] != lc.labels[c]:
            bad = [fmt(a), fmt(b)]
            break
    checks.append(CheckResult("intersection-law", bad is None, bad or {"pairs": compared}))
    viol = lc.containment_violations()
    checks.append(CheckResult("label-containment", not viol,
                              None if not viol else [fmt(x) for x in viol[0]]))

    B = fan.irrelevant_ideal()
    lower = I & B.bracket_power(k)
    checks.append(CheckResult("sandwich", J.contains_ideal(lower) and I.contains_ideal(J)))
    sat = J.saturate_ideal(B)
    checks.append(CheckResult("saturation", sat == I, None if sat == I else sat.format(fan.names)))
    full = sum_all(lc.labels.values(), fan.nrays).saturate_ideal(B)
    checks.append(CheckResult("label-sum-saturation", full == I))
    run.timings["labels"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    cert_checks, run.certificate_kinds, _ = certificate_checks(lc, p)
    checks.extend(cert_checks)
    run.timings["strands"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    D = double_complex(lc, p, method)
    run.columns = {c: D.columns[c] for c in tilde.cells}
    worst = None
    for c in tilde.cells:
        length = D.columns[c].length
        if length > len(c) - 1:
            worst = {"cell": fmt(c), "pdim": length, "bound": len(c) - 1}
            break
    checks.append(CheckResult("cell-pdim", worst is None, worst))
    run.total = total_complex(D)
    checks.append(CheckResult("total-resolves", verify_resolution(run.total, J)))
    run.minimal = minimize(run.total)
    run.betti = BettiTable.from_resolution(run.minimal)
    run.timings["resolution"] = time.perf_counter() - t0

    oracle = betti(J, p)
    checks.append(CheckResult("betti-oracle", oracle == run.betti,
                              None if oracle == run.betti else list(oracle.totals)))
    checks.append(CheckResult("pdim-bound", run.pdim <= n, {"pdim": run.pdim, "bound": n}))
    return run


def report_vpdim_bound(run: ShortRun) -> int:
    """Length of the produced virtual resolution of ``S/I``: an upper bound, not a minimum."""
    return run.pdim


def reshorten(run: ShortRun, tau=None) -> ShortRun:
    """Run the construction again on ``J``; refused unless ``J`` is itself B-saturated."""
    return run_short(run.J, run.fan, run.tau if tau is None else tau, run.p)
