"""Virtual resolutions of length n + 1 from the intersection of I with a bracket power of B."""

from __future__ import annotations

import itertools
import random
import time
from collections import Counter
from dataclasses import dataclass, field

from . import linalg
from .cells import LabeledComplex, build_dual_complex
from .double import double_complex, total_complex
from .fan import Cone, Fan, ensure_valid
from .monomials import Monomial, MonomialIdeal, format_monomial, polarize, sum_all
from .report import (CheckResult, IrrelevantIdealError, NotSaturatedError,
                     PreconditionError)
from .resolution import BettiTable, FreeComplex, betti, minimize, verify_resolution

# pair checks of the intersection law are exhaustive up to this many maximal cones
FULL_PAIR_LIMIT = 8
SAMPLED_PAIRS = 500


def choose_k(I: MonomialIdeal) -> int:
    """One more than the largest exponent of a single variable in a generator."""
    if I.is_zero():
        raise PreconditionError("choose_k needs a nonzero ideal")
    return I.max_exponent() + 1


@dataclass(frozen=True)
class Label:
    """A label ``cofactor * quotient`` kept in factored form for display."""

    cofactor: Monomial
    quotient: MonomialIdeal

    @property
    def ideal(self) -> MonomialIdeal:
        return self.quotient.multiply(self.cofactor)

    def format(self, names) -> str:
        q = self.quotient.format(names)
        if self.cofactor.is_one():
            return q
        return format_monomial(self.cofactor, names) + "*" + q


def factored(I: MonomialIdeal, m: Monomial) -> Label:
    """``I ∩ <m>`` as ``m * (I : m)``."""
    return Label(m, I.colon(m))


def bracket_labels(I: MonomialIdeal, fan: Fan, k: int, cones=None) -> dict[Cone, Label]:
    """``I_sigma = I ∩ <x_sigma_hat^k>`` for every cone (or the given ones)."""
    cones = fan.all_cones() if cones is None else cones
    return {c: factored(I, fan.complement_monomial(c) ** k) for c in cones}


def check_input(I: MonomialIdeal, fan: Fan, check_saturation: bool = True,
                require_smooth: bool = False) -> MonomialIdeal:
    """Validate the fan and the ideal; returns ``I : B^inf``."""
    ensure_valid(fan, require_smooth)
    if I.nvars != fan.nrays:
        raise PreconditionError(f"ideal has {I.nvars} variables but the fan has {fan.nrays} rays")
    if I.is_zero():
        raise PreconditionError("the zero ideal is not allowed")
    sat = I.saturate_ideal(fan.irrelevant_ideal())
    if sat.is_unit():
        raise IrrelevantIdealError("ideal is irrelevant: its B-saturation is the unit ideal")
    if check_saturation and sat != I:
        raise NotSaturatedError(f"ideal is not B-saturated; its saturation is {sat.format(fan.names)}",
                                sat)
    return sat


def cone_pairs(cones: list, n_maximal: int, seed: int = 0):
    pairs = list(itertools.combinations(cones, 2))
    if n_maximal <= FULL_PAIR_LIMIT or len(pairs) <= SAMPLED_PAIRS:
        return pairs
    return random.Random(seed).sample(pairs, SAMPLED_PAIRS)


def certificate_checks(lc: LabeledComplex, p: int, prefix: str = "strands"):
    """Certify every strand; returns (check list, per-kind counts, raw certificates)."""
    certs = lc.certify_strands(p)
    kinds = Counter(cert.kind for _, _, cert in certs)
    bad = [(a, cert) for a, _, cert in certs if not cert.ok]
    loose = [(a, cert) for a, _, cert in certs if cert.kind not in ("closure", "whole")]
    cx = lc.complex
    names = cx.fan.names
    checks = [
        CheckResult(f"{prefix}-acyclic", not bad,
                    None if not bad else {"alpha": format_monomial(Monomial(bad[0][0]), names),
                                          "certificate": bad[0][1].describe(cx)}),
        CheckResult(f"{prefix}-closure-or-whole", not loose,
                    None if not loose else {"alpha": format_monomial(Monomial(loose[0][0]), names),
                                            "certificate": loose[0][1].describe(cx)}),
    ]
    return checks, dict(sorted(kinds.items())), certs


@dataclass
class BracketRun:
    ideal: MonomialIdeal
    fan: Fan
    k: int
    p: int
    labels: dict
    complex: LabeledComplex
    target: MonomialIdeal
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
        """Projective dimension of ``S/(I ∩ B^[k])``."""
        return self.betti.pdim

    def report(self) -> dict:
        names = self.fan.names
        maximal = set(self.fan.maximal_cones())
        return {
            "k": self.k,
            "char": self.p,
            "target": self.target.format(names),
            "labels": {self.fan.format_cone(c): lab.format(names)
                       for c, lab in self.labels.items() if c in maximal},
            "tot_ranks": list(self.total.ranks) if self.total else None,
            "betti": list(self.betti.totals) if self.betti else None,
            "pdim": self.pdim if self.betti else None,
            "certificates": self.certificate_kinds,
        }


def run_bracket(I: MonomialIdeal, fan: Fan, k: int | None = None, p: int = linalg.DEFAULT_CHAR,
                check_saturation: bool = True, seed: int = 0, method: str = "auto") -> BracketRun:
    p = linalg.check_char(p)
    check_input(I, fan, check_saturation)
    kmin = choose_k(I)
    if k is None:
        k = kmin
    elif k < kmin:
        raise PreconditionError(f"k={k} is below the safe threshold {kmin}")
    n = fan.dim
    t0 = time.perf_counter()
    delta = build_dual_complex(fan)
    labels = bracket_labels(I, fan, k, delta.cells)
    lc = LabeledComplex(delta, {c: lab.ideal for c, lab in labels.items()})
    B = fan.irrelevant_ideal()
    target = I & B.bracket_power(k)
    run = BracketRun(I, fan, k, p, labels, lc, target)
    checks = run.checks

    vsum = sum_all((lc.labels[c] for c in fan.maximal_cones()), fan.nrays)
    checks.append(CheckResult("label-sum", vsum == target,
                              None if vsum == target else vsum.format(fan.names)))
    bad = None
    for a, b in cone_pairs(delta.cells, len(fan.maximal), seed):
        if lc.labels[a] & lc.labels[b] != lc.labels[a & b]:
            bad = (fan.format_cone(a), fan.format_cone(b))
            break
    checks.append(CheckResult("intersection-law", bad is None, bad))
    viol = lc.containment_violations()
    checks.append(CheckResult("label-containment", not viol,
                              None if not viol else [fan.format_cone(x) for x in viol[0]]))
    run.timings["labels"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    cert_checks, run.certificate_kinds, _ = certificate_checks(lc, p)
    checks.extend(cert_checks)
    run.timings["strands"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    D = double_complex(lc, p, method)
    run.total = total_complex(D)
    ok = verify_resolution(run.total, target)
    checks.append(CheckResult("total-resolves", ok))
    run.minimal = minimize(run.total)
    run.betti = BettiTable.from_resolution(run.minimal)
    run.timings["resolution"] = time.perf_counter() - t0

    oracle = betti(target, p)
    checks.append(CheckResult("betti-oracle", oracle == run.betti,
                              None if oracle == run.betti else list(oracle.totals)))
    checks.append(CheckResult("pdim-bound", run.pdim <= n + 1, {"pdim": run.pdim, "bound": n + 1}))
    top = run.betti.totals[n + 1] if len(run.betti.totals) > n + 1 else 0
    checks.append(CheckResult("top-betti-at-most-one", top <= 1, {"beta": top}))
    return run


@dataclass
class SweepResult:
    rows: list  # (k, totals)
    stabilized_at: int | None
    polarization: dict  # k -> bool
    monotone: bool

    def as_dict(self) -> dict:
        return {
            "rows": [{"k": k, "betti": list(t)} for k, t in self.rows],
            "stabilized_at": self.stabilized_at,
            "polarization": {str(k): v for k, v in self.polarization.items()},
            "monotone": self.monotone,
        }


def stabilization_sweep(I: MonomialIdeal, fan: Fan, kmin: int, kmax: int,
                        p: int = linalg.DEFAULT_CHAR, polarization: bool = False,
                        allow_below: bool = False) -> SweepResult:
    """Total Betti numbers of ``I ∩ B^[k]`` for ``k`` in ``[kmin, kmax]``."""
    if not allow_below and kmin < choose_k(I):
        raise PreconditionError(f"kmin={kmin} is below the safe threshold {choose_k(I)}")
    B = fan.irrelevant_ideal()
    rows = []
    pol = {}
    for k in range(kmin, kmax + 1):
        target = I & B.bracket_power(k)
        tab = betti(target, p)
        rows.append((k, tab.totals))
        if polarization:
            P = polarize(target).ideal
            pol[k] = betti(P, p, "lattice").totals == tab.totals
    stab = None
    for idx in range(len(rows)):
        if all(t == rows[idx][1] for _, t in rows[idx:]):
            stab = rows[idx][0]
            break
    monotone = all(len(a) <= len(b) and all(x <= y for x, y in zip(a, b))
                   for (_, a), (_, b) in zip(rows, rows[1:]))
    return SweepResult(rows, stab, pol, monotone)
