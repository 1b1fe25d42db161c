"""Random B-saturated ideals and the invariant suite run over them."""

from __future__ import annotations

import csv
import hashlib
import io
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import linalg
from .bracket import choose_k, run_bracket, stabilization_sweep
from .fan import Fan, load_fan
from .monomials import MonomialIdeal, polarize
from .resolution import BettiTable, betti_via_koszul_strands, minimal_resolution, minimize, taylor_complex
from .shorten import run_short

MAX_EXP = 4
GENS = (3, 10)
ORACLE_GEN_LIMIT = 12


def random_ideal(fan: Fan, rng: random.Random, max_exp: int = MAX_EXP, gens=GENS) -> MonomialIdeal:
    """Random monomial ideal, B-saturated; resampled until it is not irrelevant."""
    B = fan.irrelevant_ideal()
    n = fan.nrays
    while True:
        r = rng.randint(*gens)
        raw = [tuple(rng.randint(0, max_exp) for _ in range(n)) for _ in range(r)]
        I = MonomialIdeal(raw, n).saturate_ideal(B)
        if not I.is_unit():
            return I


def ideal_hash(I: MonomialIdeal, fan: Fan) -> str:
    return hashlib.sha256(I.format(fan.names).encode()).hexdigest()[:12]


@dataclass
class CorpusRow:
    fan: str
    ideal: str
    ideal_hash: str
    n: int
    k: int
    pdim_bracket: int | None
    pdim_short: int | None
    stabilized_k: int | None
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures


def check_ideal(fan_name: str, I: MonomialIdeal, p: int = linalg.DEFAULT_CHAR,
                fan: Fan | None = None) -> CorpusRow:
    """All corpus invariants for one ideal; failures are collected, not raised."""
    fan = fan or load_fan(fan_name)
    t0 = time.perf_counter()
    n = fan.dim
    k = choose_k(I)
    row = CorpusRow(fan_name, I.format(fan.names), ideal_hash(I, fan), n, k, None, None, None)
    fail = row.failures
    try:
        br = run_bracket(I, fan, k, p)
        row.pdim_bracket = br.pdim
        fail += [f"bracket.{c.name}" for c in br.checks if not c.passed]
        sw = stabilization_sweep(I, fan, k, k + 1, p)
        row.stabilized_k = sw.stabilized_at
        if sw.rows[0][1] != sw.rows[1][1]:
            fail.append("stabilization")
        sr = run_short(I, fan, None, p, k)
        row.pdim_short = sr.pdim
        fail += [f"short.{c.name}" for c in sr.checks if not c.passed]
        if len(I.gens) <= ORACLE_GEN_LIMIT and not I.is_unit():
            tay = BettiTable.from_resolution(minimize(taylor_complex(I, p)))
            if tay != betti_via_koszul_strands(I, p):
                fail.append("oracle-equivalence")
            pol = polarize(I, fan.names).ideal
            if BettiTable.from_resolution(minimal_resolution(pol, p, "lattice")).totals != tay.totals:
                fail.append("polarization")
    except Exception as exc:  # recorded as a failure of this instance
        fail.append(f"error: {type(exc).__name__}: {exc}")
    row.seconds = time.perf_counter() - t0
    return row


def _job(args):
    return check_ideal(*args)


def run_corpus(fan_names, count: int, seed: int = 0, p: int = linalg.DEFAULT_CHAR,
               workers: int = 1) -> list[CorpusRow]:
    jobs = []
    for name in fan_names:
        fan = load_fan(name)
        rng = random.Random(f"{seed}:{name}")
        for _ in range(count):
            jobs.append((name, random_ideal(fan, rng), p))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as ex:
            return list(ex.map(_job, jobs))
    return [_job(j) for j in jobs]


CSV_FIELDS = ["fan", "ideal_hash", "n", "k", "pdim_bracket", "pdim_short", "stabilized_k", "ok"]


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in rows:
        w.writerow([r.fan, r.ideal_hash, r.n, r.k, r.pdim_bracket, r.pdim_short,
                    r.stabilized_k, int(r.ok)])
    return buf.getvalue()
