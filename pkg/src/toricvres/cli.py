"""Command-line front end.

Exit codes: 0 success, 1 check failed (fan validation, zero ideal), 2 parse
error, 3 precondition violated, 4 certificate failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass

from . import linalg
from .bracket import choose_k, run_bracket, stabilization_sweep
from .cells import ComplexError
from .corpus import rows_to_csv, run_corpus
from .fan import FanError, FanParseError, load_fan, validate_fan
from .monomials import MonomialError, ParseError, parse_ideal, variables_in
from .report import CertificateError, NotSaturatedError, PreconditionError, VerificationReport
from .resolution import ResolutionError, betti as betti_table, minimal_resolution
from .shorten import report_vpdim_bound, run_short

EXIT_OK, EXIT_FAILED, EXIT_PARSE, EXIT_PRECONDITION, EXIT_CERTIFICATE = 0, 1, 2, 3, 4

EXAMPLE_IDEAL = "<x2*x3, x1^4*x2^2*x4, x0^2*x1^4*x4, x1^5*x2^2, x0^2*x1^5, x1^4*x3^3*x4, x1^5*x3^3>"
DEFAULT_CORPUS_FANS = ("p1p1", "p2p1", "hirzebruch2")


@dataclass
class RunConfig:
    command: str
    fan: str | None = None
    ideal: str | None = None
    tau: str | None = None
    k: int | None = None
    char: int = linalg.DEFAULT_CHAR
    seed: int = 0
    json: bool = False
    require_smooth: bool = False
    unsafe_no_sat_check: bool = False
    dump_complex: str | None = None
    dump_betti: str | None = None


class _Exit(Exception):
    def __init__(self, code: int, msg: str = ""):
        super().__init__(msg)
        self.code = code


def _ideal_text(args) -> str:
    if args.ideal_file:
        try:
            with open(args.ideal_file, encoding="utf-8") as fh:
                return fh.read().strip()
        except OSError as exc:
            raise _Exit(EXIT_PARSE, f"cannot read ideal file: {exc}") from None
    if args.ideal is None:
        raise _Exit(EXIT_PARSE, "an ideal is required (--ideal or --ideal-file)")
    return args.ideal


def _load(args, need_ideal: bool = True):
    if not args.fan:
        raise _Exit(EXIT_PARSE, "--fan is required")
    fan = load_fan(args.fan)
    I = parse_ideal(_ideal_text(args), fan.names) if need_ideal else None
    return fan, I


def _dump(path: str | None, payload) -> None:
    if not path:
        return
    text = json.dumps(payload, sort_keys=True, indent=2)
    if path == "-":
        print(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _emit(args, report: VerificationReport, lines: list[str]) -> int:
    if args.json:
        print(report.to_json())
    else:
        for line in lines:
            print(line)
        for c in report.checks:
            mark = "ok  " if c.passed else "FAIL"
            extra = "" if c.passed or c.witness is None else f"  {c.witness}"
            print(f"  [{mark}] {c.name}{extra}")
        print("all checks passed" if report.ok else "CHECKS FAILED")
    return EXIT_OK if report.ok else EXIT_CERTIFICATE


def _ranks(ranks) -> str:
    return "0" + "".join(f"→S^{r}" for r in reversed(ranks))


# -- commands -----------------------------------------------------------------

def cmd_check_fan(args) -> int:
    fan, _ = _load(args, need_ideal=False)
    rep = validate_fan(fan, require_smooth=args.require_smooth, seed=args.seed)
    if args.json:
        print(json.dumps({"schema": 1, "fan": fan.to_text(), **rep.as_dict()}, sort_keys=True, indent=2))
    else:
        print(f"fan: dim {fan.dim}, {fan.nrays} rays, {len(fan.maximal)} maximal cones")
        for c in rep.checks:
            print(f"  [{'ok  ' if c.passed else 'FAIL'}] {c.name} ({c.failure_class}) {c.detail}".rstrip())
        for w in rep.warnings:
            print(f"  warning: {w}")
        print("valid" if rep.ok else f"invalid: {rep.failure_class}")
    return EXIT_OK if rep.ok else EXIT_FAILED


def cmd_saturate(args) -> int:
    fan, I = _load(args)
    if I.is_zero():
        raise _Exit(EXIT_FAILED, "the zero ideal has no meaningful saturation")
    sat = I.saturate_ideal(fan.irrelevant_ideal())
    if args.json:
        print(json.dumps({"schema": 1, "ideal": I.format(fan.names), "saturation": sat.format(fan.names),
                          "saturated": sat == I}, sort_keys=True, indent=2))
    else:
        print(sat.format(fan.names))
    return EXIT_OK


def cmd_betti(args) -> int:
    text = _ideal_text(args)
    if args.fan:
        names = load_fan(args.fan).names
    else:
        names = variables_in(text)
        if not names:
            raise _Exit(EXIT_PRECONDITION, "cannot infer variables from a constant ideal")
    I = parse_ideal(text, names)
    tab = betti_table(I, args.char)
    F = minimal_resolution(I, args.char)
    _dump(args.dump_betti, {"schema": 1, "betti": tab.to_json(list(names))})
    if args.json:
        print(json.dumps({"schema": 1, "ideal": I.format(names), "variables": list(names),
                          "betti": list(tab.totals), "pdim": tab.pdim, "ranks": list(F.ranks),
                          "char": args.char}, sort_keys=True, indent=2))
    else:
        print(f"ideal: {I.format(names)}")
        print(f"β(S/I) = {tab.totals}")
        print(f"pdim S/I = {tab.pdim}")
        print(f"resolution of I: {_ranks(F.ranks)}")
    return EXIT_OK


def _bracket(args, fan, I) -> tuple[VerificationReport, list[str]]:
    t0 = time.perf_counter()
    run = run_bracket(I, fan, args.k, args.char, check_saturation=not args.unsafe_no_sat_check,
                      seed=args.seed)
    rep = VerificationReport()
    rep.extend("bracket", run.checks)
    rep.sections["bracket"] = run.report()
    rep.timings["bracket"] = time.perf_counter() - t0
    _dump(args.dump_complex, {"schema": 1, "bracket": run.complex.to_json()})
    _dump(args.dump_betti, {"schema": 1, "betti": run.betti.to_json(list(fan.names))})
    names = fan.names
    lines = [f"k = {run.k}"]
    for c, lab in run.labels.items():
        if c in set(fan.maximal_cones()):
            lines.append(f"  I_{fan.format_cone(c)} = {lab.format(names)}")
    lines.append(f"total complex: {_ranks(run.total.ranks)}")
    lines.append(f"β(S/(I∩B^[{run.k}])) = {run.betti.totals}")
    lines.append(f"pdim S/(I∩B^[{run.k}]) = {run.pdim} (bound {fan.dim + 1})")
    return rep, lines


def cmd_bracket(args) -> int:
    fan, I = _load(args)
    rep, lines = _bracket(args, fan, I)
    return _emit(args, rep, lines)


def _short(args, fan, I):
    t0 = time.perf_counter()
    run = run_short(I, fan, args.tau, args.char, args.k)
    rep = VerificationReport()
    rep.extend("short", run.checks)
    rep.sections["short"] = run.report()
    rep.timings["short"] = time.perf_counter() - t0
    _dump(args.dump_complex, {"schema": 1, "short": run.complex.to_json()})
    _dump(args.dump_betti, {"schema": 1, "betti": run.betti.to_json(list(fan.names))})
    names = fan.names
    lines = [f"tau = {names[run.tau]}, k = {run.k}"]
    for v, lab in run.vertex_labels().items():
        F = run.columns[v]
        lines.append(f"  J_{fan.format_cone(v)} = {lab.format(names)}   {_ranks(F.ranks)}")
    lines.append(f"J = {run.J.format(names)}")
    lines.append(f"total complex: {_ranks(run.total.ranks)}")
    lines.append(f"β(S/J) = {run.betti.totals}")
    lines.append(f"pdim S/J = {run.pdim} (bound {fan.dim})")
    lines.append(f"vpdim S/I <= {report_vpdim_bound(run)}")
    return rep, lines, run


def cmd_shorten(args) -> int:
    fan, I = _load(args)
    rep, lines, _ = _short(args, fan, I)
    return _emit(args, rep, lines)


def cmd_verify(args) -> int:
    fan, I = _load(args)
    dump = args.dump_complex, args.dump_betti
    args.dump_complex = args.dump_betti = None
    rep_b, lines_b = _bracket(args, fan, I)
    args.dump_complex, args.dump_betti = dump
    rep_s, lines_s, run = _short(args, fan, I)
    rep = VerificationReport(rep_b.checks + rep_s.checks, {**rep_b.sections, **rep_s.sections})
    k = args.k or choose_k(I)
    sw = stabilization_sweep(I, fan, k, k + 1, args.char)
    rep.add("stabilization.constant", sw.rows[0][1] == sw.rows[1][1],
            {str(kk): list(t) for kk, t in sw.rows})
    rep.sections["stabilization"] = sw.as_dict()
    lines = lines_b + lines_s + [f"stabilization: {[(kk, t) for kk, t in sw.rows]}"]
    return _emit(args, rep, lines)


def cmd_corpus(args) -> int:
    fans = args.fans.split(",") if args.fans else list(DEFAULT_CORPUS_FANS)
    for name in fans:
        load_fan(name)
    rows = run_corpus(fans, args.count, args.seed, args.char, args.workers)
    text = rows_to_csv(rows)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(text)
    bad = [r for r in rows if not r.ok]
    if args.json:
        print(json.dumps({"schema": 1, "instances": len(rows), "failed": len(bad),
                          "failures": [{"fan": r.fan, "ideal": r.ideal, "checks": r.failures} for r in bad]},
                         sort_keys=True, indent=2))
    else:
        if not args.csv:
            print(text, end="")
        for r in bad:
            print(f"FAIL {r.fan} {r.ideal}: {', '.join(r.failures)}")
        print(f"{len(rows) - len(bad)}/{len(rows)} instances passed")
    return EXIT_OK if not bad else EXIT_CERTIFICATE


def cmd_demo(args) -> int:
    if args.example != "p2p1":
        raise _Exit(EXIT_PRECONDITION, "the demo is only available for p2p1")
    args.fan = "p2p1"
    args.ideal = EXAMPLE_IDEAL
    args.ideal_file = None
    args.tau = args.tau or "x0"
    fan, I = _load(args)
    rep_b, lines_b = _bracket(args, fan, I)
    rep_s, lines_s, run = _short(args, fan, I)
    rep = VerificationReport(rep_b.checks + rep_s.checks, {**rep_b.sections, **rep_s.sections})
    if args.json:
        print(rep.to_json())
    else:
        print(f"I = {I.format(fan.names)}")
        print("bracket labels:")
        print("\n".join(lines_b[1:1 + len(fan.maximal)]))
        print(f"labels on the subcomplex avoiding {fan.names[run.tau]}:")
        print("\n".join(lines_s[1:1 + len(run.vertices)]))
        print(f"resolution of J: {_ranks(run.total.ranks)}")
        print("all checks passed" if rep.ok else "CHECKS FAILED")
    return EXIT_OK if rep.ok else EXIT_CERTIFICATE


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--fan", help="builtin fan name (p1, p2, p1p1, p2p1, hirzebruch<a>) or fan file")
    common.add_argument("--ideal", help="ideal literal such as '<x0*x1, x2^3>'")
    common.add_argument("--ideal-file", help="file holding an ideal literal")
    common.add_argument("--tau", help="ray removed for the shorter resolution")
    common.add_argument("--k", type=int, help="bracket exponent (at least the safe threshold)")
    common.add_argument("--char", type=int, default=linalg.DEFAULT_CHAR, help="prime characteristic")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--require-smooth", action="store_true")
    common.add_argument("--unsafe-no-sat-check", action="store_true",
                        help="skip the B-saturation precheck in the bracket pipeline")
    common.add_argument("--dump-complex", metavar="PATH", help="write the labeled complex as JSON ('-' = stdout)")
    common.add_argument("--dump-betti", metavar="PATH", help="write the Betti table as JSON ('-' = stdout)")

    ap = argparse.ArgumentParser(prog="toricvres", description="Short virtual resolutions of monomial ideals on toric varieties.")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("check-fan", parents=[common], help="validate a fan").set_defaults(func=cmd_check_fan)
    sub.add_parser("saturate", parents=[common], help="print I : B^inf").set_defaults(func=cmd_saturate)
    sub.add_parser("betti", parents=[common], help="Betti numbers (affine mode without --fan)").set_defaults(func=cmd_betti)
    sub.add_parser("bracket", parents=[common], help="resolution of I ∩ B^[k]").set_defaults(func=cmd_bracket)
    sub.add_parser("shorten", parents=[common], help="resolution of length at most n").set_defaults(func=cmd_shorten)
    sub.add_parser("verify", parents=[common], help="run every certificate").set_defaults(func=cmd_verify)
    c = sub.add_parser("corpus", parents=[common], help="random property suite")
    c.add_argument("--fans", help="comma separated fan names (default p1p1,p2p1,hirzebruch2)")
    c.add_argument("--count", type=int, default=25, help="ideals per fan")
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--csv", help="write the CSV summary here")
    c.set_defaults(func=cmd_corpus)
    d = sub.add_parser("demo", parents=[common], help="the worked example on p2p1")
    d.add_argument("example", nargs="?", default="p2p1")
    d.set_defaults(func=cmd_demo)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        args.char = linalg.check_char(args.char)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args)
    except _Exit as exc:
        if str(exc):
            print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (ParseError, FanParseError, MonomialError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NotSaturatedError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (PreconditionError, FanError, ComplexError, ResolutionError, KeyError) as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except CertificateError as exc:
        print(f"certificate failed: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATE


if __name__ == "__main__":
    sys.exit(main())
