"""Command-line front end.

Exit codes: 10 formula TRUE, 20 formula FALSE (solve/oracle), 0 success
for non-decision commands, 1 usage or input error, 2 internal invariant
failure or any differential finding, 3 oracle refusal.

The verdict line on standard output is machine-stable: decision commands
print "s cnf 1" or "s cnf 0" first; every other detail line starts with
"c ".  Nothing is written outside the --bank and --trace destinations.

Oracle limits resolve in order: built-in defaults, then the environment
variable QRL_ORACLE_LIMITS="vars,literals", then --max-vars/--max-literals.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .bench import run_bench
from .errors import (
    InternalInvariantError,
    MalformedFormulaError,
    OracleRefusal,
    PreconditionError,
    QdimacsParseError,
)
from .formula import Formula, Verdict
from .fuzz import (
    DIFF_KINDS,
    PSI_KINDS,
    campaign,
    finding_predicate,
    persist_findings,
    psi_campaign,
    run_differential,
    shrink,
)
from .generate import GenParams, QuantPattern
from .oracle import DEFAULT_LIMITS, OracleLimits, eval_elimination, eval_recursive
from .qdimacs import parse_qdimacs, write_qdimacs, write_trace
from .reduction import ASCENDING, DESCENDING, ScanPolicy, decide, seeded_random

ENV_LIMITS = "QRL_ORACLE_LIMITS"


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors are exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _load(path: str, lenient: bool) -> Formula:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        raise SystemExit(1)
    return parse_qdimacs(text, lenient=lenient)


def _policy(text: str) -> ScanPolicy:
    if text == "ascending":
        return ASCENDING
    if text == "descending":
        return DESCENDING
    if text.startswith("random:"):
        try:
            return seeded_random(int(text.split(":", 1)[1]))
        except ValueError:
            pass
    raise PreconditionError(f"bad policy {text!r}; use ascending, descending, or random:<seed>")


def _pattern(text: str) -> QuantPattern:
    if text == "alternating":
        return QuantPattern.alternating()
    if text == "random":
        return QuantPattern.random(0.5)
    if text.startswith("random:"):
        try:
            return QuantPattern.random(float(text.split(":", 1)[1]))
        except ValueError:
            raise PreconditionError(f"bad probability in pattern {text!r}")
    if text.startswith("fixed:"):
        return QuantPattern.fixed(text.split(":", 1)[1])
    raise PreconditionError(f"bad pattern {text!r}; use alternating, random[:p], or fixed:<ae-string>")


def _widths(text: str) -> tuple[int, int]:
    parts = text.split(":")
    try:
        if len(parts) == 1:
            w = int(parts[0])
            return w, w
        if len(parts) == 2:
            return int(parts[0]), int(parts[1])
    except ValueError:
        pass
    raise PreconditionError(f"bad widths {text!r}; use MIN:MAX or a single width")


def _limits(args) -> OracleLimits:
    max_vars, max_literals = DEFAULT_LIMITS.max_vars, DEFAULT_LIMITS.max_literals
    env = os.environ.get(ENV_LIMITS)
    if env:
        try:
            v, l = env.split(",")
            max_vars, max_literals = int(v), int(l)
        except ValueError:
            raise PreconditionError(f'bad {ENV_LIMITS} {env!r}; expected "vars,literals"')
    if getattr(args, "max_vars", None) is not None:
        max_vars = args.max_vars
    if getattr(args, "max_literals", None) is not None:
        max_literals = args.max_literals
    return OracleLimits(max_vars=max_vars, max_literals=max_literals)


def _verdict_exit(v: Verdict) -> int:
    print("s cnf 1" if v is Verdict.TRUE else "s cnf 0")
    return 10 if v is Verdict.TRUE else 20


def cmd_solve(args) -> int:
    F = _load(args.file, args.lenient)
    trace = decide(F, _policy(args.policy), early_exit=args.early_exit)
    if args.trace:
        Path(args.trace).write_text(write_trace(trace))
    code = _verdict_exit(trace.verdict)
    print(f"c steps {len(trace.steps)} final-clauses {trace.final_clause_count}")
    return code


def cmd_oracle(args) -> int:
    F = _load(args.file, args.lenient)
    limits = _limits(args)
    runs = []
    if args.method in ("recursive", "both"):
        runs.append(eval_recursive(F, limits))
    if args.method in ("elimination", "both"):
        runs.append(eval_elimination(F, limits))
    if len({r.value for r in runs}) > 1:
        raise InternalInvariantError(
            "oracle disagreement: " + " ".join(f"{r.method.value}={r.value.value}" for r in runs)
        )
    code = _verdict_exit(runs[0].value)
    for r in runs:
        print(f"c {r.method.value}: {r.value.value} (work={r.nodes_or_steps})")
    return code


def cmd_check(args) -> int:
    F = _load(args.file, args.lenient)
    limits = _limits(args)
    r = run_differential(F, limits)
    print(f"c decide: {r.decide_verdict.value}")
    for fn, name in ((eval_recursive, "recursive"), (eval_elimination, "elimination")):
        try:
            print(f"c oracle-{name}: {fn(F, limits).value.value}")
        except OracleRefusal as exc:
            print(f"c oracle-{name}: REFUSED ({exc})")
    for name, verdict in r.policy_verdicts:
        print(f"c policy {name}: {verdict.value}")
    kinds = sorted({f.kind for f in r.findings})
    for kind in DIFF_KINDS:
        print(f"c invariant {kind}: {'violated' if kind in kinds else 'ok'}")
    for f in r.findings:
        print(f"c finding {f.kind}: {f.detail}")
    if r.oracle_verdict is None:
        print("c oracle verdict unavailable: both methods refused", file=sys.stderr)
        return 3
    if not kinds:
        return 0
    if args.bank:
        for h in persist_findings(F, tuple(kinds), args.bank, limits):
            print(f"c banked {h}")
    return 2


def cmd_fuzz(args) -> int:
    width_min, width_max = _widths(args.widths)
    params = GenParams(
        n_vars=args.vars,
        n_clauses=args.clauses,
        width_min=width_min,
        width_max=width_max,
        pattern=_pattern(args.pattern),
        allow_tautologies=args.allow_tautologies,
        allow_empty_clauses=args.allow_empty_clauses,
        seed=args.seed,
    )
    limits = _limits(args)
    runner = psi_campaign if args.psi else campaign
    report = runner(params, args.count, workers=args.workers, bank_dir=args.bank, limits=limits)
    print(json.dumps(report.to_dict(), indent=2))
    return 2 if report.findings else 0


def cmd_shrink(args) -> int:
    F = _load(args.file, args.lenient)
    limits = _limits(args)
    pred = finding_predicate(args.check, limits)
    if not pred(F):
        print(f"error: finding {args.check!r} does not hold on the input", file=sys.stderr)
        return 1
    sys.stdout.write(write_qdimacs(shrink(F, pred)))
    return 0


def cmd_bench(args) -> int:
    report = run_bench(family=args.family, max_size=args.max_size, samples=args.samples,
                       policy=_policy(args.policy))
    print(json.dumps(report, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qrl", description="Literal-closure QBF reduction with differential oracles")
    sub = p.add_subparsers(dest="command", required=True)

    def add_limits(sp):
        sp.add_argument("--max-vars", type=int, default=None, help="recursive-oracle variable limit")
        sp.add_argument("--max-literals", type=int, default=None, help="elimination-oracle literal cap")

    sp = sub.add_parser("solve", help="decide a QDIMACS file with the reduction calculus")
    sp.add_argument("file")
    sp.add_argument("--policy", default="ascending", help="ascending | descending | random:<seed>")
    sp.add_argument("--trace", default=None, help="write the step trace JSON here")
    sp.add_argument("--early-exit", action="store_true", help="stop once an empty clause appears")
    sp.add_argument("--lenient", action="store_true", help="lenient parsing")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("oracle", help="evaluate exactly with the exponential oracles")
    sp.add_argument("file")
    sp.add_argument("--method", choices=("recursive", "elimination", "both"), default="both")
    sp.add_argument("--lenient", action="store_true")
    add_limits(sp)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("check", help="differential check of one instance")
    sp.add_argument("file")
    sp.add_argument("--bank", default=None, help="persist findings into this directory")
    sp.add_argument("--lenient", action="store_true")
    add_limits(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("fuzz", help="run a differential campaign")
    sp.add_argument("--vars", type=int, default=6)
    sp.add_argument("--clauses", type=int, default=8)
    sp.add_argument("--widths", default="1:3", help="clause width range MIN:MAX")
    sp.add_argument("--pattern", default="random:0.5", help="alternating | random[:p] | fixed:<ae-string>")
    sp.add_argument("--count", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--bank", default=None)
    sp.add_argument("--allow-tautologies", action="store_true")
    sp.add_argument("--allow-empty-clauses", action="store_true")
    sp.add_argument("--psi", action="store_true", help="check the resolvent construction instead")
    add_limits(sp)
    sp.set_defaults(func=cmd_fuzz)

    sp = sub.add_parser("shrink", help="minimize an instance while a finding persists")
    sp.add_argument("file")
    sp.add_argument("--check", required=True, choices=DIFF_KINDS + PSI_KINDS)
    sp.add_argument("--lenient", action="store_true")
    add_limits(sp)
    sp.set_defaults(func=cmd_shrink)

    sp = sub.add_parser("bench", help="advisory scaling measurement")
    sp.add_argument("--family", default="ladder")
    sp.add_argument("--max-size", type=int, default=10_000)
    sp.add_argument("--samples", type=int, default=8)
    sp.add_argument("--policy", default="ascending")
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except QdimacsParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    except (PreconditionError, MalformedFormulaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OracleRefusal as exc:
        print(f"oracle refused: {exc}", file=sys.stderr)
        return 3
    except InternalInvariantError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
