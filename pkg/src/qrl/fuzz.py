"""Differential fuzzing: generate, compare, check, shrink, persist.

One instance runs through run_differential: decide() under five scan
policies, both oracles, the two closure properties for every occurring
literal, truth preservation of every root-level reduction, and the
reduced-nonempty-implies-false claim on the final formulas.  Anything the
calculus gets wrong becomes a Finding with a stable kind string:

* verdict-disagreement   decide (ascending) differs from the oracles
* policy-divergence      scan order changes the verdict
* property1              a closure contains a complementary pair
* property2:existential  the covered-set implication fails, witness u existential
* property2:universal    same with a universal witness
* rho-preservation       a single reduction changes the oracle verdict
* reduced-nonempty-true  a reduced nonempty formula evaluates TRUE
* psi-truth-preservation truth is not carried into the resolvent construction

Each kind has a narrow predicate usable as a shrink target; a campaign
shrinks every finding per kind, recomputes which kinds the shrunk instance
still violates, and persists it to the bank together with both verdicts.
Banked entries are self-validating: revalidate_entry re-triggers every
recorded kind from the file alone.

Campaigns stream instances from seed+0..count-1 and aggregate in index
order, so the report body (timing aside) is identical for any worker
count.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass
from time import perf_counter
from typing import Callable

from . import bank as bank_io
from .closure import check_property_1, property_2_witnesses
from .errors import InternalInvariantError, OracleRefusal, PreconditionError, QdimacsParseError
from .formula import Clause, Formula, QuantifiedVar, Quantifier, Verdict
from .generate import GenParams, gen_random
from .oracle import DEFAULT_LIMITS, OracleLimits, build_psi, check_psi_lemma, eval_elimination, eval_recursive, oracle_verdict
from .qdimacs import parse_qdimacs, write_qdimacs
from .reduction import ASCENDING, DESCENDING, ScanPolicy, apply_rho, candidate_literals, decide, is_redundant, prune_prefix, seeded_random

REPORT_SCHEMA = "qrl-report/1"
PSI_REPORT_SCHEMA = "qrl-psi/1"

DEFAULT_POLICIES: tuple[ScanPolicy, ...] = (
    ASCENDING,
    DESCENDING,
    seeded_random(101),
    seeded_random(102),
    seeded_random(103),
)

DIFF_KINDS = (
    "verdict-disagreement",
    "policy-divergence",
    "property1",
    "property2:existential",
    "property2:universal",
    "rho-preservation",
    "reduced-nonempty-true",
)
PSI_KINDS = ("psi-truth-preservation",)


@dataclass(frozen=True)
class Finding:
    kind: str
    detail: str


@dataclass(frozen=True)
class DiffResult:
    instance: Formula
    decide_verdict: Verdict
    oracle_verdict: Verdict | None  # None: both oracles refused
    agree: bool | None  # None exactly when oracle_verdict is None
    policy_verdicts: tuple[tuple[str, Verdict], ...]
    findings: tuple[Finding, ...]


def run_differential(
    F: Formula,
    limits: OracleLimits = DEFAULT_LIMITS,
    policies: tuple[ScanPolicy, ...] = DEFAULT_POLICIES,
) -> DiffResult:
    traces = [(str(p), decide(F, p)) for p in policies]
    decided = traces[0][1].verdict
    oracle = oracle_verdict(F, limits)
    findings: list[Finding] = []

    if len({t.verdict for _, t in traces}) > 1:
        detail = " ".join(f"{name}={t.verdict.value}" for name, t in traces)
        findings.append(Finding("policy-divergence", detail))
    agree = None if oracle is None else decided is oracle
    if agree is False:
        findings.append(Finding("verdict-disagreement", f"decide={decided.value} oracle={oracle.value}"))

    for z in sorted(F.occurring_literals):
        p1 = check_property_1(F, z)
        if not p1.holds:
            findings.append(Finding("property1", f"pivot {z.to_int()} witness {p1.witness.to_int()}"))
        for u in property_2_witnesses(F, z):
            kind = (
                "property2:existential"
                if F.quantifier_of(u.var) is Quantifier.EXISTS
                else "property2:universal"
            )
            findings.append(Finding(kind, f"pivot {z.to_int()} witness {u.to_int()}"))

    if oracle is not None:
        for z in candidate_literals(F):
            if is_redundant(F, z):
                after = oracle_verdict(prune_prefix(apply_rho(F, z)), limits)
                if after is not None and after is not oracle:
                    findings.append(
                        Finding("rho-preservation", f"pivot {z.to_int()} {oracle.value}->{after.value}")
                    )

    seen_finals: set[Formula] = set()
    for name, t in traces:
        if t.final_clause_count == 0 or t.final_formula in seen_finals:
            continue
        seen_finals.add(t.final_formula)
        if oracle_verdict(t.final_formula, limits) is Verdict.TRUE:
            findings.append(
                Finding("reduced-nonempty-true", f"final under {name} with {t.final_clause_count} clauses")
            )

    return DiffResult(
        instance=F,
        decide_verdict=decided,
        oracle_verdict=oracle,
        agree=agree,
        policy_verdicts=tuple((name, t.verdict) for name, t in traces),
        findings=tuple(findings),
    )


def finding_predicate(
    kind: str,
    limits: OracleLimits = DEFAULT_LIMITS,
    policies: tuple[ScanPolicy, ...] = DEFAULT_POLICIES,
) -> Callable[[Formula], bool]:
    """Deterministic re-check for one finding kind, usable as a shrink target.

    Each predicate mirrors exactly how run_differential derives the kind,
    so an instance reported with kind K always satisfies predicate K.
    """
    if kind == "policy-divergence":
        def pred(G: Formula) -> bool:
            return len({decide(G, p).verdict for p in policies}) > 1
    elif kind == "verdict-disagreement":
        def pred(G: Formula) -> bool:
            ov = oracle_verdict(G, limits)
            return ov is not None and decide(G, policies[0]).verdict is not ov
    elif kind == "property1":
        def pred(G: Formula) -> bool:
            return any(not check_property_1(G, z).holds for z in sorted(G.occurring_literals))
    elif kind in ("property2:existential", "property2:universal"):
        want = Quantifier.EXISTS if kind.endswith("existential") else Quantifier.FORALL
        def pred(G: Formula) -> bool:
            for z in sorted(G.occurring_literals):
                for u in property_2_witnesses(G, z):
                    if G.quantifier_of(u.var) is want:
                        return True
            return False
    elif kind == "rho-preservation":
        def pred(G: Formula) -> bool:
            ov = oracle_verdict(G, limits)
            if ov is None:
                return False
            for z in candidate_literals(G):
                if is_redundant(G, z):
                    after = oracle_verdict(prune_prefix(apply_rho(G, z)), limits)
                    if after is not None and after is not ov:
                        return True
            return False
    elif kind == "reduced-nonempty-true":
        def pred(G: Formula) -> bool:
            seen: set[Formula] = set()
            for p in policies:
                t = decide(G, p)
                if t.final_clause_count == 0 or t.final_formula in seen:
                    continue
                seen.add(t.final_formula)
                if oracle_verdict(t.final_formula, limits) is Verdict.TRUE:
                    return True
            return False
    elif kind == "psi-truth-preservation":
        def pred(G: Formula) -> bool:
            try:
                pr = build_psi(G)
                return (
                    eval_recursive(G, limits).value is Verdict.TRUE
                    and eval_recursive(pr.psi, limits).value is Verdict.FALSE
                )
            except (PreconditionError, OracleRefusal):
                return False
    else:
        raise PreconditionError(f"unknown finding kind {kind!r}")
    return pred


# -- shrinking ---------------------------------------------------------------


def _clause_drops(F: Formula):
    return [("clause", c.id) for c in F.clauses]


def _literal_drops(F: Formula):
    return [("literal", (c.id, lit)) for c in F.clauses for lit in c.sorted_literals()]


def _variable_drops(F: Formula):
    return [("variable", qv.var) for qv in F.prefix]


def _universal_flips(F: Formula):
    return [("flip", qv.var) for qv in F.prefix if qv.quantifier is Quantifier.FORALL]


_SHRINK_PASSES = (_clause_drops, _literal_drops, _variable_drops, _universal_flips)


def _apply_move(F: Formula, move) -> Formula | None:
    """One candidate reduction; None when the handle went stale mid-pass."""
    tag, h = move
    if tag == "clause":
        if h not in F.clauses_by_id:
            return None
        return Formula(F.prefix, tuple(c for c in F.clauses if c.id != h))
    if tag == "literal":
        cid, lit = h
        c = F.clauses_by_id.get(cid)
        if c is None or lit not in c.literals:
            return None
        return Formula(
            F.prefix,
            tuple(d if d.id != cid else Clause(cid, d.literals - {lit}) for d in F.clauses),
        )
    if tag == "variable":
        if not any(q.var == h for q in F.prefix):
            return None
        return Formula(
            tuple(q for q in F.prefix if q.var != h),
            tuple(Clause(c.id, frozenset(l for l in c.literals if l.var != h)) for c in F.clauses),
        )
    for i, qv in enumerate(F.prefix):
        if qv.var == h and qv.quantifier is Quantifier.FORALL:
            flipped = F.prefix[:i] + (QuantifiedVar(Quantifier.EXISTS, h),) + F.prefix[i + 1 :]
            return Formula(flipped, F.clauses)
    return None


def shrink(F: Formula, predicate: Callable[[Formula], bool]) -> Formula:
    """Greedy fixpoint minimization preserving the predicate.

    Pass order: drop clause, drop one literal occurrence, drop a variable
    (occurrences and prefix entry), flip a universal quantifier to
    existential.  Each pass sweeps the move handles snapshotted at its
    start, keeping a move iff the predicate still holds; the loop ends when
    a full cycle of passes accepts nothing, so no single move preserves the
    predicate on the result and shrinking again is a no-op.
    """
    if not predicate(F):
        raise PreconditionError("shrink predicate does not hold on the input")
    cur = F
    while True:
        changed = False
        for moves in _SHRINK_PASSES:
            for move in moves(cur):
                cand = _apply_move(cur, move)
                if cand is not None and predicate(cand):
                    cur = cand
                    changed = True
        if not changed:
            cur.require_valid()
            return cur


# -- campaign ---------------------------------------------------------------


@dataclass(frozen=True)
class BankEntry:
    text: str
    seed: int | None  # None: the instance came from a file, not the generator
    kinds: tuple[str, ...]
    decide_verdict: str
    oracle_verdict: str
    shrunk_from: str | None


def entry_metadata(e: BankEntry, params_dict: dict | None) -> dict:
    return {
        "seed": e.seed,
        "params": params_dict,
        "decide_verdict": e.decide_verdict,
        "oracle_verdict": e.oracle_verdict,
        "violated_invariants": list(e.kinds),
        "shrunk_from": e.shrunk_from,
    }


@dataclass(frozen=True)
class InstanceRecord:
    index: int
    agree: bool | None
    refused: bool
    kinds: tuple[str, ...]
    elapsed_ms: float
    entries: tuple[BankEntry, ...]


def _shrunk_entry(
    F: Formula,
    kind: str,
    seed: int,
    kind_universe: tuple[str, ...],
    limits: OracleLimits,
    policies: tuple[ScanPolicy, ...],
) -> BankEntry:
    pred = finding_predicate(kind, limits, policies)
    if not pred(F):
        raise InternalInvariantError(f"kind {kind} reported but its predicate rejects the instance")
    original_text = write_qdimacs(F)
    small = shrink(F, pred)
    text = write_qdimacs(small)
    kinds = tuple(k for k in kind_universe if finding_predicate(k, limits, policies)(small))
    if kind not in kinds:
        raise InternalInvariantError(f"shrunk instance lost its target kind {kind}")
    ov = oracle_verdict(small, limits)
    return BankEntry(
        text=text,
        seed=seed,
        kinds=kinds,
        decide_verdict=decide(small, policies[0]).verdict.value,
        oracle_verdict=ov.value if ov is not None else "REFUSED",
        shrunk_from=bank_io.text_hash(original_text) if text != original_text else None,
    )


def _analyze_diff(params: GenParams, index: int, limits: OracleLimits, policies: tuple[ScanPolicy, ...]) -> InstanceRecord:
    inst = params.with_seed(params.seed + index)
    F = gen_random(inst)
    t0 = perf_counter()
    r = run_differential(F, limits, policies)
    kinds = tuple(sorted({f.kind for f in r.findings}))
    entries = tuple(
        _shrunk_entry(F, kind, inst.seed, DIFF_KINDS, limits, policies) for kind in kinds
    )
    return InstanceRecord(
        index=index,
        agree=r.agree,
        refused=r.oracle_verdict is None,
        kinds=kinds,
        elapsed_ms=(perf_counter() - t0) * 1000.0,
        entries=entries,
    )


def _diff_chunk(args):
    params, start, stop, limits, policies = args
    return [_analyze_diff(params, i, limits, policies) for i in range(start, stop)]


def _run_chunked(worker, params, count, workers, limits, extra) -> list:
    if count == 0:
        return []
    if workers <= 1:
        return worker((params, 0, count, limits, extra))
    chunk = max(1, min(512, count // (workers * 4) or 1))
    args = [(params, s, min(s + chunk, count), limits, extra) for s in range(0, count, chunk)]
    records: list = []
    with multiprocessing.get_context().Pool(workers) as pool:
        for batch in pool.imap(worker, args):
            records.extend(batch)
    return records


def _percentile(sorted_vals: list[float], q: float) -> float:
    if not sorted_vals:
        return 0.0
    idx = min(len(sorted_vals) - 1, round(q * (len(sorted_vals) - 1)))
    return sorted_vals[idx]


def _timing_block(total_s: float, elapsed_ms: list[float]) -> dict:
    ordered = sorted(elapsed_ms)
    return {
        "total_s": round(total_s, 3),
        "p50_ms": round(_percentile(ordered, 0.50), 3),
        "p90_ms": round(_percentile(ordered, 0.90), 3),
        "p99_ms": round(_percentile(ordered, 0.99), 3),
        "max_ms": round(_percentile(ordered, 1.00), 3),
    }


@dataclass
class FuzzReport:
    schema: str
    params: dict
    count: int
    instances: dict
    violation_counts: dict
    findings: list
    timing: dict

    def body(self) -> dict:
        """Deterministic part: everything except timing."""
        return {
            "schema": self.schema,
            "params": self.params,
            "count": self.count,
            "instances": self.instances,
            "violation_counts": self.violation_counts,
            "findings": self.findings,
        }

    def to_dict(self) -> dict:
        out = self.body()
        out["timing"] = self.timing
        return out


def campaign(
    params: GenParams,
    count: int,
    workers: int = 1,
    bank_dir=None,
    limits: OracleLimits = DEFAULT_LIMITS,
    policies: tuple[ScanPolicy, ...] = DEFAULT_POLICIES,
) -> FuzzReport:
    """Differential campaign over instances seeded params.seed+0..count-1."""
    params.validate()
    if count < 0:
        raise PreconditionError("count must be >= 0")
    t0 = perf_counter()
    records = _run_chunked(_diff_chunk, params, count, workers, limits, policies)

    agreed = disagreed = refused = clean = with_findings = unclassified = 0
    violation_counts: dict[str, int] = {}
    findings_map: dict[str, dict] = {}
    elapsed: list[float] = []
    for rec in records:
        elapsed.append(rec.elapsed_ms)
        if rec.refused:
            refused += 1
        elif rec.agree:
            agreed += 1
        else:
            disagreed += 1
        if rec.kinds:
            with_findings += 1
        elif rec.agree:
            clean += 1
        else:
            unclassified += 1  # refused with nothing banked: not classifiable
        for k in rec.kinds:
            violation_counts[k] = violation_counts.get(k, 0) + 1
        for e in rec.entries:
            h = bank_io.text_hash(e.text)
            if h in findings_map:
                continue
            findings_map[h] = {"hash": h, "kinds": list(e.kinds), "seed": e.seed}
            if bank_dir is not None:
                bank_io.write_finding(
                    bank_dir, e.text, entry_metadata(e, params.with_seed(e.seed).to_dict())
                )

    return FuzzReport(
        schema=REPORT_SCHEMA,
        params=params.to_dict(),
        count=count,
        instances={
            "evaluated": len(records),
            "agreed": agreed,
            "disagreed": disagreed,
            "refused": refused,
            "clean": clean,
            "with_findings": with_findings,
            "unclassified": unclassified,
        },
        violation_counts=dict(sorted(violation_counts.items())),
        findings=[findings_map[h] for h in sorted(findings_map)],
        timing=_timing_block(perf_counter() - t0, elapsed),
    )


# -- the resolvent-construction campaign -------------------------------------


@dataclass(frozen=True)
class PsiRecord:
    index: int
    outcome: str  # "analyzed" | "skipped" | "refused"
    truth_ok: bool
    surviving_ok: bool
    strict_ok: bool
    involved: bool
    reduced_applicable: bool
    reduced_ok: bool
    elapsed_ms: float
    entries: tuple[BankEntry, ...]


def _analyze_psi(params: GenParams, index: int, limits: OracleLimits, policies) -> PsiRecord:
    inst = params.with_seed(params.seed + index)
    F = gen_random(inst)
    t0 = perf_counter()
    try:
        rep = check_psi_lemma(F, limits)
    except PreconditionError:
        return PsiRecord(index, "skipped", True, True, True, False, False, True,
                         (perf_counter() - t0) * 1000.0, ())
    except OracleRefusal:
        return PsiRecord(index, "refused", True, True, True, False, False, True,
                         (perf_counter() - t0) * 1000.0, ())
    entries: tuple[BankEntry, ...] = ()
    if not rep.truth_preserved:
        entries = (
            _shrunk_entry(F, "psi-truth-preservation", inst.seed, PSI_KINDS, limits, policies),
        )
    return PsiRecord(
        index=index,
        outcome="analyzed",
        truth_ok=rep.truth_preserved,
        surviving_ok=rep.lemma_surviving_holds,
        strict_ok=rep.lemma_strict_holds,
        involved=rep.resolvent_involved_pivots > 0,
        reduced_applicable=rep.phi_reduced,
        reduced_ok=rep.reduced_preserved,
        elapsed_ms=(perf_counter() - t0) * 1000.0,
        entries=entries,
    )


def _psi_chunk(args):
    params, start, stop, limits, policies = args
    return [_analyze_psi(params, i, limits, policies) for i in range(start, stop)]


@dataclass
class PsiReport:
    schema: str
    params: dict
    count: int
    counts: dict
    findings: list
    timing: dict

    def body(self) -> dict:
        return {
            "schema": self.schema,
            "params": self.params,
            "count": self.count,
            "counts": self.counts,
            "findings": self.findings,
        }

    def to_dict(self) -> dict:
        out = self.body()
        out["timing"] = self.timing
        return out


def psi_campaign(
    params: GenParams,
    count: int,
    workers: int = 1,
    bank_dir=None,
    limits: OracleLimits = DEFAULT_LIMITS,
    policies: tuple[ScanPolicy, ...] = DEFAULT_POLICIES,
) -> PsiReport:
    """Claim-check campaign for the resolvent construction."""
    params.validate()
    if count < 0:
        raise PreconditionError("count must be >= 0")
    t0 = perf_counter()
    records = _run_chunked(_psi_chunk, params, count, workers, limits, policies)

    counts = {
        "analyzed": 0,
        "skipped_precondition": 0,
        "refused": 0,
        "truth_preserved": 0,
        "truth_violated": 0,
        "lemma_surviving_holds": 0,
        "lemma_surviving_violated": 0,
        "lemma_strict_holds": 0,
        "lemma_strict_violated": 0,
        "resolvent_involved": 0,
        "reduced_applicable": 0,
        "reduced_preserved": 0,
        "reduced_violated": 0,
    }
    findings_map: dict[str, dict] = {}
    elapsed: list[float] = []
    for rec in records:
        elapsed.append(rec.elapsed_ms)
        if rec.outcome == "skipped":
            counts["skipped_precondition"] += 1
            continue
        if rec.outcome == "refused":
            counts["refused"] += 1
            continue
        counts["analyzed"] += 1
        counts["truth_preserved" if rec.truth_ok else "truth_violated"] += 1
        counts["lemma_surviving_holds" if rec.surviving_ok else "lemma_surviving_violated"] += 1
        counts["lemma_strict_holds" if rec.strict_ok else "lemma_strict_violated"] += 1
        if rec.involved:
            counts["resolvent_involved"] += 1
        if rec.reduced_applicable:
            counts["reduced_applicable"] += 1
            counts["reduced_preserved" if rec.reduced_ok else "reduced_violated"] += 1
        for e in rec.entries:
            h = bank_io.text_hash(e.text)
            if h in findings_map:
                continue
            findings_map[h] = {"hash": h, "kinds": list(e.kinds), "seed": e.seed}
            if bank_dir is not None:
                bank_io.write_finding(
                    bank_dir, e.text, entry_metadata(e, params.with_seed(e.seed).to_dict())
                )

    return PsiReport(
        schema=PSI_REPORT_SCHEMA,
        params=params.to_dict(),
        count=count,
        counts=counts,
        findings=[findings_map[h] for h in sorted(findings_map)],
        timing=_timing_block(perf_counter() - t0, elapsed),
    )


def persist_findings(
    F: Formula,
    kinds: tuple[str, ...],
    bank_dir,
    limits: OracleLimits = DEFAULT_LIMITS,
    policies: tuple[ScanPolicy, ...] = DEFAULT_POLICIES,
) -> list[str]:
    """Shrink and bank the given finding kinds of one instance (e.g. a file
    checked outside any campaign); returns the banked hashes."""
    universe = DIFF_KINDS + PSI_KINDS
    hashes = []
    for kind in kinds:
        e = _shrunk_entry(F, kind, None, universe, limits, policies)
        hashes.append(bank_io.write_finding(bank_dir, e.text, entry_metadata(e, None)))
    return hashes


# -- bank self-validation -----------------------------------------------------


def revalidate_entry(
    bank_dir,
    h: str,
    limits: OracleLimits = DEFAULT_LIMITS,
    policies: tuple[ScanPolicy, ...] = DEFAULT_POLICIES,
) -> list[str]:
    """Re-run a banked finding from its files; empty list means it holds up."""
    problems: list[str] = []
    text, meta = bank_io.load_entry(bank_dir, h)
    if bank_io.text_hash(text) != h:
        problems.append("file content does not match its hash name")
    try:
        G = parse_qdimacs(text)
    except QdimacsParseError as exc:
        return [f"unparseable: {exc}"]
    for kind in meta.get("violated_invariants", []):
        if not finding_predicate(kind, limits, policies)(G):
            problems.append(f"recorded kind {kind} does not re-trigger")
    decided = decide(G, policies[0]).verdict.value
    if decided != meta.get("decide_verdict"):
        problems.append(f"decide verdict now {decided}, recorded {meta.get('decide_verdict')}")
    recorded = meta.get("oracle_verdict")
    if recorded != "REFUSED":
        for fn, name in ((eval_recursive, "recursive"), (eval_elimination, "elimination")):
            try:
                got = fn(G, limits).value.value
            except OracleRefusal:
                problems.append(f"{name} oracle refuses the banked instance")
                continue
            if got != recorded:
                problems.append(f"{name} oracle says {got}, recorded {recorded}")
    return problems
