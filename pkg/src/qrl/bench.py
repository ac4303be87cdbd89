"""Advisory scaling measurement for the decision loop.

Two constructed families with known behavior:

* units: one existential block, one unit clause per variable.  The first
  pivot's closure absorbs every variable, so decide finishes in one step;
  stresses closure breadth.  size(F) = 3n.
* ladder: independent two-variable blocks, each a universal variable
  feeding an existential one through an equivalence pair of clauses; one
  reduction step retires one block, so steps grow linearly and each step
  pays a candidate scan; stresses the loop.  size(F) = 8b.

Timings are wall clock with adaptive repetition for sub-50ms points; the
reported exponent is the least-squares slope of log(time) against
log(size), advisory only.  Structural bounds (step count, per-step size
decrease, closure iteration cap) are enforced inside decide()/closure()
themselves and would raise InternalInvariantError here if violated.
"""

from __future__ import annotations

import math
from time import perf_counter

from .errors import PreconditionError
from .formula import Clause, Formula, Literal, QuantifiedVar, Quantifier
from .reduction import ASCENDING, ScanPolicy, decide

BENCH_SCHEMA = "qrl-bench/1"
MIN_SIZE = 48


def family_units(target_size: int) -> Formula:
    n = max(1, target_size // 3)
    prefix = tuple(QuantifiedVar(Quantifier.EXISTS, v) for v in range(1, n + 1))
    clauses = tuple(Clause(i, frozenset({Literal(i, 1)})) for i in range(1, n + 1))
    return Formula(prefix, clauses)


def family_ladder(target_size: int) -> Formula:
    blocks = max(1, target_size // 8)
    prefix = []
    clauses = []
    cid = 1
    for b in range(blocks):
        u, e = 2 * b + 1, 2 * b + 2
        prefix.append(QuantifiedVar(Quantifier.FORALL, u))
        prefix.append(QuantifiedVar(Quantifier.EXISTS, e))
        clauses.append(Clause(cid, frozenset({Literal(u, 1), Literal(e, 1)})))
        clauses.append(Clause(cid + 1, frozenset({Literal(u, 0), Literal(e, 0)})))
        cid += 2
    return Formula(tuple(prefix), tuple(clauses))


FAMILIES = {"units": family_units, "ladder": family_ladder}


def _sample_sizes(max_size: int, samples: int) -> list[int]:
    if samples <= 0:
        return []
    lo = min(MIN_SIZE, max_size)
    if samples == 1 or lo == max_size:
        return [max_size]
    ratio = (max_size / lo) ** (1 / (samples - 1))
    out = []
    for i in range(samples):
        out.append(round(lo * ratio**i))
    return sorted(set(out))


def _fit_exponent(xs: list[float], ys: list[float]) -> float | None:
    pts = [(math.log(x), math.log(max(y, 1e-9))) for x, y in zip(xs, ys) if x > 0]
    if len(pts) < 2:
        return None
    mx = sum(p[0] for p in pts) / len(pts)
    my = sum(p[1] for p in pts) / len(pts)
    sxx = sum((p[0] - mx) ** 2 for p in pts)
    if sxx == 0:
        return None
    sxy = sum((p[0] - mx) * (p[1] - my) for p in pts)
    return sxy / sxx


def _time_decide(F: Formula, policy: ScanPolicy):
    t0 = perf_counter()
    trace = decide(F, policy)
    once = perf_counter() - t0
    if once >= 0.05:
        return once, trace
    reps = min(50, max(1, math.ceil(0.05 / max(once, 1e-7))))
    t0 = perf_counter()
    for _ in range(reps):
        trace = decide(F, policy)
    return (perf_counter() - t0) / reps, trace


def run_bench(family: str = "ladder", max_size: int = 10_000, samples: int = 8,
              policy: ScanPolicy = ASCENDING) -> dict:
    if family not in FAMILIES:
        raise PreconditionError(f"unknown family {family!r}; valid: {sorted(FAMILIES)}")
    if max_size < 1:
        raise PreconditionError("max-size must be >= 1")
    build = FAMILIES[family]
    rows = []
    for target in _sample_sizes(max_size, samples):
        F = build(target)
        seconds, trace = _time_decide(F, policy)
        rows.append(
            {
                "target_size": target,
                "size": F.size,
                "vars": len(F.prefix),
                "clauses": len(F.clauses),
                "seconds": round(seconds, 6),
                "steps": len(trace.steps),
                "closure_iterations": sum(s.closure_iterations for s in trace.steps),
                "verdict": trace.verdict.value,
            }
        )
    sizes = [r["size"] for r in rows]
    return {
        "schema": BENCH_SCHEMA,
        "family": family,
        "policy": str(policy),
        "rows": rows,
        "time_exponent": _round_opt(_fit_exponent(sizes, [r["seconds"] for r in rows])),
        "steps_exponent": _round_opt(_fit_exponent(sizes, [max(r["steps"], 1) for r in rows])),
    }


def _round_opt(x: float | None) -> float | None:
    return None if x is None else round(x, 3)
