"""Reduction rule, prefix pruning, and the decision loop.

A redundant literal z is eliminated by rho:

* z existential: delete the clauses covered by C(z);
* z universal: delete the clauses covered by C(negate(z)), then delete the
  occurrences of z itself (never negate(z)) from the remaining clauses.

The prefix is untouched by rho; prune_prefix drops quantifiers whose
variable no longer occurs.  decide() alternates find_redundant / rho /
prune until no redundant literal remains and answers TRUE exactly when the
matrix is empty.

Runtime bounds are enforced, not assumed: each step must strictly shrink
the size measure, the step count may not exceed the initial size, and a
violation raises InternalInvariantError because the claimed calculus
guarantees both.

In the universal branch, clauses containing negate(z) can survive the step
(removal is driven by C(negate(z)), which may not cover them all); each
step records how many such clauses survived so traces expose the case.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from random import Random

from .closure import ClosureResult, closure, is_redundant
from .errors import InternalInvariantError, PreconditionError
from .formula import Clause, Formula, Literal, Quantifier, Verdict
from .rng import shuffled


@dataclass(frozen=True)
class ScanPolicy:
    """Order in which redundancy candidates are scanned.

    Candidates are (occurring variable) x (polarity 1, then 0).  ASCENDING
    scans variables outermost-first, DESCENDING innermost-first, and
    "random" shuffles the whole candidate list with a fresh Random(seed)
    on every call, so a policy value is reproducible but not positional.
    """

    mode: str  # "ascending" | "descending" | "random"
    seed: int | None = None

    def __post_init__(self):
        if self.mode not in ("ascending", "descending", "random"):
            raise PreconditionError(f"unknown scan mode {self.mode!r}")
        if (self.mode == "random") != (self.seed is not None):
            raise PreconditionError("seed is required for random mode and only there")

    def __str__(self) -> str:
        return self.mode if self.seed is None else f"{self.mode}:{self.seed}"


ASCENDING = ScanPolicy("ascending")
DESCENDING = ScanPolicy("descending")


def seeded_random(seed: int) -> ScanPolicy:
    return ScanPolicy("random", seed)


@dataclass(frozen=True)
class ReductionStep:
    chosen: Literal
    quantifier: Quantifier
    s_set: frozenset[Literal]  # closure set that drove the clause removal
    covered: frozenset[int]  # clause ids actually removed
    literal_deletions: int  # universal branch only, 0 otherwise
    size_before: int
    size_after: int
    closure_iterations: int
    negated_survivors: int  # surviving clauses still containing negate(z)


@dataclass(frozen=True)
class ReductionTrace:
    steps: tuple[ReductionStep, ...]
    verdict: Verdict
    final_clause_count: int
    initial_size: int
    # Not serialized; handy for callers that keep reducing or checking.
    final_formula: Formula = field(compare=False, repr=False, default=None)


def candidate_literals(F: Formula) -> list[Literal]:
    """Redundancy candidates in ASCENDING order."""
    occurring = F.occurring_vars
    out = []
    for qv in F.prefix:
        if qv.var in occurring:
            out.append(Literal(qv.var, 1))
            out.append(Literal(qv.var, 0))
    return out


def _ordered_candidates(F: Formula, policy: ScanPolicy) -> list[Literal]:
    cands = candidate_literals(F)
    if policy.mode == "ascending":
        return cands
    if policy.mode == "descending":
        pairs = [cands[i : i + 2] for i in range(0, len(cands), 2)]
        return [lit for pair in reversed(pairs) for lit in pair]
    return shuffled(Random(policy.seed), cands)


def find_redundant(F: Formula, policy: ScanPolicy = ASCENDING) -> Literal | None:
    for z in _ordered_candidates(F, policy):
        if is_redundant(F, z):
            return z
    return None


def is_reduced(F: Formula) -> bool:
    return find_redundant(F, ASCENDING) is None


def prune_prefix(F: Formula) -> Formula:
    """Drop prefix entries for variables that occur in no clause."""
    occurring = F.occurring_vars
    kept = tuple(qv for qv in F.prefix if qv.var in occurring)
    if len(kept) == len(F.prefix):
        return F
    return Formula(kept, F.clauses)


def _strip(F: Formula, removed_mask: int, delete: Literal | None) -> tuple[Formula, int, int]:
    """Remove masked clauses; optionally delete a literal from survivors.

    Returns (formula, literal deletions, survivors containing negate(delete)).
    """
    deletions = 0
    negated_survivors = 0
    neg = delete.negate() if delete is not None else None
    kept: list[Clause] = []
    for c in F.clauses:
        if removed_mask & (1 << c.id):
            continue
        if delete is not None and delete in c.literals:
            c = Clause(c.id, c.literals - {delete})
            deletions += 1
        if neg is not None and neg in c.literals:
            negated_survivors += 1
        kept.append(c)
    return Formula(F.prefix, tuple(kept)), deletions, negated_survivors


def _removal_closure(F: Formula, z: Literal) -> tuple[ClosureResult, Literal | None]:
    """Closure whose covered set rho deletes, plus the literal to strip."""
    if F.quantifier_of(z.var) is Quantifier.EXISTS:
        return closure(F, z), None
    return closure(F, z.negate()), z


def apply_rho(F: Formula, z: Literal) -> Formula:
    """Single reduction by a literal that must already be redundant."""
    if not is_redundant(F, z):
        raise PreconditionError(f"{z} is not redundant; rho would be unsound")
    res, delete = _removal_closure(F, z)
    mask = 0
    for cid in res.covered:
        mask |= 1 << cid
    stripped, _, _ = _strip(F, mask, delete)
    if stripped.size >= F.size:
        raise InternalInvariantError(f"rho on {z} failed to shrink the formula")
    return stripped


def decide(F: Formula, policy: ScanPolicy = ASCENDING, *, early_exit: bool = False) -> ReductionTrace:
    """Run the reduction loop to a reduced formula and report the verdict.

    early_exit stops as soon as an empty clause is present: an empty clause
    is never inside any covered set, so it survives every later step and
    forces verdict FALSE; the flag trades trace completeness for speed.
    """
    F.require_valid()
    initial_size = F.size
    cur = F
    steps: list[ReductionStep] = []
    saw_empty = bool(F.empty_clause_ids)
    while True:
        if early_exit and cur.empty_clause_ids:
            break
        z = find_redundant(cur, policy)
        if z is None:
            break
        size_before = cur.size
        res, delete = _removal_closure(cur, z)
        mask = 0
        for cid in res.covered:
            mask |= 1 << cid
        nxt, deletions, negated_survivors = _strip(cur, mask, delete)
        nxt = prune_prefix(nxt)
        size_after = nxt.size
        if size_after >= size_before:
            raise InternalInvariantError(
                f"step on {z} did not decrease size ({size_before} -> {size_after})"
            )
        steps.append(
            ReductionStep(
                chosen=z,
                quantifier=cur.quantifier_of(z.var),
                s_set=res.s_set,
                covered=res.covered,
                literal_deletions=deletions,
                size_before=size_before,
                size_after=size_after,
                closure_iterations=res.iterations,
                negated_survivors=negated_survivors,
            )
        )
        if len(steps) > initial_size:
            raise InternalInvariantError("step count exceeded the initial size bound")
        if nxt.empty_clause_ids:
            saw_empty = True
        cur = nxt
    verdict = Verdict.TRUE if not cur.clauses else Verdict.FALSE
    if saw_empty and verdict is Verdict.TRUE:
        raise InternalInvariantError("empty clause seen but verdict TRUE")
    return ReductionTrace(
        steps=tuple(steps),
        verdict=verdict,
        final_clause_count=len(cur.clauses),
        initial_size=initial_size,
        final_formula=cur,
    )
