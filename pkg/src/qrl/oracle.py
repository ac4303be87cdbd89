"""Ground-truth evaluation and the resolvent construction Psi.

Two independent exact methods:

* eval_recursive: textbook semantics, outermost variable first; an
  existential node is the OR of its two cofactors, a universal node the
  AND.  Work is bounded by 2^(vars+1) visited nodes, so it refuses
  formulas whose prefix exceeds the variable limit.
* eval_elimination: eliminates the innermost variable until the prefix is
  empty.  Innermost existential: resolution on the variable, dropping
  tautological resolvents.  Innermost universal: delete the variable's
  literals.  Clauses tautological on the variable are dropped in both
  cases.  Refuses when the matrix grows past the literal cap.

The two share no code path that could bias them the same way: one never
resolves, the other never branches.  Disagreement between them is an
implementation bug and raises InternalInvariantError; oracle_verdict runs
both and cross-checks on every call.

build_psi is a different animal: it mirrors the calculus-side construction
used to argue that reduced nonempty formulas are false.  It pivots on the
innermost variable, drops every clause containing it, and adds ALL
resolvents, tautological ones included; the pivot must occur and no clause
may contain it in both polarities.  check_psi_lemma evaluates the three
claims attached to that construction and reports outcomes as data.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .closure import closure
from .errors import InternalInvariantError, OracleRefusal, PreconditionError
from .formula import Clause, Formula, Literal, Quantifier, Verdict
from .reduction import is_reduced


@dataclass(frozen=True)
class OracleLimits:
    max_vars: int = 30
    max_literals: int = 1_000_000


DEFAULT_LIMITS = OracleLimits()


class OracleMethod(enum.Enum):
    RECURSIVE = "recursive"
    ELIMINATION = "elimination"


@dataclass(frozen=True)
class OracleVerdict:
    value: Verdict
    method: OracleMethod
    nodes_or_steps: int


def eval_recursive(F: Formula, limits: OracleLimits = DEFAULT_LIMITS) -> OracleVerdict:
    F.require_valid()
    n = len(F.prefix)
    if n > limits.max_vars:
        raise OracleRefusal(f"{n} prefix variables exceed the recursive-oracle limit {limits.max_vars}")
    pos_of = {qv.var: i for i, qv in enumerate(F.prefix)}
    matrix: list[tuple[int, int]] = []
    for c in F.clauses:
        p = q = 0
        for lit in c.literals:
            b = 1 << pos_of[lit.var]
            if lit.polarity:
                p |= b
            else:
                q |= b
        matrix.append((p, q))
    quants = [qv.quantifier for qv in F.prefix]
    cap = 1 << (n + 1)
    nodes = 0

    def walk(depth: int, cls: list[tuple[int, int]]) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > cap:
            raise InternalInvariantError("recursive oracle exceeded its node bound")
        if not cls:
            return True
        for p, q in cls:
            if not p and not q:
                return False
        bit = 1 << depth
        hi = _cofactor(cls, bit, True)
        if quants[depth] is Quantifier.EXISTS:
            return walk(depth + 1, hi) or walk(depth + 1, _cofactor(cls, bit, False))
        return walk(depth + 1, hi) and walk(depth + 1, _cofactor(cls, bit, False))

    value = Verdict.TRUE if walk(0, matrix) else Verdict.FALSE
    return OracleVerdict(value, OracleMethod.RECURSIVE, nodes)


def _cofactor(cls: list[tuple[int, int]], bit: int, value: bool) -> list[tuple[int, int]]:
    out = []
    if value:
        for p, q in cls:
            if p & bit:
                continue  # satisfied
            out.append((p, q & ~bit))
    else:
        for p, q in cls:
            if q & bit:
                continue
            out.append((p & ~bit, q))
    return out


def _tautological(lits: frozenset[Literal]) -> bool:
    return any(l.negate() in lits for l in lits)


def _elim_step(matrix: list[frozenset[Literal]], var: int, quantifier: Quantifier) -> tuple[list[frozenset[Literal]], int]:
    """Eliminate one innermost variable from a raw literal-set matrix.

    Returns (new matrix, resolvent pairs processed).  Duplicate clauses
    (same literal set) are merged, keeping first-occurrence order.
    """
    pos, neg = Literal(var, 1), Literal(var, 0)
    others: list[frozenset[Literal]] = []
    with_pos: list[frozenset[Literal]] = []
    with_neg: list[frozenset[Literal]] = []
    for c in matrix:
        has_p, has_n = pos in c, neg in c
        if has_p and has_n:
            continue  # satisfied whatever the variable does
        if has_p:
            with_pos.append(c - {pos})
        elif has_n:
            with_neg.append(c - {neg})
        else:
            others.append(c)
    if quantifier is Quantifier.FORALL:
        new = others + with_pos + with_neg
        work = 0
    else:
        resolvents = []
        for a in with_pos:
            for b in with_neg:
                r = a | b
                if not _tautological(r):
                    resolvents.append(r)
        new = others + resolvents
        work = len(with_pos) * len(with_neg)
    return list(dict.fromkeys(new)), work


def eliminate_innermost(F: Formula) -> Formula:
    """One exact elimination step as a Formula-level operation."""
    F.require_valid()
    if not F.prefix:
        raise PreconditionError("cannot eliminate from an empty prefix")
    qv = F.prefix[-1]
    new, _ = _elim_step([c.literals for c in F.clauses], qv.var, qv.quantifier)
    return Formula(F.prefix[:-1], tuple(Clause(i, lits) for i, lits in enumerate(new, start=1)))


def eval_elimination(F: Formula, limits: OracleLimits = DEFAULT_LIMITS) -> OracleVerdict:
    F.require_valid()
    prefix = list(F.prefix)
    matrix = [c.literals for c in F.clauses]
    steps = 0
    while True:
        total = sum(len(c) for c in matrix)
        if total > limits.max_literals:
            # Checked on entry too: the cap bounds the working matrix at
            # every point, not only after growth.
            raise OracleRefusal(
                f"elimination working matrix has {total} literals, cap {limits.max_literals}"
            )
        if not matrix:
            return OracleVerdict(Verdict.TRUE, OracleMethod.ELIMINATION, steps)
        if any(not c for c in matrix):
            # An empty clause can never be satisfied; prefix is irrelevant.
            return OracleVerdict(Verdict.FALSE, OracleMethod.ELIMINATION, steps)
        if not prefix:
            raise InternalInvariantError("nonempty clauses without variables escaped validation")
        qv = prefix.pop()
        matrix, work = _elim_step(matrix, qv.var, qv.quantifier)
        steps += 1 + work


def oracle_verdict(F: Formula, limits: OracleLimits = DEFAULT_LIMITS) -> Verdict | None:
    """Verdict from whichever exact method answers; None if both refuse.

    Always runs both methods (cross-check is a hard invariant, checked on
    every call, not only in dedicated tests).
    """
    rec = elim = None
    try:
        rec = eval_recursive(F, limits)
    except OracleRefusal:
        pass
    try:
        elim = eval_elimination(F, limits)
    except OracleRefusal:
        pass
    if rec is not None and elim is not None and rec.value is not elim.value:
        raise InternalInvariantError(
            f"oracle disagreement: recursive={rec.value.value} elimination={elim.value.value}"
        )
    hit = rec or elim
    return hit.value if hit else None


# -- the calculus-side construction --------------------------------------


@dataclass(frozen=True)
class PsiResult:
    psi: Formula
    pivot_var: int
    removed: frozenset[int]  # original clause ids deleted
    added: tuple[Clause, ...]  # resolvent clauses with fresh ids


def build_psi(F: Formula) -> PsiResult:
    """Pivot on the innermost variable: drop its clauses, add all pairwise
    resolvents (tautological ones kept, duplicate literal sets merged)."""
    F.require_valid()
    if not F.prefix:
        raise PreconditionError("psi needs a quantified variable")
    x = F.prefix[-1].var
    pos, neg = Literal(x, 1), Literal(x, 0)
    survivors: list[Clause] = []
    rest_pos: list[tuple[int, frozenset[Literal]]] = []
    rest_neg: list[tuple[int, frozenset[Literal]]] = []
    for c in F.clauses:
        has_p, has_n = pos in c.literals, neg in c.literals
        if has_p and has_n:
            raise PreconditionError(f"clause {c.id} is tautological on pivot x{x}")
        if has_p:
            rest_pos.append((c.id, c.literals - {pos}))
        elif has_n:
            rest_neg.append((c.id, c.literals - {neg}))
        else:
            survivors.append(c)
    if not rest_pos and not rest_neg:
        raise PreconditionError(f"pivot x{x} occurs in no clause")
    removed = frozenset(cid for cid, _ in rest_pos) | frozenset(cid for cid, _ in rest_neg)
    seen = {c.literals for c in survivors}
    added: list[Clause] = []
    next_id = max((c.id for c in F.clauses), default=0) + 1
    for _, a in rest_neg:  # C^0_i, the negated-pivot remainders
        for _, b in rest_pos:  # C^1_j
            r = a | b
            if r not in seen:
                seen.add(r)
                added.append(Clause(next_id, r))
                next_id += 1
    psi = Formula(F.prefix[:-1], tuple(survivors) + tuple(added))
    return PsiResult(psi=psi, pivot_var=x, removed=removed, added=tuple(added))


@dataclass(frozen=True)
class PsiLemmaReport:
    pivot_var: int
    # Containment of psi-closures mapped into the original formula,
    # restricted to surviving original clauses.
    lemma_surviving_holds: bool
    lemma_surviving_witness: tuple[Literal, int] | None
    # Same containment via a plain occurrence query on the original
    # formula (no survivor restriction); reported, never gated.
    lemma_strict_holds: bool
    # Pivots whose psi-closure covers at least one resolvent clause.
    resolvent_involved_pivots: int
    phi_verdict: Verdict
    psi_verdict: Verdict
    truth_preserved: bool  # not (phi TRUE and psi FALSE)
    phi_reduced: bool
    psi_reduced: bool
    reduced_preserved: bool  # phi reduced implies psi reduced


def check_psi_lemma(F: Formula, limits: OracleLimits = DEFAULT_LIMITS) -> PsiLemmaReport:
    pr = build_psi(F)
    psi = pr.psi
    added_ids = frozenset(c.id for c in pr.added)
    surviving_ids = frozenset(c.id for c in psi.clauses) - added_ids

    surviving_holds = True
    witness: tuple[Literal, int] | None = None
    strict_holds = True
    involved = 0
    for qv in psi.prefix:
        for polarity in (1, 0):
            z = Literal(qv.var, polarity)
            s_psi = closure(psi, z).s_set
            c_phi = closure(F, z).covered
            if not F.clauses_with_any(s_psi) <= c_phi:
                strict_holds = False
            psi_hits = psi.clauses_with_any(s_psi)
            if psi_hits & added_ids:
                involved += 1
            escaped = (psi_hits & surviving_ids) - c_phi
            if escaped:
                if surviving_holds:
                    witness = (z, min(escaped))
                surviving_holds = False

    phi_verdict = eval_recursive(F, limits).value
    psi_verdict = eval_recursive(psi, limits).value
    phi_reduced = is_reduced(F)
    psi_reduced = is_reduced(psi)
    return PsiLemmaReport(
        pivot_var=pr.pivot_var,
        lemma_surviving_holds=surviving_holds,
        lemma_surviving_witness=witness,
        lemma_strict_holds=strict_holds,
        resolvent_involved_pivots=involved,
        phi_verdict=phi_verdict,
        psi_verdict=psi_verdict,
        truth_preserved=not (phi_verdict is Verdict.TRUE and psi_verdict is Verdict.FALSE),
        phi_reduced=phi_reduced,
        psi_reduced=psi_reduced,
        reduced_preserved=(not phi_reduced) or psi_reduced,
    )
