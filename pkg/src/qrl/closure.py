"""Literal-closure fixpoint engine and redundancy test.

Given a pivot literal z, the closure iterates a one-step operator from
S = {z}: a candidate u joins S when all of the following hold,

* u's variable is existential,
* u != negate(z),
* literal_leq(F, z, u),
* the clauses containing u are NOT all covered by [S],
* the clauses containing negate(u) ARE all covered by [S],

where [S] is the set of clause ids containing at least one literal of S.
The fixpoint set is S(z); the covered set C(z) = [S(z)].  A literal z is
redundant when every clause containing negate(z) lies in C(z).

Within one round every candidate is judged against the same frozen [S];
additions take effect only between rounds, so the result does not depend
on scan order.  Clause-id sets are bitmasks internally; the public result
exposes frozensets.

check_property_1 / check_property_2 test two implications the calculus
relies on.  Either outcome is data for the fuzz harness, not an error:
a false report is a finding about the calculus, not a bug here.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InternalInvariantError, PreconditionError
from .formula import Formula, Literal, Quantifier


@dataclass(frozen=True)
class ClosureResult:
    pivot: Literal
    s_set: frozenset[Literal]
    covered: frozenset[int]
    rounds: tuple[frozenset[Literal], ...]
    iterations: int


@dataclass(frozen=True)
class PropertyReport:
    property: str  # "P1" or "P2"
    pivot: Literal
    holds: bool
    witness: Literal | None


def literal_leq(F: Formula, u: Literal, v: Literal) -> bool:
    """Order relation: u <= v iff u's variable is existential or u's
    prefix position is at most v's.  Polarities never matter."""
    if not (F.is_bound(u.var) and F.is_bound(v.var)):
        raise PreconditionError(f"literal_leq on unbound variable ({u}, {v})")
    if F.quantifier_of(u.var) is Quantifier.EXISTS:
        return True
    return F.position_of(u.var) <= F.position_of(v.var)


def _require_bound(F: Formula, z: Literal) -> None:
    if not F.is_bound(z.var):
        raise PreconditionError(f"pivot variable x{z.var} is not bound")


def _candidates(F: Formula, z: Literal) -> list[tuple[Literal, int, int]]:
    """Occurring existential literals eligible to ever join S(z), with
    occurrence masks for u and negate(u)."""
    zbar = z.negate()
    index = F.existential_occurrence_index
    if F.quantifier_of(z.var) is Quantifier.EXISTS:
        return [(u, mu, mubar) for u, _, mu, mubar in index if u != zbar]
    z_pos = F.position_of(z.var)
    return [(u, mu, mubar) for u, pos, mu, mubar in index if pos >= z_pos and u != zbar]


def closure_step(F: Formula, S: frozenset[Literal], z: Literal) -> frozenset[Literal]:
    """One application of the step operator against a frozen S."""
    _require_bound(F, z)
    cov = F.mask_of_any(S)
    added = set()
    for u, mu, mubar in _candidates(F, z):
        if (mu & ~cov) and not (mubar & ~cov):
            added.add(u)
    return frozenset(added)


def _closure_masks(
    F: Formula, z: Literal, stop_mask: int | None = None
) -> tuple[set[Literal], int, list[frozenset[Literal]], int, bool]:
    """Shared fixpoint loop.  With stop_mask, stops as soon as the covered
    mask contains it (monotone, so the answer cannot change later); used by
    the redundancy test to avoid completing closures it does not need."""
    _require_bound(F, z)
    cap = 2 * len(F.prefix) + 1
    occ = F.occ_mask
    s: set[Literal] = {z}
    cov = occ.get(z, 0)
    rounds: list[frozenset[Literal]] = []
    iterations = 0
    if stop_mask is not None and not (stop_mask & ~cov):
        return s, cov, rounds, iterations, True
    cands = _candidates(F, z)
    while True:
        iterations += 1
        if iterations > cap:
            raise InternalInvariantError(
                f"closure of {z} exceeded {cap} iterations; the step must be monotone"
            )
        added = [u for u, mu, mubar in cands if (mu & ~cov) and not (mubar & ~cov)]
        if not added:
            return s, cov, rounds, iterations, False
        new = frozenset(u for u in added if u not in s)
        s.update(new)
        for u in new:
            cov |= occ[u]
        rounds.append(new)
        if stop_mask is not None and not (stop_mask & ~cov):
            return s, cov, rounds, iterations, True


def closure(F: Formula, z: Literal) -> ClosureResult:
    """Fixpoint S(z) with covered clause set C(z) and per-round additions."""
    s, cov, rounds, iterations, _ = _closure_masks(F, z)
    return ClosureResult(
        pivot=z,
        s_set=frozenset(s),
        covered=F._ids(cov),
        rounds=tuple(rounds),
        iterations=iterations,
    )


def is_redundant(F: Formula, z: Literal) -> bool:
    """True iff every clause containing negate(z) is covered by C(z).

    Requires z's variable to occur in the matrix: a fully non-occurring
    variable would be vacuously redundant while its reduction removes
    nothing, so it is excluded from candidacy.
    """
    _require_bound(F, z)
    if z.var not in F.occurring_vars:
        raise PreconditionError(f"variable x{z.var} occurs in no clause")
    target = F.occ_mask.get(z.negate(), 0)
    _, cov, _, _, _ = _closure_masks(F, z, stop_mask=target)
    return not (target & ~cov)


def check_property_1(F: Formula, z: Literal) -> PropertyReport:
    """No complementary pair may appear in S(z)."""
    s = closure(F, z).s_set
    witness = None
    for u in sorted(s):
        if u.negate() in s:
            witness = u
            break
    return PropertyReport("P1", z, witness is None, witness)


def _property_2_candidates(F: Formula, z: Literal) -> list[Literal]:
    """Both polarities of every bound variable, u != z, with z <= u,
    in prefix order (positive polarity first)."""
    out = []
    for qv in F.prefix:
        for pol in (1, 0):
            u = Literal(qv.var, pol)
            if u != z and literal_leq(F, z, u):
                out.append(u)
    return out


def property_2_witnesses(F: Formula, z: Literal) -> tuple[Literal, ...]:
    """All candidates u where [{u}] <= C(z) holds but [{negate(u)}] <= C(z)
    fails, in prefix order.  Empty tuple means the implication holds."""
    _require_bound(F, z)
    _, cov, _, _, _ = _closure_masks(F, z)
    occ = F.occ_mask
    out = []
    for u in _property_2_candidates(F, z):
        if not (occ.get(u, 0) & ~cov) and (occ.get(u.negate(), 0) & ~cov):
            out.append(u)
    return tuple(out)


def check_property_2(F: Formula, z: Literal) -> PropertyReport:
    witnesses = property_2_witnesses(F, z)
    return PropertyReport("P2", z, not witnesses, witnesses[0] if witnesses else None)
