"""Core data model: literals, prefixes, clauses, formulas.

A formula here is a prenex CNF QBF: an ordered quantifier prefix over
distinct variables, plus a tuple of clauses.  Clauses carry stable integer
ids so that transformations (clause deletion, literal deletion) can be
traced; ids survive reduction steps but carry no meaning beyond identity.

Polarity convention: ``Literal(v, 1)`` is the positive literal of variable
``v``, ``Literal(v, 0)`` its negation.  A clause is a frozenset of literals,
so duplicate literals within a clause are structurally impossible; a clause
may be empty (the unsatisfiable clause) and may be tautological (contain a
variable in both polarities).

All types are immutable; derived occurrence indexes are cached lazily on
the instance.  Equality of formulas is structural: same prefix, same
multiset of clause literal-sets, clause ids ignored.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple


class Quantifier(enum.Enum):
    EXISTS = "e"
    FORALL = "a"


class Verdict(enum.Enum):
    TRUE = "TRUE"
    FALSE = "FALSE"


class Literal(NamedTuple):
    var: int
    polarity: int  # 1 positive, 0 negated

    def negate(self) -> "Literal":
        return Literal(self.var, 1 - self.polarity)

    def to_int(self) -> int:
        """Signed-integer form: 3 for x3, -3 for negated x3."""
        return self.var if self.polarity else -self.var

    @classmethod
    def from_int(cls, n: int) -> "Literal":
        if n == 0:
            raise ValueError("literal integer must be nonzero")
        return cls(abs(n), 1 if n > 0 else 0)

    def __str__(self) -> str:
        return f"x{self.var}" if self.polarity else f"¬x{self.var}"


class QuantifiedVar(NamedTuple):
    quantifier: Quantifier
    var: int


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


@dataclass(frozen=True)
class Clause:
    id: int
    literals: frozenset[Literal]

    @property
    def is_empty(self) -> bool:
        return not self.literals

    def has_var(self, var: int) -> bool:
        return Literal(var, 1) in self.literals or Literal(var, 0) in self.literals

    def is_tautological_on(self, var: int) -> bool:
        return Literal(var, 1) in self.literals and Literal(var, 0) in self.literals

    def sorted_literals(self) -> tuple[Literal, ...]:
        # Canonical order: ascending variable, positive before negative.
        return tuple(sorted(self.literals, key=lambda l: (l.var, 1 - l.polarity)))


def clause_key(c: Clause) -> tuple[tuple[int, int], ...]:
    """Id-free identity of a clause, used for structural comparison."""
    return tuple(sorted((l.var, l.polarity) for l in c.literals))


@dataclass(frozen=True, eq=False)
class Formula:
    prefix: tuple[QuantifiedVar, ...]
    clauses: tuple[Clause, ...]

    # -- structural identity ------------------------------------------------

    def _key(self):
        return (self.prefix, tuple(sorted(clause_key(c) for c in self.clauses)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Formula):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    # -- derived indexes ----------------------------------------------------

    @cached_property
    def clauses_by_id(self) -> dict[int, Clause]:
        return {c.id: c for c in self.clauses}

    @cached_property
    def _var_info(self) -> dict[int, tuple[int, Quantifier]]:
        return {qv.var: (pos, qv.quantifier) for pos, qv in enumerate(self.prefix)}

    @cached_property
    def occ_mask(self) -> dict[Literal, int]:
        """Occurrence bitmask per literal; bit ``1 << id`` marks clause id."""
        occ: dict[Literal, int] = {}
        for c in self.clauses:
            bit = 1 << c.id
            for lit in c.literals:
                occ[lit] = occ.get(lit, 0) | bit
        return occ

    @cached_property
    def all_clause_mask(self) -> int:
        mask = 0
        for c in self.clauses:
            mask |= 1 << c.id
        return mask

    @cached_property
    def occurring_literals(self) -> frozenset[Literal]:
        return frozenset(self.occ_mask)

    @cached_property
    def occurring_vars(self) -> frozenset[int]:
        return frozenset(l.var for l in self.occ_mask)

    @cached_property
    def empty_clause_ids(self) -> frozenset[int]:
        return frozenset(c.id for c in self.clauses if c.is_empty)

    @cached_property
    def size(self) -> int:
        """Prefix length + clause count + total literal occurrences."""
        return len(self.prefix) + len(self.clauses) + sum(len(c.literals) for c in self.clauses)

    @cached_property
    def prefix_vars(self) -> tuple[int, ...]:
        return tuple(qv.var for qv in self.prefix)

    @cached_property
    def existential_occurrence_index(self) -> tuple[tuple[Literal, int, int, int], ...]:
        """Every occurring existential literal with (literal, prefix
        position, occurrence mask, negation's occurrence mask), in prefix
        order with positive polarity first."""
        occ = self.occ_mask
        out = []
        for pos, qv in enumerate(self.prefix):
            if qv.quantifier is not Quantifier.EXISTS:
                continue
            for pol in (1, 0):
                u = Literal(qv.var, pol)
                mu = occ.get(u, 0)
                if mu:
                    out.append((u, pos, mu, occ.get(u.negate(), 0)))
        return tuple(out)

    # -- queries --------------------------------------------------------------

    def is_bound(self, var: int) -> bool:
        return var in self._var_info

    def position_of(self, var: int) -> int:
        return self._var_info[var][0]

    def quantifier_of(self, var: int) -> Quantifier:
        return self._var_info[var][1]

    def occurs(self, lit: Literal) -> bool:
        return lit in self.occ_mask

    def clauses_with_literal(self, lit: Literal) -> frozenset[int]:
        """Ids of clauses containing this exact literal (polarity-sensitive)."""
        return self._ids(self.occ_mask.get(lit, 0))

    def clauses_with_any(self, lits: Iterable[Literal]) -> frozenset[int]:
        """Ids of clauses containing at least one literal from the set."""
        return self._ids(self.mask_of_any(lits))

    def mask_of_any(self, lits: Iterable[Literal]) -> int:
        occ = self.occ_mask
        mask = 0
        for lit in lits:
            mask |= occ.get(lit, 0)
        return mask

    @staticmethod
    def _ids(mask: int) -> frozenset[int]:
        ids = []
        while mask:
            low = mask & -mask
            ids.append(low.bit_length() - 1)
            mask ^= low
        return frozenset(ids)

    # -- validation -----------------------------------------------------------

    def validate(self) -> list[Violation]:
        """Structural check; returns one entry per violation, empty if sound.

        Construction is permissive so that malformed inputs can be built,
        inspected and reported; operations that require soundness call this
        first and raise MalformedFormulaError.
        """
        out: list[Violation] = []
        seen_vars: set[int] = set()
        for qv in self.prefix:
            if qv.var < 1:
                out.append(Violation("invalid-variable", f"prefix variable {qv.var} < 1"))
            if qv.var in seen_vars:
                out.append(Violation("duplicate-prefix-variable", f"variable {qv.var} quantified twice"))
            seen_vars.add(qv.var)
        seen_ids: set[int] = set()
        for c in self.clauses:
            if c.id < 0:
                out.append(Violation("invalid-clause-id", f"clause id {c.id} < 0"))
            if c.id in seen_ids:
                out.append(Violation("duplicate-clause-id", f"clause id {c.id} reused"))
            seen_ids.add(c.id)
            for lit in c.literals:
                if lit.var < 1:
                    out.append(Violation("invalid-variable", f"clause {c.id} uses variable {lit.var} < 1"))
                elif lit.var not in seen_vars:
                    out.append(Violation("unbound-variable", f"clause {c.id} uses unquantified variable {lit.var}"))
                if lit.polarity not in (0, 1):
                    out.append(Violation("invalid-polarity", f"clause {c.id} literal has polarity {lit.polarity}"))
        return out

    def require_valid(self) -> None:
        violations = self.validate()
        if violations:
            from .errors import MalformedFormulaError

            raise MalformedFormulaError(violations)


def make_formula(
    prefix: Iterable[tuple[Quantifier | str, int]],
    clauses: Iterable[Iterable[int]],
) -> Formula:
    """Convenience constructor from signed-integer clause lists.

    Quantifiers may be given as the enum or as "e"/"a".  Clause ids are
    assigned 1..m in input order.
    """
    pfx = tuple(QuantifiedVar(Quantifier(q), v) for q, v in prefix)
    cls = tuple(
        Clause(i, frozenset(Literal.from_int(n) for n in lits))
        for i, lits in enumerate(clauses, start=1)
    )
    return Formula(pfx, cls)
