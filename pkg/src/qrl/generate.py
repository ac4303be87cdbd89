"""Seeded random instance generation.

gen_random is a pure function of its GenParams (the seed is one of the
fields): identical params give byte-identical formulas, on any platform
and CPython version, because all randomness flows through the getrandbits
helpers in rng.py.

Draw order is part of the contract and must not be reordered: quantifiers
outermost-first, then per clause an optional empty-clause coin (1 in 8,
only with allow_empty_clauses), the width, the variables, then one
polarity per drawn variable.

Without allow_tautologies the variables of a clause are drawn distinct, so
a clause can never contain both polarities of one variable; with the flag
they are drawn with replacement and duplicates merge as sets, which can
produce tautological clauses and clauses narrower than the drawn width.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from random import Random

from .errors import PreconditionError
from .formula import Clause, Formula, Literal, QuantifiedVar, Quantifier
from .rng import rand_below, rand_unit, sample_distinct

EMPTY_CLAUSE_ODDS = 8  # 1-in-8 per clause, when enabled


@dataclass(frozen=True)
class QuantPattern:
    kind: str  # "random" | "alternating" | "fixed"
    p_universal: float | None = None
    fixed: str | None = None

    @classmethod
    def random(cls, p_universal: float = 0.5) -> "QuantPattern":
        return cls("random", p_universal=p_universal)

    @classmethod
    def alternating(cls) -> "QuantPattern":
        return cls("alternating")

    @classmethod
    def fixed(cls, letters: str) -> "QuantPattern":
        return cls("fixed", fixed=letters)

    def validate(self) -> None:
        if self.kind == "random":
            if self.p_universal is None or not (0.0 <= self.p_universal <= 1.0):
                raise PreconditionError(f"p_universal {self.p_universal!r} outside [0, 1]")
        elif self.kind == "alternating":
            pass
        elif self.kind == "fixed":
            if not self.fixed or any(ch not in "ae" for ch in self.fixed):
                raise PreconditionError(f"fixed pattern {self.fixed!r} must be a nonempty string over 'a'/'e'")
        else:
            raise PreconditionError(f"unknown pattern kind {self.kind!r}")

    def __str__(self) -> str:
        if self.kind == "random":
            return f"random:{self.p_universal:g}"
        if self.kind == "fixed":
            return f"fixed:{self.fixed}"
        return "alternating"


@dataclass(frozen=True)
class GenParams:
    n_vars: int
    n_clauses: int
    width_min: int
    width_max: int
    pattern: QuantPattern
    allow_tautologies: bool = False
    allow_empty_clauses: bool = False
    seed: int = 0

    def validate(self) -> None:
        self.pattern.validate()
        if self.n_vars < 1:
            raise PreconditionError("n_vars must be >= 1")
        if self.pattern.kind == "fixed" and len(self.pattern.fixed) != self.n_vars:
            raise PreconditionError(
                f"fixed pattern length {len(self.pattern.fixed)} != n_vars {self.n_vars}"
            )
        if self.n_clauses < 0:
            raise PreconditionError("n_clauses must be >= 0")
        if not (1 <= self.width_min <= self.width_max <= self.n_vars):
            raise PreconditionError(
                f"need 1 <= width_min <= width_max <= n_vars, got {self.width_min}..{self.width_max} over {self.n_vars}"
            )

    def with_seed(self, seed: int) -> "GenParams":
        return replace(self, seed=seed)

    def to_dict(self) -> dict:
        return {
            "n_vars": self.n_vars,
            "n_clauses": self.n_clauses,
            "width_min": self.width_min,
            "width_max": self.width_max,
            "pattern": str(self.pattern),
            "allow_tautologies": self.allow_tautologies,
            "allow_empty_clauses": self.allow_empty_clauses,
            "seed": self.seed,
        }


def _quantifier_at(pattern: QuantPattern, position: int, rng: Random) -> Quantifier:
    if pattern.kind == "alternating":
        return Quantifier.EXISTS if position % 2 == 0 else Quantifier.FORALL
    if pattern.kind == "fixed":
        ch = pattern.fixed[position % len(pattern.fixed)]
        return Quantifier.FORALL if ch == "a" else Quantifier.EXISTS
    return Quantifier.FORALL if rand_unit(rng) < pattern.p_universal else Quantifier.EXISTS


def gen_random(params: GenParams) -> Formula:
    params.validate()
    rng = Random(params.seed)
    prefix = tuple(
        QuantifiedVar(_quantifier_at(params.pattern, pos, rng), pos + 1)
        for pos in range(params.n_vars)
    )
    variables = list(range(1, params.n_vars + 1))
    clauses = []
    for cid in range(1, params.n_clauses + 1):
        if params.allow_empty_clauses and rand_below(rng, EMPTY_CLAUSE_ODDS) == 0:
            clauses.append(Clause(cid, frozenset()))
            continue
        width = params.width_min + rand_below(rng, params.width_max - params.width_min + 1)
        if params.allow_tautologies:
            drawn = [variables[rand_below(rng, len(variables))] for _ in range(width)]
        else:
            drawn = sample_distinct(rng, variables, width)
        lits = frozenset(Literal(v, rng.getrandbits(1)) for v in drawn)
        clauses.append(Clause(cid, lits))
    return Formula(prefix, tuple(clauses))
