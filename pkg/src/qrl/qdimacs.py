"""QDIMACS 1.1 parsing and serialization, plus the trace JSON writer.

Accepted input shape:

* comment lines ``c ...`` and blank lines, skipped anywhere;
* one header ``p cnf <nvars> <nclauses>``;
* quantifier lines ``e v1 v2 ... 0`` / ``a v1 v2 ... 0``, each terminated
  by 0 on the same line, all before the first clause;
* clause tokens: nonzero integers terminated by 0, free to span lines.

Strict mode (default) additionally rejects: two adjacent quantifier lines
with the same quantifier, free variables (occurring but never quantified),
and a clause count that disagrees with the header.  Lenient mode merges
adjacent blocks, binds free variables existentially outermost in ascending
index order, and takes the actual clause count.

Every rejection raises QdimacsParseError carrying ParseDiagnostics with a
1-based line and column.  The parser raises nothing else, no matter the
input bytes; the test suite fuzzes that directly.

Duplicate literals inside one clause are silently merged (clauses are
literal sets).  Variable indices must stay within the header's bound in
both modes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NoReturn

from .errors import QdimacsParseError
from .formula import Clause, Formula, Literal, QuantifiedVar, Quantifier
from .reduction import ReductionTrace

TRACE_SCHEMA = "qrl-trace/1"


@dataclass(frozen=True)
class ParseDiagnostics:
    line: int
    column: int
    kind: str
    message: str

    def __str__(self) -> str:
        return f"line {self.line}, column {self.column}: {self.kind}: {self.message}"


def _fail(line: int, column: int, kind: str, message: str) -> NoReturn:
    raise QdimacsParseError(ParseDiagnostics(line, column, kind, message))


def _line_tokens(raw: str) -> list[tuple[str, int]]:
    """Whitespace tokens of one line with their 1-based start columns."""
    out = []
    cursor = 0
    for tok in raw.split():
        idx = raw.index(tok, cursor)
        out.append((tok, idx + 1))
        cursor = idx + len(tok)
    return out


def _parse_int(tok: str, line: int, col: int) -> int:
    try:
        return int(tok)
    except ValueError:
        _fail(line, col, "bad-token", f"expected an integer, got {tok!r}")


def parse_qdimacs(text: str, *, lenient: bool = False) -> Formula:
    lines = text.splitlines()
    header: tuple[int, int] | None = None
    prefix: list[QuantifiedVar] = []
    quantified: set[int] = set()
    last_quant: Quantifier | None = None
    clauses: list[frozenset[Literal]] = []
    current: set[Literal] = set()
    current_open = False
    in_matrix = False
    last_pos = (1, 1)

    for lineno, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("c"):
            continue
        toks = _line_tokens(raw)
        first_tok, first_col = toks[0]
        last_pos = (lineno, first_col)

        if header is None:
            if first_tok != "p":
                _fail(lineno, first_col, "missing-header", "expected 'p cnf <vars> <clauses>' before this line")
            if len(toks) != 4 or toks[1][0] != "cnf":
                _fail(lineno, first_col, "bad-header", f"malformed header {stripped!r}")
            try:
                nv, nc = int(toks[2][0]), int(toks[3][0])
            except ValueError:
                _fail(lineno, toks[2][1], "bad-header", f"non-integer counts in header {stripped!r}")
            if nv < 0 or nc < 0:
                _fail(lineno, first_col, "bad-header", "negative counts in header")
            header = (nv, nc)
            continue

        if first_tok in ("e", "a"):
            if in_matrix:
                _fail(lineno, first_col, "quantifier-after-clauses", "quantifier line after the first clause")
            q = Quantifier.EXISTS if first_tok == "e" else Quantifier.FORALL
            if last_quant is q and not lenient:
                _fail(lineno, first_col, "adjacent-quantifier", f"two adjacent '{first_tok}' lines (strict mode)")
            body = toks[1:]
            if not body or body[-1][0] != "0":
                _fail(lineno, first_col, "unterminated-quantifier-line", "quantifier line must end with 0")
            if len(body) == 1:
                _fail(lineno, first_col, "empty-quantifier-line", "quantifier line declares no variables")
            for tok, tcol in body[:-1]:
                v = _parse_int(tok, lineno, tcol)
                if v < 1 or v > header[0]:
                    _fail(lineno, tcol, "var-out-of-range", f"variable {v} outside 1..{header[0]}")
                if v in quantified:
                    _fail(lineno, tcol, "duplicate-quantification", f"variable {v} quantified twice")
                quantified.add(v)
                prefix.append(QuantifiedVar(q, v))
            last_quant = q
            continue

        in_matrix = True
        for tok, tcol in toks:
            n = _parse_int(tok, lineno, tcol)
            if n == 0:
                clauses.append(frozenset(current))
                current = set()
                current_open = False
                continue
            if abs(n) > header[0]:
                _fail(lineno, tcol, "var-out-of-range", f"variable {abs(n)} outside 1..{header[0]}")
            current.add(Literal.from_int(n))
            current_open = True

    if header is None:
        _fail(len(lines) or 1, 1, "missing-header", "no 'p cnf' header found")
    if current_open:
        _fail(last_pos[0], last_pos[1], "unterminated-clause", "clause not terminated by 0 before end of input")
    if not lenient and len(clauses) != header[1]:
        _fail(last_pos[0], last_pos[1], "clause-count-mismatch",
              f"header declares {header[1]} clauses, found {len(clauses)}")

    free = sorted({l.var for c in clauses for l in c} - quantified)
    if free:
        if not lenient:
            _fail(last_pos[0], last_pos[1], "free-variable",
                  f"variables {free} occur but are never quantified (strict mode)")
        prefix = [QuantifiedVar(Quantifier.EXISTS, v) for v in free] + prefix

    return Formula(
        tuple(prefix),
        tuple(Clause(i, lits) for i, lits in enumerate(clauses, start=1)),
    )


def write_qdimacs(F: Formula) -> str:
    """Canonical serialization; byte-deterministic for a given formula.

    Quantifier blocks are maximal runs, clauses come in id order, literals
    ascend by variable with the positive polarity first.  parse(write(F))
    equals F structurally (clause ids renumber).
    """
    F.require_valid()
    nvars = max((qv.var for qv in F.prefix), default=0)
    out = [f"p cnf {nvars} {len(F.clauses)}"]
    block: list[int] = []
    block_q: Quantifier | None = None
    for qv in F.prefix:
        if qv.quantifier is not block_q:
            if block:
                out.append(f"{block_q.value} {' '.join(map(str, block))} 0")
            block, block_q = [], qv.quantifier
        block.append(qv.var)
    if block:
        out.append(f"{block_q.value} {' '.join(map(str, block))} 0")
    for c in F.clauses:
        ints = [str(l.to_int()) for l in c.sorted_literals()]
        out.append(" ".join(ints + ["0"]))
    return "\n".join(out) + "\n"


def _literal_strs(lits) -> list[str]:
    ordered = sorted(lits, key=lambda l: (l.var, 1 - l.polarity))
    return [str(l.to_int()) for l in ordered]


def trace_to_dict(tr: ReductionTrace) -> dict:
    return {
        "schema": TRACE_SCHEMA,
        "verdict": tr.verdict.value,
        "steps": [
            {
                "literal": str(s.chosen.to_int()),
                "quantifier": s.quantifier.value,
                "s_set": _literal_strs(s.s_set),
                "removed_clause_ids": sorted(s.covered),
                "size_before": s.size_before,
                "size_after": s.size_after,
            }
            for s in tr.steps
        ],
        "final_clause_count": tr.final_clause_count,
    }


def write_trace(tr: ReductionTrace) -> str:
    return json.dumps(trace_to_dict(tr), indent=2) + "\n"
