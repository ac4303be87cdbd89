import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qrl import QdimacsParseError, decide, make_formula, parse_qdimacs, write_qdimacs, write_trace
from qrl.qdimacs import TRACE_SCHEMA

F_D_TEXT = "p cnf 2 2\na 1 0\ne 2 0\n1 2 0\n-1 -2 0\n"


def kind_of(text, **kw):
    with pytest.raises(QdimacsParseError) as e:
        parse_qdimacs(text, **kw)
    return e.value.diagnostics.kind, e.value.diagnostics.line


class TestParse:
    def test_fixture_text(self, f_d):
        assert parse_qdimacs(F_D_TEXT) == f_d

    def test_comments_and_blank_lines(self, f_d):
        text = "c hello\n\np cnf 2 2\nc mid\na 1 0\ne 2 0\n1 2 0\nc more\n-1 -2 0\n"
        assert parse_qdimacs(text) == f_d

    def test_clause_spanning_lines(self, f_d):
        text = "p cnf 2 2\na 1 0\ne 2 0\n1\n2 0\n-1 -2 0\n"
        assert parse_qdimacs(text) == f_d

    def test_duplicate_literals_merged(self):
        F = parse_qdimacs("p cnf 1 1\ne 1 0\n1 1 0\n")
        assert [len(c.literals) for c in F.clauses] == [1]

    def test_empty_clause(self):
        F = parse_qdimacs("p cnf 1 1\ne 1 0\n0\n")
        assert F.empty_clause_ids == {1}

    def test_free_variable_strict_vs_lenient(self, f_a):
        kind, line = kind_of("p cnf 1 1\n1 0\n")
        assert kind == "free-variable" and line == 2
        assert parse_qdimacs("p cnf 1 1\n1 0\n", lenient=True) == f_a

    def test_lenient_binds_free_vars_outermost_ascending(self):
        F = parse_qdimacs("p cnf 3 1\ne 2 0\n1 2 3 0\n", lenient=True)
        assert [(q.quantifier.value, q.var) for q in F.prefix] == [
            ("e", 1),
            ("e", 3),
            ("e", 2),
        ]

    def test_var_out_of_range(self):
        kind, line = kind_of("p cnf 1 1\ne 1 0\n1 2 0\n")
        assert kind == "var-out-of-range" and line == 3

    def test_missing_header(self):
        kind, _ = kind_of("e 1 0\n1 0\n")
        assert kind == "missing-header"

    def test_bad_header(self):
        kind, line = kind_of("p cnf x 1\ne 1 0\n1 0\n")
        assert kind == "bad-header" and line == 1

    def test_bad_token(self):
        kind, _ = kind_of("p cnf 1 1\ne 1 0\nfoo 0\n")
        assert kind == "bad-token"

    def test_quantifier_after_clauses(self):
        kind, _ = kind_of("p cnf 2 2\ne 1 0\n1 0\na 2 0\n2 0\n")
        assert kind == "quantifier-after-clauses"

    def test_adjacent_same_quantifier_strict_vs_lenient(self):
        text = "p cnf 2 1\ne 1 0\ne 2 0\n1 2 0\n"
        kind, line = kind_of(text)
        assert kind == "adjacent-quantifier" and line == 3
        F = parse_qdimacs(text, lenient=True)
        assert len(F.prefix) == 2

    def test_unterminated_quantifier_line(self):
        kind, _ = kind_of("p cnf 2 1\ne 1 2\n1 0\n")
        assert kind == "unterminated-quantifier-line"

    def test_empty_quantifier_line(self):
        kind, _ = kind_of("p cnf 1 1\ne 0\n1 0\n")
        assert kind == "empty-quantifier-line"

    def test_duplicate_quantification(self):
        kind, _ = kind_of("p cnf 2 1\ne 1 0\na 1 0\n1 0\n")
        assert kind == "duplicate-quantification"

    def test_unterminated_clause(self):
        kind, _ = kind_of("p cnf 1 1\ne 1 0\n1\n")
        assert kind == "unterminated-clause"

    def test_clause_count_mismatch_strict_vs_lenient(self):
        text = "p cnf 1 2\ne 1 0\n1 0\n"
        kind, _ = kind_of(text)
        assert kind == "clause-count-mismatch"
        assert len(parse_qdimacs(text, lenient=True).clauses) == 1

    def test_diagnostics_carry_position(self):
        with pytest.raises(QdimacsParseError) as e:
            parse_qdimacs("p cnf 1 1\ne 1 0\n1 2 0\n")
        d = e.value.diagnostics
        assert d.line == 3 and d.column >= 1 and "2" in d.message


class TestWrite:
    def test_canonical_fixture(self, f_d):
        assert write_qdimacs(f_d) == F_D_TEXT

    def test_empty_matrix(self, f_a):
        from qrl import Formula

        assert write_qdimacs(Formula(f_a.prefix, ())) == "p cnf 1 0\ne 1 0\n"

    def test_quantifier_blocks_are_maximal(self):
        F = make_formula([("e", 1), ("e", 2), ("a", 3)], [[1, 2, 3]])
        assert write_qdimacs(F) == "p cnf 3 1\ne 1 2 0\na 3 0\n1 2 3 0\n"

    def test_literal_order_in_clause(self):
        F = make_formula([("e", 1), ("e", 2)], [[-2, 1], [2, -1]])
        body = write_qdimacs(F).splitlines()[2:]
        assert body == ["1 -2 0", "-1 2 0"]

    def test_invalid_formula_rejected(self, f_d):
        from qrl import Clause, Formula, Literal, MalformedFormulaError

        bad = Formula(f_d.prefix, (Clause(1, frozenset([Literal(9, 1)])),))
        with pytest.raises(MalformedFormulaError):
            write_qdimacs(bad)

    def test_round_trip_identity(self, f_a, f_b, f_c, f_d, f_e):
        for F in (f_a, f_b, f_c, f_d, f_e):
            assert parse_qdimacs(write_qdimacs(F)) == F

    def test_parse_write_parse_law(self):
        text = "c x\np cnf 3 2\ne 2 1 0\na 3 0\n3 -1 0\n2 0\n"
        once = parse_qdimacs(text)
        assert parse_qdimacs(write_qdimacs(once)) == once


class TestTrace:
    def test_schema_and_keys(self, f_a):
        d = json.loads(write_trace(decide(f_a)))
        assert d["schema"] == TRACE_SCHEMA == "qrl-trace/1"
        assert list(d.keys()) == ["schema", "verdict", "steps", "final_clause_count"]
        assert d["verdict"] == "TRUE"
        assert d["final_clause_count"] == 0

    def test_step_encoding(self, f_e):
        d = json.loads(write_trace(decide(f_e)))
        step = d["steps"][0]
        assert list(step.keys()) == [
            "literal",
            "quantifier",
            "s_set",
            "removed_clause_ids",
            "size_before",
            "size_after",
        ]
        # the universal step removes via the closure of the negation,
        # so s_set records S(-1) = {-1} and the removed set C(-1) = {2}
        assert step["literal"] == "1"
        assert step["quantifier"] == "a"
        assert step["s_set"] == ["-1"]
        assert step["removed_clause_ids"] == [2]
        assert isinstance(step["size_before"], int)

    def test_zero_step_trace(self, f_c):
        d = json.loads(write_trace(decide(f_c)))
        assert d["steps"] == [] and d["verdict"] == "FALSE" and d["final_clause_count"] == 2


@st.composite
def random_formulas(draw):
    n_vars = draw(st.integers(min_value=1, max_value=7))
    quants = draw(st.lists(st.sampled_from("ea"), min_size=n_vars, max_size=n_vars))
    n_clauses = draw(st.integers(min_value=0, max_value=8))
    clauses = []
    for _ in range(n_clauses):
        width = draw(st.integers(min_value=0, max_value=min(4, n_vars)))
        vs = draw(st.permutations(range(1, n_vars + 1)))[:width]
        clauses.append([v if draw(st.booleans()) else -v for v in vs])
    return make_formula([(q, v) for v, q in enumerate(quants, start=1)], clauses)


class TestRoundTripProperty:
    @given(random_formulas())
    @settings(max_examples=150, deadline=None)
    def test_write_parse_round_trip(self, F):
        assert parse_qdimacs(write_qdimacs(F)) == F

    @given(random_formulas())
    @settings(max_examples=60, deadline=None)
    def test_serialization_deterministic(self, F):
        assert write_qdimacs(F) == write_qdimacs(F)

    @given(st.binary(max_size=200))
    @settings(max_examples=200, deadline=None)
    def test_parser_never_crashes(self, blob):
        text = blob.decode("utf-8", errors="replace")
        try:
            F = parse_qdimacs(text)
            assert F.validate() == []
        except QdimacsParseError as e:
            assert e.diagnostics.line >= 1
