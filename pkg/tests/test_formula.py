import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qrl import Clause, Formula, Literal, MalformedFormulaError, Quantifier, make_formula
from qrl.formula import QuantifiedVar, clause_key


def lits(*ints):
    return frozenset(Literal.from_int(n) for n in ints)


class TestLiteral:
    def test_int_round_trip(self):
        assert Literal.from_int(3) == Literal(3, 1)
        assert Literal.from_int(-3) == Literal(3, 0)
        assert Literal(3, 1).to_int() == 3
        assert Literal(3, 0).to_int() == -3

    def test_negate(self):
        assert Literal(2, 1).negate() == Literal(2, 0)
        assert Literal(2, 0).negate() == Literal(2, 1)

    def test_str(self):
        assert str(Literal(4, 1)) == "x4"
        assert str(Literal(4, 0)) == "¬x4"

    @given(st.integers(min_value=1, max_value=10**6), st.integers(min_value=0, max_value=1))
    def test_negate_involution(self, var, pol):
        lit = Literal(var, pol)
        assert lit.negate().negate() == lit
        assert Literal.from_int(lit.to_int()) == lit


class TestClause:
    def test_empty(self):
        assert Clause(1, frozenset()).is_empty
        assert not Clause(1, lits(1)).is_empty

    def test_tautological_on(self):
        c = Clause(1, lits(1, -1, 2))
        assert c.is_tautological_on(1)
        assert not c.is_tautological_on(2)

    def test_sorted_literals_positive_first(self):
        c = Clause(1, lits(-2, 2, 1))
        assert c.sorted_literals() == (Literal(1, 1), Literal(2, 1), Literal(2, 0))

    def test_key_ignores_id(self):
        assert clause_key(Clause(1, lits(1, -2))) == clause_key(Clause(9, lits(-2, 1)))


class TestFormulaIndexes:
    def test_size_counts_prefix_clauses_occurrences(self, f_a, f_d):
        assert f_a.size == 3
        assert f_d.size == 8

    def test_occ_mask_bits(self, f_d):
        assert f_d.occ_mask[Literal(1, 1)] == 1 << 1
        assert f_d.occ_mask[Literal(2, 0)] == 1 << 2
        assert f_d.all_clause_mask == (1 << 1) | (1 << 2)

    def test_occurring_sets(self, f_d):
        assert f_d.occurring_vars == {1, 2}
        assert len(f_d.occurring_literals) == 4

    def test_clauses_with_any_is_union(self, f_d):
        got = f_d.clauses_with_any([Literal(1, 1), Literal(2, 0)])
        assert got == f_d.clauses_with_literal(Literal(1, 1)) | f_d.clauses_with_literal(
            Literal(2, 0)
        )

    def test_empty_clause_ids(self):
        F = Formula((QuantifiedVar(Quantifier.EXISTS, 1),), (Clause(1, frozenset()),))
        assert F.empty_clause_ids == {1}

    def test_positions_and_quantifiers(self, f_d):
        assert f_d.position_of(1) == 0
        assert f_d.position_of(2) == 1
        assert f_d.quantifier_of(1) is Quantifier.FORALL
        assert f_d.quantifier_of(2) is Quantifier.EXISTS

    def test_existential_occurrence_index(self, f_d):
        index = f_d.existential_occurrence_index
        assert [u for u, _, _, _ in index] == [Literal(2, 1), Literal(2, 0)]
        u, pos, mu, mubar = index[0]
        assert pos == 1 and mu == 1 << 1 and mubar == 1 << 2


class TestStructuralEquality:
    def test_ids_do_not_matter(self, f_d):
        renumbered = Formula(f_d.prefix, tuple(Clause(c.id + 7, c.literals) for c in f_d.clauses))
        assert renumbered == f_d
        assert hash(renumbered) == hash(f_d)

    def test_prefix_matters(self, f_d):
        flipped = make_formula([("e", 1), ("e", 2)], [[1, 2], [-1, -2]])
        assert flipped != f_d

    def test_matrix_matters(self, f_d, f_e):
        assert f_d != f_e


class TestValidate:
    def test_clean(self, f_d):
        assert f_d.validate() == []
        f_d.require_valid()

    def test_unbound_variable(self, f_d):
        bad = Formula(f_d.prefix, f_d.clauses + (Clause(3, lits(5)),))
        kinds = [v.kind for v in bad.validate()]
        assert "unbound-variable" in kinds
        with pytest.raises(MalformedFormulaError):
            bad.require_valid()

    def test_duplicate_prefix_variable(self, f_d):
        bad = Formula(f_d.prefix + (QuantifiedVar(Quantifier.EXISTS, 1),), f_d.clauses)
        assert "duplicate-prefix-variable" in [v.kind for v in bad.validate()]

    def test_duplicate_clause_id(self, f_d):
        bad = Formula(f_d.prefix, (f_d.clauses[0], Clause(1, lits(-1))))
        assert "duplicate-clause-id" in [v.kind for v in bad.validate()]

    def test_invalid_clause_id(self, f_d):
        bad = Formula(f_d.prefix, (Clause(-1, lits(1)),))
        assert "invalid-clause-id" in [v.kind for v in bad.validate()]

    def test_invalid_variable(self):
        bad = Formula((QuantifiedVar(Quantifier.EXISTS, 0),), ())
        assert "invalid-variable" in [v.kind for v in bad.validate()]


@st.composite
def formulas(draw):
    n_vars = draw(st.integers(min_value=1, max_value=6))
    quants = draw(st.lists(st.sampled_from("ea"), min_size=n_vars, max_size=n_vars))
    prefix = [(q, v) for v, q in enumerate(quants, start=1)]
    n_clauses = draw(st.integers(min_value=0, max_value=6))
    clauses = []
    for _ in range(n_clauses):
        width = draw(st.integers(min_value=0, max_value=n_vars))
        vs = draw(st.permutations(range(1, n_vars + 1)))[:width]
        clauses.append([v if draw(st.booleans()) else -v for v in vs])
    return make_formula(prefix, clauses)


class TestFormulaProperties:
    @given(formulas())
    @settings(max_examples=80, deadline=None)
    def test_occ_mask_matches_matrix(self, F):
        rebuilt = {}
        for c in F.clauses:
            for lit in c.literals:
                rebuilt[lit] = rebuilt.get(lit, 0) | (1 << c.id)
        assert rebuilt == F.occ_mask

    @given(formulas())
    @settings(max_examples=80, deadline=None)
    def test_size_and_validity(self, F):
        assert F.validate() == []
        assert F.size == len(F.prefix) + len(F.clauses) + sum(len(c.literals) for c in F.clauses)

    @given(formulas())
    @settings(max_examples=80, deadline=None)
    def test_ids_mask_round_trip(self, F):
        assert F._ids(F.all_clause_mask) == frozenset(c.id for c in F.clauses)
