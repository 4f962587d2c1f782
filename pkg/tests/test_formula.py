"""
Tests for the formula model: literals, clause simplification, kernel semantics.
"""

import unittest
import sys
from pathlib import Path

from hypothesis import given, settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent.parent))

from core.errors import FormulaError
from core.formula import (EXISTS, FORALL, Atom, Clause, Literal, QEFormula, eval_matrix,
                          is_horn_matrix, sentence)
from core.partitions import kernel_of


def I(a, b, c):
    """Raw literals of I(a,b,c) = (a!=b | b=c)."""
    return [(a, b, False), (b, c, True)]


class TestClauses(unittest.TestCase):
    """Clause construction and shape predicates."""

    def test_atoms_are_ordered(self):
        self.assertEqual(Atom.of(3, 1), Atom(1, 3))
        with self.assertRaises(FormulaError):
            Atom.of(2, 2)

    def test_literal_text(self):
        self.assertEqual(str(Literal.eq(2, 1)), "1=2")
        self.assertEqual(str(Literal.neq(1, 3)), "1!=3")

    def test_positive_self_equality_makes_tautology(self):
        self.assertIsNone(Clause.build([(1, 1, True), (1, 2, False)], warn=False))

    def test_both_polarities_make_tautology(self):
        self.assertIsNone(Clause.build([(1, 2, True), (2, 1, False)], warn=False))

    def test_tautology_is_logged(self):
        with self.assertLogs('core.formula', level='WARNING'):
            Clause.build([(1, 2, True), (1, 2, False)])

    def test_self_disequality_is_dropped(self):
        clause = Clause.build([(1, 1, False), (1, 2, True)])
        self.assertEqual(str(clause), "1=2")

    def test_all_false_literals_give_empty_clause(self):
        clause = Clause.build([(2, 2, False)])
        self.assertTrue(clause.is_empty)
        self.assertFalse(clause.holds((0, 1)))

    def test_duplicate_literals_merge(self):
        clause = Clause.build([(1, 2, True), (2, 1, True)])
        self.assertEqual(len(clause.literals), 1)

    def test_shapes(self):
        gamma = Clause.build(I(1, 2, 3))
        self.assertTrue(gamma.is_gamma_shape)
        self.assertTrue(gamma.is_horn)
        self.assertFalse(gamma.is_positive)
        disjunction = Clause.build([(1, 2, True), (3, 4, True)])
        self.assertTrue(disjunction.is_positive)
        self.assertFalse(disjunction.is_horn)
        self.assertFalse(disjunction.is_gamma_shape)
        negative = Clause.build([(1, 2, False), (3, 4, False)])
        self.assertTrue(negative.is_negative_shape)
        self.assertTrue(Clause.build([(1, 2, True)]).is_negative_shape)
        self.assertFalse(Clause.build([(1, 2, False)]).is_gamma_shape)

    def test_rename(self):
        clause = Clause.build(I(1, 2, 3))
        self.assertEqual(str(clause.rename({1: 4, 2: 5, 3: 6})), "4!=5 5=6")
        self.assertIsNone(clause.rename({1: 1, 2: 1, 3: 1}))


class TestEvaluation(unittest.TestCase):
    """Kernel semantics of matrices."""

    def test_unit_equality(self):
        matrix = [Clause.build([(1, 2, True)])]
        self.assertTrue(eval_matrix(matrix, (0, 0)))
        self.assertFalse(eval_matrix(matrix, (0, 1)))

    def test_I_premise_holds_conclusion_fails(self):
        matrix = [Clause.build(I(1, 2, 3))]
        self.assertFalse(eval_matrix(matrix, (0, 0, 1)))

    def test_I_premise_fails(self):
        matrix = [Clause.build(I(1, 2, 3))]
        self.assertTrue(eval_matrix(matrix, (0, 1, 2)))

    def test_variable_outside_kernel(self):
        with self.assertRaises(FormulaError):
            eval_matrix([Clause.build([(1, 3, True)])], (0, 0))

    def test_horn_matrix(self):
        self.assertTrue(is_horn_matrix([Clause.build(I(1, 2, 3))]))
        self.assertFalse(is_horn_matrix([Clause.build([(1, 2, True), (2, 3, True)])]))

    @settings(max_examples=300, deadline=None)
    @given(st.lists(st.lists(st.tuples(st.integers(1, 5), st.integers(1, 5), st.booleans()),
                             min_size=1, max_size=3), max_size=4),
           st.lists(st.integers(0, 9), min_size=5, max_size=5),
           st.permutations(list(range(100, 110))))
    def test_kernel_invariance(self, raw_clauses, assignment, relabel):
        matrix = [c for c in (Clause.build(raw, warn=False) for raw in raw_clauses) if c is not None]
        renamed = [relabel[value] for value in assignment]
        self.assertEqual(kernel_of(assignment), kernel_of(renamed))
        self.assertEqual(eval_matrix(matrix, assignment), eval_matrix(matrix, renamed))
        self.assertEqual(eval_matrix(matrix, assignment), eval_matrix(matrix, kernel_of(assignment)))


class TestQEFormula(unittest.TestCase):
    """Prefix validation and block structure."""

    def test_blocks(self):
        f = sentence([(FORALL, 1), (FORALL, 2), (EXISTS, 3)], [I(1, 2, 3)])
        self.assertEqual(f.blocks(), [(FORALL, (1, 2)), (EXISTS, (3,))])
        self.assertTrue(f.is_sentence)
        self.assertEqual(f.quantifier(3), EXISTS)

    def test_duplicate_quantification(self):
        with self.assertRaises(FormulaError):
            QEFormula(2, ((FORALL, 1), (EXISTS, 1)), ())

    def test_unquantified_variable(self):
        with self.assertRaises(FormulaError):
            QEFormula(3, ((FORALL, 1), (EXISTS, 2)), ())

    def test_matrix_variable_out_of_range(self):
        with self.assertRaises(FormulaError):
            QEFormula(2, ((FORALL, 1), (EXISTS, 2)), (Clause.build([(1, 3, True)]),))

    def test_free_variables_come_first_in_order(self):
        f = sentence([(FORALL, 3)], [I(1, 3, 2)], free=2)
        self.assertEqual(f.order, (1, 2, 3))
        self.assertFalse(f.is_sentence)

    def test_pretty_uses_names(self):
        f = sentence([(FORALL, 1), (EXISTS, 2)], [[(1, 2, True)]], names={1: 'x', 2: 'y'})
        self.assertEqual(f.pretty(), "∀x∃y (x=y)")


if __name__ == '__main__':
    unittest.main()
