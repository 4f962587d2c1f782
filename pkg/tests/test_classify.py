"""
Tests for fragment membership and the complexity verdicts.
"""

import itertools
import unittest
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

from config.settings import SETTINGS
from core.classify import (SHAPES, classify_language, closure_relation, fragment_report,
                           implied_clauses, minimize_clauses, verdict_for_flags)
from core.errors import CapExceededError, ShapeError
from core.formula import Clause, sentence
from core.qecnf import parse_relation
from core.relations import Relation, relation_from_formula, relation_from_source

RELS = Path(__file__).parent.parent / 'data' / 'rels'


def load(name):
    return relation_from_source(parse_relation((RELS / name).read_text()))


def literal_sets(clauses):
    return {frozenset((l.atom.a, l.atom.b, l.positive) for l in c.literals) for c in clauses}


class TestImpliedClauses(unittest.TestCase):
    """Clause enumeration by shape."""

    def test_equality_implies_unit(self):
        clauses = implied_clauses(Relation.of(2, [(0, 0)]), 'positive')
        self.assertIn(frozenset({(1, 2, True)}), literal_sets(clauses))

    def test_disequality_implies_negative_clause(self):
        clauses = implied_clauses(Relation.of(2, [(0, 1)]), 'horn')
        self.assertIn(frozenset({(1, 2, False)}), literal_sets(clauses))

    def test_full_relation(self):
        for shape in SHAPES:
            implied = implied_clauses(Relation.full(2), shape)
            self.assertEqual(closure_relation(implied, 2), Relation.full(2), shape)

    def test_closure_is_a_superset(self):
        for name in ('I.rel', 'disj.rel', 'eq-or-eq.rel', 'neq.rel'):
            r = load(name)
            for shape in SHAPES:
                self.assertLessEqual(r.kernels, closure_relation(implied_clauses(r, shape), r.arity).kernels)

    def test_exhaustive_enumeration_agrees(self):
        r = load('I.rel')
        for shape in SHAPES:
            fast = closure_relation(implied_clauses(r, shape), 3)
            slow = closure_relation(implied_clauses(r, shape, exhaustive=True), 3)
            self.assertEqual(fast, slow, shape)

    def test_unknown_shape(self):
        with self.assertRaises(ShapeError):
            implied_clauses(Relation.full(2), 'dual-horn')


class TestClosure(unittest.TestCase):
    """Relations of clause sets."""

    def setUp(self):
        self.original_cap = SETTINGS['classify_arity_cap']

    def tearDown(self):
        SETTINGS['classify_arity_cap'] = self.original_cap

    def test_examples(self):
        eq = Clause.build([(1, 2, True)])
        neq = Clause.build([(1, 2, False)])
        self.assertEqual(closure_relation([eq], 2).kernels, frozenset({(0, 0)}))
        self.assertEqual(closure_relation([], 2).kernels, frozenset({(0, 0), (0, 1)}))
        self.assertEqual(len(closure_relation([eq, neq], 2)), 0)

    def test_minimize(self):
        short = Clause.build([(1, 2, True)])
        long = Clause.build([(1, 2, True), (2, 3, True)])
        self.assertEqual(minimize_clauses([long, short], 3), [short])

    def test_arity_cap(self):
        r = Relation.full(3)
        SETTINGS['classify_arity_cap'] = 2
        with self.assertRaises(CapExceededError):
            implied_clauses(r, 'horn')
        with self.assertRaises(CapExceededError):
            closure_relation([], 3)


class TestFragmentReport(unittest.TestCase):
    """Flags, witnesses and separating kernels."""

    def assertWitnessDefines(self, report, shape, r):
        clauses = [[(l.atom.a, l.atom.b, l.positive) for l in c.literals] for c in report.witnesses[shape]]
        self.assertEqual(relation_from_formula(sentence([], clauses, free=r.arity)), r)

    def test_implication(self):
        r = load('I.rel')
        self.assertEqual(r.kernels, frozenset({(0, 0, 0), (0, 1, 0), (0, 1, 1), (0, 1, 2)}))
        report = fragment_report(r)
        self.assertEqual(report.flags, {'negative': False, 'positive': False, 'horn': True})
        self.assertWitnessDefines(report, 'horn', r)
        self.assertNotIn(report.separators['positive'], r)

    def test_disjunction_of_equalities(self):
        r = load('eq-or-eq.rel')
        report = fragment_report(r)
        self.assertTrue(report.is_positive)
        self.assertFalse(report.is_horn)
        self.assertWitnessDefines(report, 'positive', r)

    def test_shared_variable_disjunction(self):
        report = fragment_report(load('disj.rel'))
        self.assertEqual(report.flags, {'negative': False, 'positive': True, 'horn': False})
        self.assertEqual(report.separators['horn'], (0, 1, 2))

    def test_negative(self):
        r = load('negative.rel')
        report = fragment_report(r)
        self.assertTrue(report.is_negative)
        self.assertTrue(report.is_horn)
        self.assertFalse(report.is_positive)
        self.assertWitnessDefines(report, 'negative', r)

    def test_disequality_gadget(self):
        r = load('neq-gadget.rel')
        self.assertEqual(r.kernels, frozenset({(0, 1)}))
        self.assertEqual(r, load('neq.rel'))
        report = fragment_report(r)
        self.assertTrue(report.is_negative)
        self.assertFalse(report.is_positive)

    def test_equality_is_in_every_fragment(self):
        report = fragment_report(Relation.of(2, [(0, 0)]))
        self.assertTrue(all(report.flags.values()))

    def test_empty_relation(self):
        report = fragment_report(Relation(2, frozenset()))
        self.assertTrue(report.is_negative)
        self.assertTrue(report.is_horn)


class TestVerdicts(unittest.TestCase):
    """Trichotomy and bounded-alternation tables."""

    def test_full_mode(self):
        self.assertEqual(classify_language([load('negative.rel')]).label, 'Logspace')
        self.assertEqual(classify_language([load('eq-or-eq.rel')]).label, 'NP-complete')
        self.assertEqual(classify_language([load('I.rel')]).label, 'PSpace-complete')
        self.assertEqual(classify_language([load('disj.rel')]).label, 'NP-complete')
        self.assertEqual(classify_language([load('neq.rel'), load('disj.rel')]).label, 'PSpace-complete')

    def test_bounded_alternation(self):
        self.assertEqual(classify_language([load('I.rel')], 'pi_k', 3).label, 'Co-NP-complete')
        self.assertEqual(classify_language([load('disj.rel')], 'pi_k', 4).label, 'NP-complete')
        verdict = classify_language([load('neq.rel'), load('disj.rel')], 'pi_k', 4)
        self.assertEqual(verdict.label, 'Pi_2^P-hard (lower bound)')
        self.assertEqual(verdict.k, 4)

    def test_language_of_several_relations(self):
        # {!=, x=y | y=z} is neither Horn nor positive
        verdict = classify_language([load('neq.rel'), load('disj.rel')], 'pi_k', 3)
        self.assertEqual(verdict.label, 'Pi_1^P-hard (lower bound)')
        self.assertEqual(classify_language([load('neq.rel'), load('I.rel')], 'pi_k', 3).label,
                         'Co-NP-complete')

    def test_every_flag_combination(self):
        for negative, positive, horn in itertools.product((False, True), repeat=3):
            if negative and not horn:
                with self.assertRaises(ShapeError):
                    verdict_for_flags(negative, positive, horn)
                continue
            full = verdict_for_flags(negative, positive, horn).label
            bounded = verdict_for_flags(negative, positive, horn, 'pi_k', 5).label
            if negative:
                self.assertEqual((full, bounded), ('Logspace', 'Logspace'))
            elif positive:
                self.assertEqual((full, bounded), ('NP-complete', 'NP-complete'))
            elif horn:
                self.assertEqual((full, bounded), ('PSpace-complete', 'Co-NP-complete'))
            else:
                self.assertEqual((full, bounded), ('PSpace-complete', 'Pi_3^P-hard (lower bound)'))

    def test_bad_requests(self):
        with self.assertRaises(ShapeError):
            classify_language([])
        with self.assertRaises(ShapeError):
            verdict_for_flags(False, False, True, 'pi_k')
        with self.assertRaises(ShapeError):
            verdict_for_flags(False, False, True, 'sigma')


if __name__ == '__main__':
    unittest.main()
