"""
Tests for the reduction generators, checked against the Boolean reference
deciders.
"""

import unittest
import sys
from pathlib import Path

from hypothesis import given, settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent.parent))

from config.settings import SETTINGS
from core.boolean import bcsp_sat, mon_sat, qbf_true, qnae_true
from core.errors import CapExceededError, ShapeError
from core.formula import EXISTS, FORALL
from core.reductions import (QBF, BoolCSP, MonotoneCNF, QNAEInstance, boolcsp_to_pi2_disj,
                             mon3sat_to_pi2, pad_monotone, qbf_to_qcsp_I,
                             qbf_to_qcsp_I_existential_tf, qnae_to_qcsp)
from core.solver import decide
from core.transform import alternation_profile

single_block_clauses = st.lists(
    st.tuples(*[st.sampled_from([1, -1, 2, -2])] * 3), min_size=1, max_size=2
)


class TestQbf(unittest.TestCase):
    """QBF to sentences over I(x,y,z)."""

    def test_prefix(self):
        formula, report = qbf_to_qcsp_I(QBF(2, ((1, 2, 3),)))
        head = [(q, formula.name(v)) for q, v in formula.prefix[:10]]
        self.assertEqual(head, [(FORALL, 't'), (FORALL, 'f'),
                                (EXISTS, 'x1^0'), (FORALL, 'x1^1'), (FORALL, 'y1^0'), (FORALL, 'y1^1'),
                                (EXISTS, 'x2^0'), (FORALL, 'x2^1'), (FORALL, 'y2^0'), (FORALL, 'y2^1')])
        self.assertEqual(formula.name(formula.prefix[10][1]), 'z')
        self.assertTrue(all(q is EXISTS for q, _ in formula.prefix[10:]))
        self.assertEqual(set(report.roles), set(range(1, formula.nvars + 1)))

    def test_clause_count(self):
        n = 2
        formula, _ = qbf_to_qcsp_I(QBF(n, ((1, 2, 3), (-1, -2, -3))))
        chains = (4 * n + 1) + sum(2 * (n - i + 1) + 2 * (n - i) + 1 for i in range(1, n + 1))
        self.assertEqual(len(formula.matrix), chains + 3 * 2)
        self.assertTrue(all(c.is_gamma_shape for c in formula.matrix))

    def test_true_instance(self):
        phi = QBF(1, ((1, 1, 1),))
        self.assertTrue(qbf_true(phi))
        self.assertTrue(decide(qbf_to_qcsp_I(phi)[0]).value)
        self.assertTrue(decide(qbf_to_qcsp_I_existential_tf(phi)[0]).value)

    def test_false_instance(self):
        phi = QBF(1, ((2, 2, 2),))
        self.assertFalse(qbf_true(phi))
        self.assertFalse(decide(qbf_to_qcsp_I(phi)[0]).value)
        self.assertFalse(decide(qbf_to_qcsp_I_existential_tf(phi)[0]).value)

    def test_existential_constants(self):
        formula, report = qbf_to_qcsp_I_existential_tf(QBF(1, ((1, 1, 1),)))
        head = [(q, formula.name(v)) for q, v in formula.prefix[:3]]
        self.assertEqual(head, [(EXISTS, 't'), (EXISTS, 'f'), (FORALL, 'd')])
        self.assertTrue(any('t != f' in note for note in report.notes))

    def test_malformed(self):
        with self.assertRaises(ShapeError):
            QBF(1, ((1, 2),))
        with self.assertRaises(ShapeError):
            QBF(1, ((1, 2, 5),))
        with self.assertRaises(ShapeError):
            QBF(0, ())

    @settings(max_examples=20, deadline=None)
    @given(single_block_clauses)
    def test_matches_boolean_truth(self, clauses):
        phi = QBF(1, tuple(clauses))
        expected = qbf_true(phi)
        self.assertEqual(decide(qbf_to_qcsp_I(phi)[0]).value, expected)
        self.assertEqual(decide(qbf_to_qcsp_I_existential_tf(phi)[0]).value, expected)


class TestMonotone(unittest.TestCase):
    """Monotone 3-SAT to Pi_2 sentences true on unsatisfiable inputs."""

    def test_unsatisfiable(self):
        phi = MonotoneCNF(1, ((1, 1, 1),) * 2, ((1, 1, 1),) * 2)
        self.assertFalse(mon_sat(phi))
        formula, _ = mon3sat_to_pi2(phi)
        self.assertEqual(alternation_profile(formula).label(), 'Pi_2')
        self.assertTrue(decide(formula).value)

    def test_satisfiable(self):
        phi = MonotoneCNF(2, ((1, 2, 2),) * 2, ((1, 2, 2),) * 2)
        self.assertTrue(mon_sat(phi))
        self.assertFalse(decide(mon3sat_to_pi2(phi)[0]).value)

    def test_final_unit_clause(self):
        formula, report = mon3sat_to_pi2(MonotoneCNF(1, ((1, 1, 1),) * 3, ((1, 1, 1),) * 2))
        last = formula.matrix[-1]
        self.assertEqual(len(last.literals), 1)
        self.assertTrue(last.literals[0].positive)
        self.assertEqual(set(last.variables), {report.by_name("N'3"), report.by_name("P'2")})

    def test_padding(self):
        padded, notes = pad_monotone(MonotoneCNF(2, ((1, 2, 2),), ()))
        self.assertEqual(len(padded.negative), 2)
        self.assertEqual(padded.positive, ((3, 3, 3), (3, 3, 3)))
        self.assertEqual(padded.n, 3)
        self.assertEqual(len(notes), 2)
        self.assertIn('degenerate', notes[1])

    def test_mixed_polarity(self):
        with self.assertRaises(ShapeError):
            MonotoneCNF.from_clauses(2, [(1, -2, 2)])

    @settings(max_examples=20, deadline=None)
    @given(st.lists(st.tuples(*[st.integers(1, 2)] * 3), min_size=1, max_size=3),
           st.lists(st.tuples(*[st.integers(1, 2)] * 3), min_size=1, max_size=3))
    def test_negates_satisfiability(self, negative, positive):
        phi = MonotoneCNF(2, tuple(negative), tuple(positive))
        self.assertEqual(decide(mon3sat_to_pi2(phi)[0]).value, not mon_sat(phi))


class TestQnae(unittest.TestCase):
    """Quantified NAE-3-SAT under the pair encoding."""

    def check(self, prefix, constraints, expected):
        inst = QNAEInstance(tuple(prefix), tuple(constraints))
        self.assertEqual(qnae_true(inst), expected)
        formula, _ = qnae_to_qcsp(inst)
        self.assertEqual(decide(formula, liveness=True).value, expected)

    def test_all_equal_is_false(self):
        self.check([(FORALL, 1)], [(1, 1, 1)], False)

    def test_existential_triple(self):
        self.check([(EXISTS, 1), (EXISTS, 2), (EXISTS, 3)], [(1, 2, 3)], True)

    def test_choose_opposite(self):
        self.check([(FORALL, 1), (EXISTS, 2)], [(1, 2, 2)], True)

    def test_doubled_prefix(self):
        inst = QNAEInstance(((FORALL, 1), (EXISTS, 2)), ((1, 2, 2),))
        formula, _ = qnae_to_qcsp(inst, k=2)
        head = [(q, formula.name(v)) for q, v in formula.prefix[:4]]
        self.assertEqual(head, [(FORALL, 'v1'), (FORALL, "v1'"), (EXISTS, 'v2'), (EXISTS, "v2'")])

    def test_profile_must_fit(self):
        inst = QNAEInstance(((EXISTS, 1), (FORALL, 2)), ((1, 2, 2),))
        with self.assertRaises(ShapeError):
            qnae_to_qcsp(inst, k=2)
        qnae_to_qcsp(inst, k=3)

    def test_unquantified_variable(self):
        with self.assertRaises(ShapeError):
            qnae_to_qcsp(QNAEInstance(((FORALL, 1),), ((1, 2, 1),)))


class TestBoolCsp(unittest.TestCase):
    """Boolean CSP over {!=, x=y | y=z} to Pi_2 sentences."""

    def check(self, n, constraints, expected):
        inst = BoolCSP(n, tuple(constraints))
        self.assertEqual(bcsp_sat(inst), expected)
        formula, _ = boolcsp_to_pi2_disj(inst)
        self.assertEqual(decide(formula).value, expected)

    def test_disequality(self):
        self.check(2, [('neq', (1, 2))], True)

    def test_triangle(self):
        self.check(3, [('neq', (1, 2)), ('neq', (2, 3)), ('neq', (1, 3))], False)

    def test_disjunction(self):
        self.check(3, [('disj', (1, 2, 3))], True)

    def test_path(self):
        self.check(3, [('neq', (1, 2)), ('neq', (2, 3)), ('disj', (1, 2, 3))], False)

    def test_prefix_and_domain_clauses(self):
        formula, _ = boolcsp_to_pi2_disj(BoolCSP(2, (('neq', (1, 2)),)))
        self.assertEqual([(q, formula.name(v)) for q, v in formula.prefix],
                         [(FORALL, 'b0'), (FORALL, 'b1'), (EXISTS, 'v1'), (EXISTS, 'v2')])
        self.assertEqual(len(formula.matrix), 2 + 4)

    def test_unsupported(self):
        with self.assertRaises(ShapeError):
            boolcsp_to_pi2_disj(BoolCSP(2, (('eq', (1, 2)),)))
        with self.assertRaises(ShapeError):
            boolcsp_to_pi2_disj(BoolCSP(2, (('neq', (1, 3)),)))


class TestOracleCap(unittest.TestCase):
    """The Boolean deciders refuse oversized inputs."""

    def setUp(self):
        self.original_cap = SETTINGS['check_variable_cap']

    def tearDown(self):
        SETTINGS['check_variable_cap'] = self.original_cap

    def test_cap(self):
        SETTINGS['check_variable_cap'] = 1
        with self.assertRaises(CapExceededError):
            qbf_true(QBF(1, ((1, 1, 1),)))


if __name__ == '__main__':
    unittest.main()
