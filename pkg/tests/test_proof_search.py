"""
Tests for certificate search: contradictions for false sentences, implied
equalities for relations and agreement with the game solver.
"""

import unittest
import sys
from pathlib import Path

from hypothesis import given, settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent.parent))

from config.settings import SETTINGS
from core.errors import CapExceededError, FormulaError
from core.formula import EXISTS, FORALL, sentence
from core.proof_search import (CONSISTENT, CONTRADICTION, EQUALITY, decide_sigma, hyp_proof,
                               implied_equalities, saturate_search, transitivity_proof)
from core.proofs import (Equality, layer_formula, size_audit, verify_k_contradiction,
                         verify_k_proof, verify_zero_proof)
from core.qecnf import parse_qecnf
from core.solver import Outcome, decide

DATA = Path(__file__).parent.parent / 'data' / 'instances'


@st.composite
def gamma_sentences(draw):
    """Sentences over at most 6 variables whose clauses are x=y or x!=y | u=v."""
    n = draw(st.integers(2, 6))
    prefix = [(draw(st.sampled_from([EXISTS, FORALL])), v) for v in range(1, n + 1)]
    pair = st.tuples(st.integers(1, n), st.integers(1, n)).filter(lambda p: p[0] != p[1])
    clauses = []
    for _ in range(draw(st.integers(0, 5))):
        a, b = draw(pair)
        if draw(st.booleans()):
            clauses.append([(a, b, True)])
        else:
            c, d = draw(pair.filter(lambda p, a=a, b=b: {p[0], p[1]} != {a, b}))
            clauses.append([(a, b, False), (c, d, True)])
    return sentence(prefix, clauses)


class TestContradictions(unittest.TestCase):
    """False sentences come with checkable certificates."""

    def setUp(self):
        self.formula = parse_qecnf((DATA / 'sigma3-contradiction.qecnf').read_text())
        self.lf = layer_formula(self.formula)

    def test_search_finds_contradiction(self):
        result = saturate_search(self.lf)
        self.assertEqual(result.kind, CONTRADICTION)
        verdict = verify_k_contradiction(self.lf, (), result.proof)
        self.assertTrue(verdict, verdict.describe())
        self.assertTrue(size_audit(result.proof, self.formula.nvars, self.lf.k).within)

    def test_decide_sigma(self):
        verdict, proof = decide_sigma(self.formula)
        self.assertFalse(verdict.value)
        self.assertFalse(decide(self.formula).value)
        self.assertTrue(verify_k_contradiction(self.lf, (), proof))

    def test_parallel_search_reports_the_same_proof(self):
        self.assertEqual(saturate_search(self.lf, workers=3).proof, saturate_search(self.lf).proof)

    def test_true_sentence(self):
        f = sentence([(EXISTS, 1), (FORALL, 2), (EXISTS, 3)], [])
        verdict, proof = decide_sigma(f)
        self.assertTrue(verdict.value)
        self.assertIsNone(proof)
        self.assertEqual(saturate_search(layer_formula(f)).kind, CONSISTENT)

    def test_budget(self):
        verdict, proof = decide_sigma(self.formula, budget=1)
        self.assertIs(verdict.outcome, Outcome.EXHAUSTED)
        self.assertIsNone(proof)

    def test_requires_sentence(self):
        with self.assertRaises(FormulaError):
            decide_sigma(sentence([(EXISTS, 2)], [], free=1))


class TestEqualities(unittest.TestCase):
    """Proofs of equalities on free variables."""

    def setUp(self):
        self.original_cap = SETTINGS['proof_block_cap']

    def tearDown(self):
        SETTINGS['proof_block_cap'] = self.original_cap

    def test_existential_core(self):
        lf = layer_formula(sentence([(EXISTS, 3)], [[(1, 3, True)], [(3, 2, True)]], free=2))
        result = saturate_search(lf)
        self.assertEqual(result.kind, EQUALITY)
        self.assertEqual(result.equality, Equality.of(1, 2))
        self.assertTrue(verify_zero_proof(lf, (), result.proof, Equality.of(1, 2)))

    def test_consistent_witness(self):
        lf = layer_formula(sentence([(EXISTS, 3)], [[(1, 3, True)], [(3, 2, True)]], free=2))
        result = saturate_search(lf, [Equality.of(1, 2)])
        self.assertEqual(result.kind, CONSISTENT)
        self.assertEqual(result.witness, (0, 0, 0))

    def test_transitivity_surfaces(self):
        lf = layer_formula(sentence([(EXISTS, 4), (FORALL, 5), (EXISTS, 6)], [], free=3))
        E = [Equality.of(1, 2), Equality.of(2, 3)]
        found = implied_equalities(lf, E)
        self.assertEqual([e for e, _ in found], [Equality.of(1, 3)])
        self.assertTrue(verify_k_proof(lf, E, found[0][1], Equality.of(1, 3)))

    def test_helper_proofs(self):
        lf = layer_formula(sentence([(EXISTS, 3), (FORALL, 4), (EXISTS, 5)], [], free=2))
        self.assertTrue(verify_k_proof(lf, [Equality.of(1, 2)], hyp_proof(1, Equality.of(1, 2))))
        with self.assertRaises(FormulaError):
            transitivity_proof(1, 1, 2, 1)

    def test_block_cap(self):
        SETTINGS['proof_block_cap'] = 1
        lf = layer_formula(sentence([(EXISTS, 1), (EXISTS, 2)], []))
        with self.assertRaises(CapExceededError):
            saturate_search(lf)


class TestAgreement(unittest.TestCase):
    """Proof search and the game solver give the same verdict."""

    @settings(max_examples=40, deadline=None)
    @given(gamma_sentences())
    def test_matches_solver(self, f):
        verdict, proof = decide_sigma(f)
        self.assertEqual(verdict.value, decide(f).value)
        if proof is not None:
            lf = layer_formula(f)
            self.assertTrue(verify_k_contradiction(lf, (), proof))


if __name__ == '__main__':
    unittest.main()
