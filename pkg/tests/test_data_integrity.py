"""
Tests for data file integrity and completeness.
These tests verify that the verdict table, sample instances and relation files parse and say what they claim.
"""

import unittest
import json
from pathlib import Path
import sys

sys.path.insert(0, str(Path(__file__).parent.parent))

from config.settings import VERDICT_MODES
from core.qecnf import parse_qecnf, parse_relation
from core.relations import relation_from_source
from core.solver import decide
from core.validator import InputValidator
from utils.helpers import get_data_path, validate_data_files
from utils.parsers import parse_bcsp, parse_dimacs_monotone, parse_qdimacs, parse_qnae


class TestDataIntegrity(unittest.TestCase):
    """Test the integrity of data files."""

    def setUp(self):
        """Set up test fixtures."""
        self.data_dir = Path(__file__).parent.parent / 'data'

    def test_data_directory_exists(self):
        """Test that data directory exists."""
        self.assertTrue(self.data_dir.is_dir())
        self.assertTrue(validate_data_files())
        self.assertEqual(get_data_path().resolve(), self.data_dir.resolve())

    def test_verdict_table(self):
        """Test that verdicts.json has one fallback-terminated row list per mode."""
        with open(self.data_dir / 'verdicts.json') as f:
            data = json.load(f)
        is_valid, message = InputValidator.validate_verdict_data(data)
        self.assertTrue(is_valid, message)
        for mode in VERDICT_MODES:
            for row in data[mode]:
                self.assertGreater(len(row['citation']), 20, f"{mode} {row['when']} citation too short")
        self.assertIn('{k2}', data['pi_k'][-1]['class'])

    def test_sample_sentences(self):
        """Test that every sample sentence has the verdict its comment states."""
        expected = {
            'forall-exists-eq.qecnf': True,
            'exists-forall-eq.qecnf': False,
            'sigma3-contradiction.qecnf': False,
        }
        for name, verdict in expected.items():
            f = parse_qecnf((self.data_dir / 'instances' / name).read_text())
            self.assertTrue(f.is_sentence, name)
            self.assertEqual(decide(f).value, verdict, name)

    def test_sample_sources(self):
        instances = self.data_dir / 'instances'
        phi, _ = parse_qdimacs((instances / 'two-blocks.qdimacs').read_text())
        self.assertEqual(phi.n, 2)
        self.assertEqual(parse_dimacs_monotone((instances / 'monotone.cnf').read_text()).n, 3)
        self.assertEqual(parse_qnae((instances / 'forall-exists.nae').read_text()).n, 3)
        self.assertEqual(parse_bcsp((instances / 'path.bcsp').read_text()).n, 3)

    def test_relation_files(self):
        """Test that every relation file parses and has the stated arity."""
        arities = {'I.rel': 3, 'disj.rel': 3, 'eq-or-eq.rel': 4, 'negative.rel': 5,
                   'neq-gadget.rel': 2, 'neq.rel': 2}
        files = sorted(p.name for p in (self.data_dir / 'rels').glob('*.rel'))
        self.assertEqual(files, sorted(arities))
        for name, arity in arities.items():
            r = relation_from_source(parse_relation((self.data_dir / 'rels' / name).read_text()))
            self.assertEqual(r.arity, arity, name)
            self.assertGreater(len(r), 0, name)


if __name__ == '__main__':
    unittest.main()
