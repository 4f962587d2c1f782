"""
Tests for the command-line front end: result lines, exit codes and file pipelines.
"""

import io
import unittest
import tempfile
import shutil
from pathlib import Path
import sys

sys.path.insert(0, str(Path(__file__).parent.parent))

from config.settings import EXIT_CODES
from main import run

DATA = Path(__file__).parent.parent / 'data'
INSTANCES = DATA / 'instances'
RELS = DATA / 'rels'


class TestCli(unittest.TestCase):
    """Run subcommands against sample files."""

    def setUp(self):
        """Set up test fixtures."""
        self.temp_dir = Path(tempfile.mkdtemp())

    def tearDown(self):
        """Clean up test fixtures."""
        shutil.rmtree(self.temp_dir)

    def run_cli(self, *argv):
        out = io.StringIO()
        code = run([str(a) for a in argv], stdout=out)
        return code, out.getvalue()

    def write(self, name, text):
        path = self.temp_dir / name
        path.write_text(text)
        return path

    def test_solve(self):
        code, out = self.run_cli('solve', INSTANCES / 'forall-exists-eq.qecnf')
        self.assertEqual(code, EXIT_CODES['true'])
        self.assertEqual(out.splitlines()[0], 'RESULT TRUE')
        code, out = self.run_cli('solve', INSTANCES / 'exists-forall-eq.qecnf')
        self.assertEqual((code, out.splitlines()[0]), (EXIT_CODES['false'], 'RESULT FALSE'))

    def test_solve_witness(self):
        code, out = self.run_cli('solve', '--witness', INSTANCES / 'forall-exists-eq.qecnf')
        self.assertEqual(code, 0)
        self.assertIn('replay ok', out)

    def test_budget(self):
        code, out = self.run_cli('solve', '--budget', 1, INSTANCES / 'sigma3-contradiction.qecnf')
        self.assertEqual(code, EXIT_CODES['budget'])
        self.assertEqual(out.splitlines()[0], 'RESULT BUDGET-EXHAUSTED')

    def test_format_error(self):
        path = self.write('bad.qecnf', "qecnf 2\nexists 1\nc 1=2\n")
        code, out = self.run_cli('solve', path)
        self.assertEqual(code, EXIT_CODES['usage'])
        self.assertTrue(out.startswith('RESULT ERROR'))

    def test_missing_file(self):
        code, out = self.run_cli('solve', self.temp_dir / 'absent.qecnf')
        self.assertEqual(code, EXIT_CODES['usage'])
        self.assertIn('cannot read', out)

    def test_usage(self):
        self.assertEqual(self.run_cli()[0], EXIT_CODES['usage'])
        self.assertEqual(self.run_cli('reduce', '3col', 'x')[0], EXIT_CODES['usage'])

    def test_invalid_option_value(self):
        code, out = self.run_cli('solve', '--workers', 0, INSTANCES / 'forall-exists-eq.qecnf')
        self.assertEqual(code, EXIT_CODES['usage'])
        self.assertIn('--workers', out)

    def test_relation(self):
        code, out = self.run_cli('relation', RELS / 'neq-gadget.rel')
        self.assertEqual(code, 0)
        self.assertEqual(out.splitlines()[0], 'RESULT RELATION 1')

    def test_classify(self):
        code, out = self.run_cli('classify', RELS / 'I.rel', '--pi', 3)
        self.assertEqual((code, out.splitlines()[0]), (0, 'RESULT Co-NP-complete'))
        code, out = self.run_cli('classify', RELS / 'eq-or-eq.rel', '--fragment', 'horn')
        self.assertEqual((code, out.splitlines()[0]), (EXIT_CODES['false'], 'RESULT NOT-DEFINABLE'))

    def test_reduce_then_solve(self):
        """A generated sentence has the truth value of its source QBF."""
        source = self.write('phi.qdimacs', "p cnf 2 1\ne 1 0\na 2 0\n1 1 1 0\n")
        psi = self.temp_dir / 'psi.qecnf'
        code, out = self.run_cli('reduce', 'qsat', source, '-o', psi)
        self.assertEqual(code, 0)
        self.assertIn(f"wrote {psi}", out)
        self.assertTrue(Path(f"{psi}.roles").exists())
        code, out = self.run_cli('solve', psi)
        self.assertEqual((code, out.splitlines()[0]), (0, 'RESULT TRUE'))

    def test_reduce_check(self):
        code, out = self.run_cli('reduce', 'bcsp', INSTANCES / 'path.bcsp', '--check')
        self.assertEqual(code, 0)
        lines = out.splitlines()
        self.assertEqual(lines[0], 'RESULT CHECKED FALSE')
        self.assertEqual(lines[2], 'oracle FALSE solver FALSE')

    def test_reduce_is_reproducible(self):
        outputs = []
        for workers in (1, 4):
            psi = self.temp_dir / f"psi{workers}.qecnf"
            self.run_cli('reduce', 'mon3sat', INSTANCES / 'monotone.cnf', '-o', psi, '--workers', workers)
            outputs.append(psi.read_bytes())
        self.assertEqual(outputs[0], outputs[1])

    def test_normalize(self):
        code, out = self.run_cli('normalize-pi2', INSTANCES / 'exists-forall-eq.qecnf', '--check')
        self.assertEqual((code, out.splitlines()[0]), (0, 'RESULT CHECKED FALSE'))
        code, out = self.run_cli('normalize-pi2', INSTANCES / 'forall-exists-eq.qecnf', '--check')
        self.assertEqual(code, EXIT_CODES['budget'])
        self.assertTrue(out.startswith('RESULT ERROR --check skipped'))

    def test_normalize_disequality_mismatch(self):
        path = self.write('neq.qecnf', "qecnf 2\nexists 1\nforall 2\nc 1!=2\n")
        code, out = self.run_cli('normalize-pi2', path, '--check')
        self.assertEqual((code, out.splitlines()[0]), (EXIT_CODES['false'], 'RESULT MISMATCH'))
        self.assertIn('oracle FALSE solver TRUE', out)

    def test_proof_round_trip(self):
        """A certificate written by proof-search is accepted by proof-verify."""
        sentence = INSTANCES / 'sigma3-contradiction.qecnf'
        certificate = self.temp_dir / 'sigma3.proof'
        code, out = self.run_cli('proof-search', sentence, '-o', certificate)
        self.assertEqual((code, out.splitlines()[0]), (EXIT_CODES['false'], 'RESULT FALSE'))
        code, out = self.run_cli('proof-verify', sentence, certificate)
        self.assertEqual((code, out.splitlines()[0]), (0, 'RESULT ACCEPT'))

    def test_proof_reject(self):
        formula = self.write('eq.rel', "rel 2\nexists 3\nc 1=3\nc 3=2\n")
        proof = self.write('bad.proof', "(zeroproof (step (eq 1 2) (hyp)))\n")
        code, out = self.run_cli('proof-verify', formula, proof, '--target', '1=2')
        self.assertEqual(code, EXIT_CODES['false'])
        self.assertEqual(out.splitlines()[0], 'RESULT REJECT step 1: 1=2 is not a hypothesis')
        code, out = self.run_cli('proof-verify', formula, proof, '--hyp', '1=2')
        self.assertEqual(code, 0)


if __name__ == '__main__':
    unittest.main()
