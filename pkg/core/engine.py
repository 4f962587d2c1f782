import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from config.settings import SETTINGS, ERROR_MESSAGES, EXIT_CODES
from core.boolean import bcsp_sat, mon_sat, qbf_true, qnae_true
from core.classify import SHAPES, VerdictTable, fragment_report, language_flags
from core.errors import CapExceededError, FormatError, ShapeError
from core.formula import QEFormula
from core.proof_search import decide_sigma
from core.proofs import (KProof, CONTRADICTION_MODE, Equality, layer_formula, load_proof,
                         proof_steps, size_audit, verify_k_contradiction, verify_k_proof)
from core.qecnf import parse_qecnf, parse_relation
from core.reductions import (boolcsp_to_pi2_disj, mon3sat_to_pi2, qbf_to_qcsp_I,
                             qbf_to_qcsp_I_existential_tf, qnae_to_qcsp)
from core.relations import relation_from_source
from core.solver import Outcome, TruthValue, decide, decide_naive, extract_strategy, replay_strategy
from core.transform import alternation_profile, has_disequalities, is_sigma_shaped, pad_to_sigma_shape, zeta_pi2
from core.validator import InputValidator
from utils.helpers import get_data_path, verdicts_path
from utils.parsers import parse_bcsp, parse_dimacs_monotone, parse_qdimacs, parse_qnae

LOG = logging.getLogger(__name__)

REDUCTIONS = ('qsat', 'qsat-tf', 'mon3sat', 'qnae', 'bcsp')


class QcspEngine:
    """Runs one command over parsed inputs and returns a result dictionary."""

    def __init__(self, data_dir: Optional[Path] = None, budget: Optional[int] = None,
                 workers: Optional[int] = None, liveness: Optional[bool] = None, force: bool = False):
        # Per-run overrides; SETTINGS itself is never mutated
        self.data_dir = data_dir or get_data_path()
        self.budget = SETTINGS['node_budget'] if budget is None else budget
        self.workers = SETTINGS['workers'] if workers is None else workers
        self.liveness = SETTINGS['memo_liveness'] if liveness is None else liveness
        self.force = force
        self.validator = InputValidator()
        self.validator.validate_count(self.budget, '--budget')
        self.validator.validate_count(self.workers, '--workers')
        self.verdicts = VerdictTable(verdicts_path(self.data_dir))

    @staticmethod
    def read(path: str) -> str:
        """Read an input file; a missing file is a format error."""
        try:
            with open(path) as f:
                return f.read()
        except OSError as exc:
            raise FormatError(f"cannot read {path}: {exc.strerror}") from None

    @staticmethod
    def _result(verdict: str, exit_key: str, **extra) -> Dict:
        result = {'verdict': verdict, 'exit': EXIT_CODES[exit_key]}
        result.update(extra)
        return result

    def _truth(self, tv: TruthValue, **extra) -> Dict:
        if tv.outcome is Outcome.EXHAUSTED:
            return self._result('BUDGET-EXHAUSTED', 'budget', stats=tv.stats, **extra)
        return self._result(tv.outcome.value, 'true' if tv.value else 'false', stats=tv.stats, **extra)

    def _decide(self, f: QEFormula) -> bool:
        """Boolean verdict for --check; exhaustion becomes an exception."""
        return decide(f, budget=self.budget, workers=self.workers, liveness=self.liveness).value

    def solve(self, text: str, naive: bool = False, witness: bool = False) -> Dict:
        """
        Decide a QECNF sentence.

        Args:
            text: QECNF contents
            naive: Use the reference evaluator instead of the game search
            witness: Attach a replayed winning strategy when the sentence is true

        Returns:
            Result dictionary with verdict, exit code, statistics and strategy rows
        """
        f = parse_qecnf(text)
        if naive:
            tv = decide_naive(f)
        else:
            tv = decide(f, budget=self.budget, workers=self.workers, liveness=self.liveness)
        result = self._truth(tv, formula=f, profile=str(alternation_profile(f)))
        if witness and tv.outcome is Outcome.TRUE:
            strategy = extract_strategy(f, budget=self.budget)
            result['strategy'] = strategy.rows()
            result['replayed'] = replay_strategy(f, strategy)
        return result

    def relation(self, text: str) -> Dict:
        source = parse_relation(text)
        r = relation_from_source(source, budget=self.budget)
        return self._result(f"RELATION {len(r)}", 'true', relation=r)

    def classify(self, texts: Sequence[str], pi: Optional[int] = None,
                 fragment: Optional[str] = None) -> Dict:
        """
        Fragment flags and verdicts for the language of the given relation files.

        Args:
            texts: Relation file contents, one per relation
            pi: Alternation bound; the pi_k verdict becomes the result line
            fragment: Report definability in this fragment instead of a verdict

        Returns:
            Result dictionary with per-relation reports and both verdicts
        """
        if pi is not None:
            self.validator.validate_alternation(pi)
        if fragment is not None and fragment not in SHAPES:
            raise ShapeError(f"unknown fragment '{fragment}', expected one of {', '.join(SHAPES)}")
        relations = [relation_from_source(parse_relation(text), budget=self.budget) for text in texts]
        reports = [fragment_report(r) for r in relations]
        flags = language_flags(reports)
        full = self.verdicts.lookup(flags['negative'], flags['positive'], flags['horn'], 'full')
        bounded = None
        if pi is not None:
            bounded = self.verdicts.lookup(flags['negative'], flags['positive'], flags['horn'], 'pi_k', pi)
        extra = dict(reports=reports, flags=flags, full=full, bounded=bounded, related=self.verdicts.related)
        if fragment is not None:
            if flags[fragment]:
                return self._result('DEFINABLE', 'true', **extra)
            return self._result('NOT-DEFINABLE', 'false', **extra)
        return self._result((bounded or full).label, 'true', **extra)

    def _generate(self, kind: str, text: str, k: Optional[int]):
        if kind in ('qsat', 'qsat-tf'):
            phi, notes = parse_qdimacs(text)
            build = qbf_to_qcsp_I if kind == 'qsat' else qbf_to_qcsp_I_existential_tf
            formula, report = build(phi)
            return formula, report, notes, lambda: qbf_true(phi)
        if kind == 'mon3sat':
            phi = parse_dimacs_monotone(text)
            formula, report = mon3sat_to_pi2(phi)
            return formula, report, [], lambda: not mon_sat(phi)
        if kind == 'qnae':
            inst = parse_qnae(text)
            formula, report = qnae_to_qcsp(inst, k)
            return formula, report, [], lambda: qnae_true(inst)
        if kind == 'bcsp':
            inst = parse_bcsp(text)
            formula, report = boolcsp_to_pi2_disj(inst)
            return formula, report, [], lambda: bcsp_sat(inst)
        raise ShapeError(f"unknown reduction '{kind}', expected one of {', '.join(REDUCTIONS)}")

    def reduce(self, kind: str, text: str, k: Optional[int] = None, check: bool = False) -> Dict:
        """
        Generate the QECNF image of a source instance.

        Args:
            kind: One of REDUCTIONS
            text: Source instance contents
            k: Pi_k target for qnae
            check: Compare the Boolean oracle with the solver verdict

        Returns:
            Result dictionary holding the formula and its provenance report
        """
        formula, report, notes, oracle = self._generate(kind, text, k)
        ok, message = self.validator.check_generated(formula, report)
        if not ok:
            raise ShapeError(f"generated {kind} formula is inconsistent: {message}")
        LOG.info("%s: %d variables, %d clauses", kind, formula.nvars, len(formula.matrix))
        extra = dict(formula=formula, report=report, notes=list(notes))
        if not check:
            return self._result('GENERATED', 'true', **extra)
        expected = oracle()
        actual = self._decide(formula)
        return self._checked(expected, actual, **extra)

    def _checked(self, expected: bool, actual: bool, **extra) -> Dict:
        word = 'TRUE' if actual else 'FALSE'
        extra['check'] = {'oracle': expected, 'solver': actual}
        if expected != actual:
            LOG.error("oracle says %s, solver says %s", expected, actual)
            return self._result('MISMATCH', 'false', **extra)
        return self._result(f"CHECKED {word}", 'true', **extra)

    def normalize(self, text: str, check: bool = False) -> Dict:
        """Pad to ∃∀…∃∀ single blocks and apply the Pi_2 normalisation."""
        f = parse_qecnf(text)
        notes: List[str] = []
        if not is_sigma_shaped(f):
            f = pad_to_sigma_shape(f)
            notes.append(f"prefix padded to {alternation_profile(f)}")
        if has_disequalities(f):
            notes.append("matrix has != literals; equivalence is not guaranteed, use --check")
        psi = zeta_pi2(f, force=self.force)
        extra = dict(formula=psi, notes=notes)
        if not check:
            return self._result('GENERATED', 'true', **extra)
        cap = SETTINGS['check_variable_cap']
        if psi.nvars > cap:
            raise CapExceededError(ERROR_MESSAGES['check_cap'].format(n=psi.nvars, cap=cap))
        return self._checked(self._decide(f), self._decide(psi), **extra)

    def proof_search(self, text: str) -> Dict:
        """
        Decide a Γ-shaped sentence through certificate search.

        A FALSE verdict carries a verified contradiction proof and its size audit.
        """
        f = parse_qecnf(text)
        self._require_gamma(f)
        tv, proof = decide_sigma(f, budget=self.budget, workers=self.workers)
        result = self._truth(tv, formula=f)
        if proof is not None:
            lf = layer_formula(f)
            verdict = verify_k_contradiction(lf, (), proof)
            if not verdict:
                raise AssertionError(f"search produced a rejected certificate: {verdict.describe()}")
            result['proof'] = proof
            result['audit'] = size_audit(proof, max(lf.nvars, 1), lf.k)
            result['steps'] = proof_steps(proof)
        return result

    def proof_verify(self, text: str, proof_text: str, hyps: Sequence[str] = (),
                     target: Optional[str] = None) -> Dict:
        """
        Check a certificate against a QECNF sentence or a relation-file formula.

        Args:
            text: Formula contents; relation files provide free variables
            proof_text: Certificate in the S-expression form
            hyps: 'A=B' hypotheses on the free variables
            target: Equality the proof must conclude

        Returns:
            Result dictionary with ACCEPT or REJECT <reason>
        """
        f = self.load_formula(text)
        self._require_gamma(f)
        lf = layer_formula(f)
        proof = load_proof(proof_text)
        E = [self.validator.parse_equality(h) for h in hyps]
        goal: Optional[Equality] = self.validator.parse_equality(target) if target else None
        if isinstance(proof, KProof) and proof.mode == CONTRADICTION_MODE:
            verdict = verify_k_contradiction(lf, E, proof)
        else:
            verdict = verify_k_proof(lf, E, proof, goal)
        extra = dict(formula=f, proof=proof, audit=size_audit(proof, max(lf.nvars, 1), lf.k),
                     steps=proof_steps(proof))
        if verdict:
            return self._result('ACCEPT', 'true', **extra)
        return self._result(f"REJECT {verdict.describe()}", 'false', **extra)

    def _require_gamma(self, f: QEFormula):
        ok, message = self.validator.check_gamma_shape(f)
        if not ok:
            raise ShapeError(message)

    @staticmethod
    def load_formula(text: str) -> QEFormula:
        """QECNF sentence, or the defining formula of a relation file."""
        for line in text.splitlines():
            words = line.split()
            if not words or words[0].startswith('#'):
                continue
            if words[0] != 'rel':
                break
            source = parse_relation(text)
            if source.formula is None:
                raise ShapeError("relation given by kernels has no formula to verify against")
            return source.formula
        return parse_qecnf(text)

