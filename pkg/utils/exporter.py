import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from core.formula import QEFormula
from core.gadgets import GadgetReport
from core.proofs import Proof, dump_proof
from core.qecnf import print_qecnf
from utils.helpers import version_header

LOG = logging.getLogger(__name__)


class Exporter:
    """Write generated formulas, provenance reports and certificates."""

    @staticmethod
    def write_text(path: Path, body: str) -> str:
        """
        Write `body` under the version header.

        Args:
            path: Target file; parent directories are created
            body: File contents without header

        Returns:
            The path written
        """
        path = Path(path)
        path.parent.mkdir(exist_ok=True, parents=True)
        with open(path, 'w') as f:
            f.write(version_header() + '\n')
            f.write(body)
        LOG.info("wrote %s", path)
        return str(path)

    @staticmethod
    def write_formula(path: Path, formula: QEFormula) -> str:
        return Exporter.write_text(path, print_qecnf(formula))

    @staticmethod
    def report_text(report: Optional[GadgetReport], notes: Sequence[str] = ()) -> str:
        """Input notes as '#' lines, then the gadget notes and one role line per variable."""
        rows = [f"# {note}" for note in notes]
        if report is not None:
            rows += report.lines()
        return '\n'.join(rows) + '\n' if rows else ''

    @staticmethod
    def write_report(path: Path, report: Optional[GadgetReport], notes: Sequence[str] = ()) -> str:
        return Exporter.write_text(path, Exporter.report_text(report, notes))

    @staticmethod
    def write_proof(path: Path, proof: Proof) -> str:
        return Exporter.write_text(path, dump_proof(proof))

    @staticmethod
    def export_results(result: Dict, out: Optional[str] = None, report: Optional[str] = None) -> List[str]:
        """
        Write a generated formula and its provenance report.

        Args:
            result: Engine result of reduce or normalize
            out: Formula destination
            report: Report destination; defaults to '<out>.roles' when the
                result carries a gadget report

        Returns:
            Paths written, in order
        """
        written = []
        if out:
            written.append(Exporter.write_formula(Path(out), result['formula']))
            if report is None and result.get('report') is not None:
                report = f"{out}.roles"
        if report is not None:
            written.append(Exporter.write_report(Path(report), result.get('report'), result.get('notes', [])))
        return written
