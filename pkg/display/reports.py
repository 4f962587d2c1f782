from typing import Dict, List

from rich import box
from rich.table import Table

from core.classify import SHAPES
from core.proofs import dump_proof
from core.qecnf import print_qecnf, print_relation
from ui.themes import console, verdict_style


def _yes(flag: bool) -> str:
    return 'yes' if flag else 'no'


class Reports:
    """Plain-text result reports for stdout and rich tables for stderr."""

    @staticmethod
    def result_line(verdict: str) -> str:
        return f"RESULT {verdict}"

    @staticmethod
    def error_report(message: str) -> str:
        return Reports.result_line(f"ERROR {' '.join(message.split())}") + '\n'

    @staticmethod
    def _stats_lines(stats: Dict) -> List[str]:
        return [f"stat {key} {stats[key]}" for key in sorted(stats)]

    @staticmethod
    def generate_solve_report(result: Dict, stats: bool = False) -> str:
        """
        Text report of a solve run.

        Args:
            result: Engine result dictionary
            stats: Append search statistics

        Returns:
            Report text, first line 'RESULT <verdict>'
        """
        lines = [Reports.result_line(result['verdict']), f"profile {result['profile']}"]
        if 'strategy' in result:
            for name, earlier, choice in result['strategy']:
                lines.append(f"strategy {name} [{' '.join(map(str, earlier))}] {choice}")
            lines.append(f"replay {'ok' if result['replayed'] else 'failed'}")
        if stats:
            lines += Reports._stats_lines(result.get('stats', {}))
        return '\n'.join(lines) + '\n'

    @staticmethod
    def generate_relation_report(result: Dict) -> str:
        r = result['relation']
        return Reports.result_line(result['verdict']) + '\n' + print_relation(r.arity, r.kernels)

    @staticmethod
    def generate_classify_report(result: Dict) -> str:
        """
        Flags, witnesses and verdicts of a classify run.

        Witness clauses use the QECNF clause syntax; a separator is a kernel
        of the fragment closure outside the relation.
        """
        lines = [Reports.result_line(result['verdict'])]
        for i, report in enumerate(result['reports'], start=1):
            flags = ' '.join(f"{shape} {_yes(report.flags[shape])}" for shape in SHAPES)
            lines.append(f"relation {i} arity {report.arity} {flags}")
            for shape in SHAPES:
                if shape in report.witnesses:
                    for clause in report.witnesses[shape]:
                        lines.append(f"  {shape} c {clause}".rstrip())
                else:
                    kernel = ' '.join(map(str, report.separators[shape]))
                    lines.append(f"  {shape} separator p {kernel}")
        flags = result['flags']
        lines.append('language ' + ' '.join(f"{shape} {_yes(flags[shape])}" for shape in SHAPES))
        lines.append(f"verdict full {result['full'].label}")
        lines.append(f"citation full {result['full'].citation}")
        bounded = result.get('bounded')
        if bounded is not None:
            lines.append(f"verdict pi_{bounded.k} {bounded.label}")
            lines.append(f"citation pi_{bounded.k} {bounded.citation}")
        return '\n'.join(lines) + '\n'

    @staticmethod
    def generate_generated_report(result: Dict, written: List[str]) -> str:
        """Report for reduce and normalize-pi2; the formula is inlined when no file was written."""
        formula = result['formula']
        lines = [Reports.result_line(result['verdict']),
                 f"variables {formula.nvars} clauses {len(formula.matrix)}"]
        if 'check' in result:
            check = result['check']
            lines.append(f"oracle {str(check['oracle']).upper()} solver {str(check['solver']).upper()}")
        lines += [f"# {note}" for note in result.get('notes', [])]
        if result.get('report') is not None:
            lines += [f"# {note}" for note in result['report'].notes]
        lines += [f"wrote {path}" for path in written]
        text = '\n'.join(lines) + '\n'
        if not written:
            text += print_qecnf(formula)
        return text

    @staticmethod
    def generate_proof_report(result: Dict, written: List[str] = (), inline: bool = False) -> str:
        """Proof size line and audit; the certificate is inlined on request."""
        lines = [Reports.result_line(result['verdict'])]
        if 'proof' in result:
            audit = result['audit']
            lines.append(f"steps {result['steps']}")
            lines.append(f"symbols {audit.symbols} bound {audit.bound} within {_yes(audit.within)}")
        lines += [f"wrote {path}" for path in written]
        text = '\n'.join(lines) + '\n'
        if inline and 'proof' in result:
            text += dump_proof(result['proof'])
        return text

    @staticmethod
    def display_verdict(verdict: str):
        style = verdict_style(verdict)
        console.print(verdict, style=style, markup=False)

    @staticmethod
    def display_stats(stats: Dict):
        """Search statistics as a table on stderr."""
        table = Table(title="Search statistics", box=box.ROUNDED, title_style="primary")
        table.add_column("Counter", style="muted")
        table.add_column("Value", justify="right", style="info")
        for key in sorted(stats):
            table.add_row(key, str(stats[key]))
        console.print(table)

    @staticmethod
    def display_strategy(rows):
        table = Table(title="Winning strategy", box=box.SIMPLE, title_style="primary")
        table.add_column("Variable", style="existential")
        table.add_column("Earlier kernel")
        table.add_column("Choice")
        for name, earlier, choice in rows:
            table.add_row(name, ' '.join(map(str, earlier)) or '-', choice)
        console.print(table)

    @staticmethod
    def display_classification(result: Dict):
        """Fragment flags per relation and the verdicts."""
        table = Table(title="Fragments", box=box.ROUNDED, title_style="primary")
        table.add_column("Relation")
        table.add_column("Arity", justify="right")
        for shape in SHAPES:
            table.add_column(shape.capitalize(), justify="center")
        for i, report in enumerate(result['reports'], start=1):
            marks = ['[success]yes[/success]' if report.flags[s] else '[error]no[/error]' for s in SHAPES]
            table.add_row(str(i), str(report.arity), *marks)
        console.print(table)
        console.print(f"[primary]full:[/primary] {result['full'].label}")
        if result.get('bounded') is not None:
            console.print(f"[primary]pi_{result['bounded'].k}:[/primary] {result['bounded'].label}")
        for note in result.get('related', []):
            console.print(note, style="muted", markup=False)
