#!/usr/bin/env python3
"""
eqqcsp - quantified constraint satisfaction over equality languages
Decision, reductions, Pi_2 normalisation, proof certificates and classification
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, TextIO

from rich.logging import RichHandler

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent))

from config.settings import SETTINGS, EXIT_CODES
from core.classify import SHAPES
from core.engine import QcspEngine, REDUCTIONS
from core.errors import (BudgetExhaustedError, CapExceededError, EqQcspError, StrategyError)
from display.reports import Reports
from ui.themes import console
from utils.exporter import Exporter
from utils.helpers import get_version

LOG = logging.getLogger('eqqcsp')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='eqqcsp',
        description="Quantified constraint satisfaction over equality languages"
    )
    parser.add_argument('--version', action='version', version=f'eqqcsp {get_version()}')
    parser.add_argument('-v', '--verbose', action='store_true', help='Debug logging on stderr')

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument('--budget', type=int, help='Node budget (default from settings)')
    search.add_argument('--workers', type=int, help='Threads at the first branching node')

    commands = parser.add_subparsers(dest='command', required=True)

    solve = commands.add_parser('solve', parents=[search], help='Decide a QECNF sentence')
    solve.add_argument('file')
    solve.add_argument('--naive', action='store_true', help='Reference evaluation over {0..n-1}')
    solve.add_argument('--witness', action='store_true', help='Print a winning strategy')
    solve.add_argument('--stats', action='store_true', help='Print search statistics')
    solve.add_argument('--liveness', action='store_true', help='Liveness-reduced memo keys')

    relation = commands.add_parser('relation', parents=[search], help='Kernels of a relation file')
    relation.add_argument('file')

    classify = commands.add_parser('classify', parents=[search], help='Fragment flags and verdicts')
    classify.add_argument('files', nargs='+')
    classify.add_argument('--pi', type=int, metavar='K', help='Verdict for Pi_K sentences')
    classify.add_argument('--table', action='store_true', help='Show a table on stderr')
    classify.add_argument('--fragment', choices=SHAPES, help='Report definability in one fragment')

    reduce = commands.add_parser('reduce', parents=[search], help='Generate a QECNF instance')
    reduce.add_argument('kind', choices=REDUCTIONS)
    reduce.add_argument('input')
    reduce.add_argument('-o', '--output')
    reduce.add_argument('--report', help='Provenance report path')
    reduce.add_argument('--k', type=int, help='Pi_k target for qnae')
    reduce.add_argument('--check', action='store_true', help='Compare with the Boolean oracle')

    normalize = commands.add_parser('normalize-pi2', parents=[search], help='Equivalent Pi_2 sentence')
    normalize.add_argument('file')
    normalize.add_argument('-o', '--output')
    normalize.add_argument('--force', action='store_true', help='Lift the block cap')
    normalize.add_argument('--check', action='store_true', help='Compare verdicts before and after')

    proof_search = commands.add_parser('proof-search', parents=[search], help='Certificate search')
    proof_search.add_argument('file')
    proof_search.add_argument('-o', '--output')

    verify = commands.add_parser('proof-verify', help='Check a certificate')
    verify.add_argument('file')
    verify.add_argument('proof')
    verify.add_argument('--hyp', action='append', default=[], metavar='A=B')
    verify.add_argument('--target', metavar='A=B')
    return parser


def configure_logging(verbose: bool):
    level = logging.DEBUG if verbose else SETTINGS['log_level']
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=console, show_path=False)],
        force=True
    )


def dispatch(args: argparse.Namespace) -> str:
    """Run one command; returns the stdout text and sets args.exit_code."""
    engine = QcspEngine(budget=getattr(args, 'budget', None),
                        workers=getattr(args, 'workers', None),
                        liveness=getattr(args, 'liveness', False) or None,
                        force=getattr(args, 'force', False))
    command = args.command

    if command == 'solve':
        result = engine.solve(engine.read(args.file), naive=args.naive, witness=args.witness)
        if args.stats:
            Reports.display_stats(result.get('stats', {}))
        text = Reports.generate_solve_report(result, stats=args.stats)
    elif command == 'relation':
        result = engine.relation(engine.read(args.file))
        text = Reports.generate_relation_report(result)
    elif command == 'classify':
        result = engine.classify([engine.read(path) for path in args.files], pi=args.pi,
                                 fragment=args.fragment)
        if args.table:
            Reports.display_classification(result)
        text = Reports.generate_classify_report(result)
    elif command == 'reduce':
        result = engine.reduce(args.kind, engine.read(args.input), k=args.k, check=args.check)
        written = Exporter.export_results(result, args.output, args.report)
        text = Reports.generate_generated_report(result, written)
    elif command == 'normalize-pi2':
        result = engine.normalize(engine.read(args.file), check=args.check)
        written = Exporter.export_results(result, args.output)
        text = Reports.generate_generated_report(result, written)
    elif command == 'proof-search':
        result = engine.proof_search(engine.read(args.file))
        written = []
        if args.output and 'proof' in result:
            written.append(Exporter.write_proof(Path(args.output), result['proof']))
        text = Reports.generate_proof_report(result, written, inline=not args.output)
    else:
        result = engine.proof_verify(engine.read(args.file), engine.read(args.proof),
                                     hyps=args.hyp, target=args.target)
        text = Reports.generate_proof_report(result)

    Reports.display_verdict(result['verdict'])
    args.exit_code = result['exit']
    return text


def run(argv: Optional[List[str]] = None, stdout: Optional[TextIO] = None) -> int:
    """
    Command-line entry point.

    Args:
        argv: Arguments without the program name (default sys.argv[1:])
        stdout: Stream for the result text (default sys.stdout)

    Returns:
        Exit code: 0 true/accept, 1 false/reject, 2 usage or format error,
        3 budget or cap exceeded
    """
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code in (0, None):
            return EXIT_CODES['true']
        stdout.write(Reports.error_report("usage: see --help"))
        return EXIT_CODES['usage']
    configure_logging(args.verbose)

    try:
        text = dispatch(args)
    except BudgetExhaustedError as exc:
        LOG.warning("%s", exc)
        stdout.write(Reports.result_line('BUDGET-EXHAUSTED') + '\n')
        return EXIT_CODES['budget']
    except CapExceededError as exc:
        stdout.write(Reports.error_report(str(exc)))
        return EXIT_CODES['budget']
    except StrategyError as exc:
        stdout.write(Reports.error_report(str(exc)))
        return EXIT_CODES['false']
    except (EqQcspError, ValueError, OSError) as exc:
        LOG.debug("command failed", exc_info=True)
        stdout.write(Reports.error_report(str(exc)))
        return EXIT_CODES['usage']
    stdout.write(text)
    return args.exit_code


def main():
    """Main entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
