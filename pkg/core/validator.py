from typing import Dict, List, Tuple

from config.settings import VERDICT_MODES
from core.errors import FormatError
from core.formula import QEFormula
from core.gadgets import GadgetReport
from core.proofs import Equality


class InputValidator:
    """Validate command options, formula shapes and data files."""

    @staticmethod
    def validate_count(value: int, name: str, minimum: int = 1) -> int:
        """
        Ensure a numeric option is an integer of at least `minimum`.

        Args:
            value: The option value
            name: Option name for the message
            minimum: Smallest accepted value

        Returns:
            The value, raises ValueError if not valid
        """
        if not isinstance(value, int) or isinstance(value, bool):
            raise ValueError(f"{name} must be an integer")
        if value < minimum:
            raise ValueError(f"{name} must be at least {minimum}")
        return value

    @staticmethod
    def validate_alternation(k: int) -> int:
        """Pi_k verdicts exist for k >= 2."""
        return InputValidator.validate_count(k, '--pi', minimum=2)

    @staticmethod
    def parse_equality(text: str) -> Equality:
        """
        Parse 'A=B' into an equality over variable indices.

        Args:
            text: Option text such as '3=5'

        Returns:
            The equality, raises FormatError otherwise
        """
        left, sep, right = text.partition('=')
        if not sep or not left.strip().isdigit() or not right.strip().isdigit():
            raise FormatError(f"expected 'A=B' over variable indices, got '{text}'")
        a, b = int(left), int(right)
        if a < 1 or b < 1 or a == b:
            raise FormatError(f"'{text}' is not an equality between two distinct variables")
        return Equality.of(a, b)

    @staticmethod
    def check_gamma_shape(f: QEFormula) -> Tuple[bool, str]:
        """
        Check that every clause is x=y or (x!=y | u=v).

        Returns:
            Tuple of (is_valid, message)
        """
        for h, clause in enumerate(f.matrix, start=1):
            if not clause.is_gamma_shape:
                return False, f"clause {h} '{clause}' is not x=y or x=y -> u=v"
        return True, "Gamma-shaped matrix"

    @staticmethod
    def check_generated(f: QEFormula, report: GadgetReport) -> Tuple[bool, str]:
        """
        Check that a generated formula and its provenance report agree.

        Returns:
            Tuple of (is_valid, message)
        """
        missing = [v for v in range(1, f.nvars + 1) if v not in report.roles]
        if missing:
            return False, f"variables without a role: {missing}"
        extra = sorted(set(report.roles) - set(range(1, f.nvars + 1)))
        if extra:
            return False, f"roles for unknown variables: {extra}"
        if len(set(report.names.values())) != len(report.names):
            return False, "duplicate gadget names"
        return True, "Every variable has a role"

    @staticmethod
    def validate_verdict_data(data: Dict) -> Tuple[bool, str]:
        """
        Validate the verdict table structure.

        Args:
            data: Parsed verdicts.json

        Returns:
            Tuple of (is_valid, message)
        """
        conditions = {'negative', 'positive', 'horn', 'otherwise'}
        for mode in VERDICT_MODES:
            rows: List[Dict] = data.get(mode)
            if not isinstance(rows, list) or not rows:
                return False, f"Missing verdict rows for mode: {mode}"
            for row in rows:
                for key in ('when', 'class', 'citation'):
                    if key not in row:
                        return False, f"Missing required field '{key}' in mode {mode}"
                if row['when'] not in conditions:
                    return False, f"Invalid condition: {row['when']}"
            if rows[-1]['when'] != 'otherwise':
                return False, f"Mode {mode} has no fallback row"
        return True, "Valid verdict data"
