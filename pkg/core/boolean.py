"""Brute-force Boolean reference deciders for the reduction source problems."""

import itertools
import logging
from typing import Dict, Sequence, Tuple

from config.settings import SETTINGS, ERROR_MESSAGES
from core.errors import CapExceededError
from core.formula import EXISTS, Quantifier
from core.reductions import QBF, BoolCSP, MonotoneCNF, QNAEInstance

LOG = logging.getLogger(__name__)


def _check_size(n: int):
    cap = SETTINGS['check_variable_cap']
    if n > cap:
        raise CapExceededError(ERROR_MESSAGES['check_cap'].format(n=n, cap=cap))


def _quantified(prefix: Sequence[Tuple[Quantifier, int]], test) -> bool:
    assignment: Dict[int, bool] = {}

    def walk(index: int) -> bool:
        if index == len(prefix):
            return test(assignment)
        q, v = prefix[index]
        for value in (False, True):
            assignment[v] = value
            outcome = walk(index + 1)
            if q is EXISTS and outcome:
                return True
            if q is not EXISTS and not outcome:
                return False
        return q is not EXISTS

    return walk(0)


def qbf_true(phi: QBF) -> bool:
    """Truth of ∃x1∀y1…∃xn∀yn over the 3-CNF matrix."""
    _check_size(2 * phi.n)

    def matrix(assignment: Dict[int, bool]) -> bool:
        return all(any(assignment[abs(l)] == (l > 0) for l in clause) for clause in phi.clauses)

    return _quantified(phi.prefix, matrix)


def mon_sat(phi: MonotoneCNF) -> bool:
    """Satisfiability of a monotone 3-CNF."""
    _check_size(phi.n)
    for bits in itertools.product((False, True), repeat=phi.n):
        if (all(any(not bits[v - 1] for v in c) for c in phi.negative)
                and all(any(bits[v - 1] for v in c) for c in phi.positive)):
            return True
    return False


def qnae_true(inst: QNAEInstance) -> bool:
    """Truth of a quantified NAE-3-SAT instance."""
    _check_size(inst.n)

    def matrix(assignment: Dict[int, bool]) -> bool:
        return all(len({assignment[v] for v in triple}) > 1 for triple in inst.constraints)

    return _quantified(inst.prefix, matrix)


def bcsp_sat(inst: BoolCSP) -> bool:
    """Satisfiability over {0,1} of x != y and x = y | y = z constraints."""
    _check_size(inst.n)
    for bits in itertools.product((0, 1), repeat=inst.n):
        ok = True
        for kind, args in inst.constraints:
            values = [bits[a - 1] for a in args]
            if kind == 'neq':
                ok = values[0] != values[1]
            else:
                ok = values[0] == values[1] or values[1] == values[2]
            if not ok:
                break
        if ok:
            LOG.debug("bcsp witness %s", bits)
            return True
    return False
