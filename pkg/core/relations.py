"""Equality relations as sets of kernels, and their computation from formulas."""

import logging
from dataclasses import dataclass
from typing import FrozenSet, Hashable, Iterable, Optional, Sequence

from config.settings import SETTINGS, ERROR_MESSAGES
from core.errors import BudgetExhaustedError, CapExceededError, FormulaError
from core.formula import QEFormula
from core.partitions import Partition, enumerate_partitions, is_canonical, kernel_of
from core.qecnf import RelationSource
from core.solver import Outcome, decide

LOG = logging.getLogger(__name__)


@dataclass(frozen=True)
class Relation:
    """An m-ary equality relation given by the kernels of its tuples."""
    arity: int
    kernels: FrozenSet[Partition]

    def __post_init__(self):
        for k in self.kernels:
            if len(k) != self.arity or not is_canonical(k):
                raise FormulaError(f"kernel {list(k)} is not a canonical partition of [{self.arity}]")

    def __contains__(self, assignment: Sequence[Hashable]) -> bool:
        return kernel_of(assignment) in self.kernels

    def __len__(self) -> int:
        return len(self.kernels)

    @classmethod
    def full(cls, arity: int) -> 'Relation':
        return cls(arity, frozenset(enumerate_partitions(arity, cap=SETTINGS['classify_arity_cap'])))

    @classmethod
    def of(cls, arity: int, kernels: Iterable[Sequence[int]]) -> 'Relation':
        return cls(arity, frozenset(tuple(k) for k in kernels))

    def sorted_kernels(self):
        return sorted(self.kernels)


def relation_from_formula(f: QEFormula, budget: Optional[int] = None, workers: Optional[int] = None) -> Relation:
    """
    Relation defined by a formula with free variables 1..m.

    Args:
        f: Formula whose free variables are 1..f.free
        budget: Node budget per kernel

    Returns:
        Kernels of [m] under which the formula is true
    """
    m = f.free
    if m < 1:
        raise FormulaError("relation_from_formula needs at least one free variable")
    cap = SETTINGS['partition_cap']
    if m > cap:
        raise CapExceededError(ERROR_MESSAGES['arity_cap'].format(m=m, cap=cap))
    kernels = []
    for p in enumerate_partitions(m, cap=cap):
        verdict = decide(f, fixed=p, budget=budget, workers=workers)
        if verdict.outcome is Outcome.EXHAUSTED:
            raise BudgetExhaustedError(ERROR_MESSAGES['budget'].format(budget=verdict.stats.get('budget')),
                                       verdict.stats)
        if verdict.value:
            kernels.append(p)
    LOG.info("relation of arity %d has %d kernels", m, len(kernels))
    return Relation(m, frozenset(kernels))


def relation_from_source(source: RelationSource, budget: Optional[int] = None) -> Relation:
    """Materialize a parsed relation file."""
    if source.kernels is not None:
        return Relation(source.arity, source.kernels)
    return relation_from_formula(source.formula, budget=budget)
