"""
Decision procedures for quantified equality formulas.

A formula with n variables is true over the naturals iff it is true with every
quantifier relativized to an n-element set. Values matter only up to their
kernel, so the game search here never picks a value: each player either joins
an existing class or opens a fresh one.
"""

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from config.settings import SETTINGS, ERROR_MESSAGES
from core.errors import (BudgetExhaustedError, CapExceededError, FormulaError,
                         NotHornError, StrategyError)
from core.formula import EXISTS, FORALL, Clause, QEFormula, Quantifier, eval_matrix
from core.partitions import Partition, UnionFind, kernel_of, restrict

LOG = logging.getLogger(__name__)

# literal over game positions: (i, j, positive)
PosLiteral = Tuple[int, int, bool]


class Outcome(Enum):
    TRUE = 'TRUE'
    FALSE = 'FALSE'
    EXHAUSTED = 'BUDGET-EXHAUSTED'


@dataclass
class SearchStats:
    nodes: int = 0
    memo_hits: int = 0
    horn_leaves: int = 0
    refutations: int = 0

    def as_dict(self) -> Dict[str, int]:
        return {'nodes': self.nodes, 'memo_hits': self.memo_hits,
                'horn_leaves': self.horn_leaves, 'refutations': self.refutations}


@dataclass(frozen=True)
class TruthValue:
    """Game value of a sentence; EXHAUSTED means no verdict was reached."""
    outcome: Outcome
    stats: Dict[str, int] = field(default_factory=dict, compare=False, hash=False)

    @property
    def value(self) -> bool:
        if self.outcome is Outcome.EXHAUSTED:
            raise BudgetExhaustedError(ERROR_MESSAGES['budget'].format(budget=self.stats.get('budget')),
                                       self.stats)
        return self.outcome is Outcome.TRUE

    def __bool__(self) -> bool:
        return self.value

    @classmethod
    def of(cls, value: bool, stats: Optional[Dict[str, int]] = None) -> 'TruthValue':
        return cls(Outcome.TRUE if value else Outcome.FALSE, stats or {})


@dataclass(frozen=True)
class HornResult:
    """
    Outcome of Horn saturation.

    When consistent, kernel is the closure kernel over `variables`; otherwise
    witness is the all-negative clause falsified or the forced equality
    between two variables held distinct.
    """
    consistent: bool
    variables: Tuple[int, ...] = ()
    kernel: Optional[Partition] = None
    witness: Optional[object] = None


@dataclass(frozen=True)
class Strategy:
    """
    Existential choices keyed by (variable, kernel of the earlier game positions).

    A choice is a class index; an index equal to the number of classes so far
    opens a fresh class.
    """
    formula: QEFormula
    choices: Dict[Tuple[int, Partition], int]

    def choice(self, variable: int, earlier: Partition) -> Optional[int]:
        return self.choices.get((variable, earlier))

    def rows(self) -> List[Tuple[str, Partition, str]]:
        """Printable (variable name, earlier kernel, choice) rows."""
        out = []
        for (v, earlier), c in sorted(self.choices.items(), key=lambda kv: (self.formula.order.index(kv[0][0]), kv[0][1])):
            label = 'fresh' if c == (max(earlier) + 1 if earlier else 0) else f"class {c}"
            out.append((self.formula.name(v), earlier, label))
        return out


class _Exhausted(Exception):
    pass


def _saturate(clauses: Iterable[Sequence[PosLiteral]], fixed: Partition,
              variables: Iterable[int]) -> Tuple[bool, UnionFind, Optional[object]]:
    """
    Least-model closure of Horn clauses over positions.

    Positions 0..len(fixed)-1 are pinned to the classes of `fixed`. Returns
    (consistent, union-find, witness) where witness is ('clause', index)
    or ('equality', (position, position)).
    """
    uf = UnionFind(variables)
    anchor: Dict[int, int] = {}
    for position, value in enumerate(fixed):
        uf.add(position)
        if value in anchor:
            uf.union(anchor[value], position)
        else:
            anchor[value] = position
    pinned = {position: value for position, value in enumerate(fixed)}
    pending = list(enumerate(tuple(c) for c in clauses))

    def clash() -> Optional[Tuple[int, int]]:
        seen: Dict[object, Tuple[int, int]] = {}
        for position, value in pinned.items():
            root = uf.find(position)
            if root in seen and seen[root][1] != value:
                return (seen[root][0], position)
            seen.setdefault(root, (position, value))
        return None

    changed = True
    while changed:
        changed = False
        remaining = []
        for number, clause in pending:
            open_literals = [l for l in clause if not (not l[2] and uf.same(l[0], l[1]))]
            if any(l[2] and uf.same(l[0], l[1]) for l in open_literals):
                continue
            negatives = [l for l in open_literals if not l[2]]
            positives = [l for l in open_literals if l[2]]
            if negatives:
                remaining.append((number, clause))
                continue
            if not positives:
                return False, uf, ('clause', number)
            uf.union(positives[0][0], positives[0][1])
            changed = True
        pending = remaining
        if changed:
            bad = clash()
            if bad is not None:
                return False, uf, ('equality', bad)
    return True, uf, None


def horn_saturate(clauses: Iterable[Clause], fixed: Partition = (),
                  fixed_vars: Optional[Sequence[int]] = None) -> HornResult:
    """
    Decide a purely existential Horn conjunction by equality closure.

    Args:
        clauses: Horn clauses over positive variable indices
        fixed: Kernel held by `fixed_vars`
        fixed_vars: Variables carrying `fixed` (default 1..len(fixed))

    Returns:
        HornResult; unforced closure classes get fresh values in the kernel
    """
    clauses = list(clauses)
    for clause in clauses:
        if not clause.is_horn:
            raise NotHornError(f"clause '{clause}' has {len(clause.positives)} positive literals")
    fixed_vars = tuple(fixed_vars) if fixed_vars is not None else tuple(range(1, len(fixed) + 1))
    if len(fixed_vars) != len(fixed):
        raise FormulaError("fixed kernel and fixed variables differ in length")
    variables = sorted(set(fixed_vars) | {v for c in clauses for v in c.variables})
    index = {v: i for i, v in enumerate(fixed_vars)}
    for v in variables:
        index.setdefault(v, len(index))
    ordered = sorted(index, key=index.get)
    raw = [[(index[l.atom.a], index[l.atom.b], l.positive) for l in c.literals] for c in clauses]
    consistent, uf, witness = _saturate(raw, tuple(fixed), range(len(ordered)))
    if not consistent:
        kind, detail = witness
        if kind == 'equality':
            witness = (ordered[detail[0]], ordered[detail[1]])
        else:
            witness = clauses[detail]
        return HornResult(False, tuple(variables), None, witness)
    kernel = kernel_of([uf.find(index[v]) for v in variables]) if variables else ()
    return HornResult(True, tuple(variables), kernel, None)


class _Game:
    """A formula compiled onto game positions 0..n-1 (free variables first)."""

    def __init__(self, f: QEFormula, budget: int, workers: int, liveness: bool):
        self.formula = f
        self.order = f.order
        self.n = len(self.order)
        self.start = f.free
        self.position = {v: i for i, v in enumerate(self.order)}
        self.quantifiers: List[Optional[Quantifier]] = [None] * f.free + [q for q, _ in f.prefix]
        self.budget = budget
        self.workers = workers
        self.liveness = liveness
        self.memo: Dict[object, bool] = {}
        self.stats = SearchStats()
        self._ticks = itertools.count(1)
        self.unsatisfiable = False

        self.clauses: List[Tuple[PosLiteral, ...]] = []
        self.last: List[int] = []
        self.checks: List[List[int]] = [[] for _ in range(self.n)]
        for clause in f.matrix:
            if clause.is_empty:
                self.unsatisfiable = True
                continue
            pairs = ((self.position[l.atom.a], self.position[l.atom.b], l.positive) for l in clause.literals)
            lits = tuple(sorted((min(i, j), max(i, j), s) for i, j, s in pairs))
            last = max(j for _, j, _ in lits)
            self.checks[last].append(len(self.clauses))
            self.clauses.append(lits)
            self.last.append(last)

        # suffix positions all existential
        self.exists_suffix = [False] * (self.n + 1)
        self.exists_suffix[self.n] = True
        for p in range(self.n - 1, -1, -1):
            self.exists_suffix[p] = self.exists_suffix[p + 1] and self.quantifiers[p] is EXISTS
        # clauses still open once positions < p are assigned
        self.open_at = [[i for i, last in enumerate(self.last) if last >= p] for p in range(self.n + 1)]
        self.live = [sorted({x for i in self.open_at[p] for l in self.clauses[i] for x in l[:2] if x < p})
                     for p in range(self.n + 1)]
        self.split_at = max(self.start, 1)

    def tick(self):
        count = next(self._ticks)
        if count > self.budget:
            raise _Exhausted()
        return count

    def violated(self, p: int, state: Partition) -> bool:
        for index in self.checks[p]:
            if not any((state[i] == state[j]) == s for i, j, s in self.clauses[index]):
                return True
        return False

    def key(self, p: int, state: Partition):
        if self.liveness:
            return (p, restrict(state, self.live[p]) if self.live[p] else ())
        return state

    def residual_horn(self, p: int, state: Partition) -> Optional[List[List[PosLiteral]]]:
        """Open clauses with assigned-only literals evaluated, if all are Horn."""
        residual = []
        for index in self.open_at[p]:
            kept = []
            satisfied = False
            for i, j, s in self.clauses[index]:
                if j < p:
                    if (state[i] == state[j]) == s:
                        satisfied = True
                        break
                    continue
                kept.append((i, j, s))
            if satisfied:
                continue
            if sum(1 for l in kept if l[2]) > 1:
                return None
            residual.append(kept)
        return residual

    def value(self, p: int, state: Partition) -> bool:
        if p == self.n:
            return True
        key = self.key(p, state)
        cached = self.memo.get(key)
        if cached is not None:
            self.stats.memo_hits += 1
            return cached
        self.tick()
        self.stats.nodes += 1
        result = None
        if self.exists_suffix[p]:
            residual = self.residual_horn(p, state)
            if residual is not None:
                self.stats.horn_leaves += 1
                result, _, _ = _saturate(residual, state, range(self.n))
        if result is None:
            children = range((max(state) + 2) if state else 1)
            if self.workers > 1 and p == self.split_at and len(children) > 1:
                with ThreadPoolExecutor(max_workers=self.workers) as pool:
                    values = list(pool.map(lambda c: self.child(p, state + (c,)), children))
                result = any(values) if self.quantifiers[p] is EXISTS else all(values)
                LOG.debug("position %d split over %d workers", p, self.workers)
            elif self.quantifiers[p] is EXISTS:
                result = any(self.child(p, state + (c,)) for c in children)
            else:
                result = all(self.child(p, state + (c,)) for c in children)
        self.memo[key] = result
        return result

    def child(self, p: int, state: Partition) -> bool:
        if self.violated(p, state):
            self.stats.refutations += 1
            return False
        return self.value(p + 1, state)

    def root(self, fixed: Partition) -> bool:
        if self.unsatisfiable:
            return False
        for p in range(self.start):
            if self.violated(p, fixed[:p + 1]):
                return False
        return self.value(self.start, tuple(fixed))


def _check_fixed(f: QEFormula, fixed: Optional[Partition]) -> Partition:
    fixed = tuple(fixed or ())
    if len(fixed) != f.free:
        raise FormulaError(ERROR_MESSAGES['not_sentence'].format(free=f.free) if not fixed
                           else f"fixed kernel covers {len(fixed)} of {f.free} free variables")
    if fixed and kernel_of(fixed) != fixed:
        raise FormulaError(f"fixed kernel {list(fixed)} is not canonical")
    return fixed


def _game(f: QEFormula, budget, workers, liveness) -> _Game:
    return _Game(
        f,
        SETTINGS['node_budget'] if budget is None else budget,
        max(1, SETTINGS['workers'] if workers is None else workers),
        SETTINGS['memo_liveness'] if liveness is None else liveness,
    )


def decide(f: QEFormula, fixed: Optional[Partition] = None, budget: Optional[int] = None,
           workers: Optional[int] = None, liveness: Optional[bool] = None) -> TruthValue:
    """
    Decide a formula by memoized class-choice game search.

    Args:
        f: Sentence, or formula whose free variables are pinned by `fixed`
        fixed: Kernel of the free variables 1..f.free
        budget: Node budget (default SETTINGS['node_budget'])
        workers: Threads for the first branching node
        liveness: Memoize on the kernel of still-relevant positions only

    Returns:
        TruthValue; EXHAUSTED if the budget ran out
    """
    fixed = _check_fixed(f, fixed)
    game = _game(f, budget, workers, liveness)
    try:
        verdict = game.root(fixed)
    except _Exhausted:
        stats = dict(game.stats.as_dict(), budget=game.budget)
        LOG.info("search exhausted after %d nodes", game.stats.nodes)
        return TruthValue(Outcome.EXHAUSTED, stats)
    LOG.info("decided %s: %s", 'TRUE' if verdict else 'FALSE', game.stats.as_dict())
    return TruthValue.of(verdict, game.stats.as_dict())


def decide_naive(f: QEFormula, fixed: Optional[Partition] = None, cap: Optional[int] = None) -> TruthValue:
    """
    Reference evaluation with every variable ranging over {0..n-1}.

    Args:
        f: Formula with n = f.nvars variables
        fixed: Kernel of the free variables
        cap: Largest permitted n (default SETTINGS['naive_variable_cap'])

    Returns:
        TruthValue
    """
    fixed = _check_fixed(f, fixed)
    cap = SETTINGS['naive_variable_cap'] if cap is None else cap
    n = f.nvars
    if n > cap:
        raise CapExceededError(ERROR_MESSAGES['naive_cap'].format(n=n, cap=cap))
    domain = range(max(n, 1))
    values = [0] * (n + 1)
    for v in range(1, f.free + 1):
        values[v] = fixed[v - 1]
    leaves = itertools.count()

    def walk(index: int) -> bool:
        if index == len(f.prefix):
            next(leaves)
            return eval_matrix(f.matrix, values[1:])
        q, v = f.prefix[index]
        for value in domain:
            values[v] = value
            outcome = walk(index + 1)
            if q is EXISTS and outcome:
                return True
            if q is FORALL and not outcome:
                return False
        return q is FORALL

    verdict = walk(0)
    return TruthValue.of(verdict, {'leaves': next(leaves)})


def extract_strategy(f: QEFormula, fixed: Optional[Partition] = None, budget: Optional[int] = None) -> Strategy:
    """
    Winning existential strategy of a true formula.

    At each reachable state the first winning class choice is taken:
    existing classes in ascending order, then fresh.
    """
    fixed = _check_fixed(f, fixed)
    game = _game(f, budget, 1, False)
    try:
        if not game.root(fixed):
            raise StrategyError(ERROR_MESSAGES['strategy_false'])
        choices: Dict[Tuple[int, Partition], int] = {}

        def walk(p: int, state: Partition):
            if p == game.n:
                return
            children = range((max(state) + 2) if state else 1)
            if game.quantifiers[p] is EXISTS:
                for c in children:
                    if game.child(p, state + (c,)):
                        choices[(game.order[p], state)] = c
                        walk(p + 1, state + (c,))
                        return
                raise StrategyError(f"no winning choice for {f.name(game.order[p])}")
            for c in children:
                walk(p + 1, state + (c,))

        walk(game.start, fixed)
    except _Exhausted:
        raise BudgetExhaustedError(ERROR_MESSAGES['budget'].format(budget=game.budget),
                                   game.stats.as_dict())
    return Strategy(f, choices)


def universal_plays(f: QEFormula, strategy: Strategy, fixed: Partition = ()) -> Iterator[Optional[Partition]]:
    """Final kernels of every canonical universal play; None marks a missing choice."""
    order = f.order
    quantifiers = [None] * f.free + [q for q, _ in f.prefix]

    def walk(p: int, state: Partition):
        if p == len(order):
            yield state
            return
        if quantifiers[p] is EXISTS:
            c = strategy.choice(order[p], state)
            if c is None or c > (max(state) + 1 if state else 0):
                yield None
                return
            yield from walk(p + 1, state + (c,))
            return
        for c in range((max(state) + 2) if state else 1):
            yield from walk(p + 1, state + (c,))

    yield from walk(f.free, tuple(fixed))


def replay_strategy(f: QEFormula, strategy: Strategy, fixed: Optional[Partition] = None) -> bool:
    """
    Replay a strategy against every canonical universal play.

    Returns:
        True iff every play ends in a kernel satisfying the matrix
    """
    fixed = _check_fixed(f, fixed)
    for kernel in universal_plays(f, strategy, fixed):
        if kernel is None:
            return False
        reorder = [0] * len(kernel)
        for p, v in enumerate(f.order):
            reorder[v - 1] = kernel[p]
        if not eval_matrix(f.matrix, reorder):
            return False
    return True
