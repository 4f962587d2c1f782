"""
Certificate search by saturation.

At the core every equality derivable from the hypotheses is listed. One layer
up the same list is built from sub-proofs: the current equality classes fix
an assignment b of the existential block, every canonical evaluation of the
universal block is tried one layer down, and a refuted evaluation either
contributes a new equality (then the loop restarts) or closes a proof of a
contradiction.
"""

import itertools
import logging
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from config.settings import SETTINGS, ERROR_MESSAGES
from core.errors import BudgetExhaustedError, CapExceededError, FormulaError
from core.formula import QEFormula
from core.partitions import Partition, UnionFind, grow, kernel_of
from core.proofs import (CONTRADICTION_MODE, EQUALITY_MODE, HYP, UNIT, Equality, Justification,
                         KProof, KStep, LayeredFormula, Proof, ZeroProof, ZeroStep, layer_formula)
from core.solver import Outcome, TruthValue

LOG = logging.getLogger(__name__)

EQUALITY = 'equality'
CONTRADICTION = 'contradiction'
CONSISTENT = 'consistent'


@dataclass(frozen=True)
class SearchResult:
    """
    Outcome of saturate_search.

    kind is 'equality' (proof of an equality violated by the hypotheses),
    'contradiction' or 'consistent' (witness: kernel over the free and
    existential variables of the outer layer).
    """
    kind: str
    proof: Optional[Proof] = None
    equality: Optional[Equality] = None
    witness: Optional[Partition] = None
    steps: Tuple = field(default=(), compare=False, repr=False)


def hyp_proof(level: int, e: Equality) -> Proof:
    """level-proof of a hypothesis e from any set containing it."""
    if level == 0:
        return ZeroProof((ZeroStep(e, HYP),))
    return KProof(EQUALITY_MODE, (KStep(e, (), hyp_proof(level - 1, e)),))


def transitivity_proof(level: int, a: int, b: int, c: int) -> Proof:
    """
    level-proof of a=c from {a=b, b=c}: one step per level over a 0-proof.
    """
    if len({a, b, c}) != 3:
        raise FormulaError(f"transitivity needs three distinct variables, got {a}, {b}, {c}")
    target = Equality.of(a, c)
    if level == 0:
        return ZeroProof((
            ZeroStep(Equality.of(a, b), HYP),
            ZeroStep(Equality.of(b, c), HYP),
            ZeroStep(target, Justification('trans', (1, 2))),
        ))
    return KProof(EQUALITY_MODE, (KStep(target, (), transitivity_proof(level - 1, a, b, c)),))


def _chain(e: Equality, f: Equality) -> Optional[Tuple[int, int, int]]:
    shared = e.variables & f.variables
    if len(shared) != 1:
        return None
    b = next(iter(shared))
    a, c = sorted((e.variables | f.variables) - shared)
    return a, b, c


def _reps(variables: Sequence[int], equalities: Iterable[Equality]) -> Dict[int, int]:
    """Earliest variable of each class, for every variable in order."""
    uf = UnionFind(variables)
    for e in equalities:
        uf.union(e.a, e.b)
    first: Dict[object, int] = {}
    return {v: first.setdefault(uf.find(v), v) for v in variables}


def _unique(equalities: Iterable[Equality]) -> Tuple[Equality, ...]:
    return tuple(sorted(set(equalities)))


class _Search:
    def __init__(self, lf: LayeredFormula, budget: int, workers: int):
        self.lf = lf
        self.rank = {v: i for i, v in enumerate(lf.order)}
        self.budget = budget
        self.workers = workers
        self.nodes = 0
        self._ticks = itertools.count(1)
        self.memo: Dict[Tuple[int, Tuple[Equality, ...]], SearchResult] = {}
        self.by_premise: Dict[Equality, List[Equality]] = {}
        for premise, conclusion in sorted(lf.implications):
            self.by_premise.setdefault(premise, []).append(conclusion)

    def tick(self):
        if next(self._ticks) > self.budget:
            raise BudgetExhaustedError(ERROR_MESSAGES['budget'].format(budget=self.budget),
                                       {'nodes': self.nodes, 'budget': self.budget})
        self.nodes += 1

    def violation(self, equalities: Sequence[Equality], home: Dict[int, int]) -> Optional[int]:
        """1-based index of the first equality joining two distinct hypothesis classes of F."""
        for i, e in enumerate(equalities, start=1):
            if e.a in home and e.b in home and home[e.a] == e.a and home[e.b] == e.b:
                return i
        return None

    def search(self, depth: int, H: Tuple[Equality, ...], absorb: bool = False) -> SearchResult:
        key = (depth, H)
        if not absorb and key in self.memo:
            return self.memo[key]
        self.tick()
        if depth == self.lf.k:
            result = self.core(H, absorb)
        else:
            result = self.layer(depth, H, absorb)
        if not absorb:
            self.memo[key] = result
        return result

    def core(self, H: Tuple[Equality, ...], absorb: bool) -> SearchResult:
        view = self.lf.view(self.lf.k)
        scope = view.free + view.exists
        steps: List[ZeroStep] = []
        index: Dict[Equality, int] = {}
        queue = deque()

        def add(e: Equality, why: Justification):
            if e in index:
                return
            steps.append(ZeroStep(e, why))
            index[e] = len(steps)
            queue.append(e)

        for e in H:
            add(e, HYP)
        for e in sorted(self.lf.units):
            add(e, UNIT)
        while queue:
            e = queue.popleft()
            for conclusion in self.by_premise.get(e, ()):
                add(conclusion, Justification('impl', (index[e],)))
            for f in list(index):
                link = _chain(e, f)
                if link is not None:
                    add(Equality.of(link[0], link[2]), Justification('trans', tuple(sorted((index[e], index[f])))))
        if not absorb:
            home = _reps(view.free, H)
            at = self.violation([s.eq for s in steps], home)
            if at is not None:
                LOG.debug("core derives %s against the hypotheses", steps[at - 1].eq)
                return SearchResult(EQUALITY, ZeroProof(tuple(steps[:at])), steps[at - 1].eq, steps=tuple(steps))
        reps = _reps(scope, index)
        witness = kernel_of([reps[v] for v in scope]) if scope else ()
        return SearchResult(CONSISTENT, witness=witness, steps=tuple(steps))

    def layer(self, depth: int, H: Tuple[Equality, ...], absorb: bool) -> SearchResult:
        view = self.lf.view(depth)
        level = self.lf.k - depth
        scope = view.free + view.exists
        universal = view.forall
        steps: List[KStep] = []
        index: Dict[Equality, int] = {}

        def add(e: Equality, uassign, sub: Proof):
            steps.append(KStep(e, uassign, sub))
            index[e] = len(steps)
            queue = deque([e])
            while queue:
                g = queue.popleft()
                for f in list(index):
                    link = _chain(g, f)
                    if link is None:
                        continue
                    h = Equality.of(link[0], link[2])
                    if h not in index:
                        steps.append(KStep(h, (), transitivity_proof(level - 1, *link)))
                        index[h] = len(steps)
                        queue.append(h)

        for e in H:
            if e not in index:
                add(e, (), hyp_proof(level - 1, e))
        home = _reps(view.free, H)
        while True:
            if not absorb:
                at = self.violation([s.eq for s in steps], home)
                if at is not None:
                    e = steps[at - 1].eq
                    LOG.debug("layer %d derives %s against the hypotheses", depth, e)
                    return SearchResult(EQUALITY, KProof(EQUALITY_MODE, tuple(steps[:at])), e, steps=tuple(steps))
            reps = _reps(scope, index)
            b = kernel_of([reps[v] for v in scope]) if scope else ()
            sequence = scope + universal
            evaluations = list(grow(b, len(universal)))
            outcome = None
            for c, uassign, result in self.explore(depth, H, steps, sequence, len(scope), evaluations):
                if result.kind == CONSISTENT:
                    continue
                outcome = (uassign, result)
                break
            if outcome is None:
                return SearchResult(CONSISTENT, witness=b, steps=tuple(steps))
            uassign, result = outcome
            if result.kind == CONTRADICTION:
                closing = KStep(None, uassign, result.proof)
                return SearchResult(CONTRADICTION, KProof(CONTRADICTION_MODE, tuple(steps) + (closing,)),
                                    steps=tuple(steps))
            e = result.equality
            if e.variables <= set(scope):
                LOG.debug("layer %d adds %s under E^u=%s", depth, e, list(uassign))
                add(e, uassign, result.proof)
                continue
            closing = KStep(e, uassign, result.proof)
            return SearchResult(CONTRADICTION, KProof(CONTRADICTION_MODE, tuple(steps) + (closing,)),
                                steps=tuple(steps))

    def explore(self, depth, H, steps, sequence, width, evaluations):
        """(evaluation, E^u, result) in lexicographic order of the evaluations."""
        prior = [s.eq for s in steps]

        def attempt(c: Partition):
            first: Dict[int, int] = {}
            for position, v in enumerate(sequence):
                first.setdefault(c[position], v)
            uassign = tuple((u, first[c[position]]) for position, u in enumerate(sequence)
                            if position >= width and first[c[position]] != u)
            hypotheses = _unique(list(H) + [Equality.of(u, z) for u, z in uassign] + prior)
            return c, uassign, self.search(depth + 1, hypotheses)

        if self.workers > 1 and depth == 0 and len(evaluations) > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                yield from pool.map(attempt, evaluations)
            return
        for c in evaluations:
            yield attempt(c)


def _search(lf: LayeredFormula, budget: Optional[int], workers: Optional[int]) -> _Search:
    cap = SETTINGS['proof_block_cap']
    for block in lf.blocks():
        if len(block) > cap:
            raise CapExceededError(ERROR_MESSAGES['block_cap'].format(size=len(block), cap=cap))
    return _Search(lf,
                   SETTINGS['node_budget'] if budget is None else budget,
                   max(1, SETTINGS['workers'] if workers is None else workers))


def saturate_search(lf: LayeredFormula, E: Iterable[Equality] = (), budget: Optional[int] = None,
                    workers: Optional[int] = None) -> SearchResult:
    """
    Find a certificate for the free-variable tuple described by E.

    Args:
        lf: Layered formula
        E: Equalities on the free variables satisfied by the tuple
        budget: Node budget
        workers: Threads for the outermost universal evaluations

    Returns:
        SearchResult; a proof of an equality not implied by E, a proof of a
        contradiction, or a consistent witness
    """
    search = _search(lf, budget, workers)
    result = search.search(0, _unique(E))
    LOG.info("proof search: %s after %d nodes", result.kind, search.nodes)
    return result


def implied_equalities(lf: LayeredFormula, E: Iterable[Equality] = (),
                       budget: Optional[int] = None) -> List[Tuple[Equality, Proof]]:
    """
    Equalities on the free variables derivable from E, each with its proof.

    Hypotheses themselves are not reported.
    """
    E = _unique(E)
    search = _search(lf, budget, 1)
    result = search.search(0, E, absorb=True)
    if result.kind == CONTRADICTION:
        LOG.warning("hypotheses %s admit no tuple of the relation", [str(e) for e in E])
    free = set(lf.free)
    found = []
    for i, step in enumerate(result.steps):
        if step.eq is None or not step.eq.variables <= free or step.eq in E:
            continue
        prefix = tuple(result.steps[:i + 1])
        proof = ZeroProof(prefix) if lf.k == 0 else KProof(EQUALITY_MODE, prefix)
        found.append((step.eq, proof))
    return found


def decide_sigma(f: QEFormula, budget: Optional[int] = None,
                 workers: Optional[int] = None) -> Tuple[TruthValue, Optional[Proof]]:
    """
    Decide a Γ-shaped sentence by proof search.

    Returns:
        (truth value, certificate); FALSE comes with a proof of a contradiction
    """
    if not f.is_sentence:
        raise FormulaError(ERROR_MESSAGES['not_sentence'].format(free=f.free))
    lf = layer_formula(f)
    search = _search(lf, budget, workers)
    try:
        result = search.search(0, ())
    except BudgetExhaustedError as exc:
        LOG.info("proof search exhausted after %d nodes", search.nodes)
        return TruthValue(Outcome.EXHAUSTED, exc.stats), None
    stats = {'nodes': search.nodes}
    if result.kind == CONTRADICTION:
        return TruthValue.of(False, stats), result.proof
    return TruthValue.of(True, stats), None
