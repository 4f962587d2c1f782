"""
Fragment membership of equality relations and the complexity verdicts.

A relation r is definable in a clause fragment iff the relation of all
fragment clauses implied by r is r itself. Clauses are handled as pairs of
bitmasks (positive atoms, negative atoms) over the atoms i<j of [m].
"""

import itertools
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from config.settings import SETTINGS, ERROR_MESSAGES, VERDICT_MODES
from core.errors import CapExceededError, FormulaError, ShapeError
from core.formula import Clause
from core.partitions import Partition, enumerate_partitions
from core.relations import Relation
from utils.helpers import verdicts_path

LOG = logging.getLogger(__name__)

SHAPES = ('negative', 'positive', 'horn')

Mask = Tuple[int, int]


def atoms(m: int) -> List[Tuple[int, int]]:
    """Atoms i<j over [m], in bit order."""
    return list(itertools.combinations(range(1, m + 1), 2))


def _check_arity(m: int):
    cap = SETTINGS['classify_arity_cap']
    if m > cap:
        raise CapExceededError(ERROR_MESSAGES['arity_cap'].format(m=m, cap=cap))


def eq_mask(kernel: Sequence[int], m: int) -> int:
    """Bitmask of the atoms true under a kernel."""
    mask = 0
    for bit, (i, j) in enumerate(atoms(m)):
        if kernel[i - 1] == kernel[j - 1]:
            mask |= 1 << bit
    return mask


def _satisfies(mask: Mask, eq: int, full: int) -> bool:
    pos, neg = mask
    return bool(pos & eq) or bool(neg & ~eq & full)


def _to_clause(mask: Mask, m: int) -> Clause:
    pos, neg = mask
    raw = [(i, j, False) for bit, (i, j) in enumerate(atoms(m)) if neg >> bit & 1]
    raw += [(i, j, True) for bit, (i, j) in enumerate(atoms(m)) if pos >> bit & 1]
    return Clause.build(raw, warn=False)


def _to_mask(clause: Clause, m: int) -> Mask:
    bits = {pair: bit for bit, pair in enumerate(atoms(m))}
    pos = neg = 0
    for literal in clause.literals:
        pair = literal.variables
        if pair not in bits:
            raise FormulaError(f"literal {literal} outside arity {m}")
        if literal.positive:
            pos |= 1 << bits[pair]
        else:
            neg |= 1 << bits[pair]
    return pos, neg


def _single_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low
        mask ^= low


def _exhaustive(shape: str, count: int) -> Iterator[Mask]:
    full = (1 << count) - 1
    if shape == 'positive':
        yield from ((pos, 0) for pos in range(1, full + 1))
    elif shape == 'negative':
        yield from ((1 << bit, 0) for bit in range(count))
        yield from ((0, neg) for neg in range(1, full + 1))
    else:
        for neg in range(full + 1):
            if neg:
                yield 0, neg
            yield from ((pos, neg) for pos in _single_bits(full & ~neg))


def _canonical(shape: str, members: List[int], bodies: List[int], full: int) -> Iterator[Mask]:
    """
    One clause per partition of [m]: every implied clause of the shape is
    equivalent over kernels to, or weaker than, one of these.
    """
    if shape == 'positive':
        for eq in bodies:
            pos = full & ~eq
            if pos and all(other & pos for other in members):
                yield pos, 0
        return
    if shape == 'negative':
        common = full
        for other in members:
            common &= other
        yield from ((bit, 0) for bit in _single_bits(common))
        for eq in bodies:
            if eq and not any(eq & other == eq for other in members):
                yield 0, eq
        return
    for eq in bodies:
        support = [other for other in members if eq & other == eq]
        if not support and eq:
            yield 0, eq
            continue
        common = full
        for other in support:
            common &= other
        yield from ((bit, eq) for bit in _single_bits(common & ~eq))


def implied_clauses(r: Relation, shape: str, exhaustive: bool = False) -> Set[Clause]:
    """
    Clauses of a fragment shape satisfied by every kernel of r.

    Args:
        r: The relation
        shape: 'negative' (unit equalities and all-negative clauses), 'positive'
            or 'horn' (at most one positive literal)
        exhaustive: Enumerate every clause of the shape; otherwise only bodies
            that are kernels, which yields the same closure

    Returns:
        The implied clauses
    """
    if shape not in SHAPES:
        raise ShapeError(f"unknown fragment '{shape}', expected one of {', '.join(SHAPES)}")
    m = r.arity
    _check_arity(m)
    count = m * (m - 1) // 2
    full = (1 << count) - 1
    members = [eq_mask(k, m) for k in r.sorted_kernels()]
    if exhaustive:
        masks = (mask for mask in _exhaustive(shape, count)
                 if all(_satisfies(mask, eq, full) for eq in members))
    else:
        bodies = [eq_mask(k, m) for k in enumerate_partitions(m, cap=SETTINGS['classify_arity_cap'])]
        masks = _canonical(shape, members, bodies, full)
    return {_to_clause(mask, m) for mask in masks}


def minimize_clauses(clauses: Iterable[Clause], m: Optional[int] = None) -> List[Clause]:
    """
    Drop every clause whose literals contain another clause's literals.

    Returns:
        Surviving clauses, shortest first
    """
    clauses = list(clauses)
    if m is None:
        m = max((v for c in clauses for v in c.variables), default=1)
    masked = sorted(((_to_mask(c, m), c) for c in clauses),
                    key=lambda item: (len(item[1].literals), item[0]))
    kept: List[Tuple[Mask, Clause]] = []
    for (pos, neg), clause in masked:
        if any(kp & pos == kp and kn & neg == kn for (kp, kn), _ in kept):
            continue
        kept.append(((pos, neg), clause))
    return [clause for _, clause in kept]


def closure_relation(clauses: Iterable[Clause], m: int) -> Relation:
    """Relation of all kernels of [m] satisfying every clause."""
    _check_arity(m)
    full = (1 << (m * (m - 1) // 2)) - 1
    masks = [_to_mask(c, m) for c in clauses]
    kernels = [k for k in enumerate_partitions(m, cap=SETTINGS['classify_arity_cap'])
               if all(_satisfies(mask, eq_mask(k, m), full) for mask in masks)]
    return Relation(m, frozenset(kernels))


@dataclass(frozen=True)
class FragmentReport:
    """Per-shape definability of one relation, with witness or separating kernel."""
    arity: int
    flags: Dict[str, bool] = field(hash=False)
    witnesses: Dict[str, Tuple[Clause, ...]] = field(hash=False)
    separators: Dict[str, Partition] = field(hash=False)

    @property
    def is_negative(self) -> bool:
        return self.flags['negative']

    @property
    def is_positive(self) -> bool:
        return self.flags['positive']

    @property
    def is_horn(self) -> bool:
        return self.flags['horn']


def fragment_report(r: Relation) -> FragmentReport:
    flags, witnesses, separators = {}, {}, {}
    for shape in SHAPES:
        implied = implied_clauses(r, shape)
        closure = closure_relation(implied, r.arity)
        extra = sorted(closure.kernels - r.kernels)
        flags[shape] = not extra
        if extra:
            separators[shape] = extra[0]
        else:
            witnesses[shape] = tuple(minimize_clauses(implied, r.arity))
    LOG.info("relation of arity %d with %d kernels: %s", r.arity, len(r), flags)
    if flags['negative'] and not flags['horn']:
        raise AssertionError("negative definability without Horn definability")
    return FragmentReport(r.arity, flags, witnesses, separators)


@dataclass(frozen=True)
class Verdict:
    mode: str
    label: str
    citation: str
    k: Optional[int] = None

    def __str__(self) -> str:
        return self.label


class VerdictTable:
    """Verdict rows per mode, read from data/verdicts.json."""

    def __init__(self, path: Optional[Path] = None):
        path = path or verdicts_path()
        with open(path) as f:
            data = json.load(f)
        self.rows = {mode: data[mode] for mode in VERDICT_MODES}
        self.related = data.get('related', [])

    def lookup(self, negative: bool, positive: bool, horn: bool, mode: str = 'full',
               k: Optional[int] = None) -> Verdict:
        if mode not in self.rows:
            raise ShapeError(f"unknown verdict mode '{mode}'")
        if negative and not horn:
            raise ShapeError("a negative language is always Horn")
        if mode == 'pi_k' and (k is None or k < 2):
            raise ShapeError("pi_k verdicts need k >= 2")
        flags = {'negative': negative, 'positive': positive, 'horn': horn, 'otherwise': True}
        for row in self.rows[mode]:
            if flags[row['when']]:
                label = row['class'].format(k2=(k - 2) if k is not None else '')
                return Verdict(mode, label, row['citation'], k if mode == 'pi_k' else None)
        raise ShapeError(f"verdict table for '{mode}' has no fallback row")


_TABLE: Optional[VerdictTable] = None


def verdict_table() -> VerdictTable:
    global _TABLE
    if _TABLE is None:
        _TABLE = VerdictTable()
    return _TABLE


def verdict_for_flags(negative: bool, positive: bool, horn: bool, mode: str = 'full',
                      k: Optional[int] = None) -> Verdict:
    return verdict_table().lookup(negative, positive, horn, mode, k)


def language_flags(reports: Sequence[FragmentReport]) -> Dict[str, bool]:
    """A language is in a fragment when each of its relations is."""
    return {shape: all(r.flags[shape] for r in reports) for shape in SHAPES}


def classify_language(relations: Sequence[Relation], mode: str = 'full', k: Optional[int] = None) -> Verdict:
    """
    Complexity verdict for the language of the given relations.

    Args:
        relations: Relations of the language (at least one)
        mode: 'full' for unbounded alternation, 'pi_k' for Pi_k sentences
        k: Alternation bound in pi_k mode

    Returns:
        Verdict with its citation
    """
    if not relations:
        raise ShapeError("a language needs at least one relation")
    flags = language_flags([fragment_report(r) for r in relations])
    return verdict_for_flags(flags['negative'], flags['positive'], flags['horn'], mode, k)
