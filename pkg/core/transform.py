"""
Prefix shaping and the exponential Pi_2 normalization.

zeta_pi2 turns ∃y1∀x1…∃yn∀xn M into ∀(x copies)∃(y copies) of the conjunction
of (2n)^n renamed copies of M, one per tuple (a1..an) in [2n]^n: x_i becomes
x_i^{a1..ai} and y_i becomes y_i^{a1..a(i-1)}, with y1 kept.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from config.settings import SETTINGS, ERROR_MESSAGES
from core.errors import CapExceededError, ShapeError
from core.formula import EXISTS, FORALL, Clause, QEFormula, Quantifier

LOG = logging.getLogger(__name__)


@dataclass(frozen=True)
class AlternationProfile:
    blocks: Tuple[Quantifier, ...]

    @property
    def k(self) -> int:
        return len(self.blocks)

    @property
    def leading(self) -> Optional[Quantifier]:
        return self.blocks[0] if self.blocks else None

    def label(self) -> str:
        """Sigma_k / Pi_k label, or Sigma_0 for a quantifier-free formula."""
        if not self.blocks:
            return 'Sigma_0'
        return f"{'Sigma' if self.leading is EXISTS else 'Pi'}_{self.k}"

    def __str__(self) -> str:
        return ''.join(q.symbol for q in self.blocks) or '-'


def alternation_profile(f: QEFormula) -> AlternationProfile:
    """Maximal-block profile of the prefix."""
    return AlternationProfile(tuple(q for q, _ in f.blocks()))


def is_sigma_shaped(f: QEFormula) -> bool:
    """Strictly alternating single-variable blocks ∃∀…∃∀."""
    expected = [EXISTS, FORALL] * (len(f.prefix) // 2)
    return len(f.prefix) % 2 == 0 and [q for q, _ in f.prefix] == expected


def pad_to_sigma_shape(f: QEFormula) -> QEFormula:
    """
    Insert unconstrained dummy variables until the prefix reads ∃∀∃∀…∃∀.

    Dummies are numbered after the existing variables and named d1, d2, ...
    """
    if is_sigma_shaped(f):
        return f
    names = dict(f.names)
    prefix: List[Tuple[Quantifier, int]] = []
    next_var = f.nvars + 1
    dummies = 0
    expected = EXISTS

    def dummy(q: Quantifier):
        nonlocal next_var, dummies
        dummies += 1
        names[next_var] = f"d{dummies}"
        prefix.append((q, next_var))
        next_var += 1

    for q, v in f.prefix:
        if q is not expected:
            dummy(expected)
        prefix.append((q, v))
        expected = q.flip()
    if expected is FORALL:
        dummy(FORALL)
    LOG.debug("padded prefix with %d dummy variables", dummies)
    return QEFormula(next_var - 1, tuple(prefix), f.matrix, f.free, names)


def has_disequalities(f: QEFormula) -> bool:
    """True if some clause carries an x!=y literal; zeta_pi2 preserves truth only without them."""
    return any(clause.negatives for clause in f.matrix)


def zeta_copies(n: int) -> int:
    """Number of matrix copies zeta_pi2 produces for n blocks."""
    return (2 * n) ** n


def zeta_pi2(f: QEFormula, force: bool = False, cap: Optional[int] = None) -> QEFormula:
    """
    Equivalent Pi_2 sentence of a Sigma-shaped sentence.

    Args:
        f: Sentence with prefix ∃y1∀x1…∃yn∀xn (see pad_to_sigma_shape)
        force: Lift the block cap
        cap: Largest n without force (default SETTINGS['zeta_cap'])

    Returns:
        ∀(x copies)∃(y copies) over the (2n)^n renamed matrix copies
    """
    if f.free:
        raise ShapeError("zeta_pi2 needs a sentence")
    if not is_sigma_shaped(f):
        raise ShapeError(f"zeta_pi2 needs a prefix ∃∀…∃∀ of single blocks, got {alternation_profile(f)}")
    n = len(f.prefix) // 2
    cap = SETTINGS['zeta_cap'] if cap is None else cap
    if n > cap:
        if not force:
            raise CapExceededError(ERROR_MESSAGES['zeta_cap'].format(n=n, cap=cap))
        LOG.warning("zeta forced over n=%d blocks: %d matrix copies", n, zeta_copies(n))
    if has_disequalities(f):
        # y copies are not tied to the 2n values, so y≠x can dodge every x copy
        LOG.warning("matrix has != literals; the Pi_2 form may be true where the input is false")
    ys =[v for q, v in f.prefix if q is EXISTS]
    xs = [v for q, v in f.prefix if q is FORALL]
    values = range(1, 2 * n + 1)

    index: Dict[Tuple[str, int, Tuple[int, ...]], int] = {}
    names: Dict[int, str] = {}

    def allocate(kind: str, i: int, tail: Tuple[int, ...]):
        v = len(index) + 1
        index[(kind, i, tail)] = v
        names[v] = f"{kind}{i}" + (f"^{','.join(map(str, tail))}" if tail else '')

    for i in range(1, n + 1):
        for tail in itertools.product(values, repeat=i):
            allocate('x', i, tail)
    for i in range(1, n + 1):
        for tail in itertools.product(values, repeat=i - 1):
            allocate('y', i, tail)

    matrix: List[Clause] = []
    for a in itertools.product(values, repeat=n):
        mapping = {}
        for i in range(1, n + 1):
            mapping[xs[i - 1]] = index[('x', i, a[:i])]
            mapping[ys[i - 1]] = index[('y', i, a[:i - 1])]
        for clause in f.matrix:
            renamed = clause.rename(mapping)
            matrix.append(renamed)
    prefix = tuple((FORALL if kind == 'x' else EXISTS, v) for (kind, _, _), v in index.items())
    LOG.info("zeta over n=%d: %d variables, %d clauses", n, len(index), len(matrix))
    return QEFormula(len(index), prefix, tuple(matrix), 0, names)
