"""
Prenex formulas whose matrix is a CNF over equality atoms.

Every constraint language handled by the toolkit is normalized into this one
representation: I(x,y,z) is the clause (x!=y | y=z), a unit equality is a
one-literal clause, x=y | u=v a two-literal positive clause.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from core.errors import FormulaError

LOG = logging.getLogger(__name__)

Variable = int


class Quantifier(Enum):
    FORALL = 'forall'
    EXISTS = 'exists'

    @property
    def symbol(self) -> str:
        return '∀' if self is Quantifier.FORALL else '∃'

    def flip(self) -> 'Quantifier':
        return Quantifier.EXISTS if self is Quantifier.FORALL else Quantifier.FORALL


FORALL = Quantifier.FORALL
EXISTS = Quantifier.EXISTS


@dataclass(frozen=True, order=True)
class Atom:
    """Unordered pair of distinct variables, stored with a < b."""
    a: Variable
    b: Variable

    def __post_init__(self):
        if self.a >= self.b:
            raise FormulaError(f"atom needs a < b, got {self.a},{self.b}")

    @classmethod
    def of(cls, x: Variable, y: Variable) -> 'Atom':
        if x == y:
            raise FormulaError(f"atom over a single variable {x}")
        return cls(min(x, y), max(x, y))

    def holds(self, kernel: Sequence[int]) -> bool:
        """True when both variables share a class of the kernel."""
        return kernel[self.a - 1] == kernel[self.b - 1]


@dataclass(frozen=True)
class Literal:
    atom: Atom
    positive: bool

    @classmethod
    def eq(cls, x: Variable, y: Variable) -> 'Literal':
        return cls(Atom.of(x, y), True)

    @classmethod
    def neq(cls, x: Variable, y: Variable) -> 'Literal':
        return cls(Atom.of(x, y), False)

    @property
    def variables(self) -> Tuple[Variable, Variable]:
        return (self.atom.a, self.atom.b)

    def negate(self) -> 'Literal':
        return Literal(self.atom, not self.positive)

    def holds(self, kernel: Sequence[int]) -> bool:
        return self.atom.holds(kernel) == self.positive

    def __str__(self) -> str:
        return f"{self.atom.a}{'=' if self.positive else '!='}{self.atom.b}"


RawLiteral = Tuple[Variable, Variable, bool]


@dataclass(frozen=True)
class Clause:
    """
    Disjunction of literals, in the order they were written.

    The empty clause is false under every kernel; it arises when all
    literals of a clause were x!=x.
    """
    literals: Tuple[Literal, ...]

    @classmethod
    def build(cls, raw: Iterable[RawLiteral], warn: bool = True) -> Optional['Clause']:
        """
        Simplify raw literals into a clause.

        Args:
            raw: Triples (x, y, positive)
            warn: Log dropped tautologies

        Returns:
            The clause, or None when it is a tautology
        """
        seen: Dict[Literal, None] = {}
        for x, y, positive in raw:
            if x == y:
                if positive:
                    if warn:
                        LOG.warning("dropping tautological clause containing %d=%d", x, x)
                    return None
                continue
            literal = Literal(Atom.of(x, y), positive)
            if literal.negate() in seen:
                if warn:
                    LOG.warning("dropping tautological clause containing both polarities of %s", literal.atom)
                return None
            seen.setdefault(literal, None)
        return cls(tuple(seen))

    @classmethod
    def of(cls, *literals: Literal) -> 'Clause':
        """Clause from literals that are already known not to form a tautology."""
        clause = cls.build(((l.atom.a, l.atom.b, l.positive) for l in literals), warn=False)
        if clause is None:
            raise FormulaError("clause is a tautology")
        return clause

    @property
    def variables(self) -> Tuple[Variable, ...]:
        found: Dict[Variable, None] = {}
        for literal in self.literals:
            found.setdefault(literal.atom.a, None)
            found.setdefault(literal.atom.b, None)
        return tuple(found)

    @property
    def positives(self) -> Tuple[Literal, ...]:
        return tuple(l for l in self.literals if l.positive)

    @property
    def negatives(self) -> Tuple[Literal, ...]:
        return tuple(l for l in self.literals if not l.positive)

    @property
    def is_empty(self) -> bool:
        return not self.literals

    @property
    def is_horn(self) -> bool:
        return len(self.positives) <= 1

    @property
    def is_positive(self) -> bool:
        return bool(self.literals) and not self.negatives

    @property
    def is_negative_shape(self) -> bool:
        """A unit equality or a nonempty all-negative clause."""
        if not self.literals:
            return False
        return not self.positives or (len(self.literals) == 1)

    @property
    def is_gamma_shape(self) -> bool:
        """x=y, or x=y -> u=v written as (x!=y | u=v)."""
        if len(self.literals) == 1:
            return self.literals[0].positive
        return len(self.literals) == 2 and len(self.positives) == 1

    def holds(self, kernel: Sequence[int]) -> bool:
        return any(literal.holds(kernel) for literal in self.literals)

    def rename(self, mapping: Dict[Variable, Variable]) -> Optional['Clause']:
        return Clause.build(
            ((mapping[l.atom.a], mapping[l.atom.b], l.positive) for l in self.literals), warn=False
        )

    def __str__(self) -> str:
        return ' '.join(str(l) for l in self.literals)


@dataclass(frozen=True)
class QEFormula:
    """
    Prenex formula over equality atoms.

    Variables 1..free are free (relation mode); free+1..nvars are bound,
    each exactly once, by the prefix. Names form the symbol table.
    """
    nvars: int
    prefix: Tuple[Tuple[Quantifier, Variable], ...]
    matrix: Tuple[Clause, ...]
    free: int = 0
    names: Dict[Variable, str] = field(default_factory=dict, hash=False)

    def __post_init__(self):
        if self.nvars < 0 or not 0 <= self.free <= self.nvars:
            raise FormulaError(f"bad variable counts nvars={self.nvars} free={self.free}")
        bound = [v for _, v in self.prefix]
        if len(set(bound)) != len(bound):
            duplicates = sorted({v for v in bound if bound.count(v) > 1})
            raise FormulaError(f"variables quantified twice: {duplicates}")
        if set(bound) != set(range(self.free + 1, self.nvars + 1)):
            missing = sorted(set(range(self.free + 1, self.nvars + 1)) - set(bound))
            extra = sorted(set(bound) - set(range(self.free + 1, self.nvars + 1)))
            raise FormulaError(f"prefix mismatch: unquantified {missing}, out of range {extra}")
        for clause in self.matrix:
            for v in clause.variables:
                if v > self.nvars:
                    raise FormulaError(f"variable {v} in clause '{clause}' exceeds nvars={self.nvars}")

    @property
    def is_sentence(self) -> bool:
        return self.free == 0

    @property
    def order(self) -> Tuple[Variable, ...]:
        """Game order: free variables first, then the prefix."""
        return tuple(range(1, self.free + 1)) + tuple(v for _, v in self.prefix)

    def quantifier(self, v: Variable) -> Optional[Quantifier]:
        for q, w in self.prefix:
            if w == v:
                return q
        return None

    def blocks(self) -> List[Tuple[Quantifier, Tuple[Variable, ...]]]:
        """Maximal runs of equal quantifiers."""
        runs: List[Tuple[Quantifier, List[Variable]]] = []
        for q, v in self.prefix:
            if runs and runs[-1][0] is q:
                runs[-1][1].append(v)
            else:
                runs.append((q, [v]))
        return [(q, tuple(vs)) for q, vs in runs]

    def name(self, v: Variable) -> str:
        return self.names.get(v, str(v))

    def with_matrix(self, matrix: Sequence[Clause]) -> 'QEFormula':
        return QEFormula(self.nvars, self.prefix, tuple(matrix), self.free, dict(self.names))

    def pretty(self) -> str:
        """Human-readable rendering using symbol-table names."""
        head = ''.join(f"{q.symbol}{self.name(v)}" for q, v in self.prefix)
        body = ' ∧ '.join(
            '(' + ' ∨ '.join(
                f"{self.name(l.atom.a)}{'=' if l.positive else '≠'}{self.name(l.atom.b)}"
                for l in c.literals
            ) + ')' if c.literals else '⊥'
            for c in self.matrix
        )
        return f"{head} {body or '⊤'}".strip()


def sentence(prefix: Sequence[Tuple[Quantifier, Variable]], clauses: Iterable[Iterable[RawLiteral]],
             names: Optional[Dict[Variable, str]] = None, free: int = 0) -> QEFormula:
    """
    Convenience constructor used by tests and generators.

    Args:
        prefix: Quantifier/variable pairs
        clauses: Raw literal triples per clause; tautologies are dropped
        names: Optional symbol table
        free: Number of free variables
    """
    matrix = []
    for raw in clauses:
        clause = Clause.build(raw, warn=False)
        if clause is not None:
            matrix.append(clause)
    nvars = max([v for _, v in prefix] + [free], default=0)
    return QEFormula(nvars, tuple(prefix), tuple(matrix), free, dict(names or {}))


def eval_matrix(matrix: Iterable[Clause], kernel: Sequence[int]) -> bool:
    """
    Evaluate a CNF matrix under a kernel.

    Args:
        matrix: Clauses over variables 1..len(kernel)
        kernel: Partition of the variables

    Returns:
        True iff every clause has a satisfied literal
    """
    size = len(kernel)
    for clause in matrix:
        for v in clause.variables:
            if v > size:
                raise FormulaError(f"variable {v} outside a kernel over {size} variables")
        if not clause.holds(kernel):
            return False
    return True


def is_horn_matrix(matrix: Iterable[Clause]) -> bool:
    return all(clause.is_horn for clause in matrix)
