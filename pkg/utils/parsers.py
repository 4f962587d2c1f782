"""
Readers for the reduction source formats.

QDIMACS subset (QBF)::

    p cnf 4 2
    e 1 0
    a 2 0
    1 -2 3 0

DIMACS CNF for MON-3-SAT, the ``nae`` format for quantified NAE-3-SAT::

    e 1 2 0
    a 3 0
    nae 1 2 3

and the ``bcsp`` format for Boolean constraints::

    bcsp 3
    neq 1 2
    disj 1 2 3
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from core.errors import FormatError, ShapeError
from core.formula import EXISTS, FORALL, Quantifier
from core.qecnf import read_natural, token_lines
from core.reductions import QBF, BoolCSP, MonotoneCNF, QNAEInstance

LOG = logging.getLogger(__name__)

PREFIX_WORDS = {'e': EXISTS, 'a': FORALL}


@dataclass
class CnfText:
    """Problem line, prefix blocks and 0-terminated clauses of a (Q)DIMACS file."""
    nvars: int = 0
    nclauses: int = 0
    blocks: List[Tuple[Quantifier, List[int]]] = field(default_factory=list)
    clauses: List[List[int]] = field(default_factory=list)
    positions: List[Tuple[int, int]] = field(default_factory=list)


def _integer(token: str, line: int, column: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise FormatError(f"expected an integer, got '{token}'", line, column) from None


def _terminated(tokens, line: int) -> List[int]:
    values = [_integer(token, line, column) for column, token in tokens]
    if not values or values[-1] != 0:
        raise FormatError("line must end with 0", line, tokens[-1][0] if tokens else 1)
    if 0 in values[:-1]:
        raise FormatError("0 inside a clause", line)
    return values[:-1]


def read_cnf(text: str, quantified: bool) -> CnfText:
    """
    Tokenize DIMACS or QDIMACS text.

    Args:
        text: File contents
        quantified: Accept 'a'/'e' prefix lines

    Returns:
        The raw CnfText; literals are checked against the problem line
    """
    cnf = CnfText()
    seen_problem = False
    for number, tokens in token_lines(text):
        head = tokens[0][1]
        if head == 'c':
            continue
        if head == 'p':
            if seen_problem:
                raise FormatError("duplicate problem line", number)
            if len(tokens) != 4 or tokens[1][1] != 'cnf':
                raise FormatError("expected 'p cnf <vars> <clauses>'", number)
            cnf.nvars = read_natural(tokens[2][1], number, tokens[2][0], "variable count")
            cnf.nclauses = read_natural(tokens[3][1], number, tokens[3][0], "clause count")
            seen_problem = True
            continue
        if not seen_problem:
            raise FormatError("clause or prefix before the problem line", number, tokens[0][0])
        if head in PREFIX_WORDS:
            if not quantified:
                raise FormatError(f"prefix line '{head}' in a plain CNF file", number, tokens[0][0])
            if cnf.clauses:
                raise FormatError("prefix line after the first clause", number, tokens[0][0])
            variables = _terminated(tokens[1:], number)
            for v in variables:
                if not 1 <= v <= cnf.nvars:
                    raise FormatError(f"variable {v} outside 1..{cnf.nvars}", number)
            cnf.blocks.append((PREFIX_WORDS[head], variables))
            continue
        clause = _terminated(tokens, number)
        for literal in clause:
            if abs(literal) > cnf.nvars:
                raise FormatError(f"literal {literal} outside 1..{cnf.nvars}", number)
        cnf.clauses.append(clause)
        cnf.positions.append((number, tokens[0][0]))
    if not seen_problem:
        raise FormatError("missing 'p cnf' problem line")
    if len(cnf.clauses) != cnf.nclauses:
        LOG.warning("problem line announces %d clauses, file has %d", cnf.nclauses, len(cnf.clauses))
    return cnf


def _three(clause: List[int], position: Tuple[int, int]) -> Tuple[int, int, int]:
    if not clause:
        raise FormatError("empty clause", *position)
    if len(clause) > 3:
        raise FormatError(f"clause has {len(clause)} literals, at most 3 are supported", *position)
    padded = clause + [clause[-1]] * (3 - len(clause))
    return tuple(padded)


def _alternate(order: Sequence[Tuple[Quantifier, int]]) -> Tuple[Dict[int, int], int, int]:
    """
    Place variables on the strict ∃x∀y grid, inserting dummies where two
    neighbours share a quantifier. Returns (old -> new index, n, dummies).
    """
    mapping: Dict[int, int] = {}
    position = 0
    dummies = 0
    for q, v in order:
        expected = EXISTS if position % 2 == 0 else FORALL
        if q is not expected:
            position += 1
            dummies += 1
        position += 1
        mapping[v] = position
    if position == 0:
        position, dummies = 2, 2
    elif position % 2:
        position += 1
        dummies += 1
    return mapping, position // 2, dummies


def parse_qdimacs(text: str) -> Tuple[QBF, List[str]]:
    """
    Read a QBF and bring it into the ∃x1∀y1…∃xn∀yn shape.

    Unquantified variables are existential and outermost. Short clauses are
    padded by repeating a literal.

    Returns:
        The QBF and notes describing every normalisation applied
    """
    cnf = read_cnf(text, quantified=True)
    notes: List[str] = []
    quantified = [v for _, vs in cnf.blocks for v in vs]
    if len(set(quantified)) != len(quantified):
        raise FormatError("variable quantified twice")
    used = sorted({abs(l) for clause in cnf.clauses for l in clause})
    free = [v for v in used if v not in set(quantified)]
    if free:
        notes.append(f"free variables {free} read as outermost existentials")
    order = [(EXISTS, v) for v in free] + [(q, v) for q, vs in cnf.blocks for v in vs]
    mapping, n, dummies = _alternate(order)
    if dummies:
        notes.append(f"prefix padded with {dummies} dummy variables")
        LOG.warning("QDIMACS prefix normalised with %d dummy variables", dummies)
    clauses = []
    for clause, position in zip(cnf.clauses, cnf.positions):
        if len(clause) < 3:
            notes.append(f"clause at line {position[0]} padded to 3 literals")
        clauses.append(tuple((1 if l > 0 else -1) * mapping[abs(l)] for l in _three(clause, position)))
    return QBF(n, tuple(clauses)), notes


def parse_dimacs_monotone(text: str) -> MonotoneCNF:
    """Read a monotone 3-CNF; mixed-polarity clauses raise ShapeError."""
    cnf = read_cnf(text, quantified=False)
    clauses = [_three(clause, position) for clause, position in zip(cnf.clauses, cnf.positions)]
    return MonotoneCNF.from_clauses(cnf.nvars, clauses)


def parse_qnae(text: str) -> QNAEInstance:
    """Read 'a'/'e' prefix lines (0 terminator optional) and 'nae a b c' lines."""
    prefix: List[Tuple[Quantifier, int]] = []
    constraints: List[Tuple[int, int, int]] = []
    for number, tokens in token_lines(text):
        head = tokens[0][1]
        if head in PREFIX_WORDS:
            if constraints:
                raise FormatError("prefix line after the first constraint", number, tokens[0][0])
            rest = tokens[1:]
            if rest and rest[-1][1] == '0':
                rest = rest[:-1]
            for column, token in rest:
                prefix.append((PREFIX_WORDS[head], read_natural(token, number, column, "variable")))
        elif head == 'nae':
            if len(tokens) != 4:
                raise FormatError("expected 'nae <a> <b> <c>'", number, tokens[0][0])
            constraints.append(tuple(read_natural(token, number, column, "variable")
                                     for column, token in tokens[1:]))
        else:
            raise FormatError(f"unknown line '{head}'", number, tokens[0][0])
    variables = [v for _, v in prefix]
    if len(set(variables)) != len(variables):
        raise FormatError("variable quantified twice")
    if sorted(variables) != list(range(1, len(variables) + 1)):
        raise FormatError(f"prefix variables must be exactly 1..{len(variables)}")
    for h, triple in enumerate(constraints, start=1):
        for v in triple:
            if not 1 <= v <= len(variables):
                raise ShapeError(f"NAE constraint {h} uses unquantified variable {v}")
    return QNAEInstance(tuple(prefix), tuple(constraints))


BCSP_ARITY = {'neq': 2, 'disj': 3}


def parse_bcsp(text: str) -> BoolCSP:
    """Read a 'bcsp <n>' header followed by 'neq x y' and 'disj x y z' lines."""
    n: Optional[int] = None
    constraints = []
    for number, tokens in token_lines(text):
        head = tokens[0][1]
        if head == 'bcsp':
            if n is not None or len(tokens) != 2:
                raise FormatError("expected a single 'bcsp <n>' header", number, tokens[0][0])
            n = read_natural(tokens[1][1], number, tokens[1][0], "variable count")
            continue
        if n is None:
            raise FormatError("constraint before the 'bcsp' header", number, tokens[0][0])
        if head not in BCSP_ARITY:
            raise FormatError(f"unknown constraint '{head}'", number, tokens[0][0])
        if len(tokens) != BCSP_ARITY[head] + 1:
            raise FormatError(f"'{head}' takes {BCSP_ARITY[head]} variables", number, tokens[0][0])
        args = tuple(read_natural(token, number, column, "variable") for column, token in tokens[1:])
        for (column, _), a in zip(tokens[1:], args):
            if not 1 <= a <= n:
                raise FormatError(f"variable {a} outside 1..{n}", number, column)
        constraints.append((head, args))
    if n is None:
        raise FormatError("missing 'bcsp <n>' header")
    return BoolCSP(n, tuple(constraints))
