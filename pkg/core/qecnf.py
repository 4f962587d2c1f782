"""
Reading and writing the QECNF and relation text formats.

QECNF::

    # comment
    qecnf <nvars>
    forall 1 2
    exists 3
    name 3 y1
    c 1=3 2!=3

Relation::

    rel <arity>
    p 0 0 1            (explicit kernels) or
    exists 3           (optional prefix over variables above the arity)
    c 1!=3 3=2         (clauses over 1..arity and the bound variables)
"""

import re
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple

from core.errors import FormatError, FormulaError
from core.formula import Clause, QEFormula, Quantifier
from core.partitions import Partition, is_canonical

_LITERAL = re.compile(r'^(\d+)(=|!=)(\d+)$')
_TOKEN = re.compile(r'\S+')

QUANTIFIER_WORDS = {'forall': Quantifier.FORALL, 'exists': Quantifier.EXISTS}


@dataclass(frozen=True)
class RelationSource:
    """A parsed relation file: either a defining formula or explicit kernels."""
    arity: int
    formula: Optional[QEFormula] = None
    kernels: Optional[FrozenSet[Partition]] = None


def token_lines(text: str) -> Iterator[Tuple[int, List[Tuple[int, str]]]]:
    """Yield (line number, [(column, token), ...]) for non-comment lines."""
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith('#'):
            continue
        yield number, [(m.start() + 1, m.group()) for m in _TOKEN.finditer(line)]


def read_natural(token: str, line: int, column: int, what: str) -> int:
    if not token.isdigit():
        raise FormatError(f"expected {what}, got '{token}'", line, column)
    return int(token)


class _Reader:
    """Shared state for the body of a QECNF or relation file."""

    def __init__(self, text: str, limit: Optional[int], free: int):
        self.text = text
        self.limit = limit
        self.free = free
        self.prefix: List[Tuple[Quantifier, int]] = []
        self.clauses: List[Clause] = []
        self.kernels: List[Partition] = []
        self.names: Dict[int, str] = {}
        self.clause_lines: Dict[int, int] = {}

    def variable(self, token: str, line: int, column: int) -> int:
        v = read_natural(token, line, column, "a variable index")
        if v < 1 or (self.limit is not None and v > self.limit):
            raise FormatError(f"variable {v} out of range", line, column)
        return v

    def prefix_line(self, word: str, rest, line: int):
        if self.clauses or self.kernels:
            raise FormatError("prefix lines must precede clause lines", line, 1)
        if not rest:
            raise FormatError(f"empty {word} line", line, 1)
        bound = {v for _, v in self.prefix}
        for column, token in rest:
            v = self.variable(token, line, column)
            if v in bound:
                raise FormatError(f"variable {v} quantified twice", line, column)
            if v <= self.free:
                raise FormatError(f"variable {v} is free and cannot be quantified", line, column)
            bound.add(v)
            self.prefix.append((QUANTIFIER_WORDS[word], v))

    def name_line(self, rest, line: int):
        if len(rest) < 2:
            raise FormatError("name line needs a variable and a string", line, 1)
        column, token = rest[0]
        v = self.variable(token, line, column)
        start = rest[1][0] - 1
        self.names[v] = self.text.splitlines()[line - 1][start:].rstrip()

    def clause_line(self, rest, line: int):
        raw = []
        for column, token in rest:
            match = _LITERAL.match(token)
            if not match:
                raise FormatError(f"malformed literal '{token}'", line, column)
            a = self.variable(match.group(1), line, column)
            b = self.variable(match.group(3), line, column)
            raw.append((a, b, match.group(2) == '='))
        clause = Clause.build(raw)
        if clause is not None:
            self.clause_lines[len(self.clauses)] = line
            self.clauses.append(clause)

    def partition_line(self, rest, line: int, arity: int):
        values = tuple(read_natural(token, line, column, "a class index") for column, token in rest)
        if len(values) != arity or not is_canonical(values):
            raise FormatError(f"'p {' '.join(map(str, values))}' is not a restricted-growth string of length {arity}", line, 1)
        self.kernels.append(values)

    def check_coverage(self, nvars: int):
        bound = {v for _, v in self.prefix}
        for index, clause in enumerate(self.clauses):
            for v in clause.variables:
                if v > self.free and v not in bound:
                    raise FormatError(f"variable {v} in the matrix is missing from the prefix",
                                      self.clause_lines[index], 1)
        missing = sorted(set(range(self.free + 1, nvars + 1)) - bound)
        if missing:
            raise FormatError(f"variables {missing} are never quantified")


def parse_qecnf(text: str) -> QEFormula:
    """
    Parse a QECNF sentence.

    Args:
        text: File contents

    Returns:
        The formula, with tautologies dropped and x!=x literals removed
    """
    lines = token_lines(text)
    header = next(lines, None)
    if header is None:
        raise FormatError("empty input: missing 'qecnf <nvars>' header")
    number, tokens = header
    if len(tokens) != 2 or tokens[0][1] != 'qecnf':
        raise FormatError("expected 'qecnf <nvars>' header", number, 1)
    nvars = read_natural(tokens[1][1], number, tokens[1][0], "a variable count")
    reader = _Reader(text, nvars, 0)
    for number, tokens in lines:
        word, rest = tokens[0][1], tokens[1:]
        if word in QUANTIFIER_WORDS:
            reader.prefix_line(word, rest, number)
        elif word == 'c':
            reader.clause_line(rest, number)
        elif word == 'name':
            reader.name_line(rest, number)
        else:
            raise FormatError(f"unknown line type '{word}'", number, tokens[0][0])
    reader.check_coverage(nvars)
    try:
        return QEFormula(nvars, tuple(reader.prefix), tuple(reader.clauses), 0, reader.names)
    except FormulaError as exc:
        raise FormatError(str(exc)) from exc


def _literal_text(clause: Clause) -> str:
    return ' '.join(['c'] + [str(l) for l in clause.literals])


def _body_lines(f: QEFormula) -> List[str]:
    lines = [f"{q.value} {' '.join(map(str, vs))}" for q, vs in f.blocks()]
    lines += [f"name {v} {f.names[v]}" for v in sorted(f.names)]
    lines += [_literal_text(c) for c in f.matrix]
    return lines


def print_qecnf(f: QEFormula) -> str:
    """Render a sentence; parse_qecnf(print_qecnf(f)) == f."""
    if f.free:
        return print_relation_formula(f)
    return '\n'.join([f"qecnf {f.nvars}"] + _body_lines(f)) + '\n'


def parse_relation(text: str) -> RelationSource:
    """
    Parse a relation file.

    Returns:
        A RelationSource holding the defining formula (free variables
        1..arity) or the explicit kernel list
    """
    lines = token_lines(text)
    header = next(lines, None)
    if header is None:
        raise FormatError("empty input: missing 'rel <arity>' header")
    number, tokens = header
    if len(tokens) != 2 or tokens[0][1] != 'rel':
        raise FormatError("expected 'rel <arity>' header", number, 1)
    arity = read_natural(tokens[1][1], number, tokens[1][0], "an arity")
    if arity < 1:
        raise FormatError("arity must be at least 1", number, tokens[1][0])
    reader = _Reader(text, None, arity)
    for number, tokens in lines:
        word, rest = tokens[0][1], tokens[1:]
        if word == 'p':
            if reader.clauses or reader.prefix:
                raise FormatError("partition lines cannot be mixed with clauses", number, 1)
            reader.partition_line(rest, number, arity)
        elif word in QUANTIFIER_WORDS:
            reader.prefix_line(word, rest, number)
        elif word == 'c':
            if reader.kernels:
                raise FormatError("clause lines cannot be mixed with partitions", number, 1)
            reader.clause_line(rest, number)
        elif word == 'name':
            reader.name_line(rest, number)
        else:
            raise FormatError(f"unknown line type '{word}'", number, tokens[0][0])
    if reader.kernels:
        return RelationSource(arity, kernels=frozenset(reader.kernels))
    nvars = max([arity] + [v for _, v in reader.prefix])
    reader.check_coverage(nvars)
    formula = QEFormula(nvars, tuple(reader.prefix), tuple(reader.clauses), arity, reader.names)
    return RelationSource(arity, formula=formula)


def print_relation_formula(f: QEFormula) -> str:
    """Render a formula with free variables 1..f.free in relation format."""
    return '\n'.join([f"rel {f.free}"] + _body_lines(f)) + '\n'


def print_relation(arity: int, kernels) -> str:
    """Render explicit kernels as 'p' lines in lexicographic order."""
    rows = [f"rel {arity}"] + ['p ' + ' '.join(map(str, k)) for k in sorted(kernels)]
    return '\n'.join(rows) + '\n'
