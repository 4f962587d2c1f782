"""
Gadget building blocks shared by the reduction generators.

A GadgetBuilder collects named variables, their quantifiers, their gadget
roles and the emitted clauses, then renumbers everything so that variable
indices follow the prefix.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from core.errors import FormulaError, ShapeError
from core.formula import EXISTS, Clause, QEFormula, Quantifier, RawLiteral

LOG = logging.getLogger(__name__)

# predicate on a variable pair: (a, b, positive)
Predicate = Tuple[int, int, bool]


@dataclass(frozen=True)
class GadgetReport:
    """Role of every variable in a generated formula, keyed by variable index."""
    roles: Dict[int, str] = field(default_factory=dict, hash=False)
    names: Dict[int, str] = field(default_factory=dict, hash=False)
    notes: Tuple[str, ...] = ()

    def lines(self) -> List[str]:
        rows = [f"# {note}" for note in self.notes]
        rows += [f"role {v} {self.names.get(v, v)} {self.roles[v]}" for v in sorted(self.roles)]
        return rows

    def by_name(self, name: str) -> Optional[int]:
        for v, n in self.names.items():
            if n == name:
                return v
        return None


class GadgetBuilder:
    """Accumulates variables and clauses under stable, role-derived names."""

    def __init__(self):
        self.index: Dict[str, int] = {}
        self.roles: Dict[int, str] = {}
        self.quantifiers: Dict[int, Quantifier] = {}
        self.order: List[int] = []
        self.clauses: List[Clause] = []
        self.notes: List[str] = []

    def var(self, name: str, role: Optional[str] = None) -> int:
        """Variable called `name`, created on first use."""
        if name not in self.index:
            self.index[name] = len(self.index) + 1
            self.roles[self.index[name]] = role or name
        return self.index[name]

    def fresh(self, name: str, role: str, quantifier: Quantifier = EXISTS) -> int:
        """New innermost variable; the name must not exist yet."""
        if name in self.index:
            raise FormulaError(f"gadget variable '{name}' created twice")
        v = self.var(name, role)
        self.bind(quantifier, v)
        return v

    def bind(self, quantifier: Quantifier, *variables: int):
        for v in variables:
            if v in self.quantifiers:
                raise FormulaError(f"gadget variable {v} bound twice")
            self.quantifiers[v] = quantifier
            self.order.append(v)

    def add(self, raw: Sequence[RawLiteral]) -> Optional[Clause]:
        clause = Clause.build(raw, warn=False)
        if clause is not None:
            self.clauses.append(clause)
        return clause

    def edge(self, a: int, label: int, b: int) -> Optional[Clause]:
        """Edge a --label--> b, i.e. I(a, label, b) = (a!=label | label=b)."""
        return self.add([(a, label, False), (label, b, True)])

    def name_of(self, v: int) -> str:
        for name, index in self.index.items():
            if index == v:
                return name
        raise FormulaError(f"unknown gadget variable {v}")

    def build(self, free: Sequence[int] = (), notes: Sequence[str] = ()) -> Tuple[QEFormula, GadgetReport]:
        """
        Renumber so that free variables come first, then the prefix in order.

        Args:
            free: Variables left free, in the order they become 1..m
            notes: Extra provenance lines for the report
        """
        sequence = list(free) + [v for v in self.order if v not in free]
        unbound = set(self.index.values()) - set(sequence)
        if unbound:
            raise FormulaError(f"gadget variables never quantified: {sorted(self.name_of(v) for v in unbound)}")
        mapping = {old: new for new, old in enumerate(sequence, start=1)}
        prefix = tuple((self.quantifiers[v], mapping[v]) for v in sequence[len(free):])
        matrix = tuple(c.rename(mapping) for c in self.clauses)
        names = {mapping[v]: name for name, v in self.index.items()}
        roles = {mapping[v]: role for v, role in self.roles.items()}
        formula = QEFormula(len(sequence), prefix, matrix, len(free), names)
        return formula, GadgetReport(roles, dict(names), tuple(self.notes) + tuple(notes))


def build_chain_gadget(i: int, n: int, g: GadgetBuilder) -> List[int]:
    """
    Chain gadget C_i over the block variables already registered in `g`.

    The top path leaves f (i = 0) or x_i^0 (i >= 1) through parallel edge pairs
    labelled y_j^1, y_j^0 for j = max(i,1)..n, then single edges x_j^1 for
    j = i+1..n. The bottom path leaves t through x_j^0 for j = i+1..n and a
    final z edge into the meeting vertex.

    Returns:
        The fresh vertices, in creation order
    """
    if not 0 <= i <= n:
        raise FormulaError(f"chain gadget index {i} outside 0..{n}")
    tag = f"C{i}"
    fresh: List[int] = []
    counter = itertools.count(1)

    def vertex() -> int:
        k = next(counter)
        v = g.fresh(f"{tag}.v{k}", f"{tag} chain vertex {k}")
        fresh.append(v)
        return v

    t, z = g.index['t'], g.index['z']
    current = g.index['f'] if i == 0 else g.index[f"x{i}^0"]
    for j in range(max(i, 1), n + 1):
        nxt = vertex()
        g.edge(current, g.index[f"y{j}^1"], nxt)
        g.edge(current, g.index[f"y{j}^0"], nxt)
        current = nxt
    for j in range(i + 1, n + 1):
        nxt = vertex()
        g.edge(current, g.index[f"x{j}^1"], nxt)
        current = nxt
    meet = current
    bottom = t
    for j in range(i + 1, n + 1):
        nxt = vertex()
        g.edge(bottom, g.index[f"x{j}^0"], nxt)
        bottom = nxt
    g.edge(bottom, z, meet)
    return fresh


def literal_label(literal: int, names: Dict[int, str]) -> str:
    """λ(u) = u^0 for a positive literal, u^1 for a negated one."""
    return f"{names[abs(literal)]}^{0 if literal > 0 else 1}"


def build_clause_paths(clauses: Sequence[Sequence[int]], names: Dict[int, str], g: GadgetBuilder) -> List[int]:
    """
    One t-to-z path of length 3 per propositional clause.

    Args:
        clauses: Signed-literal triples
        names: Propositional variable -> block name (x1, y1, ...)
        g: Builder holding t, z and the u^0/u^1 variables

    Returns:
        The fresh path vertices
    """
    fresh: List[int] = []
    t, z = g.index['t'], g.index['z']
    for h, clause in enumerate(clauses, start=1):
        if len(clause) != 3:
            raise ShapeError(f"clause {h} has {len(clause)} literals, expected 3")
        p1 = g.fresh(f"F{h}.p1", f"F path clause {h} vertex 1")
        p2 = g.fresh(f"F{h}.p2", f"F path clause {h} vertex 2")
        labels = [g.index[literal_label(l, names)] for l in clause]
        g.edge(t, labels[0], p1)
        g.edge(p1, labels[1], p2)
        g.edge(p2, labels[2], z)
        fresh += [p1, p2]
    return fresh


def or_chain(predicates: Sequence[Predicate], g: GadgetBuilder, tag: str) -> List[int]:
    """
    Define P_1 | ... | P_m with clauses of the form x=y | u=v and u!=v.

    A disequality u!=v is first turned into u=v' with v!=v' for a fresh v'.
    The chain is (P_i | y_i=y_(i+1)) for i=1..m plus y_1 != y_(m+1).

    Returns:
        The fresh existential variables
    """
    if not predicates:
        raise ShapeError("or_chain needs at least one predicate")
    fresh: List[int] = []
    rewritten: List[Tuple[int, int]] = []
    for k, (a, b, positive) in enumerate(predicates, start=1):
        if positive:
            rewritten.append((a, b))
            continue
        prime = g.fresh(f"{tag}.w{k}", f"{tag} disequality witness {k}")
        fresh.append(prime)
        g.add([(b, prime, False)])
        rewritten.append((a, prime))
    links = [g.fresh(f"{tag}.y{k}", f"{tag} chain link {k}") for k in range(1, len(rewritten) + 2)]
    fresh += links
    for k, (a, b) in enumerate(rewritten):
        g.add([(a, b, True), (links[k], links[k + 1], True)])
    g.add([(links[0], links[-1], False)])
    return fresh


# NAE as a DNF over the three pair atoms: every sign pattern but all-equal
NAE_TERMS = tuple(
    tuple(zip((0, 1, 2), signs))
    for signs in itertools.product((True, False), repeat=3)
    if len(set(signs)) > 1
)


def nae_cnf() -> List[FrozenSet[Tuple[int, bool]]]:
    """
    CNF of the NAE DNF over pair indices 0..2 by full distribution.

    Clauses with complementary literals are dropped, duplicates merged and
    subsumed clauses removed.
    """
    raw = {frozenset(choice) for choice in itertools.product(*NAE_TERMS)}
    consistent = [c for c in raw if not any((atom, not sign) in c for atom, sign in c)]
    minimal = []
    for clause in sorted(consistent, key=lambda c: (len(c), sorted(c))):
        if not any(kept <= clause for kept in minimal):
            minimal.append(clause)
    return minimal


def nae_gadget(x: int, x2: int, y: int, y2: int, z: int, z2: int, g: GadgetBuilder,
               tag: str, shared: bool = False) -> List[int]:
    """
    NAE of three pair-encoded Booleans (v = v' means true).

    Args:
        x, x2, y, y2, z, z2: The three pairs
        g: Builder receiving the clauses
        tag: Prefix for fresh variable names
        shared: Allow repeated pairs (NAE(v, v, w)); each pair stays two variables

    Returns:
        Fresh existential variables of the or-chains
    """
    pairs = ((x, x2), (y, y2), (z, z2))
    if shared:
        if any(a == b for a, b in pairs):
            raise ShapeError("each NAE pair needs two distinct variables")
    elif len({x, x2, y, y2, z, z2}) != 6:
        raise ShapeError("nae_gadget needs six distinct variables")
    fresh: List[int] = []
    for number, clause in enumerate(nae_cnf(), start=1):
        predicates = [(pairs[atom][0], pairs[atom][1], sign) for atom, sign in sorted(clause)]
        fresh += or_chain(predicates, g, f"{tag}.c{number}")
    return fresh
