"""
Reduction generators into quantified equality formulas.

Every generator returns the formula together with a GadgetReport naming the
role of each generated variable.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from core.errors import ShapeError
from core.formula import EXISTS, FORALL, QEFormula, Quantifier
from core.gadgets import (GadgetBuilder, GadgetReport, build_chain_gadget,
                          build_clause_paths, nae_gadget)
from core.transform import AlternationProfile

LOG = logging.getLogger(__name__)


@dataclass(frozen=True)
class QBF:
    """
    ∃x1∀y1…∃xn∀yn over 3-literal clauses.

    Variable 2i-1 is x_i and 2i is y_i; literals are signed DIMACS integers.
    """
    n: int
    clauses: Tuple[Tuple[int, int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ShapeError("a QBF needs at least one ∃∀ block")
        for h, clause in enumerate(self.clauses, start=1):
            if len(clause) != 3:
                raise ShapeError(f"clause {h} has {len(clause)} literals, expected 3")
            for literal in clause:
                if literal == 0 or abs(literal) > 2 * self.n:
                    raise ShapeError(f"clause {h} literal {literal} outside 1..{2 * self.n}")

    @property
    def prefix(self) -> Tuple[Tuple[Quantifier, int], ...]:
        return tuple((EXISTS if v % 2 else FORALL, v) for v in range(1, 2 * self.n + 1))

    def block_names(self) -> Dict[int, str]:
        return {v: (f"x{(v + 1) // 2}" if v % 2 else f"y{v // 2}") for v in range(1, 2 * self.n + 1)}


@dataclass(frozen=True)
class MonotoneCNF:
    """Clauses of uniform polarity over v1..vn, as tuples of 1-based variables."""
    n: int
    negative: Tuple[Tuple[int, int, int], ...]
    positive: Tuple[Tuple[int, int, int], ...]

    @classmethod
    def from_clauses(cls, n: int, clauses: Sequence[Sequence[int]]) -> 'MonotoneCNF':
        """Split signed 3-literal clauses by polarity; mixed clauses are rejected."""
        negative, positive = [], []
        for h, clause in enumerate(clauses, start=1):
            if len(clause) != 3:
                raise ShapeError(f"clause {h} has {len(clause)} literals, expected 3")
            if all(l < 0 for l in clause):
                negative.append(tuple(-l for l in clause))
            elif all(l > 0 for l in clause):
                positive.append(tuple(clause))
            else:
                raise ShapeError(f"clause {h} mixes polarities: {list(clause)}")
        return cls(n, tuple(negative), tuple(positive))


@dataclass(frozen=True)
class QNAEInstance:
    """Quantified NAE-3-SAT over variables 1..n."""
    prefix: Tuple[Tuple[Quantifier, int], ...]
    constraints: Tuple[Tuple[int, int, int], ...]

    @property
    def n(self) -> int:
        return len(self.prefix)

    def profile(self) -> AlternationProfile:
        blocks: List[Quantifier] = []
        for q, _ in self.prefix:
            if not blocks or blocks[-1] is not q:
                blocks.append(q)
        return AlternationProfile(tuple(blocks))


@dataclass(frozen=True)
class BoolCSP:
    """Boolean constraints ('neq', (x, y)) and ('disj', (x, y, z)) over 1..n."""
    n: int
    constraints: Tuple[Tuple[str, Tuple[int, ...]], ...]


def _qbf_builder(phi: QBF, existential_tf: bool) -> GadgetBuilder:
    g = GadgetBuilder()
    t = g.var('t', 'constant true')
    f = g.var('f', 'constant false')
    head = EXISTS if existential_tf else FORALL
    g.bind(head, t, f)
    if existential_tf:
        d = g.var('d', 'disequality witness for t, f')
        g.bind(FORALL, d)
        g.notes.append("t, f existential; t != f enforced by ∀d (t!=f | f=d)")
    for i in range(1, phi.n + 1):
        x0 = g.var(f"x{i}^0", f"x{i} encoding bit 0")
        x1 = g.var(f"x{i}^1", f"x{i} encoding bit 1")
        y0 = g.var(f"y{i}^0", f"y{i} encoding bit 0")
        y1 = g.var(f"y{i}^1", f"y{i} encoding bit 1")
        g.bind(EXISTS, x0)
        g.bind(FORALL, x1, y0, y1)
    g.bind(EXISTS, g.var('z', 'path sink z'))
    for i in range(phi.n + 1):
        build_chain_gadget(i, phi.n, g)
    build_clause_paths(phi.clauses, phi.block_names(), g)
    if existential_tf:
        g.add([(t, f, False), (f, g.index['d'], True)])
    return g


def qbf_to_qcsp_I(phi: QBF) -> Tuple[QEFormula, GadgetReport]:
    """
    Encode a QBF as a sentence over I(x,y,z) = (x=y -> y=z).

    Prefix ∀t∀f, then ∃x_i^0 ∀x_i^1 ∀y_i^0 ∀y_i^1 per block, then ∃z and the
    gadget vertices; matrix C_0..C_n followed by the clause paths.
    """
    g = _qbf_builder(phi, existential_tf=False)
    formula, report = g.build()
    LOG.info("QBF with n=%d, %d clauses -> %d variables, %d I-clauses",
             phi.n, len(phi.clauses), formula.nvars, len(formula.matrix))
    return formula, report


def qbf_to_qcsp_I_existential_tf(phi: QBF) -> Tuple[QEFormula, GadgetReport]:
    """Variant with ∃t∃f outermost, kept distinct by the disequality gadget ∀d I(t,f,d)."""
    g = _qbf_builder(phi, existential_tf=True)
    return g.build()


def pad_monotone(phi: MonotoneCNF) -> Tuple[MonotoneCNF, List[str]]:
    """
    Ensure at least two clauses of each polarity.

    A single clause is duplicated. An empty polarity class gets two copies of
    a clause over its own fresh variable, which keeps satisfiability.
    """
    notes: List[str] = []
    n = phi.n
    negative, positive = list(phi.negative), list(phi.positive)
    for clauses, label, in (negative, 'negative'), (positive, 'positive'):
        if not clauses:
            n += 1
            clauses += [(n, n, n), (n, n, n)]
            notes.append(f"degenerate: no {label} clauses; padded with fresh variable v{n}")
            LOG.warning("monotone instance has no %s clauses; padding with v%d", label, n)
        elif len(clauses) == 1:
            clauses.append(clauses[0])
            notes.append(f"single {label} clause duplicated")
    return MonotoneCNF(n, tuple(negative), tuple(positive)), notes


def mon3sat_to_pi2(phi: MonotoneCNF) -> Tuple[QEFormula, GadgetReport]:
    """
    Pi_2 sentence over I that is true iff phi is unsatisfiable.

    Prefix ∀b0∀b1∀v1..vn ∃N1..Nl,N'2..N'l,P1..Pm,P'2..P'm.
    """
    phi, notes = pad_monotone(phi)
    g = GadgetBuilder()
    b0 = g.var('b0', 'false constant b0')
    b1 = g.var('b1', 'true constant b1')
    vs = [g.var(f"v{i}", f"variable v{i}") for i in range(1, phi.n + 1)]
    g.bind(FORALL, b0, b1, *vs)
    l, m = len(phi.negative), len(phi.positive)
    N = [g.fresh(f"N{h}", f"negative clause {h}") for h in range(1, l + 1)]
    Np = {h: g.fresh(f"N'{h}", f"negative chain {h}") for h in range(2, l + 1)}
    P = [g.fresh(f"P{h}", f"positive clause {h}") for h in range(1, m + 1)]
    Pp = {h: g.fresh(f"P'{h}", f"positive chain {h}") for h in range(2, m + 1)}

    def implies(a, b, c, d):
        g.add([(a, b, False), (c, d, True)])

    for h, clause in enumerate(phi.negative):
        for v in clause:
            implies(vs[v - 1], b0, b0, N[h])
    for h, clause in enumerate(phi.positive):
        for v in clause:
            implies(vs[v - 1], b1, b1, P[h])
    for nodes, primes, count in ((N, Np, l), (P, Pp, m)):
        implies(nodes[0], nodes[1], nodes[1], primes[2])
        for h in range(3, count + 1):
            implies(primes[h - 1], nodes[h - 1], nodes[h - 1], primes[h])
    g.add([(Np[l], Pp[m], True)])
    return g.build(notes=notes)


def qnae_to_qcsp(inst: QNAEInstance, k: Optional[int] = None) -> Tuple[QEFormula, GadgetReport]:
    """
    Pair-encode a quantified NAE-3-SAT instance (v = v' means v is true).

    Args:
        inst: The instance
        k: Target Pi_k; the instance profile must fit inside ∀∃… of length k
    """
    profile = inst.profile()
    if k is not None and profile.k:
        needed = profile.k + (1 if profile.leading is EXISTS else 0)
        if needed > k:
            raise ShapeError(f"profile {profile} does not fit Pi_{k}")
    g = GadgetBuilder()
    pairs: Dict[int, Tuple[int, int]] = {}
    for q, v in inst.prefix:
        a = g.var(f"v{v}", f"variable v{v}")
        b = g.var(f"v{v}'", f"partner of v{v}")
        g.bind(q, a, b)
        pairs[v] = (a, b)
    for number, (a, b, c) in enumerate(inst.constraints, start=1):
        for v in (a, b, c):
            if v not in pairs:
                raise ShapeError(f"NAE constraint {number} uses unquantified variable {v}")
        nae_gadget(*pairs[a], *pairs[b], *pairs[c], g, f"nae{number}", shared=True)
    return g.build()


def boolcsp_to_pi2_disj(inst: BoolCSP) -> Tuple[QEFormula, GadgetReport]:
    """
    Pi_2 sentence over {!=, x=y | y=z} true iff inst is satisfiable over {0,1}.

    0 and 1 become the outermost universal variables b0 and b1.
    """
    g = GadgetBuilder()
    b0 = g.var('b0', 'constant 0')
    b1 = g.var('b1', 'constant 1')
    g.bind(FORALL, b0, b1)
    vs = [g.var(f"v{i}", f"variable v{i}") for i in range(1, inst.n + 1)]
    g.bind(EXISTS, *vs)
    for v in vs:
        g.add([(v, b0, True), (v, b1, True)])
    for kind, args in inst.constraints:
        if any(not 1 <= a <= inst.n for a in args):
            raise ShapeError(f"constraint {kind} {list(args)} outside 1..{inst.n}")
        if kind == 'neq' and len(args) == 2:
            x, y = vs[args[0] - 1], vs[args[1] - 1]
            g.add([(x, b0, True), (x, b1, True)])
            g.add([(x, b0, True), (y, b0, True)])
            g.add([(y, b1, True), (x, b1, True)])
            g.add([(y, b1, True), (y, b0, True)])
        elif kind == 'disj' and len(args) == 3:
            x, y, z = (vs[a - 1] for a in args)
            g.add([(x, y, True), (y, z, True)])
        else:
            raise ShapeError(f"unsupported constraint '{kind}' with {len(args)} arguments")
    return g.build()
