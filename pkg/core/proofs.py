"""
Certificates for Sigma_{2k+1} formulas over x=y -> u=v and x=y.

A formula is read as layers (∃X_1 ∀U_1) … (∃X_k ∀U_k) followed by an
existential core. A 0-proof derives equalities in the core from hypotheses,
unit constraints, implications and transitivity. A k-proof is a sequence of
steps (e_i, E_i^u, P_i) where P_i is a (k-1)-proof of e_i one layer down from
the hypotheses widened by E_i^u and the earlier e_j. A k-proof of a
contradiction ends with either a (k-1)-contradiction or an equality u=z whose
universal u is left unassigned.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple, Union

from core.errors import FormatError, FormulaError, ShapeError
from core.formula import EXISTS, FORALL, QEFormula

LOG = logging.getLogger(__name__)

EQUALITY_MODE = 'equality'
CONTRADICTION_MODE = 'contradiction'
JUSTIFICATIONS = ('hyp', 'trans', 'unit', 'impl')


@dataclass(frozen=True, order=True)
class Equality:
    """Unordered equality between two distinct variables, stored with a < b."""
    a: int
    b: int

    def __post_init__(self):
        if self.a >= self.b:
            raise FormulaError(f"equality needs a < b, got {self.a},{self.b}")

    @classmethod
    def of(cls, x: int, y: int) -> 'Equality':
        if x == y:
            raise FormulaError(f"equality of variable {x} with itself")
        return cls(min(x, y), max(x, y))

    @property
    def variables(self) -> FrozenSet[int]:
        return frozenset((self.a, self.b))

    def __str__(self) -> str:
        return f"{self.a}={self.b}"


@dataclass(frozen=True)
class Justification:
    kind: str
    refs: Tuple[int, ...] = ()

    def __post_init__(self):
        arity = {'hyp': 0, 'trans': 2, 'unit': 0, 'impl': 1}
        if self.kind not in arity or len(self.refs) != arity[self.kind]:
            raise FormulaError(f"bad justification {self.kind} {list(self.refs)}")


HYP = Justification('hyp')
UNIT = Justification('unit')


@dataclass(frozen=True)
class ZeroStep:
    eq: Equality
    why: Justification


@dataclass(frozen=True)
class ZeroProof:
    steps: Tuple[ZeroStep, ...]

    @property
    def conclusion(self) -> Optional[Equality]:
        return self.steps[-1].eq if self.steps else None


@dataclass(frozen=True)
class KStep:
    """One step (e_i, E_i^u, P_i); eq None marks the ⊥ terminal step."""
    eq: Optional[Equality]
    uassign: Tuple[Tuple[int, int], ...]
    sub: Union[ZeroProof, 'KProof']


@dataclass(frozen=True)
class KProof:
    mode: str
    steps: Tuple[KStep, ...]

    def __post_init__(self):
        if self.mode not in (EQUALITY_MODE, CONTRADICTION_MODE):
            raise FormulaError(f"unknown proof mode '{self.mode}'")

    @property
    def conclusion(self) -> Optional[Equality]:
        if self.mode == CONTRADICTION_MODE or not self.steps:
            return None
        return self.steps[-1].eq


Proof = Union[ZeroProof, KProof]


def proof_steps(p: Proof) -> int:
    """Total number of steps, nested subproofs included."""
    if isinstance(p, ZeroProof):
        return len(p.steps)
    return sum(1 + proof_steps(s.sub) for s in p.steps)


@dataclass(frozen=True)
class LevelView:
    """Variables of one layer: free F, existential X and universal U."""
    free: Tuple[int, ...]
    exists: Tuple[int, ...]
    forall: Tuple[int, ...]


@dataclass(frozen=True)
class LayeredFormula:
    """
    A Γ-shaped formula split into (∃-block, ∀-block) layers and a Σ1 core.

    k is the number of layers; a leading ∀ gets an empty ∃ block in front
    and a trailing ∀ leaves an empty core.
    """
    free: Tuple[int, ...]
    layers: Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...]
    core: Tuple[int, ...]
    units: FrozenSet[Equality]
    implications: FrozenSet[Tuple[Equality, Equality]]
    nvars: int
    names: Dict[int, str] = field(default_factory=dict, hash=False, compare=False)

    @property
    def k(self) -> int:
        return len(self.layers)

    @property
    def order(self) -> Tuple[int, ...]:
        out = list(self.free)
        for exists, forall in self.layers:
            out += exists + forall
        return tuple(out + list(self.core))

    def position(self, v: int) -> int:
        return self.order.index(v)

    def view(self, depth: int) -> LevelView:
        if not 0 <= depth <= self.k:
            raise FormulaError(f"depth {depth} outside 0..{self.k}")
        free = list(self.free)
        for exists, forall in self.layers[:depth]:
            free += exists + forall
        if depth == self.k:
            return LevelView(tuple(free), self.core, ())
        exists, forall = self.layers[depth]
        return LevelView(tuple(free), exists, forall)

    def blocks(self) -> List[Tuple[int, ...]]:
        out = [b for layer in self.layers for b in layer]
        return out + [self.core]


def layer_formula(f: QEFormula) -> LayeredFormula:
    """
    Layered view of a formula whose clauses are x=y or (x!=y | u=v).

    Raises:
        ShapeError: naming the first clause outside that shape
    """
    units: Set[Equality] = set()
    implications: Set[Tuple[Equality, Equality]] = set()
    for clause in f.matrix:
        if not clause.is_gamma_shape:
            raise ShapeError(f"clause '{str(clause) or '(empty)'}' is not of the form x=y or x=y -> u=v")
        if len(clause.literals) == 1:
            units.add(Equality.of(*clause.literals[0].variables))
        else:
            premise, conclusion = clause.negatives[0], clause.positives[0]
            implications.add((Equality.of(*premise.variables), Equality.of(*conclusion.variables)))
    blocks = [(q, vs) for q, vs in f.blocks()]
    if blocks and blocks[0][0] is FORALL:
        blocks.insert(0, (EXISTS, ()))
    layers = []
    i = 0
    while i + 1 < len(blocks):
        layers.append((tuple(blocks[i][1]), tuple(blocks[i + 1][1])))
        i += 2
    core = tuple(blocks[i][1]) if i < len(blocks) else ()
    return LayeredFormula(tuple(range(1, f.free + 1)), tuple(layers), core,
                          frozenset(units), frozenset(implications), f.nvars, dict(f.names))


@dataclass(frozen=True)
class VerificationResult:
    accepted: bool
    reason: str = ''
    path: Tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.accepted

    def describe(self) -> str:
        if self.accepted:
            return 'accepted'
        where = ' > '.join(f"step {i}" for i in self.path)
        return f"{where}: {self.reason}" if where else self.reason


class _Reject(Exception):
    def __init__(self, reason: str, path: Tuple[int, ...]):
        super().__init__(reason)
        self.reason = reason
        self.path = path


class _Verifier:
    """Checks one proof tree; every step is visited exactly once."""

    def __init__(self, lf: LayeredFormula):
        self.lf = lf
        self.rank = {v: i for i, v in enumerate(lf.order)}
        self.visits = 0

    def reject(self, reason: str, path: Tuple[int, ...]):
        raise _Reject(reason, path)

    def zero(self, H: FrozenSet[Equality], p: Proof, target: Optional[Equality], path: Tuple[int, ...]):
        view = self.lf.view(self.lf.k)
        scope = set(view.free) | set(view.exists)
        if not isinstance(p, ZeroProof):
            self.reject("expected a 0-proof", path)
        if not p.steps:
            self.reject("empty proof", path)
        seen: Dict[Equality, int] = {}
        for i, step in enumerate(p.steps, start=1):
            self.visits += 1
            here = path + (i,)
            e = step.eq
            if not e.variables <= scope:
                self.reject(f"{e} uses variables outside the core", here)
            if e in seen:
                self.reject(f"{e} repeats step {seen[e]}", here)
            kind, refs = step.why.kind, step.why.refs
            if kind == 'hyp' and e not in H:
                self.reject(f"{e} is not a hypothesis", here)
            elif kind == 'unit' and e not in self.lf.units:
                self.reject(f"{e} is not a unit constraint", here)
            elif kind == 'trans':
                if any(not 1 <= r < i for r in refs):
                    self.reject(f"transitivity cites {list(refs)}, not all before {i}", here)
                left, right = (p.steps[r - 1].eq.variables for r in refs)
                shared = left & right
                if len(shared) != 1 or (left | right) - shared != e.variables:
                    self.reject(f"{e} does not follow by transitivity from steps {list(refs)}", here)
            elif kind == 'impl':
                j = refs[0]
                if not 1 <= j < i:
                    self.reject(f"implication premise at step {j} is not before {i}", here)
                if (p.steps[j - 1].eq, e) not in self.lf.implications:
                    self.reject(f"no constraint {p.steps[j - 1].eq} -> {e}", here)
            seen[e] = i
        final = p.steps[-1].eq
        if not final.variables <= set(view.free):
            self.reject(f"final equality {final} is not on the free variables", path)
        if target is not None and final != target:
            self.reject(f"proves {final}, expected {target}", path)

    def proof(self, depth: int, H: FrozenSet[Equality], p: Proof, contradiction: bool,
              target: Optional[Equality], path: Tuple[int, ...]):
        if depth == self.lf.k:
            if contradiction:
                self.reject("there is no 0-proof of a contradiction", path)
            self.zero(H, p, target, path)
            return
        if not isinstance(p, KProof):
            self.reject(f"expected a {self.lf.k - depth}-proof", path)
        wanted = CONTRADICTION_MODE if contradiction else EQUALITY_MODE
        if p.mode != wanted:
            self.reject(f"expected a proof of {'a contradiction' if contradiction else 'an equality'}", path)
        if not p.steps:
            self.reject("empty proof", path)
        view = self.lf.view(depth)
        outer = set(view.free) | set(view.exists)
        universal = set(view.forall)
        prior: List[Equality] = []
        for i, step in enumerate(p.steps, start=1):
            self.visits += 1
            here = path + (i,)
            terminal = contradiction and i == len(p.steps)
            lefts: Set[int] = set()
            assigned: Set[Equality] = set()
            for u, z in step.uassign:
                if u not in universal:
                    self.reject(f"{u} in E^u is not universal in this layer", here)
                if u in lefts:
                    self.reject(f"{u} appears twice on the left of E^u", here)
                if z not in self.rank or self.rank[z] >= self.rank[u]:
                    self.reject(f"{u}={z}: {z} does not precede {u}", here)
                lefts.add(u)
                assigned.add(Equality.of(u, z))
            hypotheses = H | assigned | frozenset(prior)
            e = step.eq
            if e is None:
                if not terminal:
                    self.reject("⊥ only ends a proof of a contradiction", here)
                self.proof(depth + 1, hypotheses, step.sub, True, None, here)
                continue
            if terminal:
                if not e.variables <= set(self.rank):
                    self.reject(f"{e} uses unknown variables", here)
                u = max(e.variables, key=self.rank.get)
                if u not in universal:
                    self.reject(f"terminal {e} has no universal of this layer", here)
                if u in lefts:
                    self.reject(f"terminal {e} but E^u assigns {u}", here)
            else:
                if not e.variables <= outer:
                    self.reject(f"{e} is not on the free and existential variables", here)
                if e in prior:
                    self.reject(f"{e} repeats step {prior.index(e) + 1}", here)
            self.proof(depth + 1, hypotheses, step.sub, False, e, here)
            prior.append(e)
        if not contradiction:
            final = p.steps[-1].eq
            if not final.variables <= set(view.free):
                self.reject(f"final equality {final} is not on the free variables", path)
            if target is not None and final != target:
                self.reject(f"proves {final}, expected {target}", path)

    def run(self, depth: int, H: Iterable[Equality], p: Proof, contradiction: bool,
            target: Optional[Equality]) -> VerificationResult:
        try:
            self.proof(depth, frozenset(H), p, contradiction, target, ())
        except _Reject as rejection:
            LOG.debug("proof rejected: %s at %s", rejection.reason, rejection.path)
            return VerificationResult(False, rejection.reason, rejection.path)
        assert self.visits == proof_steps(p), "verifier visited a step twice"
        return VerificationResult(True)


def verify_zero_proof(lf: LayeredFormula, E: Iterable[Equality], p: ZeroProof,
                      target: Optional[Equality] = None) -> VerificationResult:
    """
    Check a 0-proof against the existential core of `lf`.

    The free variables of the core are everything quantified before it.
    """
    verifier = _Verifier(lf)
    try:
        verifier.zero(frozenset(E), p, target, ())
    except _Reject as rejection:
        return VerificationResult(False, rejection.reason, rejection.path)
    return VerificationResult(True)


def verify_k_proof(lf: LayeredFormula, E: Iterable[Equality], p: Proof,
                   target: Optional[Equality] = None) -> VerificationResult:
    """
    Check a k-proof of an equality on the free variables, k = lf.k.

    Args:
        lf: Layered formula
        E: Hypotheses on the free variables
        p: The proof (a ZeroProof when lf.k == 0)
        target: Equality the proof must end with, if given

    Returns:
        VerificationResult with the first failing step path on rejection
    """
    return _Verifier(lf).run(0, E, p, False, target)


def verify_k_contradiction(lf: LayeredFormula, E: Iterable[Equality], p: KProof) -> VerificationResult:
    """Check a k-proof of a contradiction, k = lf.k >= 1."""
    if lf.k < 1:
        return VerificationResult(False, "there is no 0-proof of a contradiction")
    return _Verifier(lf).run(0, E, p, True, None)


@dataclass(frozen=True)
class SizeAudit:
    symbols: int
    bound: int
    within: bool


def equality_cost(ell: int) -> int:
    """Symbols for one written equality over ell variables."""
    return math.ceil(2 * math.log2(ell)) + 3 if ell > 1 else 3


def proof_symbols(p: Proof, ell: int) -> int:
    cost = equality_cost(ell)
    if isinstance(p, ZeroProof):
        return len(p.steps) * (cost + 3)
    return sum(cost + cost * len(s.uassign) + 3 + proof_symbols(s.sub, ell) for s in p.steps)


def size_audit(p: Proof, ell: int, k: int) -> SizeAudit:
    """
    Compare the written size of a proof with 10^(k+1) * ell^(2k+3).

    Every equality, E^u entries included, costs ceil(2 log2 ell) + 3 symbols
    and every step adds 3 symbols of framing.
    """
    symbols = proof_symbols(p, ell)
    bound = 10 ** (k + 1) * ell ** (2 * k + 3)
    LOG.info("proof of %d steps: %d symbols, bound %d", proof_steps(p), symbols, bound)
    return SizeAudit(symbols, bound, symbols < bound)


# S-expression codec, one step per line

def _proof_lines(p: Proof, indent: str) -> List[str]:
    if isinstance(p, ZeroProof):
        lines = [f"{indent}(zeroproof"]
        for step in p.steps:
            refs = ''.join(f" {r}" for r in step.why.refs)
            lines.append(f"{indent}  (step (eq {step.eq.a} {step.eq.b}) ({step.why.kind}{refs}))")
        lines[-1] += ')'
        return lines
    lines = [f"{indent}(kproof {p.mode}"]
    for step in p.steps:
        head = '(bot)' if step.eq is None else f"(eq {step.eq.a} {step.eq.b})"
        assigns = ''.join(f" ({u} {z})" for u, z in step.uassign)
        lines.append(f"{indent}  (step {head} (uassign{assigns})")
        lines += _proof_lines(step.sub, indent + '    ')
        lines[-1] += ')'
    lines[-1] += ')'
    return lines


def dump_proof(p: Proof) -> str:
    return '\n'.join(_proof_lines(p, '')) + '\n'


def _tokens(text: str):
    for number, line in enumerate(text.splitlines(), start=1):
        if line.lstrip().startswith('#'):
            continue
        column = 0
        while column < len(line):
            ch = line[column]
            if ch.isspace():
                column += 1
            elif ch in '()':
                yield ch, number, column + 1
                column += 1
            else:
                start = column
                while column < len(line) and not line[column].isspace() and line[column] not in '()':
                    column += 1
                yield line[start:column], number, start + 1


def _tree(text: str):
    stack: List[list] = [[]]
    last = (1, 1)
    for token, line, column in _tokens(text):
        last = (line, column)
        if token == '(':
            node: list = []
            stack[-1].append((node, line, column))
            stack.append(node)
        elif token == ')':
            if len(stack) == 1:
                raise FormatError("unbalanced ')'", line, column)
            stack.pop()
        else:
            stack[-1].append((token, line, column))
    if len(stack) != 1:
        raise FormatError("unclosed '('", *last)
    if len(stack[0]) != 1 or not isinstance(stack[0][0][0], list):
        raise FormatError("expected exactly one proof expression", *last)
    return stack[0][0]


def _atom(item, what: str) -> str:
    value, line, column = item
    if isinstance(value, list):
        raise FormatError(f"expected {what}, got a list", line, column)
    return value


def _int(item, what: str) -> int:
    token = _atom(item, what)
    if not token.isdigit() or int(token) < 1:
        raise FormatError(f"expected {what} as a positive integer, got '{token}'", item[1], item[2])
    return int(token)


def _list(item, head: Optional[str], what: str) -> list:
    value, line, column = item
    if not isinstance(value, list):
        raise FormatError(f"expected {what}", line, column)
    if head is not None and (not value or _atom(value[0], head) != head):
        raise FormatError(f"expected ({head} ...)", line, column)
    return value


def _equality(item) -> Equality:
    parts = _list(item, 'eq', '(eq A B)')
    if len(parts) != 3:
        raise FormatError("(eq A B) takes two variables", item[1], item[2])
    a, b = _int(parts[1], 'variable'), _int(parts[2], 'variable')
    if a == b:
        raise FormatError(f"equality {a}={a} is trivial", item[1], item[2])
    return Equality.of(a, b)


def _build(item) -> Proof:
    parts = _list(item, None, 'a proof')
    if not parts:
        raise FormatError("empty expression", item[1], item[2])
    head = _atom(parts[0], 'zeroproof or kproof')
    if head == 'zeroproof':
        steps = []
        for entry in parts[1:]:
            body = _list(entry, 'step', '(step ...)')
            if len(body) != 3:
                raise FormatError("a 0-proof step is (step (eq A B) (just))", entry[1], entry[2])
            why = _list(body[2], None, 'a justification')
            kind = _atom(why[0], 'justification') if why else ''
            if kind not in JUSTIFICATIONS:
                raise FormatError(f"unknown justification '{kind}'", body[2][1], body[2][2])
            refs = tuple(_int(r, 'step reference') for r in why[1:])
            try:
                steps.append(ZeroStep(_equality(body[1]), Justification(kind, refs)))
            except FormulaError as exc:
                raise FormatError(str(exc), body[2][1], body[2][2])
        return ZeroProof(tuple(steps))
    if head == 'kproof':
        if len(parts) < 2:
            raise FormatError("kproof needs a mode", item[1], item[2])
        mode = _atom(parts[1], 'mode')
        if mode not in (EQUALITY_MODE, CONTRADICTION_MODE):
            raise FormatError(f"unknown mode '{mode}'", parts[1][1], parts[1][2])
        steps = []
        for entry in parts[2:]:
            body = _list(entry, 'step', '(step ...)')
            if len(body) != 4:
                raise FormatError("a k-proof step is (step EQ (uassign ...) SUBPROOF)", entry[1], entry[2])
            head_item = _list(body[1], None, '(eq A B) or (bot)')
            if head_item and _atom(head_item[0], 'eq or bot') == 'bot':
                eq = None
            else:
                eq = _equality(body[1])
            assigns = []
            for pair in _list(body[2], 'uassign', '(uassign ...)')[1:]:
                values = _list(pair, None, '(U Z)')
                if len(values) != 2:
                    raise FormatError("an E^u entry is (U Z)", pair[1], pair[2])
                assigns.append((_int(values[0], 'variable'), _int(values[1], 'variable')))
            steps.append(KStep(eq, tuple(assigns), _build(body[3])))
        return KProof(mode, tuple(steps))
    raise FormatError(f"unknown proof kind '{head}'", parts[0][1], parts[0][2])


def load_proof(text: str) -> Proof:
    """Parse the S-expression form written by dump_proof; '#' lines are skipped."""
    return _build(_tree(text))
