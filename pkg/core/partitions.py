"""
Partitions of a variable set as restricted-growth strings.

Equality formulas only see which variables are assigned equal values, so every
assignment is reduced to its kernel: the canonical restricted-growth string
c_1..c_m with c_1 = 0 and c_{i+1} <= 1 + max(c_1..c_i).
"""

from typing import Dict, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple

from config.settings import SETTINGS, ERROR_MESSAGES
from core.errors import CapExceededError, FormulaError

Partition = Tuple[int, ...]


def kernel_of(assignment: Sequence[Hashable]) -> Partition:
    """
    Canonical kernel of an assignment.

    Args:
        assignment: Nonempty sequence of values

    Returns:
        Restricted-growth string numbering classes by first appearance
    """
    if not assignment:
        raise FormulaError("kernel_of needs a nonempty assignment")
    labels: Dict[Hashable, int] = {}
    return tuple(labels.setdefault(value, len(labels)) for value in assignment)


def is_canonical(kernel: Sequence[int]) -> bool:
    """Check the restricted-growth property."""
    top = -1
    for value in kernel:
        if value < 0 or value > top + 1:
            return False
        top = max(top, value)
    return True


def block_count(kernel: Sequence[int]) -> int:
    """Number of classes of a kernel."""
    return max(kernel) + 1 if kernel else 0


def grow(prefix: Partition, extra: int) -> Iterator[Partition]:
    """
    Yield the canonical extensions of a prefix by `extra` positions.

    Each new position joins an existing class, in ascending order, or opens a
    fresh one, so the output is lexicographic.
    """
    if extra == 0:
        yield prefix
        return
    top = block_count(prefix)
    for value in range(top + 1):
        yield from grow(prefix + (value,), extra - 1)


def enumerate_partitions(m: int, cap: Optional[int] = None) -> Iterator[Partition]:
    """
    Enumerate the Bell(m) partitions of [m] in lexicographic order.

    Args:
        m: Number of elements, at least 1
        cap: Largest permitted m (defaults to SETTINGS['partition_cap'])

    Returns:
        Iterator of restricted-growth strings
    """
    cap = SETTINGS['partition_cap'] if cap is None else cap
    if m < 1:
        raise FormulaError("enumerate_partitions needs m >= 1")
    if m > cap:
        raise CapExceededError(ERROR_MESSAGES['partition_cap'].format(m=m, cap=cap))
    return grow((0,), m - 1)


def bell(m: int) -> int:
    """Bell number via the Bell triangle."""
    if m == 0:
        return 1
    row = [1]
    for _ in range(m - 1):
        nxt = [row[-1]]
        for value in row:
            nxt.append(nxt[-1] + value)
        row = nxt
    return row[-1]


def restrict(kernel: Sequence[int], positions: Sequence[int]) -> Partition:
    """Kernel of the sub-assignment at the given 0-based positions."""
    return kernel_of([kernel[p] for p in positions])


def classes_of(kernel: Sequence[int]) -> List[List[int]]:
    """Classes of a kernel as lists of 0-based positions."""
    groups: List[List[int]] = [[] for _ in range(block_count(kernel))]
    for position, value in enumerate(kernel):
        groups[value].append(position)
    return groups


def merges(kernel: Sequence[int], a: int, b: int) -> bool:
    """True when 1-based variables a and b share a class."""
    return kernel[a - 1] == kernel[b - 1]


class UnionFind:
    """Union-find over hashable elements with path compression and union by rank."""

    def __init__(self, elements: Optional[Iterable[Hashable]] = None):
        self.parent: Dict[Hashable, Hashable] = {}
        self.rank: Dict[Hashable, int] = {}
        if elements:
            for element in elements:
                self.add(element)

    def add(self, element: Hashable):
        if element not in self.parent:
            self.parent[element] = element
            self.rank[element] = 0

    def find(self, element: Hashable) -> Hashable:
        if element not in self.parent:
            self.add(element)
            return element
        root = element
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[element] != root:
            self.parent[element], element = root, self.parent[element]
        return root

    def union(self, a: Hashable, b: Hashable) -> bool:
        """
        Merge the classes of a and b.

        Returns:
            True if two distinct classes were merged
        """
        root_a, root_b = self.find(a), self.find(b)
        if root_a == root_b:
            return False
        if self.rank[root_a] < self.rank[root_b]:
            root_a, root_b = root_b, root_a
        self.parent[root_b] = root_a
        if self.rank[root_a] == self.rank[root_b]:
            self.rank[root_a] += 1
        return True

    def same(self, a: Hashable, b: Hashable) -> bool:
        return self.find(a) == self.find(b)

    def classes(self) -> List[List[Hashable]]:
        """Classes in order of their first member's insertion."""
        groups: Dict[Hashable, List[Hashable]] = {}
        for element in self.parent:
            groups.setdefault(self.find(element), []).append(element)
        return list(groups.values())

    def kernel(self, elements: Sequence[Hashable]) -> Partition:
        """Kernel induced on the given elements."""
        return kernel_of([self.find(e) for e in elements])
