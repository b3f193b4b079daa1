"""Trie-backed map from atom sets to rational lower bounds.

Keys are atom sets viewed as strings of ascending atom ids.  Whenever a set
is stored, all of its lexical prefixes are stored too (with value 0 where no
better value exists), so that evaluation can walk the trie in time
proportional to the number of stored subsets of the query.  Stored values
never decrease.  This table is the shared store for complete h^m values and
for improvements discovered by relaxed search; it is not a transposition
table for full search states.
"""

from __future__ import annotations

from collections.abc import Iterator

from .model import INF, ZERO, AtomSet, Cost, Problem, fmt_cost


class _Node:
    __slots__ = ("children", "value")

    def __init__(self) -> None:
        self.children: dict[int, _Node] = {}
        self.value: Cost | None = None


class HeuristicTable:
    def __init__(self) -> None:
        self._root = _Node()
        self._stores = 0

    @property
    def store_count(self) -> int:
        """Number of store() calls that created or raised an entry."""
        return self._stores

    def store(self, s: AtomSet, value: Cost) -> None:
        """Set T(s) to max(T(s), value), inserting missing prefixes at 0."""
        node = self._root
        if node.value is None:
            node.value = ZERO
        for atom in sorted(s):
            child = node.children.get(atom)
            if child is None:
                child = _Node()
                node.children[atom] = child
            if child.value is None:
                child.value = ZERO
            node = child
        if value > node.value:
            node.value = value
            self._stores += 1

    def lookup_exact(self, s: AtomSet) -> Cost | None:
        node = self._root
        for atom in sorted(s):
            node = node.children.get(atom)
            if node is None:
                return None
        return node.value

    def eval(self, s: AtomSet) -> Cost:
        """Max value over all stored subsets of s; 0 if none are stored."""
        ids = sorted(s)
        best = ZERO
        stack = [(self._root, 0)]
        while stack:
            node, i = stack.pop()
            if node.value is not None and node.value > best:
                best = node.value
                if best == INF:
                    return INF
            for j in range(i, len(ids)):
                child = node.children.get(ids[j])
                if child is not None:
                    stack.append((child, j + 1))
        return best

    def items(self) -> Iterator[tuple[tuple[int, ...], Cost]]:
        """Stored (set, value) pairs in lexical order of the id strings."""

        def walk(node: _Node, prefix: tuple[int, ...]) -> Iterator[tuple[tuple[int, ...], Cost]]:
            if node.value is not None:
                yield prefix, node.value
            for atom in sorted(node.children):
                yield from walk(node.children[atom], prefix + (atom,))

        yield from walk(self._root, ())

    def dump(self, problem: Problem) -> str:
        """One line per stored set: `{atom names} value`, lexical order."""
        lines = []
        for ids, value in self.items():
            names = " ".join(problem.atom_name(i) for i in ids)
            lines.append(f"{{{names}}} {fmt_cost(value)}")
        return "\n".join(lines)

    def __len__(self) -> int:
        return sum(1 for _ in self.items())
