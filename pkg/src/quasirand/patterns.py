"""Fixed pattern graphs and the builtin pattern vocabulary.

A ``PatternGraph`` is the small graph whose labeled and labeled-induced
copies get counted inside a host graph.  Builtin names accepted by
``parse_pattern``: ``path3``, ``cycle4``, ``clique:h``, ``star:k``,
``empty:h``, plus the general forms ``path:h`` and ``cycle:h``.  Anything
else is treated as a path to a graph file.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, gcd

import numpy as np

from .graphs import Graph, read_graph


@dataclass(frozen=True)
class PatternGraph:
    """Pattern graph on h vertices with a fixed edge set over 0..h-1."""

    h: int
    edges: frozenset = field(default_factory=frozenset)
    name: str = ""

    def __post_init__(self):
        if self.h < 2:
            raise ValueError("a pattern needs at least 2 vertices")
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop ({u},{v}) in pattern")
            a, b = (u, v) if u < v else (v, u)
            if not (0 <= a < b < self.h):
                raise ValueError(f"edge ({u},{v}) out of range for h={self.h}")
            norm.add((a, b))
        object.__setattr__(self, "edges", frozenset(norm))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def total_pairs(self) -> int:
        return comb(self.h, 2)

    @property
    def pair_edge_gcd(self) -> int:
        """gcd of the pair count C(h,2) and the edge count; 1 forces the
        all-weights-equal branch of the reconstruction dichotomy."""
        return gcd(self.total_pairs, self.m)

    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.h, self.h), dtype=bool)
        for u, v in self.edges:
            adj[u, v] = adj[v, u] = True
        return adj

    def nonedges(self) -> list[tuple[int, int]]:
        return [
            (i, j)
            for i in range(self.h)
            for j in range(i + 1, self.h)
            if (i, j) not in self.edges
        ]

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def complement(self) -> "PatternGraph":
        return PatternGraph(self.h, frozenset(self.nonedges()),
                            name=f"complement({self.name})" if self.name else "")

    def to_graph(self) -> Graph:
        return Graph.from_edges(self.h, self.sorted_edges())

    def __repr__(self) -> str:
        label = self.name or f"h={self.h},m={self.m}"
        return f"PatternGraph({label})"


def path(h: int) -> PatternGraph:
    if h < 2:
        raise ValueError("a path needs at least 2 vertices")
    return PatternGraph(h, frozenset((i, i + 1) for i in range(h - 1)), name=f"path:{h}")


def cycle(h: int) -> PatternGraph:
    if h < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return PatternGraph(h, frozenset((i, (i + 1) % h) for i in range(h)), name=f"cycle:{h}")


def clique(h: int) -> PatternGraph:
    return PatternGraph(
        h, frozenset((i, j) for i in range(h) for j in range(i + 1, h)), name=f"clique:{h}"
    )


def star(k: int) -> PatternGraph:
    """Star with k leaves: k+1 vertices, centre 0."""
    if k < 1:
        raise ValueError("a star needs at least 1 leaf")
    return PatternGraph(k + 1, frozenset((0, i) for i in range(1, k + 1)), name=f"star:{k}")


def empty(h: int) -> PatternGraph:
    return PatternGraph(h, frozenset(), name=f"empty:{h}")


def path3() -> PatternGraph:
    """Path on 3 vertices, centre at vertex 1."""
    return PatternGraph(3, frozenset({(0, 1), (1, 2)}), name="path3")


def cycle4() -> PatternGraph:
    return PatternGraph(4, frozenset({(0, 1), (1, 2), (2, 3), (0, 3)}), name="cycle4")


def pattern_from_graph(g: Graph, name: str = "") -> PatternGraph:
    return PatternGraph(g.n, frozenset(g.edges()), name=name)


_PARAMETRIC = {
    "clique": clique,
    "star": star,
    "empty": empty,
    "path": path,
    "cycle": cycle,
}


def parse_pattern(spec: str) -> PatternGraph:
    """Resolve a pattern name like ``path3`` or ``clique:4``, else load the
    argument as a graph file."""
    text = spec.strip()
    if text == "path3":
        return path3()
    if text == "cycle4":
        return cycle4()
    if ":" in text:
        head, _, tail = text.partition(":")
        if head in _PARAMETRIC:
            try:
                k = int(tail)
            except ValueError:
                raise ValueError(f"bad pattern parameter in {spec!r}") from None
            return _PARAMETRIC[head](k)
    return pattern_from_graph(read_graph(text), name=text)
