"""Maximal-clique estimator: predict the degree-``d`` hyperedges as the maximal ``d``-cliques."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterator, TextIO

from .model import ProjectedGraph

__all__ = ["CliqueSet", "maximal_cliques_of_size", "recover", "degeneracy_order",
           "write_cliques", "read_cliques"]


@dataclass(frozen=True)
class CliqueSet:
    size: int
    cliques: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "cliques", frozenset(tuple(c) for c in self.cliques))
        for c in self.cliques:
            if len(c) != self.size or any(a >= b for a, b in zip(c, c[1:])):
                raise ValueError(f"{c} is not a sorted {self.size}-tuple")

    def __iter__(self) -> Iterator[tuple]:
        return iter(sorted(self.cliques))

    def __len__(self) -> int:
        return len(self.cliques)

    def __contains__(self, item) -> bool:
        return tuple(item) in self.cliques


def degeneracy_order(g: ProjectedGraph) -> list[int]:
    """Repeatedly strip a minimum-degree vertex; ties broken by smallest id."""
    deg = [len(a) for a in g.adjacency]
    heap = [(deg[v], v) for v in range(g.n)]
    heapq.heapify(heap)
    removed = [False] * g.n
    order = []
    while heap:
        dv, v = heapq.heappop(heap)
        if removed[v] or dv != deg[v]:
            continue
        removed[v] = True
        order.append(v)
        for w in g.adjacency[v]:
            if not removed[w]:
                deg[w] -= 1
                heapq.heappush(heap, (deg[w], w))
    return order


def _bits(m: int) -> Iterator[int]:
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


def maximal_cliques_of_size(g: ProjectedGraph, d: int) -> CliqueSet:
    """All vertex sets of size ``d`` that are cliques of ``g`` and extend by no vertex.

    Pivoted Bron-Kerbosch over a degeneracy ordering. A branch is cut once
    ``|R| + |P| < d`` (every clique below it is too small) or ``|R| >= d``
    with candidates left (every maximal clique below it is too large).
    """
    if not 2 <= d <= g.n:
        raise ValueError(f"clique size must satisfy 2 <= d <= n={g.n}, got {d}")
    adj = g.adjacency_bits
    found: list[tuple] = []

    def expand(r: list[int], p: int, x: int) -> None:
        if len(r) + p.bit_count() < d:
            return
        if not p:
            if not x and len(r) == d:
                found.append(tuple(sorted(r)))
            return
        if len(r) >= d:
            return
        pivot = max(_bits(p | x), key=lambda u: (p & adj[u]).bit_count())
        for v in _bits(p & ~adj[pivot]):
            r.append(v)
            expand(r, p & adj[v], x & adj[v])
            r.pop()
            p &= ~(1 << v)
            x |= 1 << v

    order = degeneracy_order(g)
    rank = {v: i for i, v in enumerate(order)}
    for v in order:
        later = earlier = 0
        for w in g.adjacency[v]:
            if rank[w] > rank[v]:
                later |= 1 << w
            else:
                earlier |= 1 << w
        expand([v], later, earlier)
    return CliqueSet(d, frozenset(found))


def recover(g: ProjectedGraph, d: int) -> CliqueSet:
    """Estimated degree-``d`` hyperedges of the hypergraph behind ``g``."""
    return maximal_cliques_of_size(g, d)


def write_cliques(cs: CliqueSet, fp: TextIO) -> None:
    for c in cs:
        fp.write(" ".join(map(str, c)) + "\n")


def read_cliques(fp: TextIO, size: int | None = None) -> CliqueSet:
    cliques = [tuple(sorted(int(t) for t in line.split())) for line in fp if line.strip()]
    if size is None:
        if not cliques:
            raise ValueError("cannot infer clique size from an empty file")
        size = len(cliques[0])
    return CliqueSet(size, frozenset(cliques))
