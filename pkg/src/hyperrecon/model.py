"""Heterogeneous random hypergraphs: parameters, sampling and graph projection.

Each degree class ``j`` places every one of the ``C(n, d_j)`` candidate
hyperedges independently with probability ``p_j = n ** (1 - d_j + delta_j)``
(clamped to 1, or an explicit override). The observed object is the
projection: the simple graph joining two vertices whenever some hyperedge
contains both.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, TextIO

import numpy as np

__all__ = [
    "DegreeClassSpec",
    "ModelParams",
    "Hypergraph",
    "ProjectedGraph",
    "InstanceTooLargeError",
    "edge_probability",
    "sample_hypergraph",
    "sample_class",
    "draw_distinct_subsets",
    "project",
    "class_rng",
    "write_hypergraph",
    "read_hypergraph",
    "write_graph",
    "read_graph",
]

# numpy's binomial sampler takes an int64 trial count
MAX_CANDIDATES = 2**63 - 1
# above this many candidates, a dense draw (k > C/2) cannot enumerate all of them
_MAX_ENUMERATED = 5_000_000

Edge = tuple[int, int]
Hyperedge = tuple[int, ...]


class InstanceTooLargeError(ValueError):
    """Instance too large: a candidate count does not fit the sampler."""


@dataclass(frozen=True)
class DegreeClassSpec:
    """One degree class ``(d_j, delta_j, p_j)``.

    ``exponent`` may be omitted only when ``probability_override`` is given.
    """

    degree: int
    exponent: Optional[float] = None
    probability_override: Optional[float] = None

    def __post_init__(self):
        if int(self.degree) != self.degree or self.degree < 2:
            raise ValueError(f"degree must be an integer >= 2, got {self.degree!r}")
        if self.exponent is None and self.probability_override is None:
            raise ValueError("a degree class needs an exponent or a probability override")
        if self.exponent is not None and not 0 < self.exponent < 1:
            raise ValueError(f"exponent must lie in (0, 1), got {self.exponent!r}")
        if self.probability_override is not None and not 0 <= self.probability_override <= 1:
            raise ValueError(
                f"probability override must lie in [0, 1], got {self.probability_override!r}"
            )


@dataclass(frozen=True)
class ModelParams:
    n: int
    classes: tuple[DegreeClassSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if not self.classes:
            raise ValueError("at least one degree class is required")
        degrees = self.degrees
        if any(a >= b for a, b in zip(degrees, degrees[1:])):
            raise ValueError(f"class degrees must be strictly increasing, got {degrees}")
        if degrees[-1] > self.n:
            raise ValueError(f"class degree {degrees[-1]} exceeds n={self.n}")

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(c.degree for c in self.classes)

    @property
    def probabilities(self) -> tuple[float, ...]:
        return tuple(edge_probability(self.n, c) for c in self.classes)

    @property
    def delta_star(self) -> float:
        """Largest density exponent over all classes."""
        exps = [c.exponent for c in self.classes]
        if any(e is None for e in exps):
            raise ValueError("delta_star needs an exponent on every class")
        return max(exps)

    def class_index(self, degree: int) -> int:
        try:
            return self.degrees.index(degree)
        except ValueError:
            raise ValueError(f"no class of degree {degree} in {self.degrees}") from None

    def with_n(self, n: int) -> "ModelParams":
        return ModelParams(n, self.classes)


@dataclass(frozen=True)
class Hypergraph:
    """Sampled hyperedges, one frozenset of sorted tuples per degree class."""

    n: int
    classes: tuple[DegreeClassSpec, ...]
    edges_by_class: tuple[frozenset, ...]

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))
        object.__setattr__(
            self, "edges_by_class", tuple(frozenset(map(tuple, e)) for e in self.edges_by_class)
        )
        if len(self.classes) != len(self.edges_by_class):
            raise ValueError("one edge set per class is required")
        for spec, edges in zip(self.classes, self.edges_by_class):
            for h in edges:
                if len(h) != spec.degree or any(a >= b for a, b in zip(h, h[1:])):
                    raise ValueError(f"hyperedge {h} is not a sorted {spec.degree}-set")
                if h and (h[0] < 0 or h[-1] >= self.n):
                    raise ValueError(f"hyperedge {h} has a vertex outside [0, {self.n})")

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(c.degree for c in self.classes)

    def edges_of_degree(self, degree: int) -> frozenset:
        return self.edges_by_class[self.degrees.index(degree)]

    def all_edges(self) -> Iterable[Hyperedge]:
        for edges in self.edges_by_class:
            yield from edges

    def __len__(self) -> int:
        return sum(len(e) for e in self.edges_by_class)


@dataclass(frozen=True)
class ProjectedGraph:
    """Simple undirected graph on ``range(n)``; pairs stored once as ``(a, b)``, ``a < b``."""

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        norm = set()
        for a, b in self.edges:
            if a == b:
                raise ValueError(f"self-loop at {a}")
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise ValueError(f"edge ({a}, {b}) outside [0, {self.n})")
            norm.add((a, b) if a < b else (b, a))
        object.__setattr__(self, "edges", frozenset(norm))

    @cached_property
    def adjacency(self) -> tuple[frozenset, ...]:
        nbrs: list[set] = [set() for _ in range(self.n)]
        for a, b in self.edges:
            nbrs[a].add(b)
            nbrs[b].add(a)
        return tuple(frozenset(s) for s in nbrs)

    @cached_property
    def adjacency_bits(self) -> tuple[int, ...]:
        """Neighbourhoods as integer bitsets, bit ``v`` set iff ``v`` is adjacent."""
        bits = [0] * self.n
        for a, b in self.edges:
            bits[a] |= 1 << b
            bits[b] |= 1 << a
        return tuple(bits)

    def has_edge(self, a: int, b: int) -> bool:
        return (a, b) in self.edges if a < b else (b, a) in self.edges

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def with_edge(self, a: int, b: int) -> "ProjectedGraph":
        return ProjectedGraph(self.n, self.edges | {(min(a, b), max(a, b))})


def edge_probability(n: int, spec: DegreeClassSpec) -> float:
    """Per-hyperedge probability of a class: the override, else ``min(1, n**(1-d+delta))``."""
    if spec.probability_override is not None:
        return float(spec.probability_override)
    return min(1.0, float(n) ** (1 - spec.degree + spec.exponent))


def class_rng(seed: int, degree: int) -> np.random.Generator:
    """Independent generator for one class, keyed on ``(seed, degree)``."""
    ss = np.random.SeedSequence(int(seed) & 0xFFFF_FFFF_FFFF_FFFF, spawn_key=(int(degree),))
    return np.random.default_rng(ss)


def _first_distinct(rows: np.ndarray, n: int, k: int) -> np.ndarray:
    """First ``k`` distinct rows in draw order (rows already sorted and duplicate-free)."""
    d = rows.shape[1]
    if n**d < 2**62:
        keys = rows @ (n ** np.arange(d, dtype=np.int64))
        _, first = np.unique(keys, return_index=True)
    else:
        _, first = np.unique(rows, axis=0, return_index=True)
    first.sort()
    return rows[first[:k]]


def draw_distinct_subsets(rng: np.random.Generator, n: int, d: int, k: int,
                          total: int | None = None) -> np.ndarray:
    """``k`` distinct uniform ``d``-subsets of ``range(n)`` as a ``(k, d)`` array of sorted rows.

    Subsets are drawn uniformly with replacement and duplicates rejected, so
    the accepted ones are a uniform sample without replacement.
    """
    if total is None:
        total = math.comb(n, d)
    if k == 0:
        return np.empty((0, d), dtype=np.int64)
    if k > total // 2:
        if total > _MAX_ENUMERATED:
            raise InstanceTooLargeError(
                f"instance too large: dense draw of {k} of C({n},{d})={total} hyperedges"
            )
        pool = np.array(list(itertools.combinations(range(n), d)), dtype=np.int64)
        picked = np.sort(rng.choice(total, size=k, replace=False))
        return pool[picked]

    acc = np.empty((0, d), dtype=np.int64)
    while True:
        need = k - len(acc)
        batch = need + need // 8 + 8
        if d * d <= n:
            rows = np.sort(rng.integers(0, n, size=(batch, d)), axis=1)
            rows = rows[np.all(np.diff(rows, axis=1) > 0, axis=1)]
        else:
            rows = np.sort(np.argpartition(rng.random((batch, n)), d - 1, axis=1)[:, :d], axis=1)
        acc = _first_distinct(np.concatenate([acc, rows.astype(np.int64)]), n, k)
        if len(acc) == k:
            return acc


def sample_class(n: int, spec: DegreeClassSpec, seed: int) -> np.ndarray:
    """Hyperedges of one class as a ``(K, d)`` array; the stream is keyed on ``(seed, d)``."""
    d = spec.degree
    total = math.comb(n, d)
    if total > MAX_CANDIDATES:
        raise InstanceTooLargeError(
            f"instance too large: C({n},{d})={total} exceeds the candidate count limit"
        )
    rng = class_rng(seed, d)
    k = int(rng.binomial(total, edge_probability(n, spec)))
    return draw_distinct_subsets(rng, n, d, k, total)


def sample_hypergraph(params: ModelParams, seed: int) -> Hypergraph:
    """Draw one hypergraph from the ensemble described by ``params``.

    Per class: ``K ~ Binomial(C(n, d), p)`` followed by ``K`` distinct
    uniformly random ``d``-subsets. Each class has its own generator keyed on
    ``(seed, d)``, so adding or removing a class leaves the others unchanged.
    """
    out = [frozenset(map(tuple, sample_class(params.n, spec, seed).tolist()))
           for spec in params.classes]
    return Hypergraph(params.n, params.classes, tuple(out))


def project(h: Hypergraph) -> ProjectedGraph:
    """Clique expansion of ``h``."""
    edges = set()
    for he in h.all_edges():
        edges.update(itertools.combinations(he, 2))
    return ProjectedGraph(h.n, frozenset(edges))


def _fmt(x) -> str:
    return "-" if x is None else repr(float(x))


def write_hypergraph(h: Hypergraph, fp: TextIO, n_header: bool = True) -> None:
    """One hyperedge per line, ascending ids; a ``# class`` header before each class."""
    if n_header:
        fp.write(f"# n={h.n}\n")
    for spec, edges in zip(h.classes, h.edges_by_class):
        fp.write(
            f"# class d={spec.degree} delta={_fmt(spec.exponent)} "
            f"p={_fmt(edge_probability(h.n, spec))}\n"
        )
        for he in sorted(edges):
            fp.write(" ".join(map(str, he)) + "\n")


def _parse_header(line: str) -> dict:
    fields = {}
    for tok in line.lstrip("#").split():
        if "=" in tok:
            key, val = tok.split("=", 1)
            fields[key] = val
    return fields


def read_hypergraph(fp: TextIO, n: Optional[int] = None) -> Hypergraph:
    """Inverse of :func:`write_hypergraph`. ``n`` defaults to the ``# n=`` header or max id + 1."""
    classes: list[DegreeClassSpec] = []
    edges: list[set] = []
    for raw in fp:
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            f = _parse_header(line)
            if "class" in line.split():
                delta = None if f.get("delta", "-") == "-" else float(f["delta"])
                p = None if f.get("p", "-") == "-" else float(f["p"])
                classes.append(DegreeClassSpec(int(f["d"]), delta, p))
                edges.append(set())
            elif "n" in f and n is None:
                n = int(f["n"])
            continue
        if not classes:
            raise ValueError("hyperedge line before any '# class' header")
        he = tuple(int(t) for t in line.split())
        if len(he) != classes[-1].degree:
            raise ValueError(f"hyperedge {he} does not match class degree {classes[-1].degree}")
        edges[-1].add(he)
    if n is None:
        n = 1 + max((max(he) for es in edges for he in es), default=max((c.degree for c in classes), default=1) - 1)
    return Hypergraph(n, tuple(classes), tuple(frozenset(e) for e in edges))


def write_graph(g: ProjectedGraph, fp: TextIO, n_header: bool = True) -> None:
    """Edge list, ``a b`` per line with ``a < b``, sorted."""
    if n_header:
        fp.write(f"# n={g.n}\n")
    for a, b in sorted(g.edges):
        fp.write(f"{a} {b}\n")


def read_graph(fp: TextIO, n: Optional[int] = None) -> ProjectedGraph:
    edges = set()
    for raw in fp:
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            f = _parse_header(line)
            if "n" in f and n is None:
                n = int(f["n"])
            continue
        a, b = (int(t) for t in line.split())
        edges.add((min(a, b), max(a, b)))
    if n is None:
        n = 1 + max((b for _, b in edges), default=-1)
        n = max(n, 2)
    return ProjectedGraph(n, frozenset(edges))
