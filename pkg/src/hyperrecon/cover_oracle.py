"""Exhaustive cover enumeration and the cover-optimisation exponent ``g(E, Delta)``.

A cover of an edge set ``E`` (spanning vertices ``V``) is a family of
subsets of ``V``, each of size >= 2, whose internal pairs contain ``E`` and
in which every member is necessary. The exponent is the best total
``sum(1 + Delta[|u|] - |u|)`` over covers. Everything here is exact: the
profile values are :class:`~fractions.Fraction` and ``-inf`` is the
:data:`~hyperrecon.exact.NEG_INF` sentinel.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, isqrt
from typing import Iterable, Mapping, Optional

from .exact import NEG_INF, to_exact
from .model import ModelParams

__all__ = [
    "ORACLE_LIMIT",
    "OracleTooLargeError",
    "EdgeSet",
    "Cover",
    "DeltaProfile",
    "delta_profile",
    "constant_profile",
    "is_valid_cover",
    "enumerate_covers",
    "cover_value",
    "g_value",
    "g_argmax",
    "g_restricted",
    "clique_g_closed_form",
    "star_g_closed_form",
    "relaxation_upper_bound",
    "relaxation_bound_dominates",
    "clique_edges",
    "star_edges",
]

ORACLE_LIMIT = 8


class OracleTooLargeError(ValueError):
    """Oracle instance too large: more spanned vertices than ``ORACLE_LIMIT``."""


def _pair(a, b) -> tuple:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class EdgeSet:
    """Edge set ``E`` with its spanned vertex set ``V``."""

    edges: frozenset

    def __post_init__(self):
        norm = set()
        for a, b in self.edges:
            if a == b:
                raise ValueError(f"self-loop at {a}")
            norm.add(_pair(a, b))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def of(cls, edges: Iterable) -> "EdgeSet":
        return cls(frozenset(tuple(e) for e in edges))

    @property
    def vertices(self) -> tuple:
        return tuple(sorted({v for e in self.edges for v in e}))

    def __len__(self) -> int:
        return len(self.edges)


def clique_edges(d: int, start: int = 1) -> EdgeSet:
    """All pairs of ``{start, ..., start + d - 1}``."""
    return EdgeSet.of(itertools.combinations(range(start, start + d), 2))


def star_edges(d: int, start: int = 1) -> EdgeSet:
    """Star on ``d`` vertices centred at ``start``."""
    return EdgeSet.of((start, start + j) for j in range(1, d))


@dataclass(frozen=True)
class Cover:
    members: frozenset

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(frozenset(u) for u in self.members))

    @classmethod
    def of(cls, members: Iterable) -> "Cover":
        return cls(frozenset(frozenset(u) for u in members))

    def __len__(self) -> int:
        return len(self.members)

    def sorted_members(self) -> list[tuple]:
        return sorted((tuple(sorted(u)) for u in self.members), key=lambda t: (len(t), t))

    def sort_key(self) -> tuple:
        return (len(self.members), self.sorted_members())

    def describe(self) -> str:
        return " ".join("{" + ",".join(map(str, u)) + "}" for u in self.sorted_members())


@dataclass(frozen=True)
class DeltaProfile:
    """Exponents ``Delta[l]`` for member sizes ``l = 2 .. max_size``.

    Sizes above ``max_size`` are treated as ``NEG_INF``.
    """

    values: Mapping[int, object]

    def __post_init__(self):
        vals = {}
        for size, v in dict(self.values).items():
            vals[int(size)] = v if v is NEG_INF else to_exact(v)
        sizes = sorted(vals)
        if not sizes or sizes != list(range(2, sizes[-1] + 1)):
            raise ValueError(f"profile sizes must run contiguously from 2, got {sizes}")
        for size, v in vals.items():
            if v is not NEG_INF and not 0 < v < 1:
                raise ValueError(f"Delta[{size}] = {v} is outside (0, 1)")
        object.__setattr__(self, "values", dict(sorted(vals.items())))

    @property
    def max_size(self) -> int:
        return max(self.values)

    @property
    def star_delta(self):
        """Largest finite value, or ``NEG_INF`` if every entry is the sentinel."""
        finite = [v for v in self.values.values() if v is not NEG_INF]
        return max(finite) if finite else NEG_INF

    def __getitem__(self, size: int):
        return self.values.get(size, NEG_INF)

    def finite_sizes(self) -> list[int]:
        return [s for s, v in self.values.items() if v is not NEG_INF]

    def as_tuple(self) -> tuple:
        return tuple(self.values.values())


def delta_profile(params: ModelParams, max_size: int, exclude_at: Optional[int] = None) -> DeltaProfile:
    """``Delta[l] = max{delta_r : d_r >= l}``; ``NEG_INF`` past the largest degree and at ``exclude_at``."""
    if max_size < 2:
        raise ValueError("max_size must be >= 2")
    if any(c.exponent is None for c in params.classes):
        raise ValueError("a Delta profile needs an exponent on every class")
    vals = {}
    for size in range(2, max_size + 1):
        qualifying = [to_exact(c.exponent) for c in params.classes if c.degree >= size]
        vals[size] = max(qualifying) if qualifying else NEG_INF
    if exclude_at is not None and 2 <= exclude_at <= max_size:
        vals[exclude_at] = NEG_INF
    return DeltaProfile(vals)


def constant_profile(delta, max_size: int, neg_inf_at: Iterable[int] = ()) -> DeltaProfile:
    skip = set(neg_inf_at)
    return DeltaProfile({s: NEG_INF if s in skip else delta for s in range(2, max_size + 1)})


def is_valid_cover(e: EdgeSet, c: Cover) -> bool:
    """Covering plus minimality, checked directly on pair sets."""
    verts = set(e.vertices)
    pair_sets = []
    for u in c.members:
        if len(u) < 2 or not u <= verts:
            return False
        pair_sets.append({_pair(a, b) for a, b in itertools.combinations(u, 2)} & e.edges)
    if not e.edges <= set().union(*pair_sets):
        return False
    for i in range(len(pair_sets)):
        rest = set().union(*(p for j, p in enumerate(pair_sets) if j != i))
        if e.edges <= rest:
            return False
    return True


class _Index:
    """Bitmask view of an edge set: vertex and edge positions, per-subset edge masks."""

    def __init__(self, e: EdgeSet, allowed_sizes: Iterable[int]):
        self.verts = e.vertices
        if len(self.verts) > ORACLE_LIMIT:
            raise OracleTooLargeError(
                f"oracle instance too large: |V|={len(self.verts)} > {ORACLE_LIMIT}"
            )
        vpos = {v: i for i, v in enumerate(self.verts)}
        self.edge_list = sorted(e.edges)
        epos = {(vpos[a], vpos[b]): i for i, (a, b) in enumerate(self.edge_list)}
        self.full = (1 << len(self.edge_list)) - 1
        k = len(self.verts)
        allowed = set(allowed_sizes)
        self.emask: dict[int, int] = {}
        self.containing: list[list[int]] = [[] for _ in self.edge_list]
        for size in sorted(s for s in allowed if 2 <= s <= k):
            for combo in itertools.combinations(range(k), size):
                m = 0
                for a, b in itertools.combinations(combo, 2):
                    i = epos.get((a, b))
                    if i is not None:
                        m |= 1 << i
                if not m:
                    continue
                smask = sum(1 << v for v in combo)
                self.emask[smask] = m
                for i in _bit_positions(m):
                    self.containing[i].append(smask)

    def to_cover(self, masks: Iterable[int]) -> Cover:
        return Cover(frozenset(
            frozenset(self.verts[i] for i in _bit_positions(s)) for s in masks
        ))


def _bit_positions(m: int):
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


def _search(idx: _Index):
    """Yield each minimal cover once, as a frozenset of subset bitmasks."""
    if not idx.edge_list:
        return
    emask = idx.emask
    seen: set = set()
    chosen: list[int] = []
    counts = [0] * len(idx.edge_list)

    def rec(covered: int, multi: int):
        if covered == idx.full:
            key = frozenset(chosen)
            if key not in seen:
                seen.add(key)
                yield key
            return
        first = (~covered & idx.full)
        first = (first & -first).bit_length() - 1
        for s in idx.containing[first]:
            m = emask[s]
            new_multi = multi
            for i in _bit_positions(m):
                counts[i] += 1
                if counts[i] == 2:
                    new_multi |= 1 << i
            # a member all of whose edges are covered twice is redundant for good
            if not any(emask[t] & m and not emask[t] & ~new_multi for t in chosen):
                chosen.append(s)
                yield from rec(covered | m, new_multi)
                chosen.pop()
            for i in _bit_positions(m):
                counts[i] -= 1

    yield from rec(0, 0)


def _enumerate(e: EdgeSet, allowed_sizes) -> list[Cover]:
    return list(_enumerate_cached(e, frozenset(allowed_sizes)))


@lru_cache(maxsize=256)
def _enumerate_cached(e: EdgeSet, allowed_sizes: frozenset) -> tuple:
    idx = _Index(e, allowed_sizes)
    covers = [idx.to_cover(key) for key in _search(idx)]
    covers.sort(key=Cover.sort_key)
    return tuple(covers)


def enumerate_covers(e: EdgeSet, size_cap: int) -> list[Cover]:
    """Every valid cover of ``e`` with all members of size <= ``size_cap``, canonically ordered.

    Order is by number of members, then lexicographic on the sorted members.
    """
    return _enumerate(e, range(2, size_cap + 1))


def cover_value(c: Cover, delta: DeltaProfile):
    """``sum(1 + Delta[|u|] - |u|)``; ``NEG_INF`` if any member size is excluded."""
    total = Fraction(0)
    for u in c.members:
        dv = delta[len(u)]
        if dv is NEG_INF:
            return NEG_INF
        total += 1 + dv - len(u)
    return total


def _best(e: EdgeSet, delta: DeltaProfile, m: Optional[int] = None):
    best, arg = NEG_INF, None
    for c in _enumerate_cached(e, frozenset(delta.finite_sizes())):
        if m is not None and len(c) != m:
            continue
        v = cover_value(c, delta)
        if best is NEG_INF or v > best:
            best, arg = v, c
    return best, arg


def g_value(e: EdgeSet, delta: DeltaProfile):
    """Maximum of :func:`cover_value` over all valid covers of ``e``."""
    return _best(e, delta)[0]


def g_argmax(e: EdgeSet, delta: DeltaProfile):
    """``(g_value, maximising cover)``; the first maximiser in canonical order wins ties."""
    return _best(e, delta)


def g_restricted(e: EdgeSet, delta: DeltaProfile, m: int):
    """Maximum over valid covers with exactly ``m`` members, ``NEG_INF`` if there are none."""
    k = len(e.vertices)
    if not 1 <= m <= comb(k, 2):
        raise ValueError(f"member count must lie in [1, C({k},2)], got {m}")
    return _best(e, delta, m)[0]


def clique_g_closed_form(d: int, delta_star) -> Fraction:
    """Exponent for ``K_d`` when no member may be the whole clique."""
    if d < 3:
        raise ValueError("d must be >= 3")
    delta = to_exact(delta_star)
    c = comb(d, 2)
    return max(delta * d - 2 * d + 3, -c + c * delta)


def star_g_closed_form(d: int, delta) -> Fraction:
    """Exponent for a star on ``d`` vertices: the individual-edges cover."""
    if d < 2:
        raise ValueError("d must be >= 2")
    return (d - 1) * (to_exact(delta) - 1)


def relaxation_upper_bound(d: int, delta, m: int) -> float:
    """Continuous bound on any ``m``-member cover of ``K_d`` without the full clique."""
    c = comb(d, 2)
    if not 2 <= m <= c:
        raise ValueError(f"m must lie in [2, {c}], got {m}")
    s = (1 + 8 * (c - m + 1)) ** 0.5
    return m * (float(delta) - 1) + 2 - (1 + s) / 2


def relaxation_bound_dominates(value, d: int, delta, m: int) -> bool:
    """Exact test of ``value <= relaxation_upper_bound(d, delta, m)``."""
    if value is NEG_INF:
        return True
    c = comb(d, 2)
    if not 2 <= m <= c:
        raise ValueError(f"m must lie in [2, {c}], got {m}")
    radicand = 1 + 8 * (c - m + 1)
    # value <= m(delta-1) + 2 - (1+s)/2  <=>  s <= t
    t = 2 * (m * (to_exact(delta) - 1) + 2 - to_exact(value)) - 1
    if t < 0:
        return False
    root = isqrt(radicand)
    if root * root == radicand:
        return root <= t
    return radicand <= t * t
