"""Finite-``n`` probabilities of implied hyperedges and of subgraphs of the projection.

The exact formulas are checked against plain Monte Carlo over full sampled
hypergraphs (:func:`mc_subgraph_prob`, :func:`mc_implied_prob`).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .cover_oracle import ORACLE_LIMIT, EdgeSet, OracleTooLargeError, enumerate_covers
from .model import ModelParams, edge_probability, sample_class

__all__ = [
    "ProbBounds",
    "implied_prob_exact",
    "subgraph_prob_bounds",
    "subgraph_prob_exact",
    "mc_subgraph_prob",
    "mc_implied_prob",
    "trial_seed",
]


@dataclass(frozen=True)
class ProbBounds:
    lower: float
    upper_raw: float

    @property
    def upper(self) -> float:
        return min(1.0, self.upper_raw)


def implied_prob_exact(n: int, v_total: int, v_sub: int, params: ModelParams) -> float:
    """Probability that some hyperedge meets a fixed ``v_total``-set in exactly a given ``v_sub``-subset.

    ``1 - prod_{j: d_j >= v_sub} (1 - p_j) ** C(n - v_total, d_j - v_sub)``,
    with each ``p_j`` evaluated at ``n``. Zero when no class is large enough.
    """
    if v_sub < 2:
        raise ValueError(f"subset size must be >= 2, got {v_sub}")
    if v_total < v_sub or n < v_total:
        raise ValueError(f"need v_sub <= v_total <= n, got {v_sub}, {v_total}, {n}")
    log_miss = 0.0
    for spec in params.classes:
        if spec.degree < v_sub:
            continue
        count = math.comb(n - v_total, spec.degree - v_sub)
        if count == 0:
            continue
        p = edge_probability(n, spec)
        if p >= 1.0:
            return 1.0
        log_miss += count * math.log1p(-p)
    return -math.expm1(log_miss)


def subgraph_prob_bounds(e: EdgeSet, n: int, params: ModelParams) -> ProbBounds:
    """Lower and upper bounds on ``P(E in projection)`` from the valid covers of ``E``.

    For a cover, the events "some hyperedge meets V in exactly u" are
    independent across members, so each cover contributes the product of
    :func:`implied_prob_exact` terms. ``lower`` is the best single cover and
    ``upper_raw`` the sum over covers. Members larger than the top degree
    have probability zero and are left out of the enumeration.
    """
    k = len(e.vertices)
    if not e.edges:
        return ProbBounds(1.0, 1.0)
    cap = min(k, params.degrees[-1])
    cache: dict[int, float] = {}
    lower = upper = 0.0
    for cover in enumerate_covers(e, cap):
        prod = 1.0
        for u in cover.members:
            s = len(u)
            if s not in cache:
                cache[s] = implied_prob_exact(n, k, s, params)
            prod *= cache[s]
        lower = max(lower, prod)
        upper += prod
    return ProbBounds(lower, upper)


def subgraph_prob_exact(e: EdgeSet, n: int, params: ModelParams) -> float:
    """Exact ``P(E in projection)``.

    ``E`` appears iff the subsets ``u`` of ``V`` realised as ``h & V`` for some
    hyperedge ``h`` jointly cover ``E``. Those events are independent across
    ``u``, so a distribution over the covered-edge mask is propagated one
    subset at a time.
    """
    verts = e.vertices
    k = len(verts)
    if k > ORACLE_LIMIT:
        raise OracleTooLargeError(f"oracle instance too large: |V|={k} > {ORACLE_LIMIT}")
    if not e.edges:
        return 1.0
    epos = {pair: i for i, pair in enumerate(sorted(e.edges))}
    full = (1 << len(epos)) - 1
    dist = {0: 1.0}
    for size in range(2, min(k, params.degrees[-1]) + 1):
        q = implied_prob_exact(n, k, size, params)
        if q == 0.0:
            continue
        for u in itertools.combinations(verts, size):
            m = 0
            for pair in itertools.combinations(u, 2):
                i = epos.get(pair)
                if i is not None:
                    m |= 1 << i
            if not m:
                continue
            nxt: dict[int, float] = {}
            for mask, w in dist.items():
                nxt[mask] = nxt.get(mask, 0.0) + w * (1 - q)
                nxt[mask | m] = nxt.get(mask | m, 0.0) + w * q
            dist = nxt
    return dist.get(full, 0.0)


def trial_seed(seed: int, *path: int) -> int:
    """64-bit seed for a position (``path``) under ``seed``; independent of evaluation order."""
    ss = np.random.SeedSequence([int(seed) & 0xFFFF_FFFF_FFFF_FFFF, *map(int, path)])
    return int(ss.generate_state(1, np.uint64)[0])


def _covered_pairs(params: ModelParams, seed: int, verts: np.ndarray) -> set:
    """Pairs inside ``verts`` covered by one full sampled hypergraph."""
    pairs = set()
    for spec in params.classes:
        rows = sample_class(params.n, spec, seed)
        if not len(rows):
            continue
        hit = np.isin(rows, verts)
        touching = hit.sum(axis=1) >= 2
        for row, mask in zip(rows[touching].tolist(), hit[touching].tolist()):
            inside = [v for v, m in zip(row, mask) if m]
            for i in range(len(inside)):
                for j in range(i + 1, len(inside)):
                    pairs.add((inside[i], inside[j]))
    return pairs


def mc_subgraph_prob(e: EdgeSet, params: ModelParams, trials: int, seed: int) -> tuple[float, float]:
    """Fraction of sampled hypergraphs whose projection contains every edge of ``e``.

    Returns ``(estimate, binomial standard error)``. Trial ``t`` uses
    ``trial_seed(seed, t)``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    verts = np.array(e.vertices, dtype=np.int64)
    if len(verts) and (verts[0] < 0 or verts[-1] >= params.n):
        raise ValueError(f"edge set vertices must lie in [0, {params.n})")
    hits = sum(e.edges <= _covered_pairs(params, trial_seed(seed, t), verts) for t in range(trials))
    p_hat = hits / trials
    return p_hat, math.sqrt(p_hat * (1 - p_hat) / trials)


def mc_implied_prob(n: int, v_total: int, v_sub: int, params: ModelParams,
                    trials: int, seed: int) -> tuple[float, float]:
    """Monte Carlo counterpart of :func:`implied_prob_exact`.

    Fixes ``V = {0, ..., v_total - 1}`` and ``V' = {0, ..., v_sub - 1}`` and
    counts sampled hypergraphs with a hyperedge ``h`` such that
    ``h & V == V'``.
    """
    params = params.with_n(n)
    target = np.zeros(v_total, dtype=bool)
    target[:v_sub] = True
    hits = 0
    for t in range(trials):
        s = trial_seed(seed, t)
        for spec in params.classes:
            if spec.degree < v_sub:
                continue
            rows = sample_class(n, spec, s)
            if not len(rows):
                continue
            # indicator of each vertex of V inside each hyperedge
            inside = np.zeros((len(rows), v_total), dtype=bool)
            r, c = np.nonzero(rows < v_total)
            inside[r, rows[r, c]] = True
            if np.any(np.all(inside == target, axis=1)):
                hits += 1
                break
    p_hat = hits / trials
    return p_hat, math.sqrt(p_hat * (1 - p_hat) / trials)
