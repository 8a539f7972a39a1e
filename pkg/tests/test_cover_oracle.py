import itertools
import random
from fractions import Fraction as F
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperrecon.cover_oracle import (
    Cover,
    DeltaProfile,
    EdgeSet,
    OracleTooLargeError,
    clique_edges,
    clique_g_closed_form,
    constant_profile,
    cover_value,
    delta_profile,
    enumerate_covers,
    g_argmax,
    g_restricted,
    g_value,
    is_valid_cover,
    relaxation_bound_dominates,
    relaxation_upper_bound,
    star_edges,
    star_g_closed_form,
)
from hyperrecon.exact import NEG_INF
from hyperrecon.model import DegreeClassSpec, ModelParams
from oracles import brute_valid_covers

TRI = clique_edges(3)
K4 = clique_edges(4)
GRID = [F(i, 10) for i in range(1, 10)]


def params(*classes, n=50):
    return ModelParams(n, tuple(DegreeClassSpec(d, e) for d, e in classes))


# --- Delta profiles -----------------------------------------------------------

def test_delta_profile_examples():
    p = params((2, 0.3), (4, 0.5))
    assert delta_profile(p, 4).as_tuple() == (F(1, 2),) * 3
    assert delta_profile(p, 4, exclude_at=4).as_tuple() == (F(1, 2), F(1, 2), NEG_INF)
    q = delta_profile(params((3, 0.7)), 5)
    assert q.as_tuple() == (F(7, 10), F(7, 10), NEG_INF, NEG_INF)
    assert q.star_delta == F(7, 10)


def test_delta_profile_takes_max_of_qualifying():
    p = params((2, 0.9), (3, 0.2), (5, 0.4))
    assert delta_profile(p, 6).as_tuple() == (F(9, 10), F(2, 5), F(2, 5), F(2, 5), NEG_INF)


def test_profile_validation():
    with pytest.raises(ValueError):
        DeltaProfile({2: 0.5, 4: 0.5})
    with pytest.raises(ValueError):
        DeltaProfile({2: 1.0})


# --- validity -----------------------------------------------------------------

def test_is_valid_cover_examples():
    assert is_valid_cover(TRI, Cover.of([{1, 2, 3}]))
    assert is_valid_cover(TRI, Cover.of([{1, 2}, {1, 3}, {2, 3}]))
    assert not is_valid_cover(TRI, Cover.of([{1, 2, 3}, {1, 2}]))
    assert not is_valid_cover(TRI, Cover.of([{1, 2}, {1, 3}]))
    assert not is_valid_cover(TRI, Cover.of([{1, 2, 3}, {3}]))


# --- enumeration --------------------------------------------------------------

def test_enumerate_single_edge():
    assert enumerate_covers(EdgeSet.of([(1, 2)]), 2) == [Cover.of([{1, 2}])]


def test_enumerate_triangle():
    covers = enumerate_covers(TRI, 3)
    assert covers == [Cover.of([{1, 2, 3}]), Cover.of([{1, 2}, {1, 3}, {2, 3}])]
    assert set(c.members for c in covers) == brute_valid_covers(TRI.edges)


def test_enumerate_k4_includes_clique_plus_star():
    covers = enumerate_covers(K4, 3)
    assert Cover.of([{1, 2, 3}, {1, 4}, {2, 4}, {3, 4}]) in covers
    assert all(max(len(u) for u in c.members) <= 3 for c in covers)


def _all_edge_sets(k):
    pairs = list(itertools.combinations(range(k), 2))
    for mask in range(1, 1 << len(pairs)):
        yield EdgeSet.of(p for i, p in enumerate(pairs) if mask >> i & 1)


def test_enumeration_matches_doubly_exhaustive_up_to_four_vertices():
    for k in (2, 3, 4):
        for e in _all_edge_sets(k):
            for cap in range(2, len(e.vertices) + 1):
                got = enumerate_covers(e, cap)
                assert len(got) == len(set(got))
                assert {c.members for c in got} == brute_valid_covers(e.edges, cap)


def test_enumerated_covers_are_valid_k5():
    covers = enumerate_covers(clique_edges(5), 5)
    assert covers and len(covers) == len(set(covers))
    for c in covers:
        assert is_valid_cover(clique_edges(5), c)


def test_canonical_order():
    covers = enumerate_covers(K4, 4)
    keys = [c.sort_key() for c in covers]
    assert keys == sorted(keys)


def test_oracle_limit():
    with pytest.raises(OracleTooLargeError):
        enumerate_covers(star_edges(9), 2)


# --- g values -----------------------------------------------------------------

def test_g_triangle_without_whole_set():
    for delta in GRID:
        assert g_value(TRI, DeltaProfile({2: delta, 3: NEG_INF})) == 3 * delta - 3


def test_g_k4_example():
    prof = constant_profile(F(8, 10), 4, [4])
    assert g_value(K4, prof) == F(-6, 5)
    assert g_value(K4, prof) == max(4 * F(8, 10) - 5, 6 * F(8, 10) - 6)


def test_g_star_example():
    assert g_value(star_edges(4), constant_profile(F(1, 2), 4)) == F(-3, 2)


def test_g_all_neg_inf():
    assert g_value(TRI, DeltaProfile({2: NEG_INF, 3: NEG_INF})) is NEG_INF


def test_g_restricted_examples():
    for delta in GRID:
        tri = DeltaProfile({2: delta, 3: NEG_INF})
        assert g_restricted(TRI, tri, 3) == 3 * delta - 3
        assert g_restricted(TRI, tri, 2) is NEG_INF
        k4 = constant_profile(delta, 4, [4])
        assert g_restricted(K4, k4, 4) == 4 * delta - 5
        assert g_restricted(K4, k4, 6) == 6 * delta - 6


def test_g_restricted_rejects_bad_m():
    with pytest.raises(ValueError):
        g_restricted(TRI, constant_profile(F(1, 2), 3), 4)


def test_g_is_max_of_restricted():
    for d in (3, 4):
        prof = constant_profile(F(3, 10), d)
        per_m = [g_restricted(clique_edges(d), prof, m) for m in range(1, comb(d, 2) + 1)]
        finite = [v for v in per_m if v is not NEG_INF]
        assert g_value(clique_edges(d), prof) == max(finite)


def test_argmax_realises_value():
    prof = constant_profile(F(1, 5), 4, [4])
    value, cover = g_argmax(K4, prof)
    assert cover_value(cover, prof) == value == F(-21, 5)
    assert is_valid_cover(K4, cover)


# --- closed forms -------------------------------------------------------------

@pytest.mark.parametrize("d,delta,expected", [
    (3, F(1, 2), F(-3, 2)),
    (4, F(4, 5), F(-6, 5)),
    (5, F(1, 5), F(-6)),
])
def test_clique_closed_form_examples(d, delta, expected):
    assert clique_g_closed_form(d, delta) == expected
    assert g_value(clique_edges(d), constant_profile(delta, d, [d])) == expected


def test_star_closed_form_examples():
    for delta in GRID:
        assert star_g_closed_form(2, delta) == delta - 1
    assert star_g_closed_form(4, F(1, 2)) == F(-3, 2)
    assert star_g_closed_form(6, F(9, 10)) == F(-1, 2)
    assert g_value(star_edges(4), constant_profile(F(1, 2), 4)) == F(-3, 2)


def test_relaxation_examples():
    assert relaxation_upper_bound(4, 0.5, 6) == pytest.approx(-3.0, abs=1e-12)
    assert relaxation_upper_bound(4, 0.5, 4) == pytest.approx(-3.0, abs=1e-12)
    for delta in (0.1, 0.5, 0.9):
        assert relaxation_upper_bound(3, delta, 3) == pytest.approx(3 * delta - 3, abs=1e-12)
    assert relaxation_bound_dominates(F(-3), 4, F(1, 2), 6)
    assert not relaxation_bound_dominates(F(-3) + F(1, 10**12), 4, F(1, 2), 6)


def test_relaxation_matches_restricted_at_endpoints():
    for delta in GRID:
        prof = constant_profile(delta, 4, [4])
        assert relaxation_bound_dominates(g_restricted(K4, prof, 6), 4, delta, 6)
        assert float(g_restricted(K4, prof, 6)) == pytest.approx(relaxation_upper_bound(4, delta, 6), abs=1e-12)


def test_induction_quantity():
    for d in (3, 4, 5):
        for delta in GRID:
            prof = constant_profile(delta, d, [d])
            h = max(
                (v for v in (g_restricted(clique_edges(d), prof, m) for m in range(2, d + 1)) if v is not NEG_INF)
            )
            assert h == d * delta - 2 * d + 3


# --- properties ---------------------------------------------------------------

@st.composite
def small_edge_sets(draw, max_k=5):
    k = draw(st.integers(2, max_k))
    pairs = list(itertools.combinations(range(k), 2))
    chosen = draw(st.sets(st.sampled_from(pairs), min_size=1))
    return EdgeSet.of(chosen)


@st.composite
def profiles(draw, max_size=5):
    vals = {}
    for s in range(2, max_size + 1):
        vals[s] = draw(st.one_of(st.just(NEG_INF), st.integers(1, 9).map(lambda i: F(i, 10))))
    return DeltaProfile(vals)


@settings(max_examples=60, deadline=None)
@given(small_edge_sets(), profiles(), st.integers(2, 5), st.integers(1, 9))
def test_monotone_in_each_component(e, prof, size, bump):
    raised = dict(prof.values)
    old = raised[size]
    new = F(bump, 10)
    if old is not NEG_INF and new < old:
        old, new = new, old
        raised[size] = old
        prof = DeltaProfile(raised)
    raised[size] = new
    lo, hi = g_value(e, prof), g_value(e, DeltaProfile(raised))
    assert lo is NEG_INF or (hi is not NEG_INF and lo <= hi)


@settings(max_examples=60, deadline=None)
@given(small_edge_sets(), profiles())
def test_star_delta_bound(e, prof):
    ds = prof.star_delta
    if ds is NEG_INF:
        return
    # constant profile at delta*, keeping the same excluded sizes
    const = DeltaProfile({s: NEG_INF if v is NEG_INF else ds for s, v in prof.values.items()})
    g, gc = g_value(e, prof), g_value(e, const)
    assert g is NEG_INF or g <= gc


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.lists(st.integers(1, 9), min_size=5, max_size=5))
def test_star_agreement_with_dominant_pair_exponent(d, raw):
    top = max(raw)
    vals = {2: F(top, 10)}
    for s, r in zip(range(3, d + 1), raw):
        vals[s] = F(r, 10)
    prof = DeltaProfile(vals)
    assert g_value(star_edges(d), prof) == star_g_closed_form(d, F(top, 10))


def test_enumeration_random_five_vertex_sets_valid():
    rng = random.Random(0)
    pairs = list(itertools.combinations(range(5), 2))
    for _ in range(30):
        e = EdgeSet.of(rng.sample(pairs, rng.randint(1, len(pairs))))
        for c in enumerate_covers(e, 5):
            assert is_valid_cover(e, c)
