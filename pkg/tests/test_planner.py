import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import brute
from roomgraph.core import is_concentrated, is_edge, is_spread, low_profile, validate_path
from roomgraph.errors import NoPredecessorError, PreconditionError
from roomgraph.planner import (
    AsynchMove,
    UnreachableReason,
    _quotient_path,
    apply_asynch,
    asynch_route,
    concentrate_predecessor,
    exchange_path,
    low_profile_path,
    plan_path,
    spread_path,
    trick_lift,
)


def top_rooms_used(f, m):
    return len(set(f[max(len(f) - m, 0):]))


def random_config(rng, n, m):
    return tuple(rng.randint(1, m) for _ in range(n))


def random_spread(rng, n, m):
    low = n - m if n > m else 0
    top = rng.sample(range(1, m + 1), n - low)
    return tuple(rng.randint(1, m) for _ in range(low)) + tuple(top)


# spread


def test_spread_examples():
    assert spread_path((1, 1, 1), 3) == [(1, 1, 1), (1, 1, 2), (1, 2, 3)]
    assert spread_path((1, 1, 2, 3), 3) == [(1, 1, 2, 3)]
    p = spread_path((1, 1, 1, 1), 3)
    assert len(p) - 1 <= 3 and validate_path(p) and is_spread(p[-1], 3)
    assert set(p[-1][1:]) == {1, 2, 3}


@settings(max_examples=300)
@given(st.integers(1, 60), st.integers(2, 20), st.randoms(use_true_random=False))
def test_spread_properties(n, m, rng):
    f = random_config(rng, n, m)
    p = spread_path(f, m)
    assert p[0] == f and is_spread(p[-1], m)
    assert validate_path(p)
    assert len(p) - 1 <= min(n, m)
    used = [top_rooms_used(x, m) for x in p]
    assert all(b > a for a, b in zip(used, used[1:]))


# exchange


def test_exchange_examples():
    assert exchange_path((1, 2, 3, 4), (2, 1, 4, 3), 4) == [(1, 2, 3, 4), (2, 1, 4, 3)]
    p = exchange_path((1, 2, 3), (2, 1, 3), 3)
    assert validate_path(p) and p[0] == (1, 2, 3) and p[-1] == (2, 1, 3)
    # shortest quotient path; the classic gadget is one step longer and also valid
    assert len(p) - 1 == 2
    assert validate_path([(1, 2, 3), (2, 3, 2), (2, 2, 1), (2, 1, 3)])
    assert validate_path([(1, 1, 2, 3), (1, 2, 3, 2), (3, 2, 2, 1), (1, 2, 1, 3)])
    assert exchange_path((2, 1, 3), (2, 1, 3), 3) == [(2, 1, 3)]


def test_exchange_preconditions():
    with pytest.raises(PreconditionError):
        exchange_path((1, 1, 2), (1, 2, 3), 3)
    with pytest.raises(PreconditionError):
        exchange_path((1, 1, 2, 3), (2, 1, 2, 3), 3)


@pytest.mark.parametrize("n, m", [(3, 3), (4, 3), (5, 3), (4, 4), (5, 4), (2, 4), (6, 5)])
def test_exchange_all_pairs(n, m):
    spread = [f for f in brute.all_configs(n, m) if is_spread(f, m)]
    for f, g in itertools.product(spread, repeat=2):
        if low_profile(f, m) != low_profile(g, m):
            continue
        p = exchange_path(f, g, m)
        assert p[0] == f and p[-1] == g and validate_path(p)
        assert len(p) - 1 <= 4
        if m != 3:
            assert all(is_spread(x, m) for x in p)


@pytest.mark.parametrize("tracked, constrained", [(1, False), (2, False), (3, False), (4, False), (4, True)])
def test_m3_quotient_all_alignments(tracked, constrained):
    low = tracked - 3 if tracked > 3 else 0
    states = [s for s in itertools.product((1, 2, 3), repeat=tracked) if len(set(s[low:])) == len(s[low:])]
    for a, b in itertools.product(states, repeat=2):
        if a[:low] != b[:low]:
            continue
        q = _quotient_path(a, b, constrained)
        assert q is not None and len(q) - 1 <= 4
        if constrained:
            assert all(len(set(s)) == 3 for s in q)


@pytest.mark.parametrize("n", [6, 7])
def test_m3_exchange_with_pinned_lows(n):
    rng = random.Random(n)
    for _ in range(200):
        f = random_spread(rng, n, 3)
        g = f[: n - 3] + tuple(rng.sample([1, 2, 3], 3))
        p = exchange_path(f, g, 3)
        assert validate_path(p) and p[-1] == g and len(p) - 1 <= 4


# concentrate


def test_concentrate_examples():
    assert concentrate_predecessor((1, 2, 3), 3) == (2, 3, 1)
    with pytest.raises(NoPredecessorError):
        concentrate_predecessor((1, 1, 1), 3)
    assert concentrate_predecessor((1, 1), 3) == (2, 3)


@pytest.mark.parametrize("n, m", [(3, 3), (4, 3), (5, 3), (4, 4), (2, 3), (3, 5), (5, 4)])
def test_concentrate_exhaustive(n, m):
    for g in brute.all_configs(n, m):
        if is_concentrated(g, m) and m <= n:
            with pytest.raises(NoPredecessorError):
                concentrate_predecessor(g, m)
            continue
        f = concentrate_predecessor(g, m)
        assert is_spread(f, m) and is_edge(f, g)


# asynchronous router


def test_asynch_examples():
    assert asynch_route((1, 1), (2, 2), 2) == [AsynchMove(2, 1, 2), AsynchMove(1, 1, 2)]
    assert asynch_route((1, 2, 3), (1, 2, 3), 3) == []
    moves = asynch_route((1, 1, 1), (2, 3, 1), 3)
    h = (1, 1, 1)
    for mv in moves:
        h = apply_asynch(h, mv)
    assert h == (2, 3, 1)


@settings(max_examples=300)
@given(st.data())
def test_asynch_replay(data):
    n = data.draw(st.integers(0, 25))
    m = data.draw(st.integers(2, 6))
    h1 = tuple(data.draw(st.lists(st.integers(1, m), min_size=n, max_size=n)))
    h2 = tuple(data.draw(st.lists(st.integers(1, m), min_size=n, max_size=n)))
    moves = asynch_route(h1, h2, m)
    h = h1
    for mv in moves:
        h = apply_asynch(h, mv)
    assert h == h2
    assert len(moves) <= n * (n + 1) // 2 + n


def test_apply_asynch_rejects_non_smartest():
    with pytest.raises(PreconditionError):
        apply_asynch((1, 1), AsynchMove(1, 1, 2))


# trick lift


def test_trick_example():
    assert trick_lift((1, 1, 2, 3), AsynchMove(1, 1, 2), 3) == [(1, 1, 2, 3), (1, 2, 3, 2), (2, 2, 1, 3)]


def test_trick_preconditions():
    with pytest.raises(PreconditionError):
        trick_lift((1, 2, 3), AsynchMove(1, 1, 2), 3)
    with pytest.raises(PreconditionError):
        trick_lift((1, 1, 2), AsynchMove(1, 1, 2), 2)
    with pytest.raises(PreconditionError):
        trick_lift((1, 1, 1, 2, 3), AsynchMove(1, 1, 2), 3)


@settings(max_examples=300)
@given(st.integers(3, 8), st.integers(1, 30), st.randoms(use_true_random=False))
def test_trick_properties(m, extra, rng):
    n = m + extra
    f1 = random_spread(rng, n, m)
    low = f1[: n - m]
    j = rng.randrange(n - m)
    r = low[j]
    if any(low[i] == r for i in range(j + 1, n - m)):
        j = max(i for i in range(n - m) if low[i] == r)
    dst = rng.choice([x for x in range(1, m + 1) if x != r])
    f1_, g, f2 = trick_lift(f1, AsynchMove(j + 1, r, dst), m)
    assert is_edge(f1, g) and is_edge(g, f2) and is_spread(f2, m)
    assert max(i for i in range(n) if g[i] == r) == j
    expected = list(low)
    expected[j] = dst
    assert low_profile(f2, m) == tuple(expected)


def test_low_profile_path_examples():
    assert low_profile_path((1, 1, 2, 3), (1,), 3) == [(1, 1, 2, 3)]
    assert low_profile_path((1, 1, 2, 3), (2,), 3) == [(1, 1, 2, 3), (1, 2, 3, 2), (2, 2, 1, 3)]
    rng = random.Random(3)
    for _ in range(50):
        f1 = random_spread(rng, 6, 3)
        h2 = tuple(rng.randint(1, 3) for _ in range(3))
        p = low_profile_path(f1, h2, 3)
        assert validate_path(p) and is_spread(p[-1], 3) and low_profile(p[-1], 3) == h2


# full planner


def test_plan_examples():
    out = plan_path((1, 2, 3), (2, 1, 3), 3)
    assert out.reachable and validate_path(out.path)
    out = plan_path((1, 2, 3), (1, 1, 1), 3)
    assert not out.reachable and out.reason is UnreachableReason.TARGET_CONCENTRATED
    for f, g in itertools.product(brute.all_configs(2, 3), repeat=2):
        out = plan_path(f, g, 3)
        assert out.reachable and validate_path(out.path) and out.path[0] == f and out.path[-1] == g
    out = plan_path((1, 1, 1), (2, 2, 2), 2)
    assert out.reason is UnreachableReason.DETERMINISTIC_ORBIT_MISS
    assert plan_path((1, 2), (1, 2), 3).path == [(1, 2)]


def test_plan_soundness_fuzz():
    rng = random.Random(2024)
    # long low profiles give quadratic paths, so most draws stay small
    for i in range(160):
        n = rng.randint(1, 200) if i % 8 == 0 else rng.randint(1, 40)
        m = rng.randint(3, 20)
        f = random_config(rng, n, m)
        g = random_config(rng, n, m)
        out = plan_path(f, g, m)
        if is_concentrated(g, m) and m <= n and f != g:
            assert not out.reachable
            continue
        assert out.reachable
        assert out.path[0] == f and out.path[-1] == g
        assert validate_path(out.path)


def test_plan_two_rooms_matches_bfs():
    for n in range(1, 6):
        adj = brute.adjacency(n, 2)
        for f in adj:
            dist = brute.bfs(adj, f)
            for g in adj:
                out = plan_path(f, g, 2)
                assert out.reachable == (g in dist)
                if out.reachable:
                    assert validate_path(out.path) and out.path[-1] == g
                    assert out.length == dist[g]  # deterministic orbit is the only path
