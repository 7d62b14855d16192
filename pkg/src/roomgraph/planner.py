"""Constructive paths in G(N, M) that never enumerate the graph.

The pipeline for M >= 3 is: spread the M smartest people into distinct rooms,
walk the low people (1..N-M) to the wanted profile with two-step lifts of
single asynchronous moves, permute the top people with derangement steps, and
finish with one step into the target.  M = 2 has out-degree one everywhere,
so there the unique orbit is simply followed.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import NamedTuple, Sequence

from .core import (
    Config,
    is_concentrated,
    is_spread,
    low_profile,
    movers,
    successors,
)
from .errors import NoPredecessorError, PreconditionError
from .perm import Permutation, factor_into_derangements, make_derangement


_CACHE = 1 << 16


class AsynchMove(NamedTuple):
    person: int
    src: int
    dst: int


class UnreachableReason(str, Enum):
    TARGET_CONCENTRATED = "TargetConcentrated"
    DETERMINISTIC_ORBIT_MISS = "DeterministicOrbitMiss"


@dataclass(frozen=True)
class PlanOutcome:
    path: list[Config] | None
    reason: UnreachableReason | None = None

    @property
    def reachable(self) -> bool:
        return self.path is not None

    @property
    def length(self) -> int | None:
        return None if self.path is None else len(self.path) - 1


def _top_start(f: Sequence[int], m: int) -> int:
    """0-based index of the first of the M smartest people."""
    return max(len(f) - m, 0)


def _spread_step(f: Config, m: int) -> Config:
    n = len(f)
    t0 = _top_start(f, m)
    top_rooms: dict[int, list[int]] = {}
    for k in range(t0, n):
        top_rooms.setdefault(f[k], []).append(k)
    singles = sorted(r for r, ks in top_rooms.items() if len(ks) == 1)
    multis = sorted(r for r, ks in top_rooms.items() if len(ks) > 1)
    empty = [r for r in range(1, m + 1) if r not in top_rooms]
    multi_movers = sorted(max(top_rooms[r]) for r in multis)

    g = list(f)
    free = iter(empty)
    if len(singles) >= 2:
        rot = make_derangement(singles)
        for r in singles:
            g[top_rooms[r][0]] = rot(r)
    elif len(singles) == 1:
        r = singles[0]
        g[top_rooms[r][0]] = next(free)
        if multi_movers:
            g[multi_movers[0]] = r
            multi_movers = multi_movers[1:]
    for k in multi_movers:
        g[k] = next(free)

    # lows that are the smartest in a room with no top person are forced to move
    seen = set(f[t0:])
    for k in range(t0 - 1, -1, -1):
        r = f[k]
        if r not in seen:
            seen.add(r)
            g[k] = 2 if r == 1 else 1
    return tuple(g)


def spread_path(f: Sequence[int], m: int) -> list[Config]:
    """Path from f into V_s; each step strictly increases the rooms used by the top people."""
    return list(_spread_path(tuple(f), m))


@lru_cache(maxsize=_CACHE)
def _spread_path(f: Config, m: int) -> tuple[Config, ...]:
    path = [f]
    while not is_spread(f, m):
        f = _spread_step(f, m)
        path.append(f)
    return tuple(path)


def _apply_rooms(f: Config, start: int, perm: Permutation) -> Config:
    return f[:start] + tuple(perm(r) for r in f[start:])


def exchange_path(f: Sequence[int], g: Sequence[int], m: int) -> list[Config]:
    """At most four steps between two V_s configurations with equal low profiles."""
    return list(_exchange_path(tuple(f), tuple(g), m))


@lru_cache(maxsize=_CACHE)
def _exchange_path(f: Config, g: Config, m: int) -> tuple[Config, ...]:
    if not (is_spread(f, m) and is_spread(g, m)):
        raise PreconditionError("both endpoints must have the top people in distinct rooms")
    if len(f) != len(g) or low_profile(f, m) != low_profile(g, m):
        raise PreconditionError("endpoints must agree on the low people")
    if f == g:
        return (f,)
    if m == 3:
        return tuple(_exchange_m3(f, g))

    t0 = _top_start(f, m)
    pairs = dict(zip(f[t0:], g[t0:]))
    rest_src = sorted(set(range(1, m + 1)) - set(pairs))
    rest_dst = sorted(set(range(1, m + 1)) - set(pairs.values()))
    pairs.update(zip(rest_src, rest_dst))
    sigma = Permutation(pairs)
    path = [f]
    for d in factor_into_derangements(sigma).in_application_order():
        path.append(_apply_rooms(path[-1], t0, d))
    assert path[-1] == g
    return tuple(path)


def _quotient_successors(state: Config, constrained: bool) -> list[Config]:
    out = []
    for h in successors(state, 3):
        if constrained and len(set(h)) < 3:
            continue
        out.append(h)
    return out


@lru_cache(maxsize=None)
def _quotient_path(start: Config, goal: Config, constrained: bool) -> tuple[Config, ...] | None:
    """Shortest path in the tracked-people quotient for M = 3.

    With ``constrained`` every room must keep a tracked person, so the pinned
    (untracked, less smart) people are never the smartest in their room.
    """
    prev = {start: None}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        if s == goal:
            out = [s]
            while prev[out[-1]] is not None:
                out.append(prev[out[-1]])
            return tuple(reversed(out))
        for h in _quotient_successors(s, constrained):
            if h not in prev:
                prev[h] = s
                queue.append(h)
    return None


def _exchange_m3(f: Config, g: Config) -> list[Config]:
    n = len(f)
    lo = max(n - 4, 0)
    constrained = lo > 0
    qpath = _quotient_path(f[lo:], g[lo:], constrained)
    if qpath is None:
        raise PreconditionError(f"no quotient path from {f} to {g}")
    return [f[:lo] + q for q in qpath]


def concentrate_predecessor(g: Sequence[int], m: int) -> Config:
    """Some f in V_s with an edge f -> g.

    For g in V_c this only exists when M >= N + 1; then f puts everyone alone
    in the rooms other than g's room and they all converge.
    """
    return _concentrate_predecessor(tuple(g), m)


@lru_cache(maxsize=_CACHE)
def _concentrate_predecessor(g: Config, m: int) -> Config:
    n = len(g)
    t0 = _top_start(g, m)
    if is_concentrated(g, m):
        if m <= n:
            raise NoPredecessorError("a configuration with the top people together has no predecessor")
        others = [r for r in range(1, m + 1) if r != g[0]]
        return tuple(others[:n])

    top_max = sorted(k for k in movers(g) if k - 1 >= t0)
    A = [k - 1 for k in top_max]
    f = list(g)
    for i, k in enumerate(A):
        f[k] = g[A[(i + 1) % len(A)]]
    used = {g[k] for k in A}
    leftover_rooms = [r for r in range(1, m + 1) if r not in used]
    leftover_people = [k for k in range(t0, n) if k not in set(A)]
    for k, r in zip(leftover_people, leftover_rooms):
        f[k] = r
    return tuple(f)


def asynch_route(h1: Sequence[int], h2: Sequence[int], m: int) -> list[AsynchMove]:
    """Single-mover moves turning h1 into h2, settling people in ascending order.

    Each move relocates the smartest occupant of its source room.
    """
    cur = list(h1)
    if len(cur) != len(h2):
        raise ValueError("profiles must have the same length")
    moves = []

    def move(k: int, dst: int):
        moves.append(AsynchMove(k + 1, cur[k], dst))
        cur[k] = dst

    for j in range(len(cur)):
        target = h2[j]
        if cur[j] == target:
            continue
        while True:
            room = cur[j]
            top = max(k for k in range(len(cur)) if cur[k] == room)
            if top == j:
                break
            away = [r for r in range(1, m + 1) if r != room and r != target]
            move(top, away[0] if away else target)
        move(j, target)
    return moves


def apply_asynch(h: Sequence[int], mv: AsynchMove) -> Config:
    """Replay one move under the single-mover rule; raises if it is illegal."""
    k = mv.person - 1
    if h[k] != mv.src or mv.dst == mv.src:
        raise PreconditionError(f"illegal move {mv} from {tuple(h)}")
    if any(h[i] == mv.src for i in range(k + 1, len(h))):
        raise PreconditionError(f"person {mv.person} is not the smartest in room {mv.src}")
    out = list(h)
    out[k] = mv.dst
    return tuple(out)


def trick_lift(f1: Sequence[int], mv: AsynchMove, m: int) -> list[Config]:
    """Two G-steps from f1 in V_s realizing one low move, ending back in V_s."""
    f1 = tuple(f1)
    n = len(f1)
    if not 3 <= m <= n:
        raise PreconditionError(f"lifting low moves needs 3 <= M <= N, got N={n}, M={m}")
    if not is_spread(f1, m):
        raise PreconditionError("start must have the top people in distinct rooms")
    t0 = n - m
    j = mv.person - 1
    r = mv.src
    if not 0 <= j < t0:
        raise PreconditionError(f"person {mv.person} is not a low person")
    low = f1[:t0]
    apply_asynch(low, mv)

    k = next(i for i in range(t0, n) if f1[i] == r)
    s = 1 if r != 1 else 2
    rho = make_derangement(x for x in range(1, m + 1) if x != r)
    g = list(f1)
    g[k] = s
    for i in range(t0, n):
        if i != k:
            g[i] = rho(f1[i])

    n_stay = min(i for i in range(t0, n) if g[i] == s)
    sigma = make_derangement(range(1, m + 1), pin=(r, s))
    f2 = list(g)
    f2[j] = mv.dst
    for i in range(t0, n):
        if i != n_stay:
            f2[i] = sigma(g[i])
    return [f1, tuple(g), tuple(f2)]


def low_profile_path(f1: Sequence[int], h2: Sequence[int], m: int) -> list[Config]:
    """Path from f1 in V_s to a V_s configuration whose low people match h2."""
    return list(_low_profile_path(tuple(f1), tuple(h2), m))


@lru_cache(maxsize=_CACHE)
def _low_profile_path(f1: Config, h2: Config, m: int) -> tuple[Config, ...]:
    h1 = low_profile(f1, m)
    if h1 == h2:
        return (f1,)
    path = [f1]
    for mv in asynch_route(h1, h2, m):
        path.extend(trick_lift(path[-1], mv, m)[1:])
    return tuple(path)


def _erase_loops(path: list[Config]) -> list[Config]:
    out: list[Config] = []
    pos: dict[Config, int] = {}
    for v in path:
        if v in pos:
            cut = pos[v]
            for w in out[cut + 1:]:
                del pos[w]
            del out[cut + 1:]
        else:
            pos[v] = len(out)
            out.append(v)
    return out


def _orbit_path(f: Config, g: Config) -> PlanOutcome:
    seen = {f}
    path = [f]
    cur = f
    while True:
        cur = next(successors(cur, 2))
        path.append(cur)
        if cur == g:
            return PlanOutcome(path)
        if cur in seen:
            return PlanOutcome(None, UnreachableReason.DETERMINISTIC_ORBIT_MISS)
        seen.add(cur)


def plan_path(f: Sequence[int], g: Sequence[int], m: int) -> PlanOutcome:
    """A valid path from f to g, or the reason none exists."""
    f, g = tuple(f), tuple(g)
    n = len(f)
    if len(g) != n:
        raise ValueError("configurations have different lengths")
    if f == g:
        return PlanOutcome([f])
    if m == 2:
        return _orbit_path(f, g)
    if is_concentrated(g, m) and m <= n:
        return PlanOutcome(None, UnreachableReason.TARGET_CONCENTRATED)

    path = spread_path(f, m)
    f1 = path[-1]
    if is_spread(g, m):
        g1, last = g, []
    else:
        g1, last = concentrate_predecessor(g, m), [g]
    path += low_profile_path(f1, low_profile(g1, m), m)[1:]
    path += exchange_path(path[-1], g1, m)[1:]
    path += last
    return PlanOutcome(_erase_loops(path))

