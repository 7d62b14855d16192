"""Configurations of N people in M rooms and the simultaneous-move edge relation.

A configuration is a tuple ``f`` of length N where ``f[k - 1]`` is the room
(1-based) of person ``k``.  Larger index means smarter.  In every step the
smartest occupant of each non-empty room (a *mover*) changes room, and nobody
else moves.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

from .errors import (
    ConfigParseError,
    IndexOutOfRangeError,
    RoomRangeError,
    VertexBoundError,
)

Config = tuple[int, ...]

DEFAULT_MAX_VERTICES = 2**22


@dataclass(frozen=True)
class Instance:
    people: int
    rooms: int

    def __post_init__(self):
        if self.people < 1:
            raise ValueError(f"need at least one person, got {self.people}")
        if self.rooms < 2:
            raise ValueError(f"need at least two rooms, got {self.rooms}")

    @property
    def n_vertices(self) -> int:
        return self.rooms**self.people

    @property
    def n_low(self) -> int:
        """Number of people outside the M smartest."""
        return max(self.people - self.rooms, 0)

    def check_explicit(self, max_vertices: int = DEFAULT_MAX_VERTICES) -> None:
        if self.n_vertices > max_vertices:
            raise VertexBoundError(
                f"G({self.people},{self.rooms}) has {self.rooms}^{self.people} vertices, "
                f"above the explicit bound {max_vertices}"
            )

    def __str__(self):
        return f"G({self.people},{self.rooms})"


def interval(lo: int, hi: int) -> range:
    """Integers in [lo, hi] that are >= 1."""
    return range(max(lo, 1), hi + 1)


def movers(f: Sequence[int]) -> list[int]:
    """Persons (1-based, ascending) who are the smartest in their room."""
    seen = set()
    out = []
    for k in range(len(f), 0, -1):
        r = f[k - 1]
        if r not in seen:
            seen.add(r)
            out.append(k)
    out.reverse()
    return out


def occupied_rooms(f: Sequence[int]) -> int:
    return len(set(f))


def is_edge(f: Sequence[int], g: Sequence[int]) -> bool:
    if len(f) != len(g):
        return False
    seen = set()
    for k in range(len(f) - 1, -1, -1):
        r = f[k]
        if r in seen:
            if g[k] != r:
                return False
        else:
            seen.add(r)
            if g[k] == r:
                return False
    return True


def successors(f: Sequence[int], m: int) -> Iterator[Config]:
    """Lazily yield every g with is_edge(f, g).

    Movers are taken in ascending person order and their target rooms vary in
    lexicographic order, so the stream is deterministic.
    """
    mv = movers(f)
    choices = [[r for r in range(1, m + 1) if r != f[k - 1]] for k in mv]
    base = list(f)
    for targets in itertools.product(*choices):
        for k, r in zip(mv, targets):
            base[k - 1] = r
        yield tuple(base)


def out_degree(f: Sequence[int], m: int) -> int:
    return (m - 1) ** occupied_rooms(f)


def top_segment(n: int, m: int) -> range:
    """Persons N-M+1..N, i.e. the M smartest (everyone when M >= N)."""
    return interval(n - m + 1, n)


def is_spread(f: Sequence[int], m: int) -> bool:
    """True iff the M smartest people occupy pairwise distinct rooms."""
    n = len(f)
    top = f[max(n - m, 0):]
    return len(set(top)) == len(top)


def is_concentrated(f: Sequence[int], m: int) -> bool:
    """True iff the M smartest people all share one room."""
    n = len(f)
    return len(set(f[max(n - m, 0):])) == 1


def low_profile(f: Sequence[int], m: int) -> Config:
    return tuple(f[: max(len(f) - m, 0)])


def encode_index(f: Sequence[int], m: int, max_vertices: int = DEFAULT_MAX_VERTICES) -> int:
    """Dense vertex id; person 1 is the least significant base-M digit."""
    if m ** len(f) > max_vertices:
        raise VertexBoundError(f"{m}^{len(f)} exceeds explicit bound {max_vertices}")
    idx = 0
    for r in reversed(f):
        idx = idx * m + (r - 1)
    return idx


def decode_index(i: int, inst: Instance, max_vertices: int = DEFAULT_MAX_VERTICES) -> Config:
    inst.check_explicit(max_vertices)
    if not 0 <= i < inst.n_vertices:
        raise IndexOutOfRangeError(f"vertex {i} not in [0, {inst.n_vertices})")
    m = inst.rooms
    out = []
    for _ in range(inst.people):
        i, d = divmod(i, m)
        out.append(d + 1)
    return tuple(out)


def parse_config(text: str, m: int | None = None, n: int | None = None) -> Config:
    """Parse ``"1,1,2,3"``; whitespace is ignored."""
    tokens = [t.strip() for t in text.split(",")]
    try:
        f = tuple(int(t) for t in tokens)
    except ValueError:
        raise ConfigParseError(f"not a comma-separated list of integers: {text!r}") from None
    if n is not None and len(f) != n:
        raise ConfigParseError(f"expected {n} entries, got {len(f)} in {text!r}")
    for r in f:
        if r < 1 or (m is not None and r > m):
            raise RoomRangeError(f"room {r} outside [1, {m}] in {text!r}")
    return f


def format_config(f: Sequence[int]) -> str:
    return ",".join(str(r) for r in f)


class PathCheck(NamedTuple):
    ok: bool
    index: int | None = None

    def __bool__(self):
        return self.ok


def validate_path(path: Sequence[Sequence[int]]) -> PathCheck:
    """Check that consecutive configurations are edges.

    On failure ``index`` is the position of the first offending pair.
    """
    for i in range(len(path) - 1):
        if not is_edge(path[i], path[i + 1]):
            return PathCheck(False, i)
    return PathCheck(True)
