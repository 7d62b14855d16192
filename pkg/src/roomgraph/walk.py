"""Seeded Monte Carlo random walks on G(N, M).

Each mover independently picks a uniform room among the M - 1 others, which
makes the next vertex uniform over the out-neighbours.

Random numbers: walker ``i`` of a run with seed ``s`` draws from numpy's
PCG64 bit generator seeded by ``SeedSequence(s, spawn_key=(i,))``.  Only the
raw 64-bit output is used; a draw below ``k`` takes the next raw word ``x``,
rejects it when ``x >= 2**64 - 2**64 % k`` and otherwise returns ``x % k``.
With M = 2 no randomness is consumed.  This scheme is fixed: goldens depend
on it.
"""

from __future__ import annotations

import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .core import (
    DEFAULT_MAX_VERTICES,
    Config,
    Instance,
    format_config,
    is_concentrated,
    is_spread,
    movers,
)

_TWO64 = 1 << 64
_BUFFER = 4096


class WalkerStream:
    """Buffered raw PCG64 output with unbiased bounded draws."""

    def __init__(self, seed: int, index: int = 0):
        ss = np.random.SeedSequence(seed, spawn_key=(index,))
        self._bitgen = np.random.PCG64(ss)
        self._buf: list[int] = []
        self._pos = 0

    def raw(self) -> int:
        if self._pos >= len(self._buf):
            self._buf = self._bitgen.random_raw(_BUFFER).tolist()
            self._pos = 0
        x = self._buf[self._pos]
        self._pos += 1
        return x

    def below(self, k: int) -> int:
        limit = _TWO64 - _TWO64 % k
        while True:
            x = self.raw()
            if x < limit:
                return x % k

    def below_array(self, k: int, size: int) -> np.ndarray:
        """``size`` draws below k; consumes the stream exactly like repeated ``below``."""
        if size == 0:
            return np.empty(0, dtype=np.int64)
        limit = _TWO64 - _TWO64 % k
        chunks = [np.asarray(self._buf[self._pos:], dtype=np.uint64)]
        self._buf, self._pos = [], 0

        def n_ok(words):
            return len(words) if limit == _TWO64 else int((words < np.uint64(limit)).sum())

        have = n_ok(chunks[0])
        while have < size:
            chunk = self._bitgen.random_raw(max(size - have + 64, _BUFFER))
            chunks.append(chunk)
            have += n_ok(chunk)
        words = np.concatenate(chunks)
        if limit == _TWO64:
            idx = np.arange(size)
        else:
            idx = np.flatnonzero(words < np.uint64(limit))[:size]
        self._buf = words[idx[-1] + 1:].tolist()
        return (words[idx] % np.uint64(k)).astype(np.int64)


def random_successor(f: Sequence[int], m: int, stream: WalkerStream) -> Config:
    if m == 2:
        return _deterministic_successor(f)
    g = list(f)
    for k in movers(f):
        r = f[k - 1]
        g[k - 1] = (r + stream.below(m - 1)) % m + 1
    return tuple(g)


def _deterministic_successor(f: Sequence[int]) -> Config:
    g = list(f)
    for k in movers(f):
        g[k - 1] = 3 - f[k - 1]
    return tuple(g)


def sample_successors(f: Sequence[int], m: int, stream: WalkerStream, size: int) -> np.ndarray:
    """(size, N) array of independent random successors of f."""
    mv = movers(f)
    out = np.tile(np.asarray(f, dtype=np.int64), (size, 1))
    if m == 2:
        out[:] = _deterministic_successor(f)
        return out
    draws = stream.below_array(m - 1, size * len(mv)).reshape(size, len(mv))
    for i, k in enumerate(mv):
        r = f[k - 1]
        out[:, k - 1] = (r + draws[:, i]) % m + 1
    return out


def trajectory(f: Sequence[int], m: int, steps: int, stream: WalkerStream) -> Iterator[Config]:
    """Yield the start and then ``steps`` successive random configurations."""
    f = tuple(f)
    yield f
    for _ in range(steps):
        f = random_successor(f, m, stream)
        yield f


@dataclass(frozen=True)
class WalkConfig:
    instance: Instance
    start: Config
    steps: int
    walkers: int = 1
    seed: int = 0
    mode: str = "per-state"
    max_vertices: int = DEFAULT_MAX_VERTICES

    def __post_init__(self):
        if self.mode not in ("per-state", "occupancy"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if len(self.start) != self.instance.people:
            raise ValueError("start configuration has the wrong length")
        if any(not 1 <= r <= self.instance.rooms for r in self.start):
            raise ValueError("start configuration uses a room outside [1, M]")
        if self.steps < 0 or self.walkers < 1:
            raise ValueError("need steps >= 0 and walkers >= 1")
        if self.mode == "per-state":
            self.instance.check_explicit(self.max_vertices)


@dataclass
class WalkStats:
    config: WalkConfig
    counts: np.ndarray | None = field(default=None, repr=False)
    occupancy: Counter | None = None
    vc_visits: int = 0
    vs_visits: int = 0

    @property
    def total_visits(self) -> int:
        return self.config.walkers * (self.config.steps + 1)

    def frequencies(self) -> np.ndarray:
        return self.counts / self.counts.sum()

    def to_dict(self) -> dict:
        cfg = self.config
        out = {
            "instance": {"n": cfg.instance.people, "m": cfg.instance.rooms},
            "start": format_config(cfg.start),
            "seed": cfg.seed,
            "steps": cfg.steps,
            "walkers": cfg.walkers,
            "mode": cfg.mode,
        }
        if cfg.mode == "per-state":
            freqs = self.frequencies()
            m = cfg.instance.rooms
            out["freqs"] = {
                format_config(_digits(v, cfg.instance.people, m)): float(freqs[v])
                for v in np.flatnonzero(self.counts)
            }
        else:
            total = self.total_visits
            out["occupancy_hist"] = {
                ",".join(map(str, key)): n / total for key, n in sorted(self.occupancy.items(), reverse=True)
            }
        out["vc_visits"] = self.vc_visits
        out["vs_visits"] = self.vs_visits
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict()) + "\n"


def _digits(v: int, n: int, m: int) -> Config:
    out = []
    for _ in range(n):
        v, d = divmod(int(v), m)
        out.append(d + 1)
    return tuple(out)


def _occupancy_key(f: Config, m: int) -> tuple[int, ...]:
    sizes = [0] * m
    for r in f:
        sizes[r - 1] += 1
    return tuple(sorted(sizes, reverse=True))


def _run_one(cfg: WalkConfig, index: int):
    n, m = cfg.instance.people, cfg.instance.rooms
    stream = WalkerStream(cfg.seed, index)
    per_state = cfg.mode == "per-state"
    counts = Counter()
    vc = vs = 0
    weights = [m**p for p in range(n)]
    for f in trajectory(cfg.start, m, cfg.steps, stream):
        if per_state:
            counts[sum((r - 1) * w for r, w in zip(f, weights))] += 1
        else:
            counts[_occupancy_key(f, m)] += 1
        vc += is_concentrated(f, m)
        vs += is_spread(f, m)
    return counts, vc, vs


def run_walk(cfg: WalkConfig, n_jobs: int = 1) -> WalkStats:
    """Run all walkers and merge their statistics in walker order."""
    if n_jobs > 1 and cfg.walkers > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as ex:
            parts = list(ex.map(_run_one, [cfg] * cfg.walkers, range(cfg.walkers)))
    else:
        parts = [_run_one(cfg, i) for i in range(cfg.walkers)]

    stats = WalkStats(cfg)
    merged = Counter()
    for counts, vc, vs in parts:
        merged.update(counts)
        stats.vc_visits += vc
        stats.vs_visits += vs
    if cfg.mode == "per-state":
        arr = np.zeros(cfg.instance.n_vertices, dtype=np.int64)
        for v, c in merged.items():
            arr[v] = c
        stats.counts = arr
    else:
        stats.occupancy = merged
    return stats


@dataclass
class FrequencyTable:
    instance: Instance
    frequencies: np.ndarray
    in_giant: np.ndarray
    scc_labels: np.ndarray = field(repr=False)

    def mass_outside_giant(self) -> float:
        return float(self.frequencies[~self.in_giant].sum())


def estimate_frequencies(cfg: WalkConfig, n_jobs: int = 1) -> FrequencyTable:
    """Empirical visit frequencies with the SCC membership of each state."""
    from .analysis import build_graph, scc_decompose

    if cfg.mode != "per-state":
        raise ValueError("frequency estimates need per-state mode")
    stats = run_walk(cfg, n_jobs)
    scc = scc_decompose(build_graph(cfg.instance, cfg.max_vertices))
    giant_label = int(np.bincount(scc.labels).argmax())
    return FrequencyTable(cfg.instance, stats.frequencies(), scc.labels == giant_label, scc.labels)
