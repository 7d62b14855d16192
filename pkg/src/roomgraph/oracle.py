"""Planner-versus-BFS conformance over a grid of small instances."""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass, field

import numpy as np

from .analysis import ExplicitGraph, bfs_distances, build_graph
from .core import DEFAULT_MAX_VERTICES, Instance, format_config, validate_path
from .planner import plan_path

ALL_PAIRS_UP_TO = 1000
TARGETS_PER_SOURCE = 20


def length_bound(n: int, m: int) -> int:
    """Ceiling checked against every planner path."""
    low = max(n - m, 0)
    return 2 * low * (low + 2) + n + 6


def parse_grid(text: str) -> list[Instance]:
    """``"1..6x2..4"`` -> instances with N in 1..6 and M in 2..4."""
    m = re.fullmatch(r"\s*(\d+)(?:\.\.(\d+))?\s*[xX]\s*(\d+)(?:\.\.(\d+))?\s*", text)
    if not m:
        raise ValueError(f"grid must look like N1..N2xM1..M2, got {text!r}")
    n1, n2, m1, m2 = m.groups()
    n2 = n2 or n1
    m2 = m2 or m1
    return [Instance(n, mm) for n in range(int(n1), int(n2) + 1) for mm in range(int(m1), int(m2) + 1)]


@dataclass
class InstanceResult:
    instance: Instance
    exhaustive: bool
    pairs: int = 0
    reachable_pairs: int = 0
    disagreements: list[tuple[str, str]] = field(default_factory=list)
    invalid_paths: list[tuple[str, str]] = field(default_factory=list)
    shorter_than_bfs: int = 0
    max_len: int = 0
    total_len: int = 0
    max_bfs: int = 0
    total_bfs: int = 0

    @property
    def bound(self) -> int:
        return length_bound(self.instance.people, self.instance.rooms)

    @property
    def ok(self) -> bool:
        return (
            not self.disagreements
            and not self.invalid_paths
            and not self.shorter_than_bfs
            and self.max_len <= self.bound
        )

    def to_dict(self) -> dict:
        rp = max(self.reachable_pairs, 1)
        return {
            "n": self.instance.people,
            "m": self.instance.rooms,
            "vertices": self.instance.n_vertices,
            "exhaustive": self.exhaustive,
            "pairs": self.pairs,
            "reachable_pairs": self.reachable_pairs,
            "agreement": 1.0 - len(self.disagreements) / max(self.pairs, 1),
            "disagreements": [list(p) for p in self.disagreements[:10]],
            "invalid_paths": [list(p) for p in self.invalid_paths[:10]],
            "max_len": self.max_len,
            "mean_len": self.total_len / rp,
            "max_bfs": self.max_bfs,
            "mean_bfs": self.total_bfs / rp,
            "length_bound": self.bound,
            "within_bound": self.max_len <= self.bound,
            "ok": self.ok,
        }


def _pairs(G: ExplicitGraph, n_pairs: int, rng: random.Random):
    V = G.n_vertices
    if V <= ALL_PAIRS_UP_TO:
        for s in range(V):
            yield s, range(V)
        return
    n_sources = math.ceil(n_pairs / TARGETS_PER_SOURCE)
    for _ in range(n_sources):
        yield rng.randrange(V), [rng.randrange(V) for _ in range(TARGETS_PER_SOURCE)]


def check_instance(inst: Instance, n_pairs: int = 200, seed: int = 0, max_vertices: int = DEFAULT_MAX_VERTICES) -> InstanceResult:
    G = build_graph(inst, max_vertices)
    m = inst.rooms
    rng = random.Random(f"{seed}:{inst.people}:{inst.rooms}")
    res = InstanceResult(inst, exhaustive=G.n_vertices <= ALL_PAIRS_UP_TO)
    for s, targets in _pairs(G, n_pairs, rng):
        f = G.config(s)
        dist = bfs_distances(G, f)
        for t in targets:
            g = G.config(t)
            res.pairs += 1
            out = plan_path(f, g, m)
            bfs_ok = dist[t] >= 0
            if out.reachable != bfs_ok:
                res.disagreements.append((format_config(f), format_config(g)))
                continue
            if not out.reachable:
                continue
            path = out.path
            if not (validate_path(path) and path[0] == f and path[-1] == g):
                res.invalid_paths.append((format_config(f), format_config(g)))
                continue
            length = len(path) - 1
            res.reachable_pairs += 1
            res.total_len += length
            res.max_len = max(res.max_len, length)
            res.total_bfs += int(dist[t])
            res.max_bfs = max(res.max_bfs, int(dist[t]))
            if length < dist[t]:
                res.shorter_than_bfs += 1
    return res


@dataclass
class OracleReport:
    results: list[InstanceResult]
    skipped: list[Instance]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def length_curve(self) -> list[dict]:
        """Largest planner path length seen for each N."""
        by_n: dict[int, int] = {}
        for r in self.results:
            n = r.instance.people
            by_n[n] = max(by_n.get(n, 0), r.max_len)
        return [{"n": n, "max_len": by_n[n]} for n in sorted(by_n)]

    def to_dict(self) -> dict:
        return {
            "instances": [r.to_dict() for r in self.results],
            "skipped": [{"n": i.people, "m": i.rooms, "vertices": i.n_vertices} for i in self.skipped],
            "length_curve": self.length_curve(),
            "ok": self.ok,
        }


def run_oracle(
    instances: list[Instance], n_pairs: int = 200, seed: int = 0, max_vertices: int = DEFAULT_MAX_VERTICES
) -> OracleReport:
    """Instances above ``max_vertices`` are reported as skipped, not checked."""
    results, skipped = [], []
    for inst in instances:
        if inst.n_vertices > max_vertices:
            skipped.append(inst)
            continue
        results.append(check_instance(inst, n_pairs, seed, max_vertices))
    return OracleReport(results, skipped)
