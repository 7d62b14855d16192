"""Explicit G(N, M) at desk scale: components, in-degrees, BFS and theorem checks.

Out-degrees reach (M-1)^M, so materializing every edge is hopeless beyond
tiny instances.  Instead each simultaneous step is factored into N layers,
one per person: at layer p persons < p already hold their new rooms and
persons >= p still hold their old ones, which is exactly what is needed to
decide whether person p is a mover.  A path of N layer edges from a layer-0
node to a layer-0 node is one edge of G(N, M), and every edge arises from
exactly one such path.  Layer nodes unreachable from layer 0 are dropped.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, connected_components

from .core import (
    DEFAULT_MAX_VERTICES,
    Config,
    Instance,
    decode_index,
    encode_index,
    format_config,
    successors,
)


class Unreachable(Exception):
    """No directed path between the requested configurations."""


@dataclass
class ExplicitGraph:
    instance: Instance
    max_vertices: int = DEFAULT_MAX_VERTICES

    def __post_init__(self):
        self.instance.check_explicit(self.max_vertices)

    @property
    def n_vertices(self) -> int:
        return self.instance.n_vertices

    @cached_property
    def digits(self) -> np.ndarray:
        """(V, N) array of 0-based rooms; row v is the configuration with index v."""
        n, m = self.instance.people, self.instance.rooms
        idx = np.arange(self.n_vertices, dtype=np.int64)
        out = np.empty((self.n_vertices, n), dtype=np.int16)
        for p in range(n):
            out[:, p] = (idx // m**p) % m
        return out

    def config(self, v: int) -> Config:
        return decode_index(int(v), self.instance, self.max_vertices)

    def index(self, f) -> int:
        return encode_index(f, self.instance.rooms, self.max_vertices)

    def adjacency(self, v: int) -> list[int]:
        """Successor indices of vertex v, in the order of core.successors."""
        m = self.instance.rooms
        return [encode_index(g, m, self.max_vertices) for g in successors(self.config(v), m)]

    def edges(self) -> Iterator[tuple[int, int]]:
        for v in range(self.n_vertices):
            for w in self.adjacency(v):
                yield v, w

    @cached_property
    def occupied(self) -> np.ndarray:
        d = self.digits
        m = self.instance.rooms
        present = np.zeros((self.n_vertices, m), dtype=bool)
        rows = np.arange(self.n_vertices)
        for p in range(d.shape[1]):
            present[rows, d[:, p]] = True
        return present.sum(axis=1)

    @cached_property
    def out_degrees(self) -> np.ndarray:
        return (self.instance.rooms - 1) ** self.occupied.astype(np.int64)

    @cached_property
    def spread_mask(self) -> np.ndarray:
        top = self.digits[:, self.instance.n_low:].astype(np.int64)
        s = np.sort(top, axis=1)
        return np.all(s[:, 1:] != s[:, :-1], axis=1)

    @cached_property
    def concentrated_mask(self) -> np.ndarray:
        top = self.digits[:, self.instance.n_low:]
        return np.all(top == top[:, :1], axis=1)

    def vertex_class(self, v: int) -> str:
        if self.concentrated_mask[v]:
            return "Vc"
        return "Vs" if self.spread_mask[v] else "other"

    @cached_property
    def _layers(self) -> list[tuple[np.ndarray, np.ndarray]]:
        """Per person p, (src, dst) vertex-index arrays from layer p to p+1."""
        n, m = self.instance.people, self.instance.rooms
        V = self.n_vertices
        d = self.digits
        idx = np.arange(V, dtype=np.int64)
        reach = np.ones(V, dtype=bool)
        layers = []
        for p in range(n):
            dp = d[:, p]
            shadowed = np.zeros(V, dtype=bool)
            for q in range(p + 1, n):
                shadowed |= d[:, q] == dp
            here = idx[reach]
            mov = here[~shadowed[reach]]
            stay = here[shadowed[reach]]
            src = [stay]
            dst = [stay]
            base = mov - d[mov, p].astype(np.int64) * m**p
            for u in range(1, m):
                src.append(mov)
                dst.append(base + ((d[mov, p].astype(np.int64) + u) % m) * m**p)
            src = np.concatenate(src)
            dst = np.concatenate(dst)
            layers.append((src, dst))
            reach = np.zeros(V, dtype=bool)
            reach[dst] = True
        return layers

    @cached_property
    def layered(self) -> csr_matrix:
        """Sparse adjacency of the layered graph; node p*V + v, layer N folded onto 0."""
        n, V = self.instance.people, self.n_vertices
        srcs, dsts = [], []
        for p, (src, dst) in enumerate(self._layers):
            srcs.append(src + p * V)
            dsts.append(dst + ((p + 1) % n) * V)
        src = np.concatenate(srcs)
        dst = np.concatenate(dsts)
        data = np.ones(len(src), dtype=np.int8)
        return csr_matrix((data, (src, dst)), shape=(n * V, n * V))


def build_graph(inst: Instance, max_vertices: int = DEFAULT_MAX_VERTICES) -> ExplicitGraph:
    return ExplicitGraph(inst, max_vertices)


def _canonical_labels(labels: np.ndarray) -> np.ndarray:
    """Renumber so component ids follow their smallest vertex index."""
    _, first, inv = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first)] = np.arange(len(first))
    return rank[inv]


@dataclass
class SccReport:
    n_components: int
    sizes: Counter
    giant_size: int
    singleton_count: int
    labels: np.ndarray = field(repr=False)

    def component_of(self, v: int) -> int:
        return int(self.labels[v])


def scc_decompose(g: ExplicitGraph) -> SccReport:
    _, lab = connected_components(g.layered, directed=True, connection="strong")
    labels = _canonical_labels(lab[: g.n_vertices])
    counts = np.bincount(labels)
    return SccReport(
        n_components=len(counts),
        sizes=Counter(counts.tolist()),
        giant_size=int(counts.max()),
        singleton_count=int((counts == 1).sum()),
        labels=labels,
    )


@dataclass
class WeakReport:
    n_components: int
    sizes: list[int]
    labels: np.ndarray = field(repr=False)


def weak_components(g: ExplicitGraph) -> WeakReport:
    _, lab = connected_components(g.layered, directed=True, connection="weak")
    labels = _canonical_labels(lab[: g.n_vertices])
    counts = np.bincount(labels)
    return WeakReport(len(counts), sorted(counts.tolist(), reverse=True), labels)


def in_degrees(g: ExplicitGraph) -> np.ndarray:
    """Exact in-degree of every vertex, by counting layered paths that end there."""
    V = g.n_vertices
    counts = np.ones(V, dtype=np.int64)
    for src, dst in g._layers:
        counts = np.bincount(dst, weights=counts[src], minlength=V).astype(np.int64)
    return counts


def _layered_distances(g: ExplicitGraph, v: int) -> np.ndarray:
    """Level-synchronous BFS over the layered graph; -1 marks unreachable nodes."""
    L = g.layered
    indptr, indices = L.indptr, L.indices
    dist = np.full(L.shape[0], -1, dtype=np.int64)
    dist[v] = 0
    frontier = np.array([v], dtype=np.int64)
    level = 0
    while frontier.size:
        level += 1
        starts = indptr[frontier]
        lens = indptr[frontier + 1] - starts
        total = int(lens.sum())
        if total == 0:
            break
        offsets = np.repeat(starts - np.cumsum(lens) + lens, lens)
        nbrs = indices[offsets + np.arange(total)]
        nbrs = np.unique(nbrs[dist[nbrs] < 0])
        dist[nbrs] = level
        frontier = nbrs
    return dist


def bfs_distances(g: ExplicitGraph, f) -> np.ndarray:
    """Shortest distance from f to every vertex; -1 where unreachable."""
    n, V = g.instance.people, g.n_vertices
    dist = _layered_distances(g, g.index(f))[:V]
    return np.where(dist >= 0, dist // n, -1)


def _graph_for(inst, graph, max_vertices):
    if graph is not None:
        return graph
    return build_graph(inst, max_vertices)


def bfs_distance(
    inst: Instance, f, g, graph: ExplicitGraph | None = None, max_vertices: int = DEFAULT_MAX_VERTICES
) -> int:
    """Exact directed distance; raises Unreachable."""
    return len(bfs_path(inst, f, g, graph, max_vertices)) - 1


def bfs_path(
    inst: Instance, f, g, graph: ExplicitGraph | None = None, max_vertices: int = DEFAULT_MAX_VERTICES
) -> list[Config]:
    G = _graph_for(inst, graph, max_vertices)
    f, g = tuple(f), tuple(g)
    if f == g:
        return [f]
    V = G.n_vertices
    src, tgt = G.index(f), G.index(g)
    _, pred = breadth_first_order(G.layered, src, directed=True, return_predecessors=True)
    if pred[tgt] < 0:
        raise Unreachable(f"{format_config(g)} is not reachable from {format_config(f)}")
    nodes = [tgt]
    node = tgt
    while node != src:
        node = int(pred[node])
        nodes.append(node)
    nodes.reverse()
    return [G.config(x) for x in nodes if x < V]


def reachable_mask(g: ExplicitGraph, f) -> np.ndarray:
    order = breadth_first_order(g.layered, g.index(f), directed=True, return_predecessors=False)
    mask = np.zeros(g.n_vertices, dtype=bool)
    mask[order[order < g.n_vertices]] = True
    return mask


@dataclass
class TheoremReport:
    instance: Instance
    strongly_connected: bool
    weakly_connected: bool
    n_scc: int
    giant_size: int
    singleton_count: int
    n_weak: int
    zero_in_degree: list[int]
    min_in_degree: int
    vc_count: int
    verdicts: dict[str, bool]

    @property
    def all_pass(self) -> bool:
        return all(self.verdicts.values())

    def to_dict(self, max_listed: int = 64) -> dict:
        n, m = self.instance.people, self.instance.rooms
        zero = self.zero_in_degree
        return {
            "instance": {"n": n, "m": m},
            "vertices": self.instance.n_vertices,
            "strongly_connected": self.strongly_connected,
            "weakly_connected": self.weakly_connected,
            "scc_count": self.n_scc,
            "giant_size": self.giant_size,
            "singleton_count": self.singleton_count,
            "weak_component_count": self.n_weak,
            "min_in_degree": self.min_in_degree,
            "vc_count": self.vc_count,
            "zero_in_degree_count": len(zero),
            "zero_in_degree": [format_config(decode_index(v, self.instance, 2**63)) for v in zero[:max_listed]],
            "verdicts": self.verdicts,
            "all_pass": self.all_pass,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def verify_theorems(
    inst: Instance, graph: ExplicitGraph | None = None, max_vertices: int = DEFAULT_MAX_VERTICES
) -> TheoremReport:
    """Measure the graph and compare with the predicted structure."""
    G = _graph_for(inst, graph, max_vertices)
    n, m = inst.people, inst.rooms
    scc = scc_decompose(G)
    weak = weak_components(G)
    indeg = in_degrees(G)
    zero = np.flatnonzero(indeg == 0)
    vc = G.concentrated_mask
    strong = scc.n_components == 1
    weakly = weak.n_components == 1

    verdicts = {"strong_iff_extra_room": strong == (m >= n + 1)}
    if m >= n + 1:
        verdicts["min_in_degree_positive"] = bool(indeg.min() >= 1)
    else:
        verdicts["zero_in_degree_is_vc"] = bool(np.array_equal(indeg == 0, vc))
    if 3 <= m <= n:
        expect_single = m ** (n - m + 1)
        singles = np.bincount(scc.labels) == 1
        singleton_vertices = singles[scc.labels]
        verdicts["weakly_connected"] = weakly
        verdicts["giant_size"] = scc.giant_size == m**n - expect_single
        verdicts["singleton_count"] = scc.singleton_count == expect_single
        verdicts["scc_count"] = scc.n_components == 1 + expect_single
        verdicts["singletons_are_vc"] = bool(np.array_equal(singleton_vertices, vc))
    elif m == 2 and n > 2:
        verdicts["not_weakly_connected"] = not weakly

    return TheoremReport(
        instance=inst,
        strongly_connected=strong,
        weakly_connected=weakly,
        n_scc=scc.n_components,
        giant_size=scc.giant_size,
        singleton_count=scc.singleton_count,
        n_weak=weak.n_components,
        zero_in_degree=zero.tolist(),
        min_in_degree=int(indeg.min()),
        vc_count=int(vc.sum()),
        verdicts=verdicts,
    )


_DOT_SHAPE = {"Vs": "circle", "Vc": "square", "other": "diamond"}


def export_dot(g: ExplicitGraph) -> str:
    """Graphviz digraph; node shape marks the class (circle V_s, square V_c, diamond other)."""
    inst = g.instance
    lines = [f'digraph "G({inst.people},{inst.rooms})" {{']
    for v in range(g.n_vertices):
        cls = g.vertex_class(v)
        label = format_config(g.config(v))
        lines.append(f'  v{v} [label="{label}", class="{cls}", shape={_DOT_SHAPE[cls]}];')
    for v, w in g.edges():
        lines.append(f"  v{v} -> v{w};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_jsonl(g: ExplicitGraph) -> Iterator[str]:
    scc = scc_decompose(g)
    indeg = in_degrees(g)
    outdeg = g.out_degrees
    for v in range(g.n_vertices):
        rec = {
            "id": v,
            "config": format_config(g.config(v)),
            "scc": scc.component_of(v),
            "in_deg": int(indeg[v]),
            "out_deg": int(outdeg[v]),
            "class": g.vertex_class(v),
        }
        yield json.dumps(rec) + "\n"
