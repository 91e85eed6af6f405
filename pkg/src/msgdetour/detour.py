"""Detour path sets, per-edge detour numbers (k-DeN) and node totals (Phi^k)."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

import numpy as np

from . import _kernels
from .errors import GraphValidationError, ResourceError
from .graph import Edge, Graph

DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class DetourPathSet:
    endpoints: tuple[int, int]
    k: int
    paths: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.paths)


@dataclass(frozen=True)
class DenTable:
    k: int
    per_edge: Mapping[Edge, int]
    per_node_phi: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "per_edge", MappingProxyType(dict(self.per_edge)))

    def edge(self, u: int, v: int) -> int:
        return self.per_edge[(u, v) if u < v else (v, u)]

    def incident(self, g: Graph, v: int) -> list[int]:
        """DeN values on the edges at ``v``, in neighbour order."""
        return [self.edge(v, w) for w in g.neighbors[v]]

    def to_json_obj(self) -> dict:
        return {
            "k": self.k,
            "per_edge": [[u, v, c] for (u, v), c in sorted(self.per_edge.items())],
            "per_node_phi": list(self.per_node_phi),
        }


def _check_k(k: int) -> None:
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < 2:
        raise ValueError(f"depth bound k must be an integer >= 2, got {k!r}")


def detour_paths(g: Graph, i: int, j: int, k: int, budget: int = DEFAULT_BUDGET) -> DetourPathSet:
    """All simple ``i -> j`` paths with 2..k edges, for an edge ``{i, j}``.

    Paths are ordered by length, then lexicographically by node sequence.
    """
    _check_k(k)
    if not g.has_edge(i, j):
        raise GraphValidationError(f"({i}, {j}) is not an edge; detour numbers live on edges")
    nbrs = g.neighbors
    found: list[tuple[int, ...]] = []
    path = [i]
    on_path = {i}
    states = 0

    def walk(v: int) -> None:
        nonlocal states
        for w in nbrs[v]:
            if w in on_path:
                continue
            if len(path) == 1 and w == j:
                continue  # the edge itself
            states += 1
            if states > budget:
                raise ResourceError(f"detour enumeration exceeded budget of {budget} states")
            if w == j:
                found.append(tuple(path) + (j,))
                continue
            if len(path) < k:
                path.append(w)
                on_path.add(w)
                walk(w)
                on_path.discard(w)
                path.pop()

    walk(i)
    found.sort(key=lambda p: (len(p), p))
    return DetourPathSet((i, j), k, tuple(found))


def _slot_counts(g: Graph, k: int, budget: int, threads: int) -> np.ndarray:
    indptr, indices = g.csr
    out = np.zeros(len(indices), dtype=np.int64)
    if g.n == 0:
        return out
    threads = max(1, threads)
    bounds = np.linspace(0, g.n, min(threads, g.n) + 1).astype(np.int64)
    chunks = [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]

    def run(chunk):
        lo, hi = chunk
        return _kernels.detour_slot_counts(indptr, indices, g.n, k, lo, hi, out, budget)

    if len(chunks) == 1:
        states = [run(chunks[0])]
    else:
        with ThreadPoolExecutor(len(chunks)) as pool:
            states = list(pool.map(run, chunks))
    if any(s < 0 for s in states) or sum(states) > budget:
        raise ResourceError(f"detour enumeration exceeded budget of {budget} states")
    return out


def den(g: Graph, k: int, budget: int = DEFAULT_BUDGET, threads: int = 1) -> DenTable:
    """Per-edge k-DeN and per-node Phi^k for every edge and node of ``g``."""
    _check_k(k)
    indptr, indices = g.csr
    slots = _slot_counts(g, k, budget, threads)
    per_edge: dict[Edge, int] = {}
    phi = [0] * g.n
    for s in range(g.n):
        for p in range(indptr[s], indptr[s + 1]):
            t = int(indices[p])
            c = int(slots[p])
            phi[s] += c
            if s < t:
                per_edge[(s, t)] = c
            elif per_edge[(t, s)] != c:
                raise AssertionError(f"asymmetric detour count on edge ({t}, {s})")
    for v, total in enumerate(phi):
        if total % 2:
            raise AssertionError(f"odd detour total {total} at node {v}")
    return DenTable(k, per_edge, tuple(phi))


def den_weighted_graph(g: Graph, k: int, budget: int = DEFAULT_BUDGET, threads: int = 1) -> Graph:
    """Copy of ``g`` whose edge weights are the k-DeN values."""
    table = den(g, k, budget=budget, threads=threads)
    return g.with_edge_weights({e: float(c) for e, c in table.per_edge.items()})
