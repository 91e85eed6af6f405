"""Simple undirected graphs, datasets, and their text/JSON formats."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import GraphValidationError, ParseError, SchemaError

Edge = tuple[int, int]


def _canon(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple undirected graph on nodes ``0..n-1``.

    Edges are stored canonically as sorted ``(u, v)`` tuples with ``u < v``.
    Use :meth:`from_edges` to build one from an arbitrary edge iterable.
    """

    n: int
    edges: tuple[Edge, ...]
    node_labels: Mapping[int, int] | None = None
    edge_weights: Mapping[Edge, float] | None = None

    def __post_init__(self):
        if self.n < 0:
            raise GraphValidationError(f"node count must be non-negative, got {self.n}")
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise GraphValidationError(f"self-loop on node {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphValidationError(f"endpoint out of range in edge ({u}, {v}) for n={self.n}")
            if u > v:
                raise GraphValidationError(f"edge ({u}, {v}) is not canonical")
            if (u, v) in seen:
                raise GraphValidationError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
        if self.node_labels is not None:
            for v in self.node_labels:
                if not 0 <= v < self.n:
                    raise GraphValidationError(f"node label for out-of-range node {v}")
            if len(self.node_labels) != self.n:
                raise GraphValidationError("node_labels must cover every node")
            object.__setattr__(self, "node_labels", MappingProxyType(dict(self.node_labels)))
        if self.edge_weights is not None:
            for e, w in self.edge_weights.items():
                if e not in seen:
                    raise GraphValidationError(f"edge weight on non-edge {e}")
                if not w >= 0:
                    raise GraphValidationError(f"edge weight on {e} must be non-negative, got {w}")
            object.__setattr__(self, "edge_weights", MappingProxyType(dict(self.edge_weights)))

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[Sequence[int]],
        node_labels: Mapping[int, int] | Sequence[int] | None = None,
        edge_weights: Mapping[Edge, float] | None = None,
    ) -> "Graph":
        """Build a graph, collapsing duplicate and reversed edges.

        Self-loops are never dropped silently; they raise ``GraphValidationError``.
        """
        canon = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise GraphValidationError(f"self-loop on node {u}")
            canon.add(_canon(u, v))
        if node_labels is not None and not isinstance(node_labels, Mapping):
            node_labels = {i: int(x) for i, x in enumerate(node_labels)}
        if edge_weights is not None:
            edge_weights = {_canon(*e): float(w) for e, w in edge_weights.items()}
        return cls(n, tuple(sorted(canon)), node_labels, edge_weights)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and self.edges == other.edges
            and _opt_dict(self.node_labels) == _opt_dict(other.node_labels)
            and _opt_dict(self.edge_weights) == _opt_dict(other.edge_weights)
        )

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self.edges)})"

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """(indptr, indices) with each neighbour list sorted ascending."""
        deg = np.array([len(a) for a in self.neighbors], dtype=np.int64)
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(deg, out=indptr[1:])
        indices = np.fromiter(
            (w for a in self.neighbors for w in a), dtype=np.int64, count=int(indptr[-1])
        )
        return indptr, indices

    @cached_property
    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1
        return a

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.neighbors)

    def has_edge(self, u: int, v: int) -> bool:
        return _canon(u, v) in self._edge_set

    @cached_property
    def _edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with node ``v`` renamed to ``perm[v]``."""
        perm = [int(p) for p in perm]
        if sorted(perm) != list(range(self.n)):
            raise GraphValidationError("relabel needs a permutation of 0..n-1")
        labels = None
        if self.node_labels is not None:
            labels = {perm[v]: c for v, c in self.node_labels.items()}
        weights = None
        if self.edge_weights is not None:
            weights = {(perm[u], perm[v]): w for (u, v), w in self.edge_weights.items()}
        return Graph.from_edges(
            self.n, ((perm[u], perm[v]) for u, v in self.edges), labels, weights
        )

    def with_edge_weights(self, weights: Mapping[Edge, float]) -> "Graph":
        return Graph(self.n, self.edges, self.node_labels, dict(weights))

    def disjoint_union(self, other: "Graph") -> "Graph":
        off = self.n
        edges = list(self.edges) + [(u + off, v + off) for u, v in other.edges]
        return Graph(self.n + other.n, tuple(edges))


def _opt_dict(m):
    return None if m is None else dict(m)


def degree(g: Graph, v: int) -> int:
    if not 0 <= v < g.n:
        raise GraphValidationError(f"node {v} out of range for n={g.n}")
    return g.degrees[v]


@dataclass(frozen=True)
class GraphDataset:
    graphs: tuple[Graph, ...]
    class_labels: tuple[int, ...] | None = None
    name: str = "dataset"

    def __post_init__(self):
        object.__setattr__(self, "graphs", tuple(self.graphs))
        if self.class_labels is not None:
            object.__setattr__(self, "class_labels", tuple(int(c) for c in self.class_labels))
            if len(self.class_labels) != len(self.graphs):
                raise GraphValidationError(
                    f"{len(self.class_labels)} class labels for {len(self.graphs)} graphs"
                )

    def __len__(self):
        return len(self.graphs)


# ---------------------------------------------------------------- edge list


def parse_edge_list(text: str | Iterable[str]) -> Graph:
    """Parse ``u v`` lines; ``#`` starts a comment, ``n <count>`` fixes the node count."""
    lines = text.splitlines() if isinstance(text, str) else text
    n_header = None
    edges = []
    max_id = -1
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "n":
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError(f"malformed header {raw.strip()!r}", lineno)
            n_header = int(parts[1])
            continue
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise ParseError(f"expected 'u v' with non-negative integers, got {raw.strip()!r}", lineno)
        u, v = int(parts[0]), int(parts[1])
        if u == v:
            raise GraphValidationError(f"line {lineno}: self-loop on node {u}")
        edges.append((u, v))
        max_id = max(max_id, u, v)
    n = n_header if n_header is not None else max_id + 1
    if max_id >= n:
        raise GraphValidationError(f"node id {max_id} exceeds header n={n}")
    return Graph.from_edges(n, edges)


def write_edge_list(g: Graph) -> str:
    out = [f"n {g.n}"]
    out.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- dataset JSON


def _expect_int(value, path, minimum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(path, f"expected integer, got {type(value).__name__}")
    if minimum is not None and value < minimum:
        raise SchemaError(path, f"must be >= {minimum}, got {value}")
    return value


def _graph_from_obj(obj, path: str) -> Graph:
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected object")
    unknown = set(obj) - {"n", "edges", "node_labels", "edge_weights"}
    if unknown:
        raise SchemaError(path, f"unknown fields {sorted(unknown)}")
    if "n" not in obj:
        raise SchemaError(f"{path}.n", "missing")
    n = _expect_int(obj["n"], f"{path}.n", minimum=0)
    raw_edges = obj.get("edges", [])
    if not isinstance(raw_edges, list):
        raise SchemaError(f"{path}.edges", "expected list")
    edges = []
    for i, e in enumerate(raw_edges):
        ep = f"{path}.edges[{i}]"
        if not isinstance(e, list) or len(e) != 2:
            raise SchemaError(ep, "expected [u, v]")
        u = _expect_int(e[0], f"{ep}[0]", minimum=0)
        v = _expect_int(e[1], f"{ep}[1]", minimum=0)
        if u >= n or v >= n:
            raise SchemaError(ep, f"endpoint out of range for n={n}")
        if u == v:
            raise SchemaError(ep, "self-loop")
        edges.append((u, v))
    labels = obj.get("node_labels")
    if labels is not None:
        if not isinstance(labels, list) or len(labels) != n:
            raise SchemaError(f"{path}.node_labels", f"expected list of {n} integers")
        labels = [_expect_int(x, f"{path}.node_labels[{i}]") for i, x in enumerate(labels)]
    weights = obj.get("edge_weights")
    wmap = None
    if weights is not None:
        if not isinstance(weights, list) or len(weights) != len(edges):
            raise SchemaError(f"{path}.edge_weights", "expected one weight per edge")
        wmap = {}
        for i, (e, w) in enumerate(zip(edges, weights)):
            if isinstance(w, bool) or not isinstance(w, (int, float)) or w < 0:
                raise SchemaError(f"{path}.edge_weights[{i}]", "expected non-negative number")
            wmap[_canon(*e)] = float(w)
    try:
        return Graph.from_edges(n, edges, labels, wmap)
    except GraphValidationError as exc:
        raise SchemaError(path, str(exc)) from exc


def parse_dataset_json(text: str) -> GraphDataset:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from exc
    if not isinstance(obj, dict):
        raise SchemaError("$", "expected object")
    if "graphs" not in obj or not isinstance(obj["graphs"], list):
        raise SchemaError("$.graphs", "missing or not a list")
    graphs = [_graph_from_obj(g, f"$.graphs[{i}]") for i, g in enumerate(obj["graphs"])]
    labels = obj.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or len(labels) != len(graphs):
            raise SchemaError("$.labels", f"expected list of {len(graphs)} integers")
        labels = [_expect_int(x, f"$.labels[{i}]") for i, x in enumerate(labels)]
    name = obj.get("name", "dataset")
    if not isinstance(name, str):
        raise SchemaError("$.name", "expected string")
    return GraphDataset(tuple(graphs), labels, name)


def graph_to_obj(g: Graph) -> dict:
    obj: dict = {"n": g.n, "edges": [[u, v] for u, v in g.edges]}
    if g.node_labels is not None:
        obj["node_labels"] = [g.node_labels[v] for v in range(g.n)]
    if g.edge_weights is not None:
        obj["edge_weights"] = [g.edge_weights.get(e, 0.0) for e in g.edges]
    return obj


def write_dataset_json(ds: GraphDataset) -> str:
    obj: dict = {"name": ds.name, "graphs": [graph_to_obj(g) for g in ds.graphs]}
    if ds.class_labels is not None:
        obj["labels"] = list(ds.class_labels)
    return json.dumps(obj, indent=1) + "\n"


def load_graph(path: str) -> Graph:
    """Read an edge-list file, or the single graph of a dataset JSON file."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".json"):
        ds = parse_dataset_json(text)
        if len(ds) != 1:
            raise SchemaError("$.graphs", f"expected exactly one graph in {path}, found {len(ds)}")
        return ds.graphs[0]
    return parse_edge_list(text)


def load_dataset(path: str) -> GraphDataset:
    with open(path, encoding="utf-8") as fh:
        return parse_dataset_json(fh.read())
