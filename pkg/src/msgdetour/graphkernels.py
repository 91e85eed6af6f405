"""Shortest-path, WL-subtree, WL-SP and WL DeN kernels over a graph collection.

All kernels here are explicit feature maps with integer counts, so Gram
entries are exact integer dot products.
"""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Literal, Sequence

import numpy as np

from . import _kernels
from .detour import DEFAULT_BUDGET
from .errors import ResourceError
from .graph import Graph, GraphDataset
from .wl import Initializer, canonical_ids, refine_signatures

KernelKind = Literal["sp", "wl-subtree", "wl-sp", "wl-den-subtree", "wl-den-sp"]
KERNEL_KINDS = ("sp", "wl-subtree", "wl-sp", "wl-den-subtree", "wl-den-sp")
# CLI spelling: the SP backbone is the headline WL DeN configuration
KERNEL_ALIASES = {"wl-den": "wl-den-sp"}


@dataclass(frozen=True)
class KernelSpec:
    kind: str = "wl-subtree"
    iterations: int = 3
    k: int | None = None
    use_node_labels: bool = False

    def __post_init__(self):
        kind = KERNEL_ALIASES.get(self.kind, self.kind)
        object.__setattr__(self, "kind", kind)
        if kind not in KERNEL_KINDS:
            raise ValueError(f"unknown kernel {self.kind!r}; choose from {', '.join(KERNEL_KINDS)}")
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if self.uses_den and (self.k is None or self.k < 2):
            raise ValueError(f"{kind} needs k >= 2")

    @property
    def uses_den(self) -> bool:
        return self.kind.startswith("wl-den")

    @property
    def backbone(self) -> str:
        return "subtree" if self.kind.endswith("subtree") else "sp"

    def initializer(self) -> Initializer:
        if self.uses_den:
            return Initializer("den", self.k, self.use_node_labels)
        return Initializer("degree", None, self.use_node_labels)


@dataclass(frozen=True)
class GramMatrix:
    values: np.ndarray
    graph_ids: tuple[int, ...]
    spec: KernelSpec | None = None

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.values, self.values.T))

    def min_eig_ratio(self) -> float:
        """Smallest eigenvalue over the largest magnitude one (0 for a zero matrix)."""
        if self.values.size == 0:
            return 0.0
        ev = np.linalg.eigvalsh(self.values.astype(np.float64))
        top = float(np.max(np.abs(ev)))
        return float(ev[0]) / top if top > 0 else 0.0

    def is_psd(self, rel_tol: float = 1e-9) -> bool:
        return self.min_eig_ratio() >= -rel_tol

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for row in self.values.tolist():
            writer.writerow(row)
        return buf.getvalue()

    def sidecar(self) -> dict:
        return {
            "spec": asdict(self.spec) if self.spec is not None else None,
            "graph_ids": list(self.graph_ids),
            "shape": list(self.values.shape),
        }


def wl_labels(
    graphs: Graph | Sequence[Graph],
    init: Initializer,
    iterations: int,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> list[list[tuple[int, ...]]]:
    """Per-graph colourings for rounds ``0..iterations``.

    Colour ids come from one dictionary per round shared by every graph, so
    they are comparable across the collection. A single graph gives a list of
    length one.
    """
    if iterations < 0:
        raise ValueError("iterations must be >= 0")
    if isinstance(graphs, Graph):
        graphs = [graphs]
    graphs = list(graphs)

    def sigs(idx):
        try:
            return init.signatures(graphs[idx], budget)
        except ResourceError as exc:
            raise ResourceError(f"graph {idx}: {exc}") from exc

    if threads > 1 and len(graphs) > 1:
        with ThreadPoolExecutor(threads) as pool:
            round0 = list(pool.map(sigs, range(len(graphs))))
    else:
        round0 = [sigs(i) for i in range(len(graphs))]

    offsets = np.cumsum([0] + [g.n for g in graphs])
    flat = canonical_ids([s for per_graph in round0 for s in per_graph])
    out = [[tuple(flat[offsets[i] : offsets[i + 1]])] for i in range(len(graphs))]
    for _ in range(iterations):
        sig = []
        for i, g in enumerate(graphs):
            sig.extend(refine_signatures(g.neighbors, out[i][-1]))
        flat = canonical_ids(sig)
        for i in range(len(graphs)):
            out[i].append(tuple(flat[offsets[i] : offsets[i + 1]]))
    return out


def shortest_path_features(g: Graph, labels: Sequence[int], tag=()) -> Counter:
    """Counts of (distance, smaller endpoint label, larger endpoint label) over node pairs."""
    if g.n < 2:
        return Counter()
    indptr, indices = g.csr
    dist = _kernels.bfs_all_pairs(indptr, indices, g.n)
    iu, ju = np.triu_indices(g.n, 1)
    d = dist[iu, ju]
    keep = d > 0
    lab = np.asarray(labels, dtype=np.int64)
    la, lb = lab[iu[keep]], lab[ju[keep]]
    rows = np.stack([d[keep], np.minimum(la, lb), np.maximum(la, lb)], axis=1)
    if rows.size == 0:
        return Counter()
    keys, counts = np.unique(rows, axis=0, return_counts=True)
    return Counter({tag + tuple(int(x) for x in key): int(c) for key, c in zip(keys, counts)})


def sp_kernel(g1: Graph, g2: Graph, labels1: Sequence[int], labels2: Sequence[int]) -> int:
    """Number of node-pair pairs agreeing on distance and endpoint labels."""
    f1 = shortest_path_features(g1, labels1)
    f2 = shortest_path_features(g2, labels2)
    return sum(c * f2[key] for key, c in f1.items() if key in f2)


def _feature_gram(features: list[Counter]) -> np.ndarray:
    columns = {key: i for i, key in enumerate(sorted(set().union(*features)))} if features else {}
    mat = np.zeros((len(features), len(columns)), dtype=np.int64)
    for r, feat in enumerate(features):
        for key, c in feat.items():
            mat[r, columns[key]] = c
    return mat @ mat.T


def graph_features(
    dataset: GraphDataset | Sequence[Graph],
    spec: KernelSpec,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> list[Counter]:
    graphs = list(dataset.graphs if isinstance(dataset, GraphDataset) else dataset)
    if spec.kind == "sp":
        feats = []
        for g in graphs:
            if spec.use_node_labels and g.node_labels is not None:
                labels = [g.node_labels[v] for v in range(g.n)]
            else:
                labels = [0] * g.n
            feats.append(shortest_path_features(g, labels))
        return feats
    rounds = wl_labels(graphs, spec.initializer(), spec.iterations, budget=budget, threads=threads)
    feats = []
    for g, per_round in zip(graphs, rounds):
        feat: Counter = Counter()
        for h, colors in enumerate(per_round):
            if spec.backbone == "subtree":
                feat.update((h, c) for c in colors)
            else:
                feat.update(shortest_path_features(g, colors, tag=(h,)))
        feats.append(feat)
    return feats


def gram(
    dataset: GraphDataset | Sequence[Graph],
    spec: KernelSpec,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> GramMatrix:
    feats = graph_features(dataset, spec, budget=budget, threads=threads)
    return GramMatrix(_feature_gram(feats), tuple(range(len(feats))), spec)


def write_gram(gm: GramMatrix, csv_path: str) -> str:
    """Write the CSV and a ``<csv_path>.json`` sidecar; returns the sidecar path."""
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(gm.to_csv())
    side = csv_path + ".json"
    with open(side, "w", encoding="utf-8") as fh:
        json.dump(gm.sidecar(), fh, indent=1, sort_keys=True)
        fh.write("\n")
    return side
