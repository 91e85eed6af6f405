"""Distinguishability ratio over a graph collection.

A graph counts as distinguishable only when every one of its pairings is
declared non-equivalent by the chosen test. Graphs that end up with no pairing
at all are not counted as distinguishable.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .detour import DEFAULT_BUDGET
from .errors import MsgDetourError
from .graph import GraphDataset
from .wl import Initializer, kwl_refine, refine_from_signatures

METHODS = ("wl-degree", "wl-den", "kwl2", "kwl3")
PAIRINGS = ("cross-class", "all-pairs", "predefined")
KWL3_DEDUP_LIMIT = 16


@dataclass(frozen=True)
class HarnessSpec:
    method: str = "wl-den"
    k: int | None = None
    max_iter: int | None = None
    pairing: str = "cross-class"
    dedup_isomorphic: bool = False
    use_node_labels: bool = False

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; choose from {', '.join(METHODS)}")
        if self.pairing not in PAIRINGS:
            raise ValueError(f"unknown pairing {self.pairing!r}; choose from {', '.join(PAIRINGS)}")
        if self.method == "wl-den" and (self.k is None or self.k < 2):
            raise ValueError("method wl-den needs k >= 2")


@dataclass
class HarnessReport:
    total_graphs: int
    total_pairs: int
    distinguishable_graphs: int
    ratio: float
    pair_verdicts: list[tuple[int, int, str]] = field(default_factory=list)
    removed_duplicates: list[int] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    wall_time: float = 0.0

    def to_json_obj(self, verbose: bool = False, timing: bool = False) -> dict:
        obj = {
            "total_graphs": self.total_graphs,
            "total_pairs": self.total_pairs,
            "distinguishable_graphs": self.distinguishable_graphs,
            "ratio": self.ratio,
            "removed_duplicates": self.removed_duplicates,
            "notes": self.notes,
        }
        if verbose:
            obj["pairs"] = [[i, j, v] for i, j, v in self.pair_verdicts]
        if timing:
            obj["wall_time"] = self.wall_time
        return obj


class _PairTester:
    def __init__(self, graphs, spec: HarnessSpec, budget: int):
        self.graphs = graphs
        self.spec = spec
        self._sigs = None
        if spec.method in ("wl-degree", "wl-den"):
            kind = "degree" if spec.method == "wl-degree" else "den"
            init = Initializer(kind, spec.k, spec.use_node_labels)
            self._sigs = []
            for idx, g in enumerate(graphs):
                try:
                    self._sigs.append(init.signatures(g, budget))
                except MsgDetourError as exc:
                    raise type(exc)(f"graph {idx}: {exc}") from exc

    def __call__(self, pair: tuple[int, int]) -> str:
        i, j = pair
        g1, g2 = self.graphs[i], self.graphs[j]
        if self._sigs is not None:
            max_iter = self.spec.max_iter or max(g1.n, g2.n, 1)
            return refine_from_signatures(g1, g2, self._sigs[i], self._sigs[j], max_iter).verdict
        order = 2 if self.spec.method == "kwl2" else 3
        return kwl_refine(g1, g2, order, self.spec.max_iter).verdict


def _pairs(n: int, labels, pairing: str) -> list[tuple[int, int]]:
    if pairing == "all-pairs":
        return [(i, j) for i in range(n) for j in range(i + 1, n)]
    if pairing == "predefined":
        if n % 2:
            raise ValueError("predefined pairing needs an even number of graphs (0,1), (2,3), ...")
        return [(i, i + 1) for i in range(0, n, 2)]
    if labels is None:
        raise ValueError("cross-class pairing needs class labels")
    return [(i, j) for i in range(n) for j in range(i + 1, n) if labels[i] != labels[j]]


def _dedup(graphs, budget: int) -> tuple[list[int], list[str]]:
    """Indices of graphs kept after dropping approximate isomorphic duplicates."""
    den_init = Initializer("den", 5)
    sigs = {}
    kept: list[int] = []
    used_den = False
    for j, gj in enumerate(graphs):
        dup = False
        for i in kept:
            gi = graphs[i]
            if (gi.n, gi.m, sorted(gi.degrees)) != (gj.n, gj.m, sorted(gj.degrees)):
                continue
            if gi.n <= KWL3_DEDUP_LIMIT:
                res = kwl_refine(gi, gj, 3)
            else:
                used_den = True
                for idx in (i, j):
                    if idx not in sigs:
                        sigs[idx] = den_init.signatures(graphs[idx], budget)
                res = refine_from_signatures(gi, gj, sigs[i], sigs[j], max(gi.n, 1))
            if not res.distinguishable:
                dup = True
                break
        if not dup:
            kept.append(j)
    notes = [f"duplicates approximated by 3-WL equivalence for graphs with n <= {KWL3_DEDUP_LIMIT}"]
    if used_den:
        notes.append("duplicates approximated by {D,5-DeN} 1-WL equivalence for larger graphs")
    return kept, notes


def run_harness(
    dataset: GraphDataset,
    spec: HarnessSpec,
    threads: int = 1,
    budget: int = DEFAULT_BUDGET,
) -> HarnessReport:
    start = time.perf_counter()
    graphs = list(dataset.graphs)
    labels = dataset.class_labels
    if spec.pairing == "cross-class" and labels is None:
        raise ValueError("cross-class pairing needs class labels")
    keep = list(range(len(graphs)))
    notes: list[str] = []
    if spec.dedup_isomorphic:
        keep, notes = _dedup(graphs, budget)
    removed = sorted(set(range(len(graphs))) - set(keep))
    sub = [graphs[i] for i in keep]
    sub_labels = None if labels is None else [labels[i] for i in keep]
    local_pairs = _pairs(len(sub), sub_labels, spec.pairing)
    tester = _PairTester(sub, spec, budget)
    if threads > 1 and len(local_pairs) > 1:
        with ThreadPoolExecutor(threads) as pool:
            verdicts = list(pool.map(tester, local_pairs))
    else:
        verdicts = [tester(p) for p in local_pairs]

    paired = [False] * len(sub)
    failed = [False] * len(sub)
    for (i, j), v in zip(local_pairs, verdicts):
        paired[i] = paired[j] = True
        if v != "distinguishable":
            failed[i] = failed[j] = True
    good = sum(p and not f for p, f in zip(paired, failed))
    total = len(sub)
    return HarnessReport(
        total_graphs=total,
        total_pairs=len(local_pairs),
        distinguishable_graphs=good,
        ratio=good / total if total else 0.0,
        pair_verdicts=[(keep[i], keep[j], v) for (i, j), v in zip(local_pairs, verdicts)],
        removed_duplicates=removed,
        notes=notes,
        wall_time=time.perf_counter() - start,
    )
