"""Colour refinement (1-WL), oblivious k-WL for k in {2, 3}, and pair verdicts."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Literal, Sequence

import numpy as np

from .detour import DEFAULT_BUDGET, den
from .errors import ResourceError
from .graph import Graph

DISTINGUISHABLE = "distinguishable"
EQUIVALENT = "equivalent"

KWL_CAPS = {2: 64, 3: 16}


@dataclass(frozen=True)
class Initializer:
    """How round-0 colours are produced.

    ``degree`` colours a node by its degree; ``den`` by the pair
    (degree, sorted multiset of k-DeN over incident edges). With
    ``use_node_labels`` the node label is prepended to either signature.
    """

    kind: Literal["degree", "den"] = "degree"
    k: int | None = None
    use_node_labels: bool = False

    def __post_init__(self):
        if self.kind not in ("degree", "den"):
            raise ValueError(f"unknown initializer kind {self.kind!r}")
        if self.kind == "den" and (self.k is None or self.k < 2):
            raise ValueError("den initializer needs k >= 2")

    def signatures(self, g: Graph, budget: int = DEFAULT_BUDGET, threads: int = 1) -> list[tuple]:
        if self.kind == "degree":
            sigs = [(d,) for d in g.degrees]
        else:
            table = den(g, self.k, budget=budget, threads=threads)
            sigs = [(g.degrees[v], tuple(sorted(table.incident(g, v)))) for v in range(g.n)]
        if self.use_node_labels and g.node_labels is not None:
            sigs = [(g.node_labels[v],) + s for v, s in enumerate(sigs)]
        return sigs


@dataclass(frozen=True)
class Coloring:
    colors: tuple[int, ...]
    iteration: int = 0

    @property
    def histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(self.colors).items()))

    @property
    def n_classes(self) -> int:
        return len(set(self.colors))


@dataclass(frozen=True)
class WlResult:
    verdict: str
    rounds: int
    final_histograms: tuple[dict[int, int], dict[int, int]]
    stable: bool = True

    @property
    def distinguishable(self) -> bool:
        return self.verdict == DISTINGUISHABLE

    def to_json_obj(self) -> dict:
        return {
            "verdict": self.verdict,
            "rounds": self.rounds,
            "stable": self.stable,
            "histograms": [[[c, n] for c, n in h.items()] for h in self.final_histograms],
        }


def canonical_ids(signatures: Sequence[Hashable]) -> list[int]:
    """Dense ids assigned in sorted order of the distinct signatures.

    This is the injective ``hash`` of the refinement rule: equal signatures
    share an id and the numbering does not depend on node order.
    """
    table = {s: i for i, s in enumerate(sorted(set(signatures)))}
    return [table[s] for s in signatures]


def refine_signatures(neighbors: Sequence[Sequence[int]], colors: Sequence[int]) -> list[tuple]:
    return [(colors[v], tuple(sorted(colors[w] for w in nbrs))) for v, nbrs in enumerate(neighbors)]


def initial_coloring(g: Graph, init: Initializer, budget: int = DEFAULT_BUDGET) -> Coloring:
    return Coloring(tuple(canonical_ids(init.signatures(g, budget))), 0)


def stable_coloring(g: Graph, init: Initializer, budget: int = DEFAULT_BUDGET) -> Coloring:
    """Refine a single graph until its partition stops splitting."""
    colors = canonical_ids(init.signatures(g, budget))
    nbrs = g.neighbors
    t = 0
    while True:
        new = canonical_ids(refine_signatures(nbrs, colors))
        t += 1
        if len(set(new)) == len(set(colors)):
            return Coloring(tuple(new), t)
        colors = new


def partition_refines(fine: Sequence[int], coarse: Sequence[int]) -> bool:
    """True when every class of ``fine`` lies inside one class of ``coarse``."""
    owner: dict[int, int] = {}
    for f, c in zip(fine, coarse):
        if owner.setdefault(f, c) != c:
            return False
    return True


def _split_hist(colors: Sequence[int], n1: int) -> tuple[dict[int, int], dict[int, int]]:
    return (
        dict(sorted(Counter(colors[:n1]).items())),
        dict(sorted(Counter(colors[n1:]).items())),
    )


def refine(
    g1: Graph,
    g2: Graph,
    init: Initializer = Initializer(),
    max_iter: int | None = None,
    budget: int = DEFAULT_BUDGET,
) -> WlResult:
    """Joint 1-WL on the disjoint union of ``g1`` and ``g2``.

    Stops as soon as the per-graph colour histograms differ
    (distinguishable) or the joint partition stops splitting (equivalent).
    ``max_iter`` defaults to ``max(|V1|, |V2|)``.
    """
    if max_iter is None:
        max_iter = max(g1.n, g2.n, 1)
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    return refine_from_signatures(
        g1, g2, init.signatures(g1, budget), init.signatures(g2, budget), max_iter
    )


def refine_from_signatures(
    g1: Graph, g2: Graph, sigs1: Sequence[Hashable], sigs2: Sequence[Hashable], max_iter: int
) -> WlResult:
    """Joint refinement from precomputed round-0 signatures."""
    n1 = g1.n
    union = g1.disjoint_union(g2)
    colors = canonical_ids(list(sigs1) + list(sigs2))
    hists = _split_hist(colors, n1)
    if hists[0] != hists[1]:
        return WlResult(DISTINGUISHABLE, 0, hists)
    if union.n == 0:
        return WlResult(EQUIVALENT, 0, hists)
    nbrs = union.neighbors
    for t in range(1, max_iter + 1):
        new = canonical_ids(refine_signatures(nbrs, colors))
        hists = _split_hist(new, n1)
        if hists[0] != hists[1]:
            return WlResult(DISTINGUISHABLE, t, hists)
        if len(set(new)) == len(set(colors)):
            return WlResult(EQUIVALENT, t, hists)
        colors = new
    return WlResult(EQUIVALENT, max_iter, hists, stable=False)


# ---------------------------------------------------------------- oblivious k-WL


def _tuple_isotype(g: Graph, order: int) -> np.ndarray:
    """Integer code of the ordered isomorphism type of every ``order``-tuple."""
    n = g.n
    adj = g.adjacency_matrix.astype(bool)
    idx = np.indices((n,) * order) if n else np.zeros((order,) + (0,) * order, dtype=np.int64)
    code = np.zeros((n,) * order, dtype=np.int64)
    bit = 0
    for p in range(order):
        for q in range(p + 1, order):
            code |= (idx[p] == idx[q]).astype(np.int64) << bit
            code |= adj[idx[p], idx[q]].astype(np.int64) << (bit + 1)
            bit += 2
    return code


def _kwl_signature(state: np.ndarray, order: int) -> np.ndarray:
    """Rows of (own state, sorted replacement multiset for each position)."""
    n = state.shape[0]
    parts = [state.reshape(-1, 1)]
    for p in range(order):
        # the multiset at position p does not depend on the tuple's p-th entry
        ms = np.sort(state, axis=p)
        ms = np.moveaxis(ms, p, -1)  # (..., n) with position p's values last
        ms = np.expand_dims(ms, axis=p)
        ms = np.broadcast_to(ms, (n,) * order + (n,))
        parts.append(ms.reshape(-1, n))
    return np.concatenate(parts, axis=1)


def kwl_refine(
    g1: Graph,
    g2: Graph,
    order: int = 2,
    max_iter: int | None = None,
    cap: int | None = None,
) -> WlResult:
    """Oblivious k-WL on ordered ``order``-tuples, jointly canonicalised."""
    if order not in KWL_CAPS:
        raise ValueError(f"k-WL order must be 2 or 3, got {order}")
    cap = KWL_CAPS[order] if cap is None else cap
    if max(g1.n, g2.n) > cap:
        raise ResourceError(f"{order}-WL is capped at {cap} nodes, got {max(g1.n, g2.n)}")
    if g1.n != g2.n:
        hists = (
            {0: g1.n**order} if g1.n else {},
            {0: g2.n**order} if g2.n else {},
        )
        return WlResult(DISTINGUISHABLE, 0, hists)
    n = g1.n
    if n == 0:
        return WlResult(EQUIVALENT, 0, ({}, {}))
    size = n**order
    if max_iter is None:
        max_iter = max(2 * size, 1)
    shape = (n,) * order
    init = np.concatenate([_tuple_isotype(g1, order).ravel(), _tuple_isotype(g2, order).ravel()])
    _, state = np.unique(init, return_inverse=True)
    state = state.ravel()

    def hists_of(s):
        return _split_hist(s.tolist(), size)

    hists = hists_of(state)
    if hists[0] != hists[1]:
        return WlResult(DISTINGUISHABLE, 0, hists)
    n_classes = len(np.unique(state))
    for t in range(1, max_iter + 1):
        sig = np.concatenate(
            [
                _kwl_signature(state[:size].reshape(shape), order),
                _kwl_signature(state[size:].reshape(shape), order),
            ]
        )
        _, new = np.unique(sig, axis=0, return_inverse=True)
        new = new.ravel()
        hists = hists_of(new)
        if hists[0] != hists[1]:
            return WlResult(DISTINGUISHABLE, t, hists)
        new_classes = len(np.unique(new))
        if new_classes == n_classes:
            return WlResult(EQUIVALENT, t, hists)
        state, n_classes = new, new_classes
    return WlResult(EQUIVALENT, max_iter, hists, stable=False)
