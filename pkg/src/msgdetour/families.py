"""Deterministic generators for small test families and named example graphs."""

from __future__ import annotations

import numpy as np

from .graph import Graph, GraphDataset

FAMILIES = ("cycle", "fused-rings", "tailed-cycle", "er-random")


def _letters(spec: str) -> list[tuple[int, int]]:
    return [(ord(e[0]) - ord("a"), ord(e[1]) - ord("a")) for e in spec.split()]


# Three six-node reference graphs; nodes a..f map to 0..5.
G1 = Graph.from_edges(6, _letters("ab ac bd cd ce cf de df"))
G2 = Graph.from_edges(6, _letters("ab ac bd cd ce df ef"))
G3 = Graph.from_edges(6, _letters("ab ac bc cd de df ef"))


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError(f"a cycle needs n >= 3, got {n}")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def disjoint_cycles(*sizes: int) -> Graph:
    g = Graph(0, ())
    for s in sizes:
        g = g.disjoint_union(cycle(s))
    return g


def fused_rings(a: int, b: int) -> Graph:
    """Rings of sizes ``a`` and ``b`` sharing one edge (decalin for a = b = 6)."""
    if a < 3 or b < 3:
        raise ValueError("ring sizes must be >= 3")
    n = a + b - 2
    edges = [(i, (i + 1) % a) for i in range(a)]
    # ring b reuses nodes a-1 and 0 and adds b-2 new nodes between them
    chain = [a - 1] + list(range(a, n)) + [0]
    edges += [(chain[i], chain[i + 1]) for i in range(len(chain) - 1)]
    return Graph.from_edges(n, edges)


def bridged_rings(a: int, b: int) -> Graph:
    """Rings of sizes ``a`` and ``b`` joined by a bridge (bicyclopentyl for a = b = 5)."""
    if a < 3 or b < 3:
        raise ValueError("ring sizes must be >= 3")
    edges = [(i, (i + 1) % a) for i in range(a)]
    edges += [(a + i, a + (i + 1) % b) for i in range(b)]
    edges.append((0, a))
    return Graph.from_edges(a + b, edges)


def tailed_cycle(ring: int = 4, tails: int = 2) -> Graph:
    """A ``ring``-cycle with one pendant node on each of ring vertices ``0..tails-1``."""
    if ring < 3 or not 0 <= tails <= ring:
        raise ValueError("need ring >= 3 and 0 <= tails <= ring")
    edges = [(i, (i + 1) % ring) for i in range(ring)]
    edges += [(t, ring + t) for t in range(tails)]
    return Graph.from_edges(ring + tails, edges)


def er_random(n: int, p: float, seed: int) -> Graph:
    """G(n, p) with pairs visited in lexicographic order, one draw each."""
    if n < 0 or not 0.0 <= p <= 1.0:
        raise ValueError("need n >= 0 and 0 <= p <= 1")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(len(iu)) < p
    return Graph.from_edges(n, zip(iu[keep].tolist(), ju[keep].tolist()))


# rings 0-1-2-3-8-9 and 3-4-5-6-7-8 sharing edge {3, 8}
DECALIN = Graph.from_edges(
    10, [(0, 1), (1, 2), (2, 3), (3, 8), (8, 9), (9, 0), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8)]
)
BICYCLOPENTYL = bridged_rings(5, 5)


def _need(params: dict, *names):
    missing = [n for n in names if n not in params]
    if missing:
        raise ValueError(f"missing parameter(s): {', '.join(missing)}")


def generate_family(name: str, params: dict) -> GraphDataset:
    """Build a named family; randomised families require an explicit ``seed``."""
    params = dict(params)
    if name == "cycle":
        _need(params, "n")
        sizes = params["n"] if isinstance(params["n"], (list, tuple)) else [params["n"]]
        return GraphDataset(tuple(cycle(int(s)) for s in sizes), None, "cycle")
    if name == "fused-rings":
        a, b = int(params.get("a", 6)), int(params.get("b", 6))
        pair = (fused_rings(a, b), bridged_rings(a - 1, b - 1))
        return GraphDataset(pair, (0, 1), f"fused-rings-{a}-{b}")
    if name == "tailed-cycle":
        g = tailed_cycle(int(params.get("ring", 4)), int(params.get("tails", 2)))
        return GraphDataset((g,), None, "tailed-cycle")
    if name == "er-random":
        _need(params, "n", "p", "seed")
        count = int(params.get("count", 1))
        seed = int(params["seed"])
        graphs = tuple(er_random(int(params["n"]), float(params["p"]), seed + i) for i in range(count))
        return GraphDataset(graphs, None, "er-random")
    raise ValueError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")


def bundled_suite() -> list[tuple[str, Graph]]:
    """Named graphs used by the property and acceptance tests."""
    suite = [
        ("G1", G1),
        ("G2", G2),
        ("G3", G3),
        ("decalin", DECALIN),
        ("bicyclopentyl", BICYCLOPENTYL),
        ("2xC3", disjoint_cycles(3, 3)),
        ("C3+C4", disjoint_cycles(3, 4)),
        ("tailed-cycle", tailed_cycle(4, 2)),
        ("K4", complete(4)),
        ("K5", complete(5)),
        ("P5", path(5)),
        ("star5", Graph.from_edges(6, [(0, i) for i in range(1, 6)])),
        ("empty3", Graph(3, ())),
    ]
    suite += [(f"C{n}", cycle(n)) for n in range(3, 9)]
    suite += [(f"fused{a}x{b}", fused_rings(a, b)) for a, b in [(4, 4), (4, 5), (5, 5), (5, 6)]]
    suite += [(f"bridged{a}x{b}", bridged_rings(a, b)) for a, b in [(3, 3), (3, 4), (4, 4), (4, 5)]]
    suite += [(f"er10-{s}", er_random(10, 0.3, s)) for s in range(8)]
    suite += [(f"er8-{s}", er_random(8, 0.4, 100 + s)) for s in range(8)]
    return suite
