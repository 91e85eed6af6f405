"""Brute-force bounded-length simple cycle enumeration.

This is the independent check for the detour engine: it walks plain adjacency
sets and shares no traversal code with :mod:`msgdetour.detour`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ResourceError
from .graph import Graph

DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class CycleSet:
    max_len: int
    cycles: tuple[tuple[int, ...], ...]
    per_node_count: tuple[int, ...]

    def __len__(self):
        return len(self.cycles)


@dataclass
class NodeCheck:
    node: int
    phi: int
    cycles: int

    @property
    def passed(self) -> bool:
        return self.phi == 2 * self.cycles


@dataclass
class Prop1Report:
    k: int
    nodes: list[NodeCheck] = field(default_factory=list)

    @property
    def n_pass(self) -> int:
        return sum(c.passed for c in self.nodes)

    @property
    def passed(self) -> bool:
        return self.n_pass == len(self.nodes)

    def to_json_obj(self) -> dict:
        return {
            "k": self.k,
            "passed": self.passed,
            "nodes": [
                {"node": c.node, "phi": c.phi, "cycles": c.cycles, "pass": c.passed}
                for c in self.nodes
            ],
        }


def enumerate_cycles(g: Graph, max_len: int, budget: int = DEFAULT_BUDGET) -> CycleSet:
    """Every simple cycle with 3..max_len edges, once each.

    A cycle is rooted at its smallest vertex ``s``; the walk only visits
    vertices above ``s`` and a cycle is kept only when its second vertex is
    smaller than its last, which drops the reversed copy. The stored sequence is
    therefore the lexicographically smallest rotation/reflection.
    """
    if max_len < 3:
        raise ValueError(f"cycle length bound must be >= 3, got {max_len}")
    adj = [set() for _ in range(g.n)]
    for u, v in g.edges:
        adj[u].add(v)
        adj[v].add(u)
    found = []
    steps = 0

    for s in range(g.n):
        path = [s]
        seen = {s}

        def extend(v):
            nonlocal steps
            for w in sorted(adj[v]):
                steps += 1
                if steps > budget:
                    raise ResourceError(f"cycle enumeration exceeded budget of {budget} steps")
                if w == s and len(path) >= 3 and path[1] < path[-1]:
                    found.append(tuple(path))
                elif w > s and w not in seen and len(path) < max_len:
                    path.append(w)
                    seen.add(w)
                    extend(w)
                    seen.discard(w)
                    path.pop()

        extend(s)

    found.sort(key=lambda c: (len(c), c))
    counts = [0] * g.n
    for c in found:
        for v in c:
            counts[v] += 1
    return CycleSet(max_len, tuple(found), tuple(counts))


def verify_prop1(g: Graph, k: int, budget: int = DEFAULT_BUDGET, threads: int = 1) -> Prop1Report:
    """Compare Phi^k from the detour engine with twice the cycle count through each node."""
    from .detour import den

    table = den(g, k, budget=budget, threads=threads)
    cyc = enumerate_cycles(g, k + 1, budget=budget)
    report = Prop1Report(k)
    for v in range(g.n):
        report.nodes.append(NodeCheck(v, table.per_node_phi[v], cyc.per_node_count[v]))
    return report
