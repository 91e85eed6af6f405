import numpy as np
import pytest
from hypothesis import strategies as st

from msgdetour.graph import Graph
from msgdetour.families import BICYCLOPENTYL, DECALIN, G1, G2, G3


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger numba compilation once so timing-bounded tests measure the algorithms."""
    from msgdetour.detour import den
    from msgdetour.graphkernels import shortest_path_features
    from msgdetour.mdnn import laplacian_eigh

    den(G1, 3)
    shortest_path_features(G1, [0] * G1.n)
    laplacian_eigh(G1)


@pytest.fixture
def fig2():
    return {"G1": G1, "G2": G2, "G3": G3}


@pytest.fixture
def ring_pair():
    return DECALIN, BICYCLOPENTYL


@st.composite
def graphs(draw, max_n=8, min_n=0):
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, keep in zip(pairs, mask) if keep])


@st.composite
def graph_and_perm(draw, max_n=8):
    g = draw(graphs(max_n=max_n))
    perm = draw(st.permutations(range(g.n)))
    return g, list(perm)


def random_perm(n, seed):
    return np.random.default_rng(seed).permutation(n).tolist()


ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def criterion(request):
    """Record a PASS/FAIL line for an acceptance criterion.

    Usage: ``with criterion("AC1 ...") as note: ...; note("detail")``.
    """
    from contextlib import contextmanager

    @contextmanager
    def record(name):
        details = []
        try:
            yield details.append
        except BaseException:
            ACCEPTANCE[name] = (False, "; ".join(details))
            raise
        ACCEPTANCE[name] = (True, "; ".join(details))

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda s: int(s.split()[0][2:])):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  [{detail}]" if detail else ""))
