"""Exit criteria. Each test records one PASS/FAIL line in the terminal summary."""

import json
import time

import networkx as nx
import numpy as np
import pytest

from msgdetour.cli import main
from msgdetour.cycles import enumerate_cycles
from msgdetour.detour import den
from msgdetour.families import (
    BICYCLOPENTYL,
    DECALIN,
    G1,
    G2,
    G3,
    bundled_suite,
    cycle,
    disjoint_cycles,
    er_random,
)
from msgdetour.graph import Graph, GraphDataset, write_dataset_json, write_edge_list
from msgdetour.graphkernels import KernelSpec, gram, sp_kernel
from msgdetour.harness import HarnessSpec, run_harness
from msgdetour.mdnn import MdnnConfig, laplacian, laplacian_eigh, run
from msgdetour.wl import Initializer, kwl_refine, partition_refines, refine, stable_coloring

from conftest import random_perm
from oracles import sp_pair_count, to_nx

pytestmark = pytest.mark.acceptance


def _edges_file(tmp_path, name, g):
    p = tmp_path / f"{name}.edges"
    p.write_text(write_edge_list(g))
    return str(p)


def _cli_json(argv, capsys):
    code = main(argv + ["--json"])
    return code, capsys.readouterr().out


def test_ac1_golden_3den(tmp_path, capsys, criterion):
    expected = {
        "G1": {"ab": 1, "ac": 1, "bd": 1, "cd": 3, "ce": 2, "cf": 2, "de": 2, "df": 2},
        "G2": {"ab": 1, "ac": 1, "bd": 1, "cd": 2, "ce": 1, "df": 1, "ef": 1},
        "G3": {"ab": 1, "ac": 1, "bc": 1, "cd": 0, "de": 1, "df": 1, "ef": 1},
    }
    graphs = {"G1": G1, "G2": G2, "G3": G3}
    with criterion("AC1 reference per-edge 3-DeN golden values") as note:
        files = {n: _edges_file(tmp_path, n, g) for n, g in graphs.items()}
        t0 = time.perf_counter()
        for name, path in files.items():
            code, out = _cli_json(["den", path, "--k", "3"], capsys)
            assert code == 0
            got = {chr(97 + u) + chr(97 + v): c for u, v, c in json.loads(out)["per_edge"]}
            assert got == expected[name], name
        elapsed = time.perf_counter() - t0
        note(f"{elapsed:.3f} s")
        assert elapsed < 1.0


def test_ac2_prop1_oracle_equality(criterion):
    with criterion("AC2 phi == 2*cycles on >=100 ER graphs, k=2..6") as note:
        rng = np.random.default_rng(2024)
        t0 = time.perf_counter()
        n_graphs = checks = 0
        for p in (0.2, 0.3, 0.4):
            for seed in range(35):
                n = int(rng.integers(5, 13))
                g = er_random(n, p, 1000 * int(p * 10) + seed)
                n_graphs += 1
                for k in range(2, 7):
                    phi = den(g, k).per_node_phi
                    cyc = enumerate_cycles(g, k + 1).per_node_count
                    assert list(phi) == [2 * c for c in cyc], (n, p, seed, k)
                    checks += g.n
        elapsed = time.perf_counter() - t0
        note(f"{n_graphs} graphs, {checks} node checks, {elapsed:.1f} s")
        assert n_graphs >= 100
        assert elapsed < 60


def test_ac3_ring_pair_verdicts(tmp_path, capsys, criterion):
    with criterion("AC3 decalin vs bicyclopentyl: degree equivalent, 5-DeN distinguishable at round 0") as note:
        a, b = _edges_file(tmp_path, "dec", DECALIN), _edges_file(tmp_path, "bic", BICYCLOPENTYL)
        t0 = time.perf_counter()
        code, out = _cli_json(["wl", a, b, "--init", "degree"], capsys)
        assert code == 0 and json.loads(out)["verdict"] == "equivalent"
        code, out = _cli_json(["wl", a, b, "--init", "den", "--k", "5"], capsys)
        obj = json.loads(out)
        assert code == 1 and obj["verdict"] == "distinguishable" and obj["rounds"] == 0
        elapsed = time.perf_counter() - t0
        note(f"{elapsed:.3f} s")
        assert elapsed < 1.0


def _remark_pairs():
    """At least 200 seeded pairs on <= 8 nodes, weighted toward hard (regular) cases."""
    rng = np.random.default_rng(31)
    pairs = []
    for seed in range(80):
        n = int(rng.integers(3, 9))
        g = er_random(n, float(rng.uniform(0.2, 0.7)), seed)
        # same size and edge count
        m = g.m
        all_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        pick = rng.choice(len(all_pairs), size=m, replace=False)
        pairs.append((g, Graph.from_edges(n, [all_pairs[i] for i in pick])))
        pairs.append((g, g.relabel(rng.permutation(n).tolist())))
    for seed in range(50):
        n, d = [(6, 2), (8, 2), (8, 3), (6, 3), (7, 2), (8, 4)][seed % 6]
        a = nx.random_regular_graph(d, n, seed=seed)
        b = nx.random_regular_graph(d, n, seed=seed + 500)
        pairs.append((Graph.from_edges(n, a.edges), Graph.from_edges(n, b.edges)))
    for sizes_a, sizes_b in [((3, 3), (6,)), ((3, 5), (8,)), ((4, 4), (8,)), ((3, 4), (7,))]:
        pairs.append((disjoint_cycles(*sizes_a), disjoint_cycles(*sizes_b)))
    return pairs


def test_ac4_remark_oblivious_2wl_equals_1wl(criterion):
    with criterion("AC4 oblivious 2-WL verdict == degree 1-WL verdict on >=200 pairs") as note:
        pairs = _remark_pairs()
        t0 = time.perf_counter()
        agree = equivalent = 0
        for g1, g2 in pairs:
            a = kwl_refine(g1, g2, 2).verdict
            b = refine(g1, g2, Initializer()).verdict
            agree += a == b
            equivalent += b == "equivalent"
        elapsed = time.perf_counter() - t0
        note(f"{agree}/{len(pairs)} agree, {equivalent} 1-WL-equivalent pairs, {elapsed:.1f} s")
        assert len(pairs) >= 200
        assert agree == len(pairs)
        assert elapsed < 60


def test_ac5_partition_dominance(criterion):
    with criterion("AC5 converged {D,k-DeN} partition refines degree partition, k in {3,5}") as note:
        t0 = time.perf_counter()
        suite = bundled_suite()
        for name, g in suite:
            coarse = stable_coloring(g, Initializer()).colors
            for k in (3, 5):
                fine = stable_coloring(g, Initializer("den", k)).colors
                assert partition_refines(fine, coarse), (name, k)
        elapsed = time.perf_counter() - t0
        note(f"{len(suite)} graphs, {elapsed:.2f} s")
        assert elapsed < 30


def test_ac6_kernel_properties(criterion):
    specs = [
        KernelSpec("sp"),
        KernelSpec("wl-subtree", 3),
        KernelSpec("wl-sp", 3),
        KernelSpec("wl-den-subtree", 3, 3),
        KernelSpec("wl-den-subtree", 3, 5),
        KernelSpec("wl-den-sp", 3, 3),
        KernelSpec("wl-den-sp", 3, 5),
    ]
    with criterion("AC6 Gram symmetric, PSD (1e-9), relabel-invariant, forest specialization") as note:
        graphs = [g for _, g in bundled_suite()]
        moved = [g.relabel(random_perm(g.n, 17 + i)) for i, g in enumerate(graphs)]
        worst = 0.0
        for spec in specs:
            gm = gram(graphs, spec)
            assert gm.is_symmetric(), spec
            assert gm.is_psd(1e-9), spec
            worst = min(worst, gm.min_eig_ratio())
            assert np.array_equal(gm.values, gram(moved, spec).values), spec
        forest = [Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)]) for n in range(1, 8)]
        forest.append(Graph.from_edges(9, [(0, 1), (0, 2), (0, 3), (3, 4), (5, 6), (6, 7)]))
        for h in (0, 1, 2, 4):
            for k in (2, 3, 6):
                assert np.array_equal(
                    gram(forest, KernelSpec("wl-den-subtree", h, k)).values,
                    gram(forest, KernelSpec("wl-subtree", h)).values,
                )
        note(f"min eig / max |eig| = {worst:.2e}")


def test_ac7_sp_golden(criterion):
    with criterion("AC7 SP kernel P3 vs P3 uniform labels == 5") as note:
        p3 = Graph.from_edges(3, [(0, 1), (1, 2)])
        value = sp_kernel(p3, p3, [0] * 3, [0] * 3)
        brute = sp_pair_count(p3, [0] * 3, p3, [0] * 3)
        note(f"kernel={value}, brute force={brute}")
        assert value == brute == 5


def _simple_spectrum_graph():
    for seed in range(200):
        g = er_random(9, 0.4, seed)
        h = to_nx(g)
        if not nx.is_connected(h):
            continue
        if np.min(np.diff(np.linalg.eigvalsh(laplacian(g)))) < 1e-3:
            continue
        if sum(1 for _ in nx.algorithms.isomorphism.GraphMatcher(h, h).isomorphisms_iter()) == 1:
            return g
    raise AssertionError("no simple-spectrum graph found")


def test_ac8_mdnn_numerics(criterion):
    with criterion("AC8 MDNN softmax, eigenpairs, spectra, equivariance, ablation") as note:
        t0 = time.perf_counter()
        g = er_random(10, 0.4, 8)
        fm = run(g, MdnnConfig(d=16, seed=3, mode="node"), keep_attention=True)
        softmax_err = max(np.abs(w.sum(axis=-1) - 1).max() for w in fm.attention)
        assert softmax_err <= 1e-9

        residual = 0.0
        for seed in range(8):
            h = er_random(12, 0.35, seed)
            lap = laplacian(h)
            w, v = laplacian_eigh(h)
            residual = max(residual, np.abs(lap @ v - v * w).max() / max(1.0, np.abs(w).max()))
            assert np.abs(v.T @ v - np.eye(h.n)).max() <= 1e-8
        assert residual <= 1e-8

        w_edge, _ = laplacian_eigh(Graph.from_edges(2, [(0, 1)]))
        w_c4, _ = laplacian_eigh(cycle(4))
        assert np.abs(w_edge - [0, 2]).max() <= 1e-8
        assert np.abs(w_c4 - [0, 2, 2, 4]).max() <= 1e-8

        sg = _simple_spectrum_graph()
        rng = np.random.default_rng(1)
        x = rng.normal(size=(sg.n, 4))
        perm = rng.permutation(sg.n)
        cfg = MdnnConfig(d=16, seed=9, mode="node")
        base = run(sg, cfg, x).rows
        px = np.empty_like(x)
        px[perm] = x
        equiv_err = np.abs(run(sg.relabel(perm), cfg, px).rows[perm] - base).max()
        assert equiv_err <= 1e-6

        ones = np.ones((DECALIN.n, 1))
        on = run(DECALIN, MdnnConfig(d=16, seed=0, k=5, mode="node"), ones).rows
        off = run(DECALIN, MdnnConfig(d=16, seed=0, k=5, mode="node", ablate_detour=True), ones).rows
        delta = np.abs(on - off).max()
        assert delta > 0
        elapsed = time.perf_counter() - t0
        note(
            f"softmax {softmax_err:.1e}, residual {residual:.1e}, equivariance {equiv_err:.1e}, "
            f"ablation delta {delta:.3f}, {elapsed:.2f} s"
        )
        assert elapsed < 10


def test_ac9_harness_golden(criterion):
    with criterion("AC9 harness ratios: 2xC3 vs C6 -> 0.0 / 1.0; identical -> 0.0") as note:
        t0 = time.perf_counter()
        ds = GraphDataset((disjoint_cycles(3, 3), cycle(6)), (0, 1))
        assert run_harness(ds, HarnessSpec("wl-degree")).ratio == 0.0
        assert run_harness(ds, HarnessSpec("wl-den", 2)).ratio == 1.0
        same = GraphDataset((G1,) * 4, (0, 1, 0, 1))
        for method, k in [("wl-degree", None), ("wl-den", 2), ("wl-den", 5), ("kwl2", None), ("kwl3", None)]:
            assert run_harness(same, HarnessSpec(method, k)).ratio == 0.0, method
        elapsed = time.perf_counter() - t0
        note(f"{elapsed:.3f} s")
        assert elapsed < 1.0


def test_ac10_cli_determinism(tmp_path, capsys, criterion):
    g1 = _edges_file(tmp_path, "g1", G1)
    dec = _edges_file(tmp_path, "dec", DECALIN)
    bic = _edges_file(tmp_path, "bic", BICYCLOPENTYL)
    er = _edges_file(tmp_path, "er", er_random(11, 0.35, 4))
    ds_path = tmp_path / "ds.json"
    graphs = tuple(g for _, g in bundled_suite())
    ds_path.write_text(write_dataset_json(GraphDataset(graphs, tuple(i % 2 for i in range(len(graphs))))))
    ds = str(ds_path)
    commands = [
        ["den", er, "--k", "5"],
        ["den", g1, "--k", "3", "--edge", "2", "3", "--list-paths"],
        ["weight", er, "--k", "4"],
        ["cycles", er, "--max-len", "6"],
        ["verify-prop1", er, "--k", "5"],
        ["wl", dec, bic, "--init", "den", "--k", "5"],
        ["wl", dec, bic, "--order", "3"],
        ["kernel", ds, "--kernel", "wl-den", "--iterations", "2", "--k", "4"],
        ["kernel", ds, "--kernel", "wl-subtree", "--iterations", "3"],
        ["harness", ds, "--method", "wl-den", "--k", "4", "--verbose"],
        ["harness", ds, "--method", "kwl2", "--dedup"],
        ["generate", "--family", "er-random", "--params", "n=9", "p=0.4", "seed=3", "count=3"],
        ["mdnn", er, "--dim", "8", "--layers", "2", "--heads", "2", "--seed", "5"],
    ]
    with criterion("AC10 CLI --json byte-identical across repeats and --threads 1/4") as note:
        for argv in commands:
            outputs = set()
            for threads in ("1", "4", "1", "4"):
                main(argv + ["--threads", threads, "--json"])
                out = capsys.readouterr().out
                json.loads(out)
                outputs.add(out)
            assert len(outputs) == 1, argv
        note(f"{len(commands)} invocations x 4 runs")
