"""``msgdetour`` command line.

Exit status: 0 success (or WL-equivalent), 1 WL-distinguishable or a failed
verify-prop1 node, 2 usage/input error, 3 resource or numerical error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from ._accel import backend
from .cycles import enumerate_cycles, verify_prop1
from .detour import DEFAULT_BUDGET, den, den_weighted_graph, detour_paths
from .errors import MsgDetourError, NumericalError, ResourceError
from .families import FAMILIES, generate_family
from .graph import GraphDataset, load_dataset, load_graph, write_dataset_json
from .graphkernels import KERNEL_ALIASES, KERNEL_KINDS, KernelSpec, gram, write_gram
from .harness import METHODS, PAIRINGS, HarnessSpec, run_harness
from .mdnn import MdnnConfig, build_model, degree_one_hot, forward
from .wl import Initializer, kwl_refine, refine

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonneg_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _depth(text):
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError(f"k must be >= 2, got {text}")
    return value


def _node_name(v: int, letters: bool) -> str:
    return chr(ord("a") + v) if letters and v < 26 else str(v)


def _emit_json(args, obj) -> None:
    text = json.dumps(obj, indent=1, sort_keys=True) + "\n"
    if args.json == "-":
        sys.stdout.write(text)
    else:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(text)


def _say(args, text: str) -> None:
    # with --json on stdout the JSON is the only output
    if not args.quiet and args.json != "-":
        print(text)


# ---------------------------------------------------------------- subcommands


def cmd_den(args) -> int:
    g = load_graph(args.graph)
    table = den(g, args.k, budget=args.budget, threads=args.threads)
    obj = table.to_json_obj()
    name = lambda v: _node_name(v, args.letters)  # noqa: E731
    if args.edge is not None:
        u, v = args.edge
        ps = detour_paths(g, u, v, args.k, budget=args.budget)
        obj["edge"] = [u, v, len(ps)]
        _say(args, f"{args.k}-DeN({name(u)},{name(v)}) = {len(ps)}")
        if args.list_paths:
            obj["paths"] = [list(p) for p in ps.paths]
            for idx, p in enumerate(ps.paths, 1):
                _say(args, f"  #{idx} " + "-".join(name(x) for x in p))
    else:
        for (u, v), c in sorted(table.per_edge.items()):
            _say(args, f"{args.k}-DeN({name(u)},{name(v)}) = {c}")
            if args.list_paths:
                obj.setdefault("paths", {})[f"{u},{v}"] = [
                    list(p) for p in detour_paths(g, u, v, args.k, budget=args.budget).paths
                ]
                for idx, p in enumerate(obj["paths"][f"{u},{v}"], 1):
                    _say(args, f"  #{idx} " + "-".join(name(x) for x in p))
        _say(args, "phi = " + " ".join(str(x) for x in table.per_node_phi))
    if args.json:
        _emit_json(args, obj)
    return EXIT_OK


def cmd_weight(args) -> int:
    g = load_graph(args.graph)
    weighted = den_weighted_graph(g, args.k, budget=args.budget, threads=args.threads)
    text = write_dataset_json(GraphDataset((weighted,), None, f"den{args.k}-weighted"))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        _say(args, f"wrote {weighted.m} weighted edges to {args.out}")
    elif not args.json:
        sys.stdout.write(text)
    if args.json:
        _emit_json(args, json.loads(text))
    return EXIT_OK


def cmd_cycles(args) -> int:
    g = load_graph(args.graph)
    cs = enumerate_cycles(g, args.max_len, budget=args.budget)
    obj = {
        "max_len": cs.max_len,
        "cycles": [list(c) for c in cs.cycles],
        "per_node_count": list(cs.per_node_count),
    }
    if args.node is not None:
        if not 0 <= args.node < g.n:
            raise MsgDetourError(f"node {args.node} out of range for n={g.n}")
        obj["node"] = args.node
        obj["node_count"] = cs.per_node_count[args.node]
        _say(args, f"{cs.per_node_count[args.node]} cycles of length <= {cs.max_len} through node {args.node}")
    else:
        _say(args, f"{len(cs)} cycles of length <= {cs.max_len}")
        for c in cs.cycles:
            _say(args, "  " + "-".join(map(str, c)))
    if args.json:
        _emit_json(args, obj)
    return EXIT_OK


def cmd_verify(args) -> int:
    g = load_graph(args.graph)
    report = verify_prop1(g, args.k, budget=args.budget, threads=args.threads)
    for c in report.nodes:
        if not c.passed:
            _say(args, f"node {c.node}: phi={c.phi} but 2*cycles={2 * c.cycles}")
    _say(args, f"{report.n_pass}/{len(report.nodes)} nodes pass")
    if args.json:
        _emit_json(args, report.to_json_obj())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_wl(args) -> int:
    g1, g2 = load_graph(args.graph1), load_graph(args.graph2)
    if args.order == 1:
        if args.init == "den" and args.k is None:
            raise MsgDetourError("--init den requires --k")
        init = Initializer(args.init, args.k, args.use_node_labels)
        res = refine(g1, g2, init, args.max_iter, budget=args.budget)
    else:
        res = kwl_refine(g1, g2, args.order, args.max_iter)
    _say(args, f"{res.verdict} after {res.rounds} round(s)" + ("" if res.stable else " (not stable)"))
    if args.json:
        _emit_json(args, res.to_json_obj())
    return EXIT_FAIL if res.distinguishable else EXIT_OK


def cmd_kernel(args) -> int:
    ds = load_dataset(args.dataset)
    spec = KernelSpec(args.kernel, args.iterations, args.k, args.use_node_labels)
    gm = gram(ds, spec, budget=args.budget, threads=args.threads)
    if args.out:
        side = write_gram(gm, args.out)
        _say(args, f"wrote {gm.values.shape[0]}x{gm.values.shape[1]} Gram matrix to {args.out} (+ {side})")
    else:
        _say(args, gm.to_csv().rstrip("\n"))
    if args.json:
        obj = gm.sidecar()
        obj["gram"] = gm.values.tolist()
        _emit_json(args, obj)
    return EXIT_OK


def cmd_harness(args) -> int:
    ds = load_dataset(args.dataset)
    spec = HarnessSpec(
        args.method, args.k, args.max_iter, args.pairing, args.dedup, args.use_node_labels
    )
    report = run_harness(ds, spec, threads=args.threads, budget=args.budget)
    obj = report.to_json_obj(verbose=args.verbose, timing=args.timing)
    obj["method"] = args.method
    if args.k is not None:
        obj["k"] = args.k
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, indent=1, sort_keys=True)
            fh.write("\n")
    _say(
        args,
        f"{report.distinguishable_graphs}/{report.total_graphs} graphs distinguishable "
        f"(ratio {report.ratio:.6f}) over {report.total_pairs} pairs in {report.wall_time:.3f} s",
    )
    if args.verbose:
        for i, j, v in report.pair_verdicts:
            _say(args, f"  ({i}, {j}) {v}")
    if args.json:
        _emit_json(args, obj)
    return EXIT_OK


def _parse_params(items) -> dict:
    params = {}
    for item in items or []:
        for part in item.split(","):
            if not part:
                continue
            if "=" not in part:
                raise MsgDetourError(f"parameter {part!r} is not key=value")
            key, value = part.split("=", 1)
            if ":" in value:
                params[key] = [int(v) for v in value.split(":")]
            else:
                try:
                    params[key] = int(value)
                except ValueError:
                    params[key] = float(value)
    return params


def cmd_generate(args) -> int:
    ds = generate_family(args.family, _parse_params(args.params))
    text = write_dataset_json(ds)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        _say(args, f"wrote {len(ds)} graph(s) to {args.out}")
    elif not args.json:
        sys.stdout.write(text)
    if args.json:
        _emit_json(args, json.loads(text))
    return EXIT_OK


def _load_features(path: str) -> np.ndarray:
    if path.endswith(".json"):
        with open(path, encoding="utf-8") as fh:
            return np.asarray(json.load(fh), dtype=np.float64)
    return np.loadtxt(path, ndmin=2)


def cmd_mdnn(args) -> int:
    g = load_graph(args.graph)
    config = MdnnConfig(
        d=args.dim,
        n_layers=args.layers,
        n_heads=args.heads,
        pe_dim=args.pe_dim,
        k=args.k,
        seed=args.seed,
        ablate_detour=args.ablate_detour,
        mode=args.mode,
    )
    x = degree_one_hot(g) if args.node_features is None else _load_features(args.node_features)
    model = build_model(config, x.shape[1])
    fm = forward(g, x, model, config, budget=args.budget)
    obj = fm.to_json_obj(config)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, indent=1, sort_keys=True)
            fh.write("\n")
        _say(args, f"wrote {g.n}x{config.d} features to {args.out}")
    else:
        _say(args, f"{g.n}x{config.d} features; row norms: " + " ".join(
            f"{x:.6f}" for x in np.linalg.norm(fm.rows, axis=1)))
    if args.json:
        _emit_json(args, obj)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=_nonneg_int, default=1,
                        help="worker threads, 0 = one per CPU (default: 1)")
    common.add_argument("--budget", type=_positive_int, default=DEFAULT_BUDGET,
                        help=f"search state cap per enumeration (default: {DEFAULT_BUDGET})")
    common.add_argument("--json", nargs="?", const="-", default=None, metavar="PATH",
                        help="machine-readable output to PATH, or stdout when no PATH (default: off)")
    common.add_argument("--quiet", action="store_true", help="suppress the human summary (default: off)")

    parser = _Parser(prog="msgdetour", description=__doc__.splitlines()[0],
                     formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    parser.add_argument("--version", action="version",
                        version=f"msgdetour {__version__} ({backend()})")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text,
                           formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        p.set_defaults(func=func)
        return p

    p = add("den", cmd_den, "per-edge k-DeN and per-node phi")
    p.add_argument("graph", help="edge-list file or single-graph dataset JSON")
    p.add_argument("--k", type=_depth, required=True, help="detour length bound in edges")
    p.add_argument("--edge", type=int, nargs=2, metavar=("U", "V"), default=None,
                   help="report a single edge")
    p.add_argument("--list-paths", action="store_true", help="print the detour paths")
    p.add_argument("--letters", action="store_true", help="print nodes 0..25 as a..z")

    p = add("weight", cmd_weight, "export the graph with k-DeN edge weights as dataset JSON")
    p.add_argument("graph")
    p.add_argument("--k", type=_depth, required=True)
    p.add_argument("--out", default=None, help="output dataset JSON (default: stdout)")

    p = add("cycles", cmd_cycles, "enumerate simple cycles up to a length bound")
    p.add_argument("graph")
    p.add_argument("--max-len", type=int, required=True, help="longest cycle length in edges (>= 3)")
    p.add_argument("--node", type=int, default=None, help="only report the count through this node")

    p = add("verify-prop1", cmd_verify, "check phi == 2 * (#cycles of length <= k+1) at every node")
    p.add_argument("graph")
    p.add_argument("--k", type=_depth, required=True)

    p = add("wl", cmd_wl, "WL verdict for two graphs")
    p.add_argument("graph1")
    p.add_argument("graph2")
    p.add_argument("--init", choices=("degree", "den"), default="degree", help="1-WL initializer")
    p.add_argument("--k", type=_depth, default=None, help="detour bound for --init den")
    p.add_argument("--order", type=int, choices=(1, 2, 3), default=1, help="1 = colour refinement")
    p.add_argument("--max-iter", type=_positive_int, default=None,
                   help="refinement round cap (default: max node count for order 1)")
    p.add_argument("--use-node-labels", action="store_true", help="prefix node labels to round-0 colours")

    p = add("kernel", cmd_kernel, "Gram matrix over a dataset")
    p.add_argument("dataset", help="dataset JSON")
    p.add_argument("--kernel", choices=KERNEL_KINDS + tuple(KERNEL_ALIASES), default="wl-den",
                   help="wl-den is the SP backbone (wl-den-sp)")
    p.add_argument("--iterations", type=_nonneg_int, default=3, help="WL rounds H")
    p.add_argument("--k", type=_depth, default=None, help="detour bound for den kernels")
    p.add_argument("--use-node-labels", action="store_true")
    p.add_argument("--out", default=None, help="CSV path; a .json sidecar is written next to it")

    p = add("harness", cmd_harness, "distinguishability ratio over a dataset")
    p.add_argument("dataset")
    p.add_argument("--method", choices=METHODS, default="wl-den")
    p.add_argument("--k", type=_depth, default=None)
    p.add_argument("--max-iter", type=_positive_int, default=None)
    p.add_argument("--pairing", choices=PAIRINGS, default="cross-class")
    p.add_argument("--dedup", action="store_true", help="drop approximate isomorphic duplicates first")
    p.add_argument("--use-node-labels", action="store_true")
    p.add_argument("--verbose", action="store_true", help="include per-pair verdicts")
    p.add_argument("--timing", action="store_true", help="include wall time in the JSON report")
    p.add_argument("--out", default=None, help="report JSON path")

    p = add("generate", cmd_generate, "generate a bundled graph family as dataset JSON")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--params", nargs="*", default=[], metavar="KEY=VALUE",
                   help="e.g. n=10 p=0.3 seed=7; lists as n=5:6:7")
    p.add_argument("--out", default=None, help="dataset JSON path (default: stdout)")

    p = add("mdnn", cmd_mdnn, "MDNN forward pass node features")
    p.add_argument("graph")
    p.add_argument("--dim", type=_positive_int, default=64)
    p.add_argument("--mode", choices=("graph", "node"), default="graph",
                   help="sets head/layer defaults: graph = 1 head x 12 layers, node = 4 heads x 2 layers")
    p.add_argument("--layers", type=_positive_int, default=None)
    p.add_argument("--heads", type=_positive_int, default=None)
    p.add_argument("--pe-dim", type=_positive_int, default=8)
    p.add_argument("--k", type=_depth, default=3)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--ablate-detour", action="store_true")
    p.add_argument("--node-features", default=None,
                   help="JSON list of rows or whitespace matrix (default: one-hot degree capped at 16)")
    p.add_argument("--out", default=None, help="features JSON path")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads == 0:
        args.threads = os.cpu_count() or 1
    try:
        return args.func(args)
    except (ResourceError, NumericalError) as exc:
        print(f"msgdetour: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (MsgDetourError, ValueError, OSError) as exc:
        print(f"msgdetour: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
