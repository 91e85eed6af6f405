"""Detour-path cycle features for graph isomorphism testing and graph learning."""

from .cycles import CycleSet, enumerate_cycles, verify_prop1
from .detour import DenTable, DetourPathSet, den, den_weighted_graph, detour_paths
from .errors import (
    GraphValidationError,
    MsgDetourError,
    NumericalError,
    ParseError,
    ResourceError,
    SchemaError,
)
from .graph import Graph, GraphDataset, degree, parse_dataset_json, parse_edge_list, write_dataset_json
from .graphkernels import GramMatrix, KernelSpec, gram, sp_kernel, wl_labels
from .harness import HarnessReport, HarnessSpec, run_harness
from .families import generate_family
from .wl import Coloring, Initializer, WlResult, initial_coloring, kwl_refine, refine

__version__ = "0.1.0"

__all__ = [
    "Coloring",
    "CycleSet",
    "DenTable",
    "DetourPathSet",
    "Graph",
    "GraphDataset",
    "GraphValidationError",
    "GramMatrix",
    "HarnessReport",
    "HarnessSpec",
    "Initializer",
    "KernelSpec",
    "MsgDetourError",
    "NumericalError",
    "ParseError",
    "ResourceError",
    "SchemaError",
    "WlResult",
    "degree",
    "den",
    "den_weighted_graph",
    "detour_paths",
    "enumerate_cycles",
    "generate_family",
    "gram",
    "initial_coloring",
    "kwl_refine",
    "parse_dataset_json",
    "parse_edge_list",
    "refine",
    "run_harness",
    "sp_kernel",
    "verify_prop1",
    "wl_labels",
    "write_dataset_json",
]
