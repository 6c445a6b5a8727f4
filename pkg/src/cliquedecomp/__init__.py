"""Exact weighted clique decomposition: kernelization plus pseudo-basis search."""

from .core import (
    DEFAULT_EPS,
    EXACT,
    FLOAT,
    STAR,
    AnnotatedGraph,
    Decomposition,
    Instance,
    InstanceError,
    IntegralityError,
    PartialAssignment,
    assignment_from,
    decomposition_from,
    graph_to_instance,
    instance_to_graph,
    verify,
    verify_decomposition,
)
from .estimator import WeightedCliqueDecomposition
from .ip import clique_decomp_ip
from .kernel import kernelize, lift
from .lp import clique_decomp_lp
from .pipeline import solve_graph, sweep_k
from .preprocess import preprocess, reassemble

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_EPS",
    "EXACT",
    "FLOAT",
    "STAR",
    "AnnotatedGraph",
    "Decomposition",
    "Instance",
    "InstanceError",
    "IntegralityError",
    "PartialAssignment",
    "WeightedCliqueDecomposition",
    "assignment_from",
    "clique_decomp_ip",
    "clique_decomp_lp",
    "decomposition_from",
    "graph_to_instance",
    "instance_to_graph",
    "kernelize",
    "lift",
    "preprocess",
    "reassemble",
    "solve_graph",
    "sweep_k",
    "verify",
    "verify_decomposition",
]
