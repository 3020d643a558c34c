"""K+ causal relations on finite samples of 1+1 spacetimes, with domain-theory checks."""
from . import causal, dataset, order, relation, spacetimes, suite, topology
from .causal import CausalStructure, build_structure, is_k_causal, k_plus
from .errors import KCausalError
from .report import CheckReport
from .spacetimes import EventSet, SpacetimeModel, make_model, sample_grid, sample_random
from .topology import FiniteTopology, build_topology

__version__ = "0.1.0"

__all__ = [
    "causal", "dataset", "order", "relation", "spacetimes", "suite", "topology",
    "CausalStructure", "build_structure", "is_k_causal", "k_plus", "KCausalError", "CheckReport",
    "EventSet", "SpacetimeModel", "make_model", "sample_grid", "sample_random",
    "FiniteTopology", "build_topology",
]
