"""Color fault-tolerant spanners: parks, level engine, baselines, verifiers."""

from .graph import ColoredGraph, Edge, FaultSet, generate_random, parse_graph, serialize_graph, \
    shortest_distance, subtract_faults
from .params import SpannerConfig
from .ecft import SpannerResult, build_ecft_spanner
from .vcft import build_vcft_spanner
from .verifier import verify_cft, verify_plain, verify_vft

__all__ = ["ColoredGraph", "Edge", "FaultSet", "SpannerConfig", "SpannerResult",
           "build_ecft_spanner", "build_vcft_spanner", "generate_random", "parse_graph",
           "serialize_graph", "shortest_distance", "subtract_faults", "verify_cft",
           "verify_plain", "verify_vft"]
