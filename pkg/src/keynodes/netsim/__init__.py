"""Network-level Monte Carlo validation of the mean-field predictions."""

from .graph import (
    NetworkGraph,
    assortativity,
    cycle,
    generate_pa,
    path,
    read_edgelist,
    rewire_disassortative,
    select_key_nodes,
    star,
    write_edgelist,
)
from .sim import (
    SimConfig,
    SimEstimate,
    TargetStats,
    build_graph,
    meanfield_gap,
    simulate,
    stream,
)

__all__ = [
    "NetworkGraph",
    "assortativity",
    "cycle",
    "generate_pa",
    "path",
    "read_edgelist",
    "rewire_disassortative",
    "select_key_nodes",
    "star",
    "write_edgelist",
    "SimConfig",
    "SimEstimate",
    "TargetStats",
    "build_graph",
    "meanfield_gap",
    "simulate",
    "stream",
]
