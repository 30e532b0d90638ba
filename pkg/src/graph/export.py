"""
networkx views of a MemoryGraph and DOT export for inspection.
"""

import networkx as nx

from src.models import MemoryGraph

EDGE_COLORS = {"temporal": "black", "semantic": "steelblue", "both": "darkorange"}


def edge_kind(graph: MemoryGraph, u: int, v: int) -> str:
    pair = (min(u, v), max(u, v))
    in_temporal, in_semantic = pair in graph.temporal_set, pair in graph.semantic_set
    if in_temporal and in_semantic:
        return "both"
    return "temporal" if in_temporal else "semantic"


def to_networkx(graph: MemoryGraph, temporal: bool = True, semantic: bool = True) -> nx.Graph:
    """
    Undirected networkx graph keyed by seq_index.

    Edge attributes ``temporal`` / ``semantic`` tell which labels an edge carries;
    the flags restrict the view to the enabled edge kinds.
    """
    view = nx.Graph()
    for node in graph.nodes:
        view.add_node(
            node.seq_index,
            behavior_id=node.behavior_id,
            timestamp=node.timestamp,
            cluster=node.cluster,
            batch_id=node.batch_id,
        )
    temporal_set, semantic_set = graph.temporal_set, graph.semantic_set
    for u, v in sorted(temporal_set | semantic_set):
        is_temporal, is_semantic = (u, v) in temporal_set, (u, v) in semantic_set
        if (is_temporal and temporal) or (is_semantic and semantic):
            view.add_edge(u, v, temporal=is_temporal, semantic=is_semantic)
    return view


def to_dot(graph: MemoryGraph) -> str:
    """Graphviz DOT source; nodes are labelled with behavior ids, edges coloured by label."""
    dot_view = nx.Graph(name="memory_graph")
    for node in graph.nodes:
        dot_view.add_node(
            f"n{node.seq_index}",
            label=node.behavior_id,
            tooltip=f"cluster {node.cluster} batch {node.batch_id}",
        )
    for u, v in sorted(graph.edge_set):
        kind = edge_kind(graph, u, v)
        dot_view.add_edge(f"n{u}", f"n{v}", kind=kind, color=EDGE_COLORS[kind])
    return nx.nx_pydot.to_pydot(dot_view).to_string()
