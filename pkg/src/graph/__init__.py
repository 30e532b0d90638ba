"""
Memory graph package: clustering, construction, incremental updates and export.
"""

from .kmeans import cluster_behaviors
from .memory_graph import build_graph, edge_census, incremental_update, semantic_edges_for_batch
from .export import edge_kind, to_dot, to_networkx

__all__ = [
    'cluster_behaviors',
    'build_graph',
    'edge_census',
    'incremental_update',
    'semantic_edges_for_batch',
    'edge_kind',
    'to_dot',
    'to_networkx',
]
