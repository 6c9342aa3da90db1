"""Overlap graph: pairwise shared-instance counts between slices.

Built over whatever slice set the caller passes (normally the post-query
result, keeping pairwise work at top-k squared). Zero-overlap pairs are
omitted; isolated slices still appear as nodes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .engine import SliceStats


@dataclass(frozen=True)
class OverlapEdge:
    a: str  # slice id, lexicographically smaller
    b: str
    overlap: int  # shared row count, >= 1


@dataclass(frozen=True)
class OverlapGraph:
    node_ids: tuple[str, ...]
    edges: tuple[OverlapEdge, ...]


def build_graph(slices: Sequence[SliceStats], min_overlap: int = 1) -> OverlapGraph:
    """Edges between every pair of slices sharing >= min_overlap rows."""
    if min_overlap < 1:
        raise ValueError(f"min_overlap must be >= 1, got {min_overlap}")
    edges = []
    for i in range(len(slices)):
        id_i = slices[i].definition.id
        bits_i = slices[i].membership
        for j in range(i + 1, len(slices)):
            overlap = (bits_i & slices[j].membership).bit_count()
            if overlap >= min_overlap:
                a, b = sorted((id_i, slices[j].definition.id))
                edges.append(OverlapEdge(a=a, b=b, overlap=overlap))
    edges.sort(key=lambda e: (e.a, e.b))
    return OverlapGraph(
        node_ids=tuple(s.definition.id for s in slices), edges=tuple(edges)
    )


def filter_graph(graph: OverlapGraph, min_overlap: int) -> OverlapGraph:
    """Drop edges below min_overlap; the node set is unchanged."""
    if min_overlap < 1:
        raise ValueError(f"min_overlap must be >= 1, got {min_overlap}")
    return OverlapGraph(
        node_ids=graph.node_ids,
        edges=tuple(e for e in graph.edges if e.overlap >= min_overlap),
    )
