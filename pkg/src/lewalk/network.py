"""Directed multigraphs with rational edge weights, walks, and loop erasure.

Networks are immutable after construction and all operations are pure, so
values are safely shareable across threads. Vertices are dense integer ids;
human-readable names live in the document layer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidWalk


@dataclass(frozen=True)
class Edge:
    id: int
    tail: int
    head: int
    weight: Fraction

    def __post_init__(self):
        object.__setattr__(self, "weight", Fraction(self.weight))


@dataclass(frozen=True)
class DirectedNetwork:
    """Finite directed multigraph with a boundary/interior vertex partition.

    Loops and parallel edges are allowed. Edge ids are dense in [0, len(edges)).
    """

    vertex_count: int
    edges: tuple[Edge, ...]
    boundary: frozenset[int] = frozenset()
    _out: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "boundary", frozenset(self.boundary))
        for i, e in enumerate(self.edges):
            if e.id != i:
                raise ValueError(f"edge ids must be dense, got {e.id} at {i}")
            if not (0 <= e.tail < self.vertex_count):
                raise ValueError(f"edge {i} tail {e.tail} out of range")
            if not (0 <= e.head < self.vertex_count):
                raise ValueError(f"edge {i} head {e.head} out of range")
        for b in self.boundary:
            if not (0 <= b < self.vertex_count):
                raise ValueError(f"boundary vertex {b} out of range")
        out: dict[int, list[Edge]] = {v: [] for v in range(self.vertex_count)}
        for e in self.edges:
            out[e.tail].append(e)
        object.__setattr__(self, "_out", out)

    @classmethod
    def build(cls, vertex_count, edge_triples, boundary=()):
        """Construct from (tail, head, weight) triples; ids are assigned in order."""
        edges = [
            Edge(i, t, h, Fraction(w))
            for i, (t, h, w) in enumerate(edge_triples)
        ]
        return cls(vertex_count, tuple(edges), frozenset(boundary))

    @property
    def interior(self) -> frozenset[int]:
        return frozenset(range(self.vertex_count)) - self.boundary

    def out_edges(self, v: int) -> list[Edge]:
        return self._out[v]

    def reversed(self) -> "DirectedNetwork":
        """Same network with every edge redirected backwards."""
        return DirectedNetwork.build(
            self.vertex_count,
            [(e.head, e.tail, e.weight) for e in self.edges],
            self.boundary,
        )

    def without_vertices(self, removed) -> tuple["DirectedNetwork", list[int]]:
        """Delete vertices (and incident edges); returns (net, old id of each new id)."""
        removed = set(removed)
        keep = [v for v in range(self.vertex_count) if v not in removed]
        new_id = {v: i for i, v in enumerate(keep)}
        triples = [
            (new_id[e.tail], new_id[e.head], e.weight)
            for e in self.edges
            if e.tail not in removed and e.head not in removed
        ]
        boundary = {new_id[b] for b in self.boundary if b not in removed}
        return DirectedNetwork.build(len(keep), triples, boundary), keep


@dataclass(frozen=True)
class Walk:
    """Edge sequence with composable endpoints; the empty walk has weight 1."""

    start: int
    edge_ids: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "edge_ids", tuple(self.edge_ids))

    def __len__(self) -> int:
        return len(self.edge_ids)


def _edges_of(net: DirectedNetwork, walk: Walk) -> list[Edge]:
    if not (0 <= walk.start < net.vertex_count):
        raise InvalidWalk(f"start vertex {walk.start} out of range")
    edges = []
    at = walk.start
    for eid in walk.edge_ids:
        if not (0 <= eid < len(net.edges)):
            raise InvalidWalk(f"unknown edge id {eid}")
        e = net.edges[eid]
        if e.tail != at:
            raise InvalidWalk(
                f"edge {eid} starts at {e.tail}, expected {at}"
            )
        edges.append(e)
        at = e.head
    return edges


def walk_end(net: DirectedNetwork, walk: Walk) -> int:
    edges = _edges_of(net, walk)
    return edges[-1].head if edges else walk.start


def walk_vertices(net: DirectedNetwork, walk: Walk) -> list[int]:
    """Vertex trace a0, a1, ..., am (length m+1)."""
    vs = [walk.start]
    for e in _edges_of(net, walk):
        vs.append(e.head)
    return vs


def walk_weight(net: DirectedNetwork, walk: Walk) -> Fraction:
    """Product of the edge weights; 1 for the degenerate walk."""
    w = Fraction(1)
    for e in _edges_of(net, walk):
        w *= e.weight
    return w


def loop_erase_indices(net: DirectedNetwork, walk: Walk) -> list[int]:
    """Positions (into walk.edge_ids) of edges surviving loop erasure.

    Loops are removed in order of first completion: on arriving at an
    already-visited vertex, the walk segment since its previous visit is
    dropped. Implemented iteratively with a vertex-to-position map instead
    of the literal recursion, to avoid stack depth limits.
    """
    edges = _edges_of(net, walk)
    kept: list[int] = []          # positions of surviving edges
    path: list[int] = [walk.start]  # vertex trace of the erased walk
    seen = {walk.start: 0}        # vertex -> index in path
    for pos, e in enumerate(edges):
        v = e.head
        if v in seen:
            cut = seen[v]
            for u in path[cut + 1:]:
                del seen[u]
            del path[cut + 1:]
            del kept[cut:]
        else:
            seen[v] = len(path)
            path.append(v)
            kept.append(pos)
    return kept


def loop_erase(net: DirectedNetwork, walk: Walk) -> Walk:
    """Loop-erased part LE(walk): self-avoiding, same endpoints,
    edge sequence a subsequence of the input's."""
    kept = loop_erase_indices(net, walk)
    return Walk(walk.start, tuple(walk.edge_ids[p] for p in kept))


def enumerate_walks(
    net: DirectedNetwork,
    a: int,
    b: int,
    max_len: int,
    interior_only: bool = False,
) -> list[Walk]:
    """All walks a -> b of length <= max_len, ordered by (length, edge ids).

    With interior_only, intermediate vertices must lie in the interior and
    only walks of nonzero length qualify (the hitting-matrix convention).
    """
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    results: list[Walk] = []
    if not interior_only and a == b:
        results.append(Walk(a))
    frontier: list[tuple[int, tuple[int, ...]]] = [(a, ())]
    for _ in range(max_len):
        nxt = []
        for at, eids in frontier:
            for e in net.out_edges(at):
                seq = eids + (e.id,)
                if e.head == b:
                    results.append(Walk(a, seq))
                if not interior_only or e.head not in net.boundary:
                    nxt.append((e.head, seq))
        frontier = nxt
    results.sort(key=lambda w: (len(w.edge_ids), w.edge_ids))
    return results
