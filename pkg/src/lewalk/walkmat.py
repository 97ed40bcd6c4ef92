"""Walk matrices, hitting matrices, and loop-erased enumeration oracles.

The oracle `le_constrained_sum` evaluates the signed sum over walk families
in which later walks avoid the loop-erased parts of earlier ones; it must
agree coefficient-wise with determinants of walk/hitting submatrices. The
planar mode keeps only the identity assignment and consecutive-pair
avoidance; deciding the geometric crossing hypothesis is the caller's
obligation (the grid constructors below guarantee it by construction).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterator

from .errors import (
    AbsorbingInterior,
    Divergent,
    SelfCheckError,
    Singular,
    SizeMismatch,
    TruncationTooSmall,
)
from .matrix import (
    ScalarMatrix,
    TOL,
    det,
    inverse,
    power_iteration,
    schur_complement,
    submatrix,
)
from .network import DirectedNetwork, Walk, loop_erase, walk_vertices
from .series import DEFAULT_ORDER, TruncatedSeries


def adjacency(net: DirectedNetwork) -> ScalarMatrix:
    """Weighted adjacency matrix: entry (a, b) sums weights of a->b edges."""
    n = net.vertex_count
    q = [[Fraction(0)] * n for _ in range(n)]
    for e in net.edges:
        q[e.tail][e.head] += e.weight
    return ScalarMatrix(q)


def _series_adjacency(net: DirectedNetwork, order: int) -> ScalarMatrix:
    """Adjacency with every edge weight multiplied by the formal variable t."""
    n = net.vertex_count
    zero = TruncatedSeries.constant(0, order)
    q = [[zero] * n for _ in range(n)]
    for e in net.edges:
        coeffs = [Fraction(0), e.weight]
        q[e.tail][e.head] = q[e.tail][e.head] + TruncatedSeries(coeffs, order)
    return ScalarMatrix(q)


def walk_matrix(
    net: DirectedNetwork, mode: str = "numeric", order: int = DEFAULT_ORDER
) -> ScalarMatrix:
    """Walk matrix W = (I - Q)^-1.

    mode="numeric" inverts exactly over the rationals after a spectral-radius
    guard on |Q| (the walk-weight series must converge for the inverse to be
    its sum). mode="series" returns (I - tQ)^-1 truncated at `order`.
    """
    n = net.vertex_count
    if mode == "series":
        identity = ScalarMatrix.identity(n, "series", order)
        return inverse(identity - _series_adjacency(net, order))
    if mode != "numeric":
        raise ValueError(f"unknown mode {mode!r}")
    q = adjacency(net)
    pit = power_iteration(q)
    if not pit.bound < 1 - TOL.divergence_margin:
        raise Divergent(
            f"spectral radius bound {pit.bound:.6g} (Rayleigh quotients "
            f"{pit.rayleigh_prev:.6g}, {pit.rayleigh_last:.6g}) is not "
            f"below 1 - {TOL.divergence_margin:g}"
        )
    return inverse(ScalarMatrix.identity(n) - q)


def _split_network(net: DirectedNetwork) -> tuple[DirectedNetwork, dict[int, int]]:
    """Split every boundary vertex b into a source (old id) and a sink.

    Outgoing edges keep b as tail; incoming edges are redirected to the new
    sink. Returns the split network and the boundary-vertex -> sink-id map.
    """
    n = net.vertex_count
    sink_of = {}
    for b in sorted(net.boundary):
        sink_of[b] = n + len(sink_of)
    triples = []
    for e in net.edges:
        head = sink_of.get(e.head, e.head)
        triples.append((e.tail, head, e.weight))
    total = n + len(sink_of)
    return DirectedNetwork.build(total, triples), sink_of


def _interior_reaches_boundary(net: DirectedNetwork) -> bool:
    """Every interior vertex has a nonzero-weight path to the boundary."""
    reached = set(net.boundary)
    incoming: dict[int, list[int]] = {v: [] for v in range(net.vertex_count)}
    for e in net.edges:
        if e.weight != 0:
            incoming[e.head].append(e.tail)
    stack = list(reached)
    while stack:
        v = stack.pop()
        for u in incoming[v]:
            if u not in reached:
                reached.add(u)
                stack.append(u)
    return reached == set(range(net.vertex_count))


def hitting_matrix(
    net: DirectedNetwork, mode: str = "numeric", order: int = DEFAULT_ORDER
) -> ScalarMatrix:
    """Hitting matrix X over V x boundary (columns ordered by vertex id).

    X(a, b) generates the weights of nonzero-length walks a -> b whose
    internal vertices are interior. Computed on the source/sink split
    network; the boundary block is independently recomputed from the Schur
    complement identity I - X = (I - Q)/(I - Q_int) and must agree.
    """
    if not net.boundary:
        raise ValueError("hitting matrix needs a nonempty boundary")
    if mode == "numeric" and not _interior_reaches_boundary(net):
        raise AbsorbingInterior(
            "an interior vertex has no nonzero-weight path to the boundary"
        )
    split, sink_of = _split_network(net)
    try:
        w = walk_matrix(split, mode, order) if mode == "series" else inverse(
            ScalarMatrix.identity(split.vertex_count) - adjacency(split)
        )
    except Singular as exc:
        raise AbsorbingInterior(
            f"interior block could not be eliminated: {exc}"
        ) from exc
    cols = [sink_of[b] for b in sorted(net.boundary)]
    rows = list(range(net.vertex_count))
    x = submatrix(w, rows, cols)
    _hitting_self_check(net, x, mode, order)
    return x


def _hitting_self_check(net, x, mode, order) -> None:
    # Prop-style identity: I - X_bd,bd equals the Schur complement of the
    # interior block in I - Q. Exact in both scalar rings.
    bd = sorted(net.boundary)
    interior = sorted(net.interior)
    if mode == "series":
        q = _series_adjacency(net, order)
        identity = ScalarMatrix.identity(net.vertex_count, "series", order)
    else:
        q = adjacency(net)
        identity = ScalarMatrix.identity(net.vertex_count)
    # schur_complement keeps remaining indices in original order = sorted bd
    schur = schur_complement(identity - q, interior)
    bd_pos = {b: i for i, b in enumerate(bd)}
    xbb = submatrix(x, bd, [bd_pos[b] for b in bd])
    k = len(bd)
    ident_k = (
        ScalarMatrix.identity(k, "series", order)
        if mode == "series"
        else ScalarMatrix.identity(k)
    )
    if ident_k - xbb != schur:
        raise SelfCheckError(
            "split-network hitting matrix disagrees with the Schur complement route"
        )


def hitting_submatrix(
    net: DirectedNetwork,
    rows,
    cols,
    mode: str = "numeric",
    order: int = DEFAULT_ORDER,
) -> ScalarMatrix:
    """X restricted to ordered row vertices and ordered boundary columns."""
    x = hitting_matrix(net, mode, order)
    bd = sorted(net.boundary)
    col_pos = {b: i for i, b in enumerate(bd)}
    for b in cols:
        if b not in col_pos:
            raise ValueError(f"column vertex {b} is not a boundary vertex")
    return submatrix(x, list(rows), [col_pos[b] for b in cols])


def minor_via_walk_det(
    net: DirectedNetwork,
    rows,
    cols,
    mode: str = "numeric",
    order: int = DEFAULT_ORDER,
    hitting: bool = False,
):
    """det(W_{A,B}) or, with hitting=True, det(X_{A,B})."""
    rows = list(rows)
    cols = list(cols)
    if len(rows) != len(cols):
        raise SizeMismatch(f"|A|={len(rows)} but |B|={len(cols)}")
    if hitting:
        return det(hitting_submatrix(net, rows, cols, mode, order))
    w = walk_matrix(net, mode, order)
    return det(submatrix(w, rows, cols))


# ---------------------------------------------------------------------------
# loop-erased enumeration oracles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WalkFamily:
    """Walks pi_1..pi_k with pi_i running from a_i to b_{assignment[i]}."""

    walks: tuple[Walk, ...]
    assignment: tuple[int, ...]

    @property
    def sign(self) -> int:
        sign = 1
        perm = self.assignment
        seen = [False] * len(perm)
        for i in range(len(perm)):
            if seen[i]:
                continue
            j, cycle = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                cycle += 1
            if cycle % 2 == 0:
                sign = -sign
        return sign

    def total_length(self) -> int:
        return sum(len(w) for w in self.walks)


def _constrained_walks(
    net: DirectedNetwork,
    a: int,
    b: int,
    budget: int,
    forbidden: frozenset[int],
    hitting: bool,
) -> Iterator[tuple[Walk, Fraction]]:
    """Walks a->b of length <= budget avoiding `forbidden` vertices.

    In hitting mode walks have nonzero length, internal vertices stay off the
    boundary, and `forbidden` is only enforced at interior vertices (the
    caller pre-intersects it with the interior).
    """
    if a in forbidden:
        return
    if a == b and not hitting:
        yield Walk(a), Fraction(1)  # the degenerate walk; hitting needs length > 0

    boundary = net.boundary

    def rec(at: int, length: int, eids: list[int], wt: Fraction):
        if length == budget:
            return
        for e in net.out_edges(at):
            v = e.head
            if v in forbidden:
                continue
            w2 = wt * e.weight
            eids.append(e.id)
            if v == b:
                yield Walk(a, tuple(eids)), w2
            # extend unless hitting mode forbids passing through the boundary
            if not (hitting and v in boundary):
                yield from rec(v, length + 1, eids, w2)
            eids.pop()

    yield from rec(a, 0, [], Fraction(1))


def iter_constrained_families(
    net: DirectedNetwork,
    sources,
    targets,
    order: int,
    mode: str = "signed",
    hitting: bool = False,
) -> Iterator[tuple[WalkFamily, Fraction]]:
    """Walk families of total length <= order satisfying the avoidance rule.

    signed mode: all assignments, and for i < j the walk pi_j shares no
    vertex with LE(pi_i). planar mode: identity assignment only, and only
    consecutive pairs (j = i + 1) are constrained. With hitting=True the
    sharing rule applies at interior vertices only and every walk is a
    nonzero-length interior walk into the boundary.

    Families are yielded by total length, then lexicographically by edge
    ids, so outputs are deterministic.
    """
    sources = list(sources)
    targets = list(targets)
    k = len(sources)
    if len(targets) != k:
        raise SizeMismatch(f"|A|={k} but |B|={len(targets)}")
    if len(set(sources)) != k or len(set(targets)) != k:
        raise ValueError("A and B must each consist of distinct vertices")
    if hitting:
        for b in targets:
            if b not in net.boundary:
                raise ValueError(f"hitting target {b} is not a boundary vertex")
    if mode == "signed":
        sigmas = list(permutations(range(k)))
    elif mode == "planar":
        sigmas = [tuple(range(k))]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    interior = net.interior
    collected: list[tuple[WalkFamily, Fraction]] = []

    for sigma in sigmas:
        chosen: list[tuple[Walk, Fraction]] = []
        le_sets: list[frozenset[int]] = []

        def rec(i: int, budget: int) -> None:
            if i == k:
                fam = WalkFamily(tuple(w for w, _ in chosen), sigma)
                weight = Fraction(1)
                for _, wt in chosen:
                    weight *= wt
                collected.append((fam, weight))
                return
            if mode == "signed":
                forbidden = frozenset().union(*le_sets) if le_sets else frozenset()
            else:
                forbidden = le_sets[-1] if le_sets else frozenset()
            for wlk, wt in _constrained_walks(
                net, sources[i], targets[sigma[i]], budget, forbidden, hitting
            ):
                if hitting:
                    # Loop erasure as in the source/sink split network: the
                    # final arrival at the boundary is a fresh sink vertex, so
                    # a walk closing on its own boundary start erases nothing.
                    prefix = Walk(wlk.start, wlk.edge_ids[:-1])
                    le_verts = (
                        frozenset(walk_vertices(net, loop_erase(net, prefix)))
                        & interior
                    )
                else:
                    le_verts = frozenset(
                        walk_vertices(net, loop_erase(net, wlk))
                    )
                chosen.append((wlk, wt))
                le_sets.append(le_verts)
                rec(i + 1, budget - len(wlk))
                chosen.pop()
                le_sets.pop()

        rec(0, order)

    collected.sort(
        key=lambda fw: (
            fw[0].total_length(),
            tuple(w.edge_ids for w in fw[0].walks),
            fw[0].assignment,
        )
    )
    yield from collected


def le_constrained_sum(
    net: DirectedNetwork,
    sources,
    targets,
    order: int,
    mode: str = "signed",
    hitting: bool = False,
) -> TruncatedSeries:
    """Signed (or planar-unsigned-assignment) weight sum over constrained
    walk families, as a series in t graded by total walk length.

    Warns TruncationTooSmall when no family fits within the order.
    """
    coeffs = [Fraction(0)] * (order + 1)
    count = 0
    for fam, weight in iter_constrained_families(
        net, sources, targets, order, mode, hitting
    ):
        count += 1
        coeffs[fam.total_length()] += fam.sign * weight
    if count == 0:
        warnings.warn(
            f"no walk family fits within truncation order {order}",
            TruncationTooSmall,
            stacklevel=2,
        )
    return TruncatedSeries(coeffs, order)


# ---------------------------------------------------------------------------
# grid constructors (planar crossing hypothesis by construction)
# ---------------------------------------------------------------------------


def grid_network(
    rows: int, cols: int, weight: Fraction = Fraction(1, 4)
) -> DirectedNetwork:
    """Directed grid on rows x cols vertices; edges both ways between
    4-neighbors, all of the given weight; boundary = first and last columns.

    Vertices are numbered row-major. With A taken top-to-bottom in the first
    column and B top-to-bottom in the last, any walk a_i -> b_j must share a
    vertex with any walk a_i' -> b_j' for i' > i, j' < j (planarity), which
    is the crossing hypothesis of the planar oracle mode.
    """
    if rows < 1 or cols < 2:
        raise ValueError("grid needs rows >= 1 and cols >= 2")

    def vid(r, c):
        return r * cols + c

    triples = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                triples.append((vid(r, c), vid(r, c + 1), weight))
                triples.append((vid(r, c + 1), vid(r, c), weight))
            if r + 1 < rows:
                triples.append((vid(r, c), vid(r + 1, c), weight))
                triples.append((vid(r + 1, c), vid(r, c), weight))
    triples.sort(key=lambda t: (t[0], t[1]))
    boundary = {vid(r, 0) for r in range(rows)} | {
        vid(r, cols - 1) for r in range(rows)
    }
    return DirectedNetwork.build(rows * cols, triples, boundary)


def acyclic_grid(rows: int, cols: int, weight: Fraction = Fraction(1)) -> DirectedNetwork:
    """Acyclic grid: edges point right and down only; boundary = sinks."""
    if rows < 1 or cols < 1:
        raise ValueError("grid needs rows >= 1 and cols >= 1")

    def vid(r, c):
        return r * cols + c

    triples = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                triples.append((vid(r, c), vid(r, c + 1), weight))
            if r + 1 < rows:
                triples.append((vid(r, c), vid(r + 1, c), weight))
    triples.sort(key=lambda t: (t[0], t[1]))
    sinks = {vid(rows - 1, cols - 1)}
    return DirectedNetwork.build(rows * cols, triples, sinks)
