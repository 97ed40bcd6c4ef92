"""Resistor networks: Kirchhoff matrices, Dirichlet-to-Neumann response
matrices, the vertex-disjoint-path determinant formula, and the associated
Markov chain.

Path weights in the determinant formula multiply the conductivities along
each path; the convention is validated by the exact-equivalence test against
response-matrix minors rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterator

from .errors import NotDisjoint, SizeMismatch
from .matrix import ScalarMatrix, det, schur_complement, submatrix
from .network import DirectedNetwork


@dataclass(frozen=True)
class UndirectedEdge:
    id: int
    a: int
    b: int
    conductivity: Fraction


class ConductivityNetwork:
    """Connected undirected graph with positive rational conductivities and a
    nonempty boundary. Self-loops are rejected: they would contribute nothing
    to the Kirchhoff matrix yet skew the associated Markov chain."""

    __slots__ = ("vertex_count", "edges", "boundary")

    def __init__(self, vertex_count: int, edge_triples, boundary):
        edges = []
        for i, (a, b, g) in enumerate(edge_triples):
            g = Fraction(g)
            if g <= 0:
                raise ValueError(f"conductivity of edge {i} must be positive")
            if a == b:
                raise ValueError(f"edge {i} is a self-loop")
            if not (0 <= a < vertex_count and 0 <= b < vertex_count):
                raise ValueError(f"edge {i} endpoint out of range")
            edges.append(UndirectedEdge(i, a, b, g))
        boundary = frozenset(boundary)
        if not boundary:
            raise ValueError("boundary must be nonempty")
        for v in boundary:
            if not (0 <= v < vertex_count):
                raise ValueError(f"boundary vertex {v} out of range")
        self.vertex_count = vertex_count
        self.edges = tuple(edges)
        self.boundary = boundary
        if not self._connected():
            raise ValueError("network must be connected")

    def _connected(self) -> bool:
        if self.vertex_count == 0:
            return False
        adj = {v: set() for v in range(self.vertex_count)}
        for e in self.edges:
            adj[e.a].add(e.b)
            adj[e.b].add(e.a)
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == self.vertex_count

    @property
    def interior(self) -> frozenset[int]:
        return frozenset(range(self.vertex_count)) - self.boundary


def kirchhoff_matrix(net: ConductivityNetwork) -> ScalarMatrix:
    """Weighted graph Laplacian: rows sum to zero."""
    n = net.vertex_count
    k = [[Fraction(0)] * n for _ in range(n)]
    for e in net.edges:
        k[e.a][e.b] -= e.conductivity
        k[e.b][e.a] -= e.conductivity
        k[e.a][e.a] += e.conductivity
        k[e.b][e.b] += e.conductivity
    return ScalarMatrix(k)


def response_matrix(net: ConductivityNetwork) -> ScalarMatrix:
    """Dirichlet-to-Neumann map: Schur complement of the interior block in
    the Kirchhoff matrix, indexed by sorted boundary vertices."""
    k = kirchhoff_matrix(net)
    return schur_complement(k, sorted(net.interior))


def associated_markov_chain(net: ConductivityNetwork) -> DirectedNetwork:
    """Random walk with transition weights gamma(e) / total conductivity at
    the tail; boundary carried over."""
    totals = [Fraction(0)] * net.vertex_count
    for e in net.edges:
        totals[e.a] += e.conductivity
        totals[e.b] += e.conductivity
    triples = []
    for e in net.edges:
        triples.append((e.a, e.b, e.conductivity / totals[e.a]))
        triples.append((e.b, e.a, e.conductivity / totals[e.b]))
    triples.sort(key=lambda t: (t[0], t[1]))
    return DirectedNetwork.build(net.vertex_count, triples, net.boundary)


def hitting_from_response(net: ConductivityNetwork) -> ScalarMatrix:
    """Boundary-to-boundary hitting matrix of the associated Markov chain,
    computed as I - K0^-1 Lambda with K0 the boundary diagonal of K."""
    bd = sorted(net.boundary)
    k = kirchhoff_matrix(net)
    lam = response_matrix(net)
    n = len(bd)
    rows = []
    for i, b in enumerate(bd):
        kd = k[b, b]
        rows.append(
            [
                (Fraction(1) if i == j else Fraction(0)) - lam[i, j] / kd
                for j in range(n)
            ]
        )
    return ScalarMatrix(rows)


# ---------------------------------------------------------------------------
# vertex-disjoint path families through the interior
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PathFamily:
    """Pairwise vertex-disjoint self-avoiding paths a_i -> b_{assignment[i]}
    whose intermediate vertices are interior."""

    paths: tuple[tuple[int, ...], ...]  # edge-id sequences
    assignment: tuple[int, ...]
    weight: Fraction
    kirchhoff_minor: Fraction
    contribution: Fraction


def _interior_paths(
    net: ConductivityNetwork, a: int, b: int, blocked: set[int]
) -> Iterator[tuple[tuple[int, ...], Fraction, frozenset[int]]]:
    """Self-avoiding a->b paths with intermediate vertices interior and off
    `blocked`; yields (edge ids, conductivity product, visited vertex set)."""
    incident: dict[int, list[UndirectedEdge]] = {
        v: [] for v in range(net.vertex_count)
    }
    for e in net.edges:
        incident[e.a].append(e)
        incident[e.b].append(e)
    interior = net.interior

    def rec(at, eids, weight, visited):
        for e in incident[at]:
            nxt = e.b if e.a == at else e.a
            if nxt in visited or nxt in blocked:
                continue
            w2 = weight * e.conductivity
            if nxt == b:
                yield tuple(eids + [e.id]), w2, frozenset(visited | {b})
                continue
            if nxt not in interior:
                continue
            eids.append(e.id)
            visited.add(nxt)
            yield from rec(nxt, eids, w2, visited)
            visited.discard(nxt)
            eids.pop()

    if a != b and a not in blocked and b not in blocked:
        yield from rec(a, [], Fraction(1), {a})


def iter_path_families(
    net: ConductivityNetwork, sources, targets
) -> Iterator[tuple[tuple[tuple[int, ...], ...], tuple[int, ...], Fraction, frozenset[int]]]:
    """All vertex-disjoint interior path families for all assignments."""
    sources = list(sources)
    targets = list(targets)
    k = len(sources)
    for sigma in permutations(range(k)):
        stack: list[tuple[tuple[int, ...], Fraction, frozenset[int]]] = []

        def rec(i, used):
            if i == k:
                paths = tuple(p for p, _, _ in stack)
                weight = Fraction(1)
                for _, w, _ in stack:
                    weight *= w
                yield paths, sigma, weight, frozenset(used)
                return
            for p, w, visited in _interior_paths(
                net, sources[i], targets[sigma[i]], used
            ):
                stack.append((p, w, visited))
                yield from rec(i + 1, used | visited)
                stack.pop()

        yield from rec(0, set())


class IngermanResult:
    """Minor values plus the per-family audit ledger."""

    __slots__ = ("response_minor", "hitting_minor", "families")

    def __init__(self, response_minor, hitting_minor, families):
        self.response_minor = response_minor
        self.hitting_minor = hitting_minor
        self.families = families


def ingerman_minor(net: ConductivityNetwork, sources, targets) -> IngermanResult:
    """Evaluate the path-family formula for det(Lambda_{A,B}) and its
    det(X_{A,B}) rescaling by (-1)^k / prod K(a,a).

    A and B must be disjoint equal-size subsets of the boundary. Each family
    contributes sgn(sigma) * prod of path conductivities * det(K restricted
    to interior vertices off the paths) / det(K_interior); the determinant of
    the empty matrix is 1.
    """
    sources = list(sources)
    targets = list(targets)
    k = len(sources)
    if len(targets) != k:
        raise SizeMismatch(f"|A|={k} but |B|={len(targets)}")
    if set(sources) & set(targets):
        raise NotDisjoint("A and B must be disjoint")
    for v in sources + targets:
        if v not in net.boundary:
            raise ValueError(f"vertex {v} is not a boundary vertex")
    if len(set(sources)) != k or len(set(targets)) != k:
        raise ValueError("A and B must each consist of distinct vertices")

    kmat = kirchhoff_matrix(net)
    interior = sorted(net.interior)
    det_kint = det(submatrix(kmat, interior, interior))
    total = Fraction(0)
    families = []
    for paths, sigma, weight, visited in iter_path_families(net, sources, targets):
        off = [v for v in interior if v not in visited]
        kminor = det(submatrix(kmat, off, off))
        sign = _perm_sign(sigma)
        contribution = sign * weight * kminor / det_kint
        total += contribution
        families.append(
            PathFamily(paths, sigma, weight, kminor, contribution)
        )
    response_minor = (-1) ** k * total
    scale = Fraction(1)
    for a in sources:
        scale *= kmat[a, a]
    hitting_minor = (-1) ** k * response_minor / scale
    return IngermanResult(response_minor, hitting_minor, families)


def _perm_sign(perm) -> int:
    sign = 1
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


def grid_conductivity_network(
    rows: int, cols: int, conductivity=Fraction(1), weights=None
) -> ConductivityNetwork:
    """Grid resistor network; boundary = first and last columns.

    `weights`, when given, maps each undirected 4-neighbor pair
    ((r, c), (r2, c2)) in construction order to its conductivity.
    """
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise ValueError("grid needs at least two vertices")

    def vid(r, c):
        return r * cols + c

    triples = []
    idx = 0
    for r in range(rows):
        for c in range(cols):
            for r2, c2 in ((r, c + 1), (r + 1, c)):
                if r2 < rows and c2 < cols:
                    g = (
                        weights[idx]
                        if weights is not None
                        else Fraction(conductivity)
                    )
                    triples.append((vid(r, c), vid(r2, c2), g))
                    idx += 1
    boundary = {vid(r, 0) for r in range(rows)} | {
        vid(r, cols - 1) for r in range(rows)
    }
    return ConductivityNetwork(rows * cols, triples, boundary)
