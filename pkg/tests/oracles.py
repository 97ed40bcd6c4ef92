"""Brute-force reference computations, independent of the library's
algorithmic routes: definition-level walk enumeration for matrix entries and
direct vertex-disjoint path-family sums."""

from fractions import Fraction
from itertools import permutations

from lewalk.matrix import ScalarMatrix, det
from lewalk.network import enumerate_walks, walk_vertices, walk_weight
from lewalk.series import TruncatedSeries


def brute_walk_entry(net, a, b, order) -> TruncatedSeries:
    """W(a, b) series by exhaustive walk enumeration."""
    coeffs = [Fraction(0)] * (order + 1)
    for w in enumerate_walks(net, a, b, order):
        coeffs[len(w.edge_ids)] += walk_weight(net, w)
    return TruncatedSeries(coeffs, order)


def brute_hitting_entry(net, a, b, order) -> TruncatedSeries:
    """X(a, b) series by exhaustive interior-walk enumeration."""
    coeffs = [Fraction(0)] * (order + 1)
    for w in enumerate_walks(net, a, b, order, interior_only=True):
        coeffs[len(w.edge_ids)] += walk_weight(net, w)
    return TruncatedSeries(coeffs, order)


def brute_series_minor(net, rows, cols, order, hitting=False) -> TruncatedSeries:
    entry = brute_hitting_entry if hitting else brute_walk_entry
    mat = ScalarMatrix(
        [[entry(net, a, b, order) for b in cols] for a in rows]
    )
    return det(mat)


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


def lindstrom_sum(net, sources, targets, order) -> TruncatedSeries:
    """Signed sum over families of pairwise vertex-disjoint walks, graded by
    total length. On acyclic networks all walks are paths and this is the
    classical non-intersecting path-family determinant formula."""
    k = len(sources)
    coeffs = [Fraction(0)] * (order + 1)
    for sigma in permutations(range(k)):
        sign = _perm_sign(sigma)

        def rec(i, budget, used, weight, length):
            if i == k:
                coeffs[length] += sign * weight
                return
            for w in enumerate_walks(net, sources[i], targets[sigma[i]], budget):
                verts = set(walk_vertices(net, w))
                if verts & used:
                    continue
                rec(
                    i + 1,
                    budget - len(w.edge_ids),
                    used | verts,
                    weight * walk_weight(net, w),
                    length + len(w.edge_ids),
                )

        rec(0, order, set(), Fraction(1), 0)
    return TruncatedSeries(coeffs, order)
