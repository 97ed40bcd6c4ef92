import math
import random
from fractions import Fraction

import pytest

from lewalk.continuum import (
    _adaptive_simpson,
    dilog,
    discretization_hit_masses,
    grid_hitting_row,
    kernel_cell_integrals,
    kernel_tp_check,
    quadrant_conditional_nonintersection,
    quadrant_det2,
    quadrant_discretization,
    quadrant_kernel,
    quadrant_nonintersection,
    quadrant_nonintersection_quadrature,
    strip_kernel,
)
from lewalk.errors import DomainError, OrderingError
from lewalk.walkmat import hitting_matrix

F = Fraction
GOLDEN = (math.sqrt(5) + 1) / 2

# reference values frozen from a 30-digit arbitrary-precision evaluation
DILOG_REFERENCE = [
    (-7.5, -3.5457171042558462246),
    (-2.0, -1.4367463668836809464),
    (-1.0, -0.82246703342411321824),
    (-0.75, -0.64276126883997887911),
    (-0.4, -0.36583257751244962799),
    (0.25, 0.26765263908273260692),
    (0.5, 0.5822405264650125059),
    (0.7, 0.8893776242860387386),
    (0.95, 1.4406337969700394838),
    (1.0, 1.6449340668482264365),
]


# -- dilogarithm ---------------------------------------------------------------


def test_dilog_special_values():
    assert dilog(0.0) == 0.0
    assert abs(dilog(1.0) - math.pi**2 / 6) < 1e-15
    assert abs(dilog(-1.0) + math.pi**2 / 12) < 1e-15


def test_dilog_reference_accuracy():
    for t, ref in DILOG_REFERENCE:
        assert abs(dilog(t) - ref) < 1e-13


def test_dilog_domain():
    with pytest.raises(DomainError):
        dilog(1.0001)


# -- kernels ---------------------------------------------------------------------


def test_quadrant_kernel_value():
    assert abs(quadrant_kernel(1.0, 1.0) - 1.0 / math.pi) < 1e-15


def test_quadrant_kernel_decay_monotone():
    values = [quadrant_kernel(1.0, y) for y in (0.0, 1.0, 5.0, 50.0, 500.0)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert values[-1] < 1e-5


def test_quadrant_kernel_normalized():
    # integral over y of K(1, y) via the arctan antiderivative is 1; check
    # the quadrature machinery against it
    total = _adaptive_simpson(
        lambda u: quadrant_kernel(1.0, math.tan(math.pi * u / 2))
        * math.pi / (2 * math.cos(math.pi * u / 2) ** 2)
        if u < 1.0
        else 0.0,
        0.0,
        1.0,
        1e-10,
    )
    assert abs(total - 1.0) < 1e-9


def test_quadrant_kernel_domain():
    with pytest.raises(DomainError):
        quadrant_kernel(0.0, 1.0)
    with pytest.raises(DomainError):
        quadrant_kernel(1.0, -0.1)


def test_strip_kernel_values():
    assert strip_kernel(0.0) == 0.5
    for x in (0.3, 1.7, 4.0):
        assert strip_kernel(x) == strip_kernel(-x)


def test_strip_kernel_normalized():
    # map the real line to (-1, 1) by x = tan(pi u / 2)
    def f(u):
        if abs(u) >= 1.0:
            return 0.0
        x = math.tan(math.pi * u / 2)
        return strip_kernel(x) * math.pi / (2 * math.cos(math.pi * u / 2) ** 2)

    total = _adaptive_simpson(f, -1.0, 1.0, 1e-12)
    assert abs(total - 1.0) < 1e-10


# -- 2x2 closed forms --------------------------------------------------------------


def test_det2_value():
    assert abs(quadrant_det2(1, 2, 1, 2) - 9 / (50 * math.pi**2)) < 1e-15


def test_det2_repeated_row_is_zero():
    assert quadrant_det2(1, 1, 1, 2) == 0.0
    assert quadrant_det2(1, 2, 3, 3) == 0.0


def test_det2_ordering_errors():
    with pytest.raises(OrderingError):
        quadrant_det2(2, 1, 1, 2)
    with pytest.raises(OrderingError):
        quadrant_det2(-1, 2, 1, 2)


def test_det2_matches_direct_determinant():
    rng = random.Random(6)
    for _ in range(100):
        x1 = rng.uniform(0.1, 5.0)
        x2 = x1 + rng.uniform(0.01, 5.0)
        y1 = rng.uniform(0.1, 5.0)
        y2 = y1 + rng.uniform(0.01, 5.0)
        direct = quadrant_kernel(x1, y1) * quadrant_kernel(x2, y2)
        direct -= quadrant_kernel(x1, y2) * quadrant_kernel(x2, y1)
        assert abs(quadrant_det2(x1, x2, y1, y2) - direct) < 1e-12


def test_conditional_value_and_identity():
    assert abs(quadrant_conditional_nonintersection(1, 2, 1, 2) - 0.36) < 1e-15
    # the closed form is the determinant over the ordered-assignment product
    # K11 K22 (not det/permanent: that conditions on the unordered hit set
    # and gives 9/41 instead of 9/25 at x = (1,2), y = (1,2))
    rng = random.Random(13)
    for _ in range(50):
        x1 = rng.uniform(0.1, 4.0)
        x2 = x1 + rng.uniform(0.01, 4.0)
        y1 = rng.uniform(0.1, 4.0)
        y2 = y1 + rng.uniform(0.01, 4.0)
        k11 = quadrant_kernel(x1, y1)
        k12 = quadrant_kernel(x1, y2)
        k21 = quadrant_kernel(x2, y1)
        k22 = quadrant_kernel(x2, y2)
        ref = (k11 * k22 - k12 * k21) / (k11 * k22)
        got = quadrant_conditional_nonintersection(x1, x2, y1, y2)
        assert abs(got - ref) < 1e-12
        assert 0.0 <= got <= 1.0


def test_conditional_limits():
    assert quadrant_conditional_nonintersection(1, 1, 1, 2) == 0.0
    # monotone growth in y2
    vals = [
        quadrant_conditional_nonintersection(1, 2, 1, y2)
        for y2 in (2.0, 5.0, 20.0, 200.0)
    ]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    limit = (4 - 1) / (4 + 1)  # y2 -> infinity with x = (1, 2), y1 = 1
    assert abs(vals[-1] - limit) < 1e-3


# -- non-intersection probability ----------------------------------------------------


def test_nonintersection_golden_ratio():
    expected = 1 / 3 - 6 / math.pi**2 * math.log(GOLDEN) ** 2
    assert abs(quadrant_nonintersection(GOLDEN) - expected) < 1e-10


def test_nonintersection_limits():
    assert quadrant_nonintersection(1.0 + 1e-9) < 1e-7
    assert quadrant_nonintersection(1e6) > 0.99
    with pytest.raises(DomainError):
        quadrant_nonintersection(1.0)


def test_nonintersection_bounds_and_monotone():
    values = [
        quadrant_nonintersection(a) for a in (1.1, 1.5, 2.0, 4.0, 10.0, 100.0)
    ]
    assert all(0.0 < v < 1.0 for v in values)
    assert all(a < b for a, b in zip(values, values[1:]))


def test_nonintersection_quadrature_agreement():
    for alpha in (1.2, GOLDEN, 2.0, 5.0):
        closed = quadrant_nonintersection(alpha)
        quad = quadrant_nonintersection_quadrature(alpha)
        assert abs(closed - quad) < 1e-6


# -- kernel total positivity -----------------------------------------------------------


def test_kernel_tp_quadrant():
    assert kernel_tp_check("quadrant", (1, 2, 3), (1, 2, 3), 3).ok


def test_kernel_tp_strip():
    assert kernel_tp_check("strip", (0, 1, 2), (0, 1, 2), 3).ok


def test_kernel_tp_shuffled_grid_witness():
    result = kernel_tp_check("quadrant", (2, 1, 3), (1, 2, 3), 3)
    assert not result.ok
    assert result.witness is not None
    assert result.witness.value <= 0


# -- quadrant discretization --------------------------------------------------------------


def test_discretization_reflection_row():
    net, index = quadrant_discretization(F(1, 2), F(2))
    v = index[(2, 0)]
    outs = {e.head: e.weight for e in net.out_edges(v)}
    assert outs[index[(2, 1)]] == F(1, 2)  # folded upward step
    assert index[(2, -1) if (2, -1) in index else (2, 0)] == index[(2, 0)]
    assert all((i, -1) not in index for i in range(5))


def test_discretization_boundary_absorbs():
    net, index = quadrant_discretization(F(1, 2), F(2))
    for j in range(5):
        assert net.out_edges(index[(0, j)]) == []
        assert index[(0, j)] in net.boundary


def test_discretization_exact_vs_sparse_float():
    net, index = quadrant_discretization(F(1, 2), F(2))
    x = hitting_matrix(net)
    bd = sorted(net.boundary)
    pos = {b: i for i, b in enumerate(bd)}
    start = index[(2, 0)]
    row = grid_hitting_row(net, start)
    for b in bd:
        assert abs(float(x[start, pos[b]]) - row[b]) < 1e-12


def test_discretization_masses_match_kernel_within_5pct():
    h, radius = 0.125, 16.0
    masses = discretization_hit_masses(F(1, 8), F(16), F(1))
    cells = kernel_cell_integrals(h, radius, 1.0)
    mass_total = sum(masses.values())
    cell_total = sum(cells)
    for j in range(int(4.0 / h) + 1):  # cells covering y in [0, 4]
        got = masses[j] / mass_total
        want = cells[j] / cell_total
        assert abs(got - want) <= 0.05 * want


def test_discretization_halving_ratio():
    def discrepancy(h):
        masses = discretization_hit_masses(
            F(h).limit_denominator(64), F(8), F(1)
        )
        cells = kernel_cell_integrals(h, 8.0, 1.0)
        mt = sum(masses.values())
        ct = sum(cells)
        return max(
            abs(masses[j] / mt - cells[j] / ct) for j in range(len(cells))
        )

    d_coarse = discrepancy(0.25)
    d_fine = discrepancy(0.125)
    assert 0.3 <= d_fine / d_coarse <= 0.7
