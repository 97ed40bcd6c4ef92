"""Closed-form Brownian hitting kernels, their total-positivity checks, and
the quadrant discretization used to confirm them.

The quadrant kernel 2x / (pi (x^2 + y^2)) is the hitting density on the
absorbing y half-axis for Brownian motion started at (x, 0) in the quadrant
with reflecting x axis; the strip kernel 1 / (2 cosh(pi x / 2)) is the
translation-invariant density for the strip with one reflecting side.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import DomainError, OrderingError
from .matrix import ScalarMatrix, TnnResult, is_totally_positive
from .network import DirectedNetwork

# dilog series is used only for |t| <= 1/2, where 64 terms reach ~1e-20
_DILOG_TERMS = 64
_PI2_6 = math.pi**2 / 6
_PI2_12 = math.pi**2 / 12


def dilog(t: float) -> float:
    """Li2(t) for t <= 1, via the defining series after reflection into
    |argument| <= 1/2."""
    if t > 1.0:
        raise DomainError(f"dilog defined for t <= 1, got {t}")
    if t == 1.0:
        return _PI2_6
    if t == -1.0:
        return -_PI2_12
    if t > 0.5:
        # Euler reflection onto 1 - t in [0, 1/2)
        return _PI2_6 - math.log(t) * math.log1p(-t) - dilog(1.0 - t)
    if t >= -0.5:
        acc = 0.0
        power = 1.0
        for n in range(1, _DILOG_TERMS + 1):
            power *= t
            acc += power / (n * n)
        return acc
    if t >= -1.0:
        # Landen: Li2(t) = -Li2(t/(t-1)) - ln^2(1-t)/2; argument in (1/3, 1/2]
        u = t / (t - 1.0)
        return -dilog(u) - 0.5 * math.log1p(-t) ** 2
    # inversion onto 1/t in (-1, 0)
    return -_PI2_6 - 0.5 * math.log(-t) ** 2 - dilog(1.0 / t)


def quadrant_kernel(x: float, y: float) -> float:
    """Hitting density K(x, y) = 2x / (pi (x^2 + y^2)), for x > 0, y >= 0."""
    if x <= 0 or y < 0:
        raise DomainError(f"need x > 0 and y >= 0, got x={x}, y={y}")
    return 2.0 * x / (math.pi * (x * x + y * y))


def strip_kernel(x: float) -> float:
    """Translation-invariant strip density 1 / (2 cosh(pi x / 2))."""
    return 1.0 / (2.0 * math.cosh(math.pi * x / 2.0))


def _check_ordered(x1, x2, y1, y2):
    if not (0 < x1 <= x2):
        raise OrderingError(f"need 0 < x1 <= x2, got {x1}, {x2}")
    if not (0 < y1 <= y2):
        raise OrderingError(f"need 0 < y1 <= y2, got {y1}, {y2}")


def _det2_raw(x1, x2, y1, y2):
    num = 4.0 * x1 * x2 * (x2 * x2 - x1 * x1) * (y2 * y2 - y1 * y1)
    den = math.pi**2
    for xi in (x1, x2):
        for yj in (y1, y2):
            den *= xi * xi + yj * yj
    return num / den


def quadrant_det2(x1: float, x2: float, y1: float, y2: float) -> float:
    """Closed form for det [[K(x1,y1), K(x1,y2)], [K(x2,y1), K(x2,y2)]]."""
    _check_ordered(x1, x2, y1, y2)
    return _det2_raw(x1, x2, y1, y2)


def quadrant_conditional_nonintersection(
    x1: float, x2: float, y1: float, y2: float
) -> float:
    """Probability that the second trajectory misses the loop-erased part of
    the first, conditioned on the ordered hit assignment (x1 -> y1,
    x2 -> y2); equals det of the kernel 2x2 block divided by the product
    K(x1,y1) K(x2,y2)."""
    _check_ordered(x1, x2, y1, y2)
    return ((x2 * x2 - x1 * x1) * (y2 * y2 - y1 * y1)) / (
        (x1 * x1 + y2 * y2) * (x2 * x2 + y1 * y1)
    )


def quadrant_nonintersection(alpha: float) -> float:
    """Unconditional non-intersection probability for start ratio alpha > 1:
    -(4/pi^2) (Li2(-a) + Li2(1-a) + ln(a) ln(1+a) + pi^2/12)."""
    if not alpha > 1.0:
        raise DomainError(f"alpha must exceed 1, got {alpha}")
    value = (
        dilog(-alpha)
        + dilog(1.0 - alpha)
        + math.log(alpha) * math.log1p(alpha)
        + _PI2_12
    )
    return -4.0 / math.pi**2 * value


# ---------------------------------------------------------------------------
# quadrature cross-check of the dilogarithm formula
# ---------------------------------------------------------------------------


def _adaptive_simpson(f, a, b, tol, fa=None, fm=None, fb=None, depth=48):
    m = 0.5 * (a + b)
    fa = f(a) if fa is None else fa
    fb = f(b) if fb is None else fb
    fm = f(m) if fm is None else fm
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    if depth <= 0 or abs(left + right - whole) < 15.0 * tol:
        return left + right + (left + right - whole) / 15.0
    return _adaptive_simpson(
        f, a, m, tol / 2.0, fa, flm, fm, depth - 1
    ) + _adaptive_simpson(f, m, b, tol / 2.0, fm, frm, fb, depth - 1)


def quadrant_nonintersection_quadrature(
    alpha: float, tol: float = 1e-8
) -> float:
    """Double integral of the 2x2 kernel determinant over y1 < y2, mapped to
    the unit square by y = tan(pi u / 2); adaptive Simpson refinement.

    Independent numeric route used to validate quadrant_nonintersection.
    """
    if not alpha > 1.0:
        raise DomainError(f"alpha must exceed 1, got {alpha}")
    x1, x2 = 1.0, alpha

    def y_of(u):
        return math.tan(math.pi * u / 2.0)

    def dy_du(u):
        c = math.cos(math.pi * u / 2.0)
        return math.pi / (2.0 * c * c)

    def inner(u1):
        y1 = y_of(u1)

        def g(u2):
            if u2 >= 1.0:
                return 0.0  # integrand decays like y^-4: zero at infinity
            y2 = y_of(u2)
            if y2 <= y1:
                return 0.0
            return _det2_raw(x1, x2, y1, y2) * dy_du(u2)

        return _adaptive_simpson(g, u1, 1.0, tol / 8.0)

    def outer(u1):
        if u1 >= 1.0:
            return 0.0
        return inner(u1) * dy_du(u1)

    return _adaptive_simpson(outer, 0.0, 1.0, tol)


# ---------------------------------------------------------------------------
# total positivity of kernel samples
# ---------------------------------------------------------------------------


def kernel_tp_check(kernel: str, xs, ys, max_minor: int = 3) -> TnnResult:
    """Strict total positivity of the sampled kernel matrix.

    kernel="quadrant": entries K(x_i, y_j). kernel="strip": entries
    K(x_i - y_j), the Polya-frequency form. Returns a witness on failure
    (for example on deliberately shuffled, non-monotone grids).
    """
    xs = [float(x) for x in xs]
    ys = [float(y) for y in ys]
    if kernel == "quadrant":
        rows = [[quadrant_kernel(x, y) for y in ys] for x in xs]
    elif kernel == "strip":
        rows = [[strip_kernel(x - y) for y in ys] for x in xs]
    else:
        raise ValueError(f"unknown kernel {kernel!r}")
    return is_totally_positive(ScalarMatrix(rows, "float"), max_minor)


# ---------------------------------------------------------------------------
# discrete approximation of the quadrant
# ---------------------------------------------------------------------------


def quadrant_discretization(h: Fraction, radius: Fraction) -> tuple[
    DirectedNetwork, dict[tuple[int, int], int]
]:
    """Reflected simple random walk on the clipped quadrant grid.

    States are (i*h, j*h) for 0 <= i, j <= radius/h; steps move one cell in
    each axis direction with probability 1/4. The x axis reflects by folding
    the downward step onto the upward one; the y axis column i=0 is the
    absorbing boundary (its vertices have no outgoing edges); steps past the
    clip radius halt (weight lost), so the clip is substochastic, never
    silent. Returns the network and the (i, j) -> vertex id map.
    """
    h = Fraction(h)
    radius = Fraction(radius)
    cells = radius / h
    if h <= 0 or cells.denominator != 1 or cells < 1:
        raise ValueError("radius must be a positive integer multiple of h")
    n = int(cells)
    width = n + 1

    def vid(i, j):
        return j * width + i

    quarter = Fraction(1, 4)
    triples = []
    for j in range(width):
        for i in range(1, width):  # i = 0 is absorbing: no outgoing edges
            up = quarter + (quarter if j == 0 else Fraction(0))  # folded
            if j + 1 <= n:
                triples.append((vid(i, j), vid(i, j + 1), up))
            if j - 1 >= 0:
                triples.append((vid(i, j), vid(i, j - 1), quarter))
            if i - 1 >= 0:
                triples.append((vid(i, j), vid(i - 1, j), quarter))
            if i + 1 <= n:
                triples.append((vid(i, j), vid(i + 1, j), quarter))
    triples.sort(key=lambda t: (t[0], t[1]))
    boundary = {vid(0, j) for j in range(width)}
    net = DirectedNetwork.build(width * width, triples, boundary)
    index = {(i, j): vid(i, j) for j in range(width) for i in range(width)}
    return net, index


def grid_hitting_row(net: DirectedNetwork, start: int) -> dict[int, float]:
    """Float hitting-probability row X(start, .) via a sparse linear solve.

    Large discretization grids are far beyond exact-arithmetic scale; this is
    the numeric route. Cross-checked against the exact hitting matrix on
    small grids by the test suite.
    """
    import numpy as np
    from scipy.sparse import csr_matrix, identity
    from scipy.sparse.linalg import spsolve

    interior = sorted(net.interior)
    pos = {v: i for i, v in enumerate(interior)}
    bd = sorted(net.boundary)
    bpos = {b: i for i, b in enumerate(bd)}
    rows, cols, vals = [], [], []
    brows, bcols, bvals = [], [], []
    for e in net.edges:
        if e.tail not in pos:
            continue
        if e.head in pos:
            rows.append(pos[e.tail])
            cols.append(pos[e.head])
            vals.append(float(e.weight))
        else:
            brows.append(pos[e.tail])
            bcols.append(bpos[e.head])
            bvals.append(float(e.weight))
    m = len(interior)
    q_int = csr_matrix((vals, (rows, cols)), shape=(m, m))
    q_bd = csr_matrix((bvals, (brows, bcols)), shape=(m, len(bd)))
    if start in pos:
        e_start = np.zeros(m)
        e_start[pos[start]] = 1.0
        z = spsolve((identity(m) - q_int).T.tocsr(), e_start)
        masses = z @ q_bd
    else:
        raise ValueError("start must be an interior vertex")
    return {b: float(masses[bpos[b]]) for b in bd}


def discretization_hit_masses(
    h: Fraction, radius: Fraction, x_start: Fraction
) -> dict[int, float]:
    """Hitting masses on the absorbing column for a walk started at
    (x_start, 0); keyed by the cell index j of the hit (0, j*h)."""
    net, index = quadrant_discretization(h, radius)
    i0 = Fraction(x_start) / Fraction(h)
    if i0.denominator != 1:
        raise ValueError("x_start must be a multiple of h")
    start = index[(int(i0), 0)]
    row = grid_hitting_row(net, start)
    width = int(Fraction(radius) / Fraction(h)) + 1
    out = {}
    for (i, j), v in index.items():
        if i == 0:
            out[j] = row[v]
    return out


def kernel_cell_integrals(h: float, radius: float, x_start: float) -> list[float]:
    """Integral of the quadrant kernel over each boundary cell
    [j*h - h/2, j*h + h/2) clipped to [0, radius + h/2), via the arctan
    antiderivative (cells centered on the lattice points)."""
    x = float(x_start)

    def cdf(y):  # integral of K(x, .) from 0 to y
        return 2.0 / math.pi * math.atan(y / x)

    n = int(round(radius / h))
    out = []
    for j in range(n + 1):
        lo = max(0.0, (j - 0.5) * h)
        hi = (j + 0.5) * h
        out.append(cdf(hi) - cdf(lo))
    return out
