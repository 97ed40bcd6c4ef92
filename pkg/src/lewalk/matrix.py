"""Dense matrices over exact rationals, truncated series, or floats.

Determinants use Bareiss fraction-free elimination for rationals, a
division-free expansion (small sizes) or constant-term-pivoted elimination
for truncated series, and partial-pivot elimination for floats. Total
positivity testing enumerates all minors up to a size cap; this is
exponential and intended for desk-scale matrices only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import (
    IndexOutOfRange,
    NotSquare,
    SeriesConstantTermSingular,
    Singular,
)
from .series import TruncatedSeries

RATIONAL = "rational"
SERIES = "series"
FLOAT = "float"


@dataclass(frozen=True)
class Tolerances:
    """Absolute float tolerances used across the package."""

    inverse_residual: float = 1e-12
    tnn_minor: float = -1e-10
    tp_minor: float = 1e-12
    divergence_margin: float = 1e-9


TOL = Tolerances()


def _kind_of(value):
    if isinstance(value, TruncatedSeries):
        return SERIES
    if isinstance(value, float):
        return FLOAT
    if isinstance(value, (int, Fraction)):
        return RATIONAL
    raise TypeError(f"unsupported scalar {value!r}")


class ScalarMatrix:
    """Immutable dense matrix with one homogeneous scalar kind."""

    __slots__ = ("rows", "cols", "data", "kind", "order")

    def __init__(self, rows_of_entries, kind: str | None = None):
        data = tuple(tuple(row) for row in rows_of_entries)
        nrows = len(data)
        ncols = len(data[0]) if nrows else 0
        if any(len(row) != ncols for row in data):
            raise ValueError("ragged rows")
        if kind is None:
            kind = _kind_of(data[0][0]) if nrows and ncols else RATIONAL
        order = None
        if kind == RATIONAL:
            data = tuple(tuple(Fraction(x) for x in row) for row in data)
        elif kind == FLOAT:
            data = tuple(tuple(float(x) for x in row) for row in data)
        elif kind == SERIES:
            orders = {x.order for row in data for x in row}
            if len(orders) > 1:
                raise ValueError("mixed series truncation orders in matrix")
            order = orders.pop() if orders else None
        else:
            raise ValueError(f"unknown kind {kind!r}")
        ScalarMatrix._init_fields(self, nrows, ncols, data, kind, order)

    @staticmethod
    def _init_fields(m, nrows, ncols, data, kind, order):
        object.__setattr__(m, "rows", nrows)
        object.__setattr__(m, "cols", ncols)
        object.__setattr__(m, "data", data)
        object.__setattr__(m, "kind", kind)
        object.__setattr__(m, "order", order)

    def __setattr__(self, name, value):
        raise AttributeError("ScalarMatrix is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, n: int, kind: str = RATIONAL, order: int | None = None):
        one, zero = _one_zero(kind, order)
        return cls(
            [[one if i == j else zero for j in range(n)] for i in range(n)],
            kind,
        )

    @classmethod
    def zeros(cls, rows: int, cols: int, kind: str = RATIONAL, order=None):
        _, zero = _one_zero(kind, order)
        return cls([[zero] * cols for _ in range(rows)], kind)

    # -- basic access ------------------------------------------------------

    def __getitem__(self, rc):
        r, c = rc
        return self.data[r][c]

    def __eq__(self, other):
        if not isinstance(other, ScalarMatrix):
            return NotImplemented
        return self.kind == other.kind and self.data == other.data

    def __hash__(self):
        return hash((self.kind, self.data))

    def __repr__(self):
        return f"ScalarMatrix({[list(r) for r in self.data]!r}, kind={self.kind!r})"

    def is_square(self) -> bool:
        return self.rows == self.cols

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "ScalarMatrix") -> "ScalarMatrix":
        self._compat(other)
        return ScalarMatrix(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)
            ],
            self.kind,
        )

    def __sub__(self, other: "ScalarMatrix") -> "ScalarMatrix":
        self._compat(other)
        return ScalarMatrix(
            [
                [a - b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)
            ],
            self.kind,
        )

    def __matmul__(self, other: "ScalarMatrix") -> "ScalarMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        bt = list(zip(*other.data))
        out = []
        for row in self.data:
            out_row = []
            for col in bt:
                acc = None
                for a, b in zip(row, col):
                    term = a * b
                    acc = term if acc is None else acc + term
                out_row.append(acc)
            out.append(out_row)
        return ScalarMatrix(out, self.kind)

    def _compat(self, other: "ScalarMatrix") -> None:
        if self.kind != other.kind:
            raise ValueError("mixed scalar kinds")
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")

    def to_float(self) -> "ScalarMatrix":
        """Entrywise float image (series: constant terms)."""
        def f(x):
            if isinstance(x, TruncatedSeries):
                return float(x.coeffs[0])
            return float(x)

        return ScalarMatrix([[f(x) for x in row] for row in self.data], FLOAT)


def _one_zero(kind, order):
    if kind == SERIES:
        if order is None:
            raise ValueError("series matrices need a truncation order")
        return (
            TruncatedSeries.constant(1, order),
            TruncatedSeries.constant(0, order),
        )
    if kind == FLOAT:
        return 1.0, 0.0
    return Fraction(1), Fraction(0)


# ---------------------------------------------------------------------------
# determinants
# ---------------------------------------------------------------------------


def det(m: ScalarMatrix):
    """Exact determinant (rational/series) or partial-pivot determinant (float).

    The determinant of the empty 0x0 matrix is 1.
    """
    if not m.is_square():
        raise NotSquare(f"{m.rows}x{m.cols} matrix has no determinant")
    n = m.rows
    if n == 0:
        one, _ = _one_zero(m.kind, m.order)
        return one
    if m.kind == RATIONAL:
        return _det_bareiss(m)
    if m.kind == FLOAT:
        return _det_float(m)
    return _det_series([list(row) for row in m.data], m.order)


def _det_bareiss(m: ScalarMatrix) -> Fraction:
    n = m.rows
    a = [list(row) for row in m.data]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            if aik == 0:
                if prev != 1:
                    for j in range(k + 1, n):
                        if row_i[j]:
                            row_i[j] = pivot * row_i[j] / prev
                    continue
                for j in range(k + 1, n):
                    if row_i[j]:
                        row_i[j] = pivot * row_i[j]
                continue
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - aik * row_k[j]) / prev
            row_i[k] = Fraction(0)
        prev = pivot
    return sign * a[n - 1][n - 1]


def _det_float(m: ScalarMatrix) -> float:
    n = m.rows
    a = [list(row) for row in m.data]
    detval = 1.0
    for k in range(n):
        p = max(range(k, n), key=lambda i: abs(a[i][k]))
        if a[p][k] == 0.0:
            return 0.0
        if p != k:
            a[k], a[p] = a[p], a[k]
            detval = -detval
        pivot = a[k][k]
        detval *= pivot
        for i in range(k + 1, n):
            f = a[i][k] / pivot
            if f:
                for j in range(k + 1, n):
                    a[i][j] -= f * a[k][j]
    return detval


def _det_series(a: list[list[TruncatedSeries]], order: int) -> TruncatedSeries:
    # Division-free expansion up to 4x4; above that, eliminate with pivots
    # whose constant term is invertible, expanding along a column when no
    # such pivot exists (truncated series form a ring with zero divisors).
    n = len(a)
    zero = TruncatedSeries.constant(0, order)
    if n == 0:
        return TruncatedSeries.constant(1, order)
    if n <= 4:
        acc = zero
        for perm in itertools.permutations(range(n)):
            term = None
            for i, j in enumerate(perm):
                x = a[i][j]
                if not x:
                    term = None
                    break
                term = x if term is None else term * x
            if term is not None:
                acc = acc + term if _perm_sign(perm) > 0 else acc - term
        return acc
    for i in range(n):
        if a[i][0].coeffs[0] != 0:
            if i != 0:
                a[0], a[i] = a[i], a[0]
                sign = -1
            else:
                sign = 1
            pivot = a[0][0]
            sub = []
            for r in range(1, n):
                f = a[r][0] / pivot
                sub.append(
                    [a[r][c] - f * a[0][c] for c in range(1, n)]
                )
            d = pivot * _det_series(sub, order)
            return d if sign > 0 else -d
    # Whole first column has nilpotent entries: Laplace expansion along it.
    acc = zero
    for i in range(n):
        x = a[i][0]
        if not x:
            continue
        sub = [
            [a[r][c] for c in range(1, n)] for r in range(n) if r != i
        ]
        cof = x * _det_series(sub, order)
        acc = acc + cof if i % 2 == 0 else acc - cof
    return acc


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


# ---------------------------------------------------------------------------
# inverses and Schur complements
# ---------------------------------------------------------------------------


def inverse(m: ScalarMatrix) -> ScalarMatrix:
    """Inverse by Gauss-Jordan elimination; exact for rationals and series."""
    if not m.is_square():
        raise NotSquare(f"{m.rows}x{m.cols} matrix has no inverse")
    n = m.rows
    if n == 0:
        return m
    one, zero = _one_zero(m.kind, m.order)
    a = [list(row) + [one if i == j else zero for j in range(n)]
         for i, row in enumerate(m.data)]

    def invertible(x):
        if m.kind == SERIES:
            return x.coeffs[0] != 0
        return bool(x)

    for k in range(n):
        if m.kind == FLOAT:
            p = max(range(k, n), key=lambda i: abs(a[i][k]))
        else:
            p = next((i for i in range(k, n) if invertible(a[i][k])), None)
        if p is None or not invertible(a[p][k]):
            if m.kind == SERIES:
                raise SeriesConstantTermSingular(
                    "constant-term matrix is singular"
                )
            raise Singular("matrix is singular")
        if p != k:
            a[k], a[p] = a[p], a[k]
        pivot = a[k][k]
        a[k] = [x / pivot for x in a[k]]
        for i in range(n):
            if i == k:
                continue
            f = a[i][k]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return ScalarMatrix([row[n:] for row in a], m.kind)


def submatrix(m: ScalarMatrix, rows, cols) -> ScalarMatrix:
    """Entries in the given row and column order (order matters for signs)."""
    rows = list(rows)
    cols = list(cols)
    for r in rows:
        if not 0 <= r < m.rows:
            raise IndexOutOfRange(f"row {r} outside 0..{m.rows - 1}")
    for c in cols:
        if not 0 <= c < m.cols:
            raise IndexOutOfRange(f"col {c} outside 0..{m.cols - 1}")
    return ScalarMatrix(
        [[m.data[r][c] for c in cols] for r in rows], m.kind
    )


def schur_complement(m: ScalarMatrix, block) -> ScalarMatrix:
    """Schur complement M/F where F is the principal block on `block` indices.

    Returns C - D F^-1 E over the remaining indices, kept in their original
    order. An empty block returns M itself.
    """
    if not m.is_square():
        raise NotSquare("Schur complement needs a square matrix")
    block = sorted(set(block))
    for i in block:
        if not 0 <= i < m.rows:
            raise IndexOutOfRange(f"index {i} outside 0..{m.rows - 1}")
    keep = [i for i in range(m.rows) if i not in set(block)]
    c = submatrix(m, keep, keep)
    if not block:
        return c
    f = submatrix(m, block, block)
    d = submatrix(m, keep, block)
    e = submatrix(m, block, keep)
    return c - (d @ inverse(f) @ e)


# ---------------------------------------------------------------------------
# total positivity
# ---------------------------------------------------------------------------


class MinorWitness(NamedTuple):
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    value: object


class TnnResult(NamedTuple):
    ok: bool
    witness: MinorWitness | None


def _scan_minors(m: ScalarMatrix, max_minor: int, bad):
    cap = min(m.rows, m.cols, max_minor if max_minor else 0)
    for size in range(1, cap + 1):
        for rset in itertools.combinations(range(m.rows), size):
            for cset in itertools.combinations(range(m.cols), size):
                d = det(submatrix(m, rset, cset))
                if bad(d):
                    return TnnResult(False, MinorWitness(rset, cset, d))
    return TnnResult(True, None)


def is_totally_nonnegative(m: ScalarMatrix, max_minor: int | None = None) -> TnnResult:
    """All minors of size <= max_minor are >= 0 (floats: >= -1e-10)."""
    if m.kind == SERIES:
        raise ValueError("total positivity tests need rational or float entries")
    if max_minor is None:
        max_minor = min(m.rows, m.cols, 5)
    if m.kind == FLOAT:
        return _scan_minors(m, max_minor, lambda d: d < TOL.tnn_minor)
    return _scan_minors(m, max_minor, lambda d: d < 0)


def is_totally_positive(m: ScalarMatrix, max_minor: int | None = None) -> TnnResult:
    """All minors of size <= max_minor are > 0 (floats: > 1e-12)."""
    if m.kind == SERIES:
        raise ValueError("total positivity tests need rational or float entries")
    if max_minor is None:
        max_minor = min(m.rows, m.cols, 5)
    if m.kind == FLOAT:
        return _scan_minors(m, max_minor, lambda d: d <= TOL.tp_minor)
    return _scan_minors(m, max_minor, lambda d: d <= 0)


# ---------------------------------------------------------------------------
# spectral radius bound
# ---------------------------------------------------------------------------


class PowerIterationResult(NamedTuple):
    bound: float
    rayleigh_prev: float
    rayleigh_last: float


def power_iteration(m: ScalarMatrix, iterations: int = 200) -> PowerIterationResult:
    """Collatz-Wielandt upper bound for the spectral radius of |m|.

    Iterates v -> |m| v from the all-ones vector; the bound is the maximum
    ratio (|m|v)_i / v_i at the final iterate, which dominates the Perron
    root of the entrywise-absolute matrix.
    """
    if not m.is_square():
        raise NotSquare("spectral radius needs a square matrix")
    n = m.rows
    if n == 0:
        return PowerIterationResult(0.0, 0.0, 0.0)
    a = [[abs(float(x)) for x in row] for row in m.to_float().data]
    v = [1.0] * n
    rayleigh_prev = rayleigh_last = 0.0
    for _ in range(iterations):
        w = [sum(ai * vi for ai, vi in zip(row, v)) for row in a]
        vv = sum(x * x for x in v)
        rayleigh_prev, rayleigh_last = (
            rayleigh_last,
            sum(x * y for x, y in zip(v, w)) / vv if vv else 0.0,
        )
        top = max(w)
        if top == 0.0:
            return PowerIterationResult(0.0, rayleigh_prev, rayleigh_last)
        v = [x / top for x in w]
    w = [sum(ai * vi for ai, vi in zip(row, v)) for row in a]
    bound = 0.0
    for wi, vi in zip(w, v):
        if vi > 0.0:
            bound = max(bound, wi / vi)
        elif wi > 0.0:
            bound = float("inf")
    return PowerIterationResult(bound, rayleigh_prev, rayleigh_last)


def spectral_radius_bound(m: ScalarMatrix) -> float:
    """Upper estimate of the spectral radius of the entrywise-absolute matrix."""
    return power_iteration(m).bound
