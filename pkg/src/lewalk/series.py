"""Truncated univariate power series with exact rational coefficients.

All series taking part in one computation share a single truncation order N;
arithmetic drops every term beyond t^N. Division is defined whenever the
divisor has a nonzero constant term.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import SeriesConstantTermSingular

DEFAULT_ORDER = 16


class TruncatedSeries:
    """Polynomial c0 + c1*t + ... + cN*t^N representing a series mod t^(N+1)."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order: int):
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        cs = [Fraction(c) for c in coeffs[: order + 1]]
        cs.extend([Fraction(0)] * (order + 1 - len(cs)))
        self.coeffs = tuple(cs)
        self.order = order

    @classmethod
    def constant(cls, value, order: int) -> "TruncatedSeries":
        return cls([Fraction(value)], order)

    @classmethod
    def variable(cls, order: int) -> "TruncatedSeries":
        """The series t."""
        return cls([Fraction(0), Fraction(1)], order)

    def _check(self, other: "TruncatedSeries") -> None:
        if self.order != other.order:
            raise ValueError(
                f"mixed truncation orders {self.order} and {other.order}"
            )

    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            self._check(other)
            return other
        return TruncatedSeries.constant(other, self.order)

    def __add__(self, other) -> "TruncatedSeries":
        o = self._coerce(other)
        return TruncatedSeries(
            [a + b for a, b in zip(self.coeffs, o.coeffs)], self.order
        )

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries([-a for a in self.coeffs], self.order)

    def __sub__(self, other) -> "TruncatedSeries":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "TruncatedSeries":
        return self._coerce(other) - self

    def __mul__(self, other) -> "TruncatedSeries":
        o = self._coerce(other)
        n = self.order
        out = [Fraction(0)] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j in range(n + 1 - i):
                b = o.coeffs[j]
                if b:
                    out[i + j] += a * b
        return TruncatedSeries(out, n)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "TruncatedSeries":
        o = self._coerce(other)
        if o.coeffs[0] == 0:
            raise SeriesConstantTermSingular(
                "division by a series with zero constant term"
            )
        n = self.order
        inv0 = 1 / o.coeffs[0]
        out = [Fraction(0)] * (n + 1)
        for m in range(n + 1):
            acc = self.coeffs[m]
            for k in range(m):
                if out[k] and o.coeffs[m - k]:
                    acc -= out[k] * o.coeffs[m - k]
            out[m] = acc * inv0
        return TruncatedSeries(out, n)

    def __rtruediv__(self, other) -> "TruncatedSeries":
        return self._coerce(other) / self

    def __eq__(self, other) -> bool:
        if isinstance(other, TruncatedSeries):
            return self.order == other.order and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == TruncatedSeries.constant(other, self.order)
        return NotImplemented

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def truncate(self, order: int) -> "TruncatedSeries":
        """Project onto a smaller (or equal) truncation order."""
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return TruncatedSeries(self.coeffs[: order + 1], order)

    def coefficient(self, m: int) -> Fraction:
        return self.coeffs[m]

    def __repr__(self) -> str:
        return f"TruncatedSeries({list(self.coeffs)!r}, order={self.order})"

    def __str__(self) -> str:
        terms = []
        for m, c in enumerate(self.coeffs):
            if not c:
                continue
            if m == 0:
                terms.append(str(c))
            elif m == 1:
                terms.append(f"{c}*t")
            else:
                terms.append(f"{c}*t^{m}")
        return " + ".join(terms) if terms else "0"
