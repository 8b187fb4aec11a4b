"""Exact truncated cogrowth series and the expected-length functional."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from pathlib import Path
from typing import Sequence

Number = int | Fraction


class SeriesTruncationError(ValueError):
    """The truncated series cannot resolve the requested quantity."""


def _norm(x: Number) -> Number:
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


@dataclass(frozen=True)
class CoefficientSeries:
    """c(0) + c(1) z + ... + c(N) z^N, known exactly up to ``order``."""

    coefficients: tuple
    order: int

    def __post_init__(self):
        coeffs = tuple(_norm(Fraction(c)) for c in self.coefficients[: self.order + 1])
        coeffs += (0,) * (self.order + 1 - len(coeffs))
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def of(cls, coeffs: Sequence[Number], order: int | None = None) -> "CoefficientSeries":
        return cls(tuple(coeffs), len(coeffs) - 1 if order is None else order)

    def __getitem__(self, n: int) -> Number:
        if n > self.order:
            raise IndexError(f"coefficient {n} beyond truncation order {self.order}")
        return self.coefficients[n]

    def __len__(self):
        return self.order + 1

    def truncate(self, order: int) -> "CoefficientSeries":
        if order > self.order:
            raise SeriesTruncationError(f"series known to order {self.order}, need {order}")
        return CoefficientSeries(self.coefficients[: order + 1], order)

    def without_constant(self) -> "CoefficientSeries":
        return CoefficientSeries((0,) + self.coefficients[1:], self.order)

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coefficients)

    def __add__(self, other):
        n = min(self.order, other.order)
        return CoefficientSeries(tuple(a + b for a, b in zip(self.coefficients, other.coefficients)), n)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c: Number) -> "CoefficientSeries":
        return CoefficientSeries(tuple(c * a for a in self.coefficients), self.order)

    def __mul__(self, other):
        if not isinstance(other, CoefficientSeries):
            return self.scale(other)
        n = min(self.order, other.order)
        a, b = self.coefficients, other.coefficients
        out = [0] * (n + 1)
        for i in range(n + 1):
            ai = a[i]
            if ai:
                for j in range(n + 1 - i):
                    out[i + j] += ai * b[j]
        return CoefficientSeries(tuple(out), n)

    __rmul__ = scale

    def reciprocal(self) -> "CoefficientSeries":
        a = self.coefficients
        if a[0] == 0:
            raise ZeroDivisionError("series with zero constant term has no reciprocal")
        inv0 = Fraction(1) / a[0]
        out = [_norm(inv0)]
        for n in range(1, self.order + 1):
            s = sum(a[i] * out[n - i] for i in range(1, n + 1))
            out.append(_norm(-s * inv0))
        return CoefficientSeries(tuple(out), self.order)

    def __truediv__(self, other):
        if isinstance(other, CoefficientSeries):
            return self * other.reciprocal()
        return self.scale(Fraction(1) / other)

    def sqrt(self) -> "CoefficientSeries":
        """Square root with constant term 1; needs c(0) = 1."""
        a = self.coefficients
        if a[0] != 1:
            raise ValueError("sqrt implemented for series with constant term 1")
        s = [1]
        for n in range(1, self.order + 1):
            acc = a[n] - sum(s[i] * s[n - i] for i in range(1, n))
            s.append(_norm(Fraction(acc) / 2))
        return CoefficientSeries(tuple(s), self.order)

    def compose(self, inner: "CoefficientSeries") -> "CoefficientSeries":
        """self(inner(z)); ``inner`` must have zero constant term."""
        if inner.coefficients[0] != 0:
            raise ValueError("inner series must vanish at 0")
        n = min(self.order, inner.order)
        result = CoefficientSeries((self.coefficients[0],), n)
        pw = CoefficientSeries((1,), n)
        for k in range(1, n + 1):
            pw = pw * inner
            c = self.coefficients[k]
            if c:
                result = result + pw.scale(c)
        return result

    def derivative(self) -> "CoefficientSeries":
        a = self.coefficients
        return CoefficientSeries(tuple(n * a[n] for n in range(1, self.order + 1)), self.order - 1)

    def theta(self) -> "CoefficientSeries":
        """(d/dz) z applied to the series: c(n) -> (n+1) c(n)."""
        return CoefficientSeries(tuple((n + 1) * c for n, c in enumerate(self.coefficients)), self.order)

    def evaluate(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coefficients):
            acc = acc * x + float(c)
        return acc


def polynomial(coeffs: Sequence[Number], order: int) -> CoefficientSeries:
    return CoefficientSeries(tuple(coeffs), order)


def z2_return_series(order: int) -> CoefficientSeries:
    """All words equal to the identity in Z^2: binom(2n, n)^2 at z^(2n)."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    return CoefficientSeries(
        tuple(comb(n, n // 2) ** 2 if n % 2 == 0 else 0 for n in range(order + 1)), order
    )


def woess_transform(d: CoefficientSeries, q: int, order: int) -> CoefficientSeries:
    """Cogrowth series of freely reduced trivial words from the all-words series.

    With 2q letters and c = 2q - 1,
    C(z) = (1 - z^2) / (1 + c z^2) * D(z / (1 + c z^2)).
    This inverts ``returns_from_cogrowth``.
    """
    if q < 1:
        raise ValueError("q must be at least 1")
    if d.order < order:
        raise SeriesTruncationError(f"return series known to order {d.order}, need {order}")
    c = 2 * q - 1
    damp = polynomial([1, 0, c], order).reciprocal()
    inner = polynomial([0, 1], order) * damp
    return polynomial([1, 0, -1], order) * damp * d.truncate(order).compose(inner)


def returns_from_cogrowth(cg: CoefficientSeries, q: int, order: int) -> CoefficientSeries:
    """All-words return series from the cogrowth series.

    D(z) = (1 - q + q s) / (1 - 4 q^2 z^2) * C((1 - s) / (2 (2q-1) z)),
    s = sqrt(1 - 4 (2q-1) z^2), expanded exactly.
    """
    if q < 1:
        raise ValueError("q must be at least 1")
    if cg.order < order:
        raise SeriesTruncationError(f"cogrowth series known to order {cg.order}, need {order}")
    c = 2 * q - 1
    # one extra order because the inner argument is divided by z
    big = order + 1
    rad = polynomial([1, 0, -4 * c], big).sqrt()
    num = (polynomial([1], big) - rad).coefficients
    inner = CoefficientSeries(tuple(Fraction(x, 2 * c) for x in num[1:]), order)
    rad = rad.truncate(order)
    pref = (polynomial([1 - q], order) + rad.scale(q)) / polynomial([1, 0, -4 * q * q], order)
    return pref * cg.truncate(order).compose(inner)


def kouksov_series(which: str, order: int) -> CoefficientSeries:
    """Closed-form cogrowth series of Z2*Z3 (K1), Z3*Z3 (K2), Z2*Z2*Z2 (K3)."""
    which = which.upper()
    n = order
    one_plus_t = polynomial([1, 1], n)
    if which == "K1":
        f1 = polynomial([0, -1, 1, -8, 3, -9], n)
        f2 = polynomial([1, -2, 1, -6, -8, -18, 9, -54, 81], n)
        num = one_plus_t * (f1 + polynomial([2, -1, 6], n) * f2.sqrt())
        den = (polynomial([1, -3], n) * polynomial([1, 0, 3], n)
               * polynomial([1, 3, 3], n) * polynomial([1, -1, 3], n)).scale(2)
        return num / den
    if which == "K2":
        rad = polynomial([1, -2, -1, -6, 9], n).sqrt()
        num = one_plus_t * (polynomial([0, -1], n) + rad)
        den = polynomial([1, -3], n) * polynomial([1, 2, 3], n)
        return num / den
    if which == "K3":
        rad = polynomial([1, 0, -22, 0, 25], n).sqrt()
        num = polynomial([-1, 0, -5], n) + rad.scale(3)
        return num / polynomial([2, 0, -50], n)
    raise ValueError(f"unknown Kouksov group {which!r}; expected K1, K2 or K3")


# Polynomials whose smallest positive root is the radius of convergence.
KOUKSOV_RADIUS_POLYNOMIALS = {
    "K1": (1, -2, 1, -6, -8, -18, 9, -54, 81),
    "K2": (1, -2, -1, -6, 9),
    "K3": (1, 0, -22, 0, 25),
}

# Published radii, for plot annotation only; no series is generated for these.
PUBLISHED_RADII = {
    "z2": 1 / 3,
    "k1": 0.3418821478,
    "k2": 0.3664068598,
    "k3": 0.2192752634,
    "bs22": 0.3747331572,
    "bs33": 0.417525628,
}


def _terms(c: CoefficientSeries, alpha: float, beta: float, exclude_empty: bool):
    start = 1 if exclude_empty else 0
    log_b = math.log(beta)
    out = []
    for n in range(start, c.order + 1):
        cn = c.coefficients[n]
        if cn:
            out.append((n, math.exp((1.0 + alpha) * math.log(n + 1) + n * log_b + math.log(cn))))
    return out


def expected_length(c: CoefficientSeries, alpha: float, beta: float,
                    exclude_empty: bool = True, tol: float = 1e-6) -> float:
    """Mean |w| under the stretched Boltzmann weight, from a truncated series.

    The neglected tail is bounded geometrically from the last two nonzero
    terms; if that bound exceeds ``tol`` relative to the partial sum the
    truncation is too short for this beta and SeriesTruncationError is raised.
    Pass ``tol=None`` to skip the check.
    """
    if not 0.0 < beta < 1.0:
        raise ValueError("beta must lie in (0,1)")
    terms = _terms(c, alpha, beta, exclude_empty)
    if not terms:
        raise SeriesTruncationError("no nonzero coefficients in range")
    num = math.fsum(n * t for n, t in terms)
    den = math.fsum(t for _, t in terms)
    if tol is not None:
        tail = tail_bound(terms)
        if tail > tol * num:
            raise SeriesTruncationError(
                f"beta={beta}: truncation at order {c.order} leaves relative tail ~{tail / num:.2e} > {tol}"
            )
    return num / den


def tail_bound(terms) -> float:
    """Geometric estimate of the neglected tail of sum n*t_n."""
    if len(terms) < 2:
        return 0.0
    (n1, t1), (n2, t2) = terms[-2], terms[-1]
    ratio = ((n2 * t2) / (n1 * t1)) ** (1.0 / (n2 - n1)) if n1 else t2 / t1
    if ratio >= 1.0:
        return math.inf
    return n2 * t2 * ratio / (1.0 - ratio)


def expected_length_operator(c: CoefficientSeries, alpha: int, beta: float,
                             exclude_empty: bool = True) -> float:
    """Same expectation via z d/dz log((d/dz z)^(1+alpha) C(z)), integer alpha >= -1."""
    if int(alpha) != alpha or alpha < -1:
        raise ValueError("operator form needs integer alpha >= -1")
    s = c.without_constant() if exclude_empty else c
    for _ in range(int(alpha) + 1):
        s = s.theta()
    value = s.evaluate(beta)
    deriv = s.derivative().evaluate(beta)
    return beta * deriv / value


def radius_smallest_positive_root(poly: Sequence[Number], lo: float = 0.0, hi: float = 1.0,
                                  tol: float = 1e-12, grid: int = 4096) -> float:
    """Smallest root in (lo, hi] of sum poly[i] t^i, by scanning then bisecting."""

    def f(t):
        acc = Fraction(0)
        for a in reversed(poly):
            acc = acc * t + a
        return acc

    prev_t = Fraction(lo)
    prev = f(prev_t)
    if prev == 0 and lo > 0:
        return float(lo)
    for i in range(1, grid + 1):
        t = Fraction(lo) + (Fraction(hi) - Fraction(lo)) * i / grid
        val = f(t)
        if val == 0:
            return float(t)
        if (val > 0) != (prev > 0) and prev != 0:
            a, b, fa = prev_t, t, prev
            while b - a > tol:
                mid = (a + b) / 2
                fm = f(mid)
                if fm == 0:
                    return float(mid)
                if (fm > 0) == (fa > 0):
                    a, fa = mid, fm
                else:
                    b = mid
                # keep the rationals small
                a = Fraction(float(a))
                b = Fraction(float(b))
            return float((a + b) / 2)
        prev_t, prev = t, val
    raise ValueError(f"no sign change of the polynomial found in ({lo}, {hi}]")


def write_series_csv(c: CoefficientSeries, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "c(n)"])
        for n, cn in enumerate(c.coefficients):
            w.writerow([n, cn])


def read_series_csv(path: str | Path) -> CoefficientSeries:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    coeffs = [Fraction(r[1]) for r in rows[1:]]
    return CoefficientSeries.of(coeffs)


def converged_expected_length(make_series, alpha: float, beta: float, exclude_empty: bool = True,
                              tol: float = 1e-6, start_order: int = 60,
                              max_order: int = 2000) -> tuple[float, int]:
    """Expected length with the truncation order doubled until the tail check passes.

    ``make_series(order)`` builds the series; returns (value, order used).
    """
    order = start_order
    while True:
        try:
            return expected_length(make_series(order), alpha, beta, exclude_empty, tol), order
        except SeriesTruncationError:
            if order >= max_order:
                raise
            order = min(2 * order, max_order)
