"""Reciprocal-space representation of hyperbolic growth.

A hyperbolic trajectory ``S(t) = 1 / (a - k*t)`` becomes the straight line
``1/S(t) = a - k*t`` when its reciprocal is taken.  ``k > 0`` means growth;
the trajectory escapes to infinity at the singularity year ``a / k``.

All arithmetic here is plain Python floats with ``math.fsum`` reductions so
that results are bit-reproducible across platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import DegenerateInputError, SingularityError
from .series import TimeSeries, YearRange


@dataclass(frozen=True)
class ReciprocalPoint:
    year: float
    recip: float


@dataclass(frozen=True)
class LinearFit:
    """OLS line ``recip = a - k*year``.

    ``a`` is the intercept at year 0, ``k`` the decline rate per year,
    ``sse`` the residual sum of squares in reciprocal units, ``span`` the
    first and last fitted years.
    """

    a: float
    k: float
    r2: float
    sse: float
    n: int
    span: YearRange

    @property
    def singularity_year(self) -> float | None:
        return singularity_year(self)

    @property
    def rmse(self) -> float:
        return math.sqrt(self.sse / self.n)

    def at(self, year: float) -> float:
        return self.a - self.k * year

    def to_record(self) -> dict:
        return {
            "a": self.a,
            "k": self.k,
            "r2": self.r2,
            "sse": self.sse,
            "n": self.n,
            "range": [self.span.start, self.span.end],
            "singularity_year": self.singularity_year,
        }


@dataclass(frozen=True)
class HyperbolicFit:
    line: LinearFit

    @property
    def a(self) -> float:
        return self.line.a

    @property
    def k(self) -> float:
        return self.line.k

    @property
    def singularity_year(self) -> float | None:
        return singularity_year(self.line)

    def to_record(self) -> dict:
        return self.line.to_record()


FitLike = Union[LinearFit, HyperbolicFit]


def _line(fit: FitLike) -> LinearFit:
    return fit.line if isinstance(fit, HyperbolicFit) else fit


def reciprocal_transform(series: TimeSeries | Iterable) -> list[ReciprocalPoint]:
    return [ReciprocalPoint(o.year, 1.0 / o.value) for o in series]


def _as_points(points) -> list[ReciprocalPoint]:
    if isinstance(points, TimeSeries):
        return reciprocal_transform(points)
    out = []
    for p in points:
        out.append(p if isinstance(p, ReciprocalPoint) else ReciprocalPoint(*p))
    return out


def fit_reciprocal_line(points: Sequence[ReciprocalPoint] | TimeSeries) -> LinearFit:
    """Unweighted least squares of reciprocal on year.

    Accepts reciprocal points, ``(year, recip)`` pairs, or a
    :class:`TimeSeries` (transformed on the fly).
    """
    pts = _as_points(points)
    n = len(pts)
    if n < 2:
        raise DegenerateInputError(f"need at least 2 points to fit a line, got {n}")
    xs = [float(p.year) for p in pts]
    ys = [float(p.recip) for p in pts]
    if min(xs) == max(xs):
        raise DegenerateInputError("all points share the same year")

    x_mean = math.fsum(xs) / n
    y_mean = ys[0] if min(ys) == max(ys) else math.fsum(ys) / n
    dx = [x - x_mean for x in xs]
    dy = [y - y_mean for y in ys]
    sxx = math.fsum(d * d for d in dx)
    sxy = math.fsum(u * v for u, v in zip(dx, dy))
    syy = math.fsum(d * d for d in dy)

    slope = sxy / sxx
    intercept = y_mean - slope * x_mean
    sse = math.fsum((v - slope * u) ** 2 for u, v in zip(dx, dy))
    if syy > 0:
        r2 = min(1.0, 1.0 - sse / syy)
    else:
        r2 = 1.0
    span = YearRange(int(math.floor(min(xs))), int(math.ceil(max(xs))))
    return LinearFit(a=intercept, k=-slope, r2=r2, sse=sse, n=n, span=span)


def fit_hyperbola(series: TimeSeries) -> HyperbolicFit:
    return HyperbolicFit(fit_reciprocal_line(reciprocal_transform(series)))


def singularity_year(fit: FitLike) -> float | None:
    """``a/k`` for a growing fit; ``None`` when ``k <= 0``."""
    line = _line(fit)
    if line.k > 0:
        return line.a / line.k
    return None


def hyperbolic_predict(fit: FitLike, year: float) -> float:
    line = _line(fit)
    denom = line.a - line.k * year
    if not denom > 0:
        sing = line.a / line.k if line.k != 0 else math.inf
        raise SingularityError(year, sing)
    return 1.0 / denom


def residuals_reciprocal(fit: FitLike, points) -> list[tuple[float, float]]:
    """Observed minus fitted reciprocal; positive = slower than the hyperbola."""
    line = _line(fit)
    return [(p.year, p.recip - (line.a - line.k * p.year)) for p in _as_points(points)]
