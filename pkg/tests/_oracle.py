"""Independent reference computations in exact rational arithmetic.

Nothing here imports the fitting code under test: lines come from the raw
(uncentred) normal equations solved over ``fractions.Fraction``, so the
only rounding is the final conversion to float.
"""

import math
from fractions import Fraction
from itertools import combinations


def _exact(pairs):
    return [(Fraction(x), Fraction(y)) for x, y in pairs]


def ols(pairs):
    """Least-squares line ``y = c0 + c1*x``; returns (a, k, sse) with a=c0, k=-c1."""
    pts = _exact(pairs)
    n = len(pts)
    sx = sum(x for x, _ in pts)
    sy = sum(y for _, y in pts)
    sxx = sum(x * x for x, _ in pts)
    sxy = sum(x * y for x, y in pts)
    det = n * sxx - sx * sx
    c1 = (n * sxy - sx * sy) / det
    c0 = (sy - c1 * sx) / n
    sse = sum((y - c0 - c1 * x) ** 2 for x, y in pts)
    return float(c0), float(-c1), float(sse)


def slope_t_stat(pairs):
    """OLS decline rate over its standard error, sqrt taken last."""
    pts = _exact(pairs)
    n = len(pts)
    sx = sum(x for x, _ in pts)
    sy = sum(y for _, y in pts)
    sxx = sum(x * x for x, _ in pts)
    sxy = sum(x * y for x, y in pts)
    det = n * sxx - sx * sx
    c1 = (n * sxy - sx * sy) / det
    c0 = (sy - c1 * sx) / n
    sse = sum((y - c0 - c1 * x) ** 2 for x, y in pts)
    centred_sxx = sxx - sx * sx / n
    var = sse / (n - 2) / centred_sxx
    return float(-c1) / math.sqrt(float(var))


def constant(pairs):
    """Best flat level and its SSE."""
    ys = [Fraction(y) for _, y in pairs]
    mean = sum(ys) / len(ys)
    return float(mean), float(sum((y - mean) ** 2 for y in ys))


def recip_pairs(pairs):
    """(year, value) -> (year, 1/value), with the reciprocal taken in floats
    exactly as any caller would see it."""
    return [(y, 1.0 / v) for y, v in pairs]


def split(pairs, breaks):
    spans = [[] for _ in range(len(breaks) + 1)]
    for x, y in pairs:
        i = sum(1 for b in breaks if x > b)
        spans[i].append((x, y))
    return spans


def piecewise_sse(pairs, breaks):
    return sum(ols(span)[2] for span in split(pairs, breaks))


def brute_force_breaks(pairs, n_breaks, min_points=3):
    """Enumerate every break placement at an observation year; exact SSE."""
    years = [x for x, _ in pairs]
    best = None
    for combo in combinations(years, n_breaks):
        spans = split(pairs, combo)
        if any(len(s) < min_points for s in spans):
            continue
        sse = sum(ols(s)[2] for s in spans)
        if best is None or sse < best[1]:
            best = (combo, sse)
    return best


def hypothesis_sse(pairs, boundaries, kinds):
    """SSE of a fixed-boundary layout; stagnation spans are flat, others lines
    (a hyperbolic span whose free slope is non-growing is flat too)."""
    total = 0.0
    for span, kind in zip(split(pairs, boundaries), kinds):
        if kind == "stagnation":
            total += constant(span)[1]
            continue
        a, k, sse = ols(span)
        if kind == "hyperbolic" and k <= 0:
            sse = constant(span)[1]
        total += sse
    return total
