"""Piecewise hyperbolic fits and tests between competing regime layouts.

Conventions shared by every routine here:

* an observation lying exactly on a breakpoint belongs to the *earlier*
  segment, i.e. segment ``i`` covers ``(b[i-1], b[i]]``;
* breakpoint candidates are observation years;
* goodness of fit is SSE in reciprocal space, and models are ranked by
  ``AIC = n*ln(SSE/n) + 2p``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .errors import (
    DegenerateInputError,
    InfeasiblePartitionError,
    InsufficientDataError,
    ParseError,
    ValidationError,
)
from .hyperbolic import (
    HyperbolicFit,
    LinearFit,
    fit_reciprocal_line,
    reciprocal_transform,
    residuals_reciprocal,
)
from .series import TimeSeries, YearRange, window

STAGNATION = "stagnation"
HYPERBOLIC = "hyperbolic"
UNCONSTRAINED = "unconstrained"
SEGMENT_KINDS = (STAGNATION, HYPERBOLIC, UNCONSTRAINED)

GROWTH = "growth"
STAGNATION_COMPATIBLE = "stagnation-compatible"

# Relative size of floating-point noise in reciprocal units; residuals and
# SSE differences below this are treated as exact zeros.
_NOISE = 1e-10


@dataclass(frozen=True)
class AnalysisConfig:
    min_points: int = 3
    critical_value: float = 2.0
    run_length: int = 3
    exceedance_factor: float = 2.0
    break_support_threshold: float = 1e-3

    def __post_init__(self):
        if self.min_points < 2:
            raise ValidationError("min_points must be at least 2")
        if self.run_length < 1:
            raise ValidationError("run_length must be at least 1")
        if self.exceedance_factor < 0:
            raise ValidationError("exceedance_factor must be non-negative")

    def to_record(self) -> dict:
        return {
            "min_points": self.min_points,
            "critical_value": self.critical_value,
            "run_length": self.run_length,
            "exceedance_factor": self.exceedance_factor,
            "break_support_threshold": self.break_support_threshold,
        }


DEFAULT_CONFIG = AnalysisConfig()


def aic(sse: float, n: int, n_params: int) -> float:
    if sse <= 0:
        return -math.inf
    return n * math.log(sse / n) + 2 * n_params


def _noise_floor(series: TimeSeries) -> float:
    """Squared-residual scale that counts as zero for this series."""
    recips = [1.0 / v for v in series.values]
    if not recips:
        return 0.0
    rms = math.sqrt(math.fsum(r * r for r in recips) / len(recips))
    return len(recips) * (_NOISE * rms) ** 2


@dataclass(frozen=True)
class PiecewiseModel:
    breakpoints: tuple[int, ...]
    segments: tuple[HyperbolicFit, ...]
    total_sse: float
    n_total: int
    n_params: int
    aic: float
    # filled by search_breakpoints / assess_break
    relative_improvement: float | None = None
    supported: bool | None = None

    def to_record(self) -> dict:
        return {
            "breakpoints": list(self.breakpoints),
            "segments": [s.to_record() for s in self.segments],
            "total_sse": self.total_sse,
            "n_total": self.n_total,
            "n_params": self.n_params,
            "aic": self.aic,
            "relative_improvement": self.relative_improvement,
            "supported": self.supported,
        }


def split_at(series: TimeSeries, breakpoints: Sequence[float]) -> list[TimeSeries]:
    """Partition into ``len(breakpoints)+1`` spans, breakpoint years going left."""
    parts: list[list] = [[] for _ in range(len(breakpoints) + 1)]
    i = 0
    for obs in series:
        while i < len(breakpoints) and obs.year > breakpoints[i]:
            i += 1
        parts[i].append(obs)
    return [TimeSeries(series.name, series.unit, tuple(p)) for p in parts]


def _span_label(breakpoints, i) -> str:
    lo = "-inf" if i == 0 else str(breakpoints[i - 1])
    hi = "+inf" if i == len(breakpoints) else str(breakpoints[i])
    return f"({lo}, {hi}]"


def _check_breakpoints(series: TimeSeries, breakpoints: Sequence[float]):
    if not series.observations:
        raise InfeasiblePartitionError("series is empty")
    first, last = series.years[0], series.years[-1]
    for prev, cur in zip(breakpoints, breakpoints[1:]):
        if cur <= prev:
            raise InfeasiblePartitionError(f"breakpoints not strictly increasing: {list(breakpoints)}")
    for b in breakpoints:
        if not first < b < last:
            raise InfeasiblePartitionError(
                f"breakpoint {b} not strictly inside the data range [{first}, {last}]"
            )


def fit_piecewise(
    series: TimeSeries,
    breakpoints: Sequence[float],
    config: AnalysisConfig = DEFAULT_CONFIG,
    min_points: int | None = None,
    free_breakpoints: int = 0,
) -> PiecewiseModel:
    """Fit an independent reciprocal line to each span between breakpoints.

    ``free_breakpoints`` is the number of breakpoints that were estimated
    (it only enters the AIC parameter count).
    """
    m = config.min_points if min_points is None else min_points
    breakpoints = tuple(breakpoints)
    _check_breakpoints(series, breakpoints)
    parts = split_at(series, breakpoints)
    for i, part in enumerate(parts):
        if len(part) < m:
            raise InfeasiblePartitionError(
                f"span {_span_label(breakpoints, i)} has {len(part)} observations, "
                f"need at least {m}"
            )
    segments = tuple(HyperbolicFit(fit_reciprocal_line(reciprocal_transform(p))) for p in parts)
    total_sse = math.fsum(s.line.sse for s in segments)
    n_total = len(series)
    n_params = 2 * len(segments) + free_breakpoints
    return PiecewiseModel(
        breakpoints=breakpoints,
        segments=segments,
        total_sse=total_sse,
        n_total=n_total,
        n_params=n_params,
        aic=aic(total_sse, n_total, n_params),
    )


def relative_improvement(series: TimeSeries, sse_fewer: float, sse_more: float) -> float:
    """Fractional SSE reduction, with a floating-point noise floor on the base."""
    base = max(sse_fewer, _noise_floor(series))
    if base <= 0:
        return 0.0
    return (sse_fewer - sse_more) / base


def _with_support(model, series, sse_fewer, config):
    rel = relative_improvement(series, sse_fewer, model.total_sse)
    return PiecewiseModel(
        breakpoints=model.breakpoints,
        segments=model.segments,
        total_sse=model.total_sse,
        n_total=model.n_total,
        n_params=model.n_params,
        aic=model.aic,
        relative_improvement=rel,
        supported=rel >= config.break_support_threshold,
    )


def _best_partition(series, n_breaks, m, config):
    years = series.years
    n = len(years)
    # with left-assignment, a break at index i leaves i+1 points on its left
    candidates = range(m - 1, n - m)
    best = None
    for idx in combinations(candidates, n_breaks):
        if any(j - i < m for i, j in zip(idx, idx[1:])):
            continue
        model = fit_piecewise(
            series, [years[i] for i in idx], config, min_points=m, free_breakpoints=n_breaks
        )
        # strict '<' keeps the lexicographically earliest minimiser
        if best is None or model.total_sse < best.total_sse:
            best = model
    return best


def search_breakpoints(
    series: TimeSeries,
    n_breaks: int,
    min_points: int | None = None,
    config: AnalysisConfig = DEFAULT_CONFIG,
) -> PiecewiseModel:
    """Exhaustive minimum-SSE placement of 1 or 2 breakpoints at observation years.

    The returned model carries the relative SSE improvement over the best
    model with one break fewer, and whether it clears
    ``config.break_support_threshold``.
    """
    if n_breaks not in (1, 2):
        raise ValueError(f"n_breaks must be 1 or 2, got {n_breaks}")
    m = config.min_points if min_points is None else min_points
    best = _best_partition(series, n_breaks, m, config)
    if best is None:
        raise InfeasiblePartitionError(
            f"no partition of {len(series)} observations into {n_breaks + 1} spans "
            f"of at least {m} points"
        )
    if n_breaks == 1:
        fewer = fit_piecewise(series, [], config, min_points=m)
    else:
        fewer = _best_partition(series, n_breaks - 1, m, config)
    return _with_support(best, series, fewer.total_sse, config)


def assess_break(
    series: TimeSeries,
    breakpoint: float,
    base_breakpoints: Sequence[float] = (),
    config: AnalysisConfig = DEFAULT_CONFIG,
) -> PiecewiseModel:
    """Fit with ``breakpoint`` added to fixed ``base_breakpoints`` and report support."""
    base = fit_piecewise(series, sorted(base_breakpoints), config)
    model = fit_piecewise(series, sorted([*base_breakpoints, breakpoint]), config)
    return _with_support(model, series, base.total_sse, config)


@dataclass(frozen=True)
class StagnationVerdict:
    slope: float
    slope_stderr: float
    t_stat: float
    threshold: float
    verdict: str
    fit: LinearFit

    def to_record(self) -> dict:
        return {
            "range": [self.fit.span.start, self.fit.span.end],
            "slope": self.slope,
            "slope_stderr": self.slope_stderr,
            "t_stat": self.t_stat,
            "threshold": self.threshold,
            "verdict": self.verdict,
        }


def test_stagnation(
    series: TimeSeries, span: YearRange, config: AnalysisConfig = DEFAULT_CONFIG
) -> StagnationVerdict:
    """One-sided t-test of the reciprocal decline rate against zero.

    A flat reciprocal (constant level) is the stagnation null; a decline
    rate significantly above zero rejects it in favour of growth.
    """
    sub = window(series, span)
    n = len(sub)
    if n < 3:
        raise InsufficientDataError(
            f"stagnation test needs at least 3 observations in {span}, got {n}"
        )
    fit = fit_reciprocal_line(reciprocal_transform(sub))
    xs = [float(y) for y in sub.years]
    x_mean = math.fsum(xs) / n
    sxx = math.fsum((x - x_mean) ** 2 for x in xs)
    stderr = math.sqrt(fit.sse / (n - 2) / sxx)
    if stderr > 0:
        t = fit.k / stderr
    elif fit.k == 0:
        t = 0.0
    else:
        t = math.copysign(math.inf, fit.k)
    verdict = GROWTH if t > config.critical_value else STAGNATION_COMPATIBLE
    return StagnationVerdict(fit.k, stderr, t, config.critical_value, verdict, fit)


test_stagnation.__test__ = False  # keep pytest from collecting the import


@dataclass(frozen=True)
class DivergenceReport:
    baseline: HyperbolicFit
    onset_year: int | None
    run_length: int
    exceedance_factor: float
    search_from: int
    rmse: float
    threshold: float
    residual_trace: tuple[tuple[int, float, bool], ...]

    def to_record(self) -> dict:
        return {
            "baseline": self.baseline.to_record(),
            "search_from": self.search_from,
            "onset_year": self.onset_year,
            "run_length": self.run_length,
            "exceedance_factor": self.exceedance_factor,
            "baseline_rmse": self.rmse,
            "threshold": self.threshold,
            "residual_trace": [
                {"year": y, "residual": r, "exceeds": e} for y, r, e in self.residual_trace
            ],
        }


def detect_divergence(
    series: TimeSeries,
    baseline_range: YearRange,
    search_from: int,
    config: AnalysisConfig = DEFAULT_CONFIG,
) -> DivergenceReport:
    """Find where reciprocals bend persistently above a baseline hyperbola.

    The onset is the first year at or after ``search_from`` that starts a
    run of ``config.run_length`` consecutive observations whose residual
    exceeds ``config.exceedance_factor`` times the baseline RMSE.
    """
    if search_from < baseline_range.start:
        raise ValueError(
            f"search_from {search_from} precedes the baseline start {baseline_range.start}"
        )
    base_series = window(series, baseline_range)
    baseline = HyperbolicFit(fit_reciprocal_line(reciprocal_transform(base_series)))
    rmse = baseline.line.rmse
    # an exact baseline (rmse ~ 0) makes any residual above rounding count
    scale = max(1.0 / v for v in base_series.values)
    threshold = config.exceedance_factor * max(rmse, _NOISE * scale)

    later = [o for o in series if o.year >= search_from]
    trace = tuple(
        (int(y), r, r > threshold)
        for y, r in residuals_reciprocal(baseline, reciprocal_transform(later))
    )
    onset = None
    run = config.run_length
    for i in range(len(trace) - run + 1):
        if all(t[2] for t in trace[i : i + run]):
            onset = trace[i][0]
            break
    return DivergenceReport(
        baseline=baseline,
        onset_year=onset,
        run_length=run,
        exceedance_factor=config.exceedance_factor,
        search_from=search_from,
        rmse=rmse,
        threshold=threshold,
        residual_trace=trace,
    )


@dataclass(frozen=True)
class RegimeHypothesis:
    name: str
    boundaries: tuple[float, ...]
    segment_kinds: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "boundaries", tuple(self.boundaries))
        object.__setattr__(self, "segment_kinds", tuple(self.segment_kinds))
        if len(self.segment_kinds) != len(self.boundaries) + 1:
            raise ValidationError(
                f"hypothesis {self.name!r}: {len(self.boundaries)} boundaries need "
                f"{len(self.boundaries) + 1} segment kinds, got {len(self.segment_kinds)}"
            )
        for prev, cur in zip(self.boundaries, self.boundaries[1:]):
            if cur <= prev:
                raise ValidationError(f"hypothesis {self.name!r}: boundaries not increasing")
        for kind in self.segment_kinds:
            if kind not in SEGMENT_KINDS:
                raise ValidationError(
                    f"hypothesis {self.name!r}: unknown segment kind {kind!r}; "
                    f"expected one of {', '.join(SEGMENT_KINDS)}"
                )

    def clamped(self, first: int, last: int) -> "RegimeHypothesis":
        """Drop boundaries outside ``(first, last)`` with the spans beyond them."""
        bounds = list(self.boundaries)
        kinds = list(self.segment_kinds)
        while bounds and bounds[0] <= first:
            bounds.pop(0)
            kinds.pop(0)
        while bounds and bounds[-1] >= last:
            bounds.pop()
            kinds.pop()
        return RegimeHypothesis(self.name, tuple(bounds), tuple(kinds))

    def to_record(self) -> dict:
        return {
            "name": self.name,
            "boundaries": list(self.boundaries),
            "segment_kinds": list(self.segment_kinds),
        }


BUILTIN_HYPOTHESES = {
    # Malthusian stagnation until 1900, post-Malthusian growth after
    "galor-ldc": RegimeHypothesis("galor-ldc", (1900,), (STAGNATION, UNCONSTRAINED)),
    # two hyperbolas joined at 1820, diverted onto a slower path after 1950
    "nielsen-africa": RegimeHypothesis(
        "nielsen-africa", (1820, 1950), (HYPERBOLIC, HYPERBOLIC, UNCONSTRAINED)
    ),
}


def get_hypothesis(name: str) -> RegimeHypothesis:
    try:
        return BUILTIN_HYPOTHESES[name]
    except KeyError:
        raise ValidationError(
            f"unknown hypothesis {name!r}; built-ins: {', '.join(sorted(BUILTIN_HYPOTHESES))}"
        ) from None


def parse_hypotheses(text: str) -> list[RegimeHypothesis]:
    """Read hypotheses from JSON: a list, or ``{"hypotheses": [...]}``.

    Each entry has ``name``, ``boundaries`` and ``segment_kinds``.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from None
    if isinstance(data, dict):
        data = data.get("hypotheses", [])
    out = []
    for entry in data:
        try:
            out.append(
                RegimeHypothesis(
                    str(entry["name"]),
                    tuple(entry["boundaries"]),
                    tuple(entry["segment_kinds"]),
                )
            )
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed hypothesis entry {entry!r}: {exc}") from None
    return out


@dataclass(frozen=True)
class SegmentFit:
    kind: str
    span: YearRange
    a: float
    k: float
    sse: float
    n: int
    n_params: int
    # a hyperbolic span whose free slope came out non-growing, refitted flat
    refit_constant: bool = False

    def to_record(self) -> dict:
        return {
            "kind": self.kind,
            "range": [self.span.start, self.span.end],
            "a": self.a,
            "k": self.k,
            "sse": self.sse,
            "n": self.n,
            "n_params": self.n_params,
            "refit_constant": self.refit_constant,
        }


@dataclass(frozen=True)
class HypothesisResult:
    hypothesis: RegimeHypothesis
    segments: tuple[SegmentFit, ...] = ()
    total_sse: float | None = None
    n_total: int | None = None
    n_params: int | None = None
    aic: float | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def to_record(self) -> dict:
        return {
            "name": self.hypothesis.name,
            "boundaries": list(self.hypothesis.boundaries),
            "segment_kinds": list(self.hypothesis.segment_kinds),
            "total_sse": self.total_sse,
            "n_total": self.n_total,
            "n_params": self.n_params,
            "aic": self.aic,
            "segments": [s.to_record() for s in self.segments],
            "error": self.error,
        }


def _constant_fit(part: TimeSeries, kind: str, refit: bool = False) -> SegmentFit:
    recips = [1.0 / v for v in part.values]
    mean = recips[0] if min(recips) == max(recips) else math.fsum(recips) / len(recips)
    sse = math.fsum((r - mean) ** 2 for r in recips)
    return SegmentFit(kind, part.span, mean, 0.0, sse, len(part), 1, refit)


def _fit_segment(part: TimeSeries, kind: str) -> SegmentFit:
    if kind == STAGNATION:
        return _constant_fit(part, kind)
    line = fit_reciprocal_line(reciprocal_transform(part))
    if kind == HYPERBOLIC and line.k <= 0:
        # boundary of the k > 0 constraint: the best admissible fit is flat
        flat = _constant_fit(part, kind, refit=True)
        return SegmentFit(kind, flat.span, flat.a, 0.0, flat.sse, flat.n, 2, True)
    return SegmentFit(kind, line.span, line.a, line.k, line.sse, line.n, 2)


def evaluate_hypothesis(
    series: TimeSeries, hypothesis: RegimeHypothesis, config: AnalysisConfig = DEFAULT_CONFIG
) -> HypothesisResult:
    if len(series) == 0:
        raise InfeasiblePartitionError("series is empty")
    first, last = series.years[0], series.years[-1]
    h = hypothesis.clamped(first, last)
    parts = split_at(series, h.boundaries)
    for i, part in enumerate(parts):
        if len(part) < config.min_points:
            raise InfeasiblePartitionError(
                f"span {_span_label(h.boundaries, i)} has {len(part)} observations, "
                f"need at least {config.min_points}"
            )
    segments = tuple(_fit_segment(p, kind) for p, kind in zip(parts, h.segment_kinds))
    total_sse = math.fsum(s.sse for s in segments)
    n_params = sum(s.n_params for s in segments)
    n_total = len(series)
    return HypothesisResult(
        hypothesis=hypothesis,
        segments=segments,
        total_sse=total_sse,
        n_total=n_total,
        n_params=n_params,
        aic=aic(total_sse, n_total, n_params),
    )


def compare_hypotheses(
    series: TimeSeries,
    hypotheses: Sequence[RegimeHypothesis],
    config: AnalysisConfig = DEFAULT_CONFIG,
) -> list[HypothesisResult]:
    """Fit each hypothesis and rank ascending by AIC.

    Ties go to fewer parameters, then to name.  Hypotheses that cannot be
    fitted are kept, with ``error`` set, after all ranked entries.
    """
    ok, failed = [], []
    for h in hypotheses:
        try:
            ok.append(evaluate_hypothesis(series, h, config))
        except (InfeasiblePartitionError, DegenerateInputError) as exc:
            failed.append(HypothesisResult(hypothesis=h, error=str(exc)))
    ok.sort(key=lambda r: (r.aic, r.n_params, r.hypothesis.name))
    failed.sort(key=lambda r: r.hypothesis.name)
    return ok + failed
