"""Full analysis pipeline and its JSON / plain-text reports."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .hyperbolic import HyperbolicFit, LinearFit
from .regimes import (
    BUILTIN_HYPOTHESES,
    DEFAULT_CONFIG,
    GROWTH,
    AnalysisConfig,
    DivergenceReport,
    HypothesisResult,
    PiecewiseModel,
    RegimeHypothesis,
    StagnationVerdict,
    compare_hypotheses,
    detect_divergence,
    search_breakpoints,
    test_stagnation,
)
from .series import TimeSeries, YearRange, window
from .svg import DIRECT, RECIPROCAL, Overlay, PlotSpec, render_plot

REPORT_KEYS = ("provenance", "config", "fits", "breakpoints", "stagnation", "divergence", "hypotheses")


@dataclass(frozen=True)
class PipelineSettings:
    """Parameters of the full run; defaults reproduce the Africa analysis."""

    break_window: YearRange = YearRange(1, 1913)
    n_breaks: int = 1
    stagnation_window: YearRange = YearRange(1, 1820)
    baseline: YearRange = YearRange(1820, 1950)
    search_from: int = 1920
    hypotheses: tuple[RegimeHypothesis, ...] = tuple(BUILTIN_HYPOTHESES.values())
    zoom_start: int = 1500
    log_value: bool = False
    config: AnalysisConfig = DEFAULT_CONFIG


@dataclass
class AnalysisReport:
    provenance: dict
    config: dict
    fits: list[dict] = field(default_factory=list)
    breakpoints: dict | None = None
    stagnation: list[dict] = field(default_factory=list)
    divergence: dict | None = None
    hypotheses: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {key: getattr(self, key) for key in REPORT_KEYS}


def _labelled(label: str, fit: HyperbolicFit | LinearFit) -> dict:
    return {"label": label, **fit.to_record()}


def _finite(obj):
    """JSON cannot carry inf/nan; write them as strings instead."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


@dataclass
class PipelineResult:
    report: AnalysisReport
    breaks: PiecewiseModel
    stagnation: StagnationVerdict
    divergence: DivergenceReport
    ranking: list[HypothesisResult]


def run_pipeline(
    series: TimeSeries,
    settings: PipelineSettings = PipelineSettings(),
    provenance: dict | None = None,
    config_echo: dict | None = None,
) -> PipelineResult:
    cfg = settings.config
    breaks = search_breakpoints(window(series, settings.break_window), settings.n_breaks, config=cfg)
    stagnation = test_stagnation(series, settings.stagnation_window, cfg)
    divergence = detect_divergence(series, settings.baseline, settings.search_from, cfg)
    ranking = compare_hypotheses(series, settings.hypotheses, cfg)

    fits = [_labelled(f"segment {i + 1} of break search", s) for i, s in enumerate(breaks.segments)]
    fits.append(_labelled("divergence baseline", divergence.baseline))
    fits.append(_labelled("stagnation window", stagnation.fit))

    breaks_record = breaks.to_record()
    breaks_record["window"] = [settings.break_window.start, settings.break_window.end]
    report = AnalysisReport(
        provenance=provenance or {"name": series.name, "unit": series.unit},
        config=config_echo if config_echo is not None else {"thresholds": cfg.to_record()},
        fits=fits,
        breakpoints=breaks_record,
        stagnation=[stagnation.to_record()],
        divergence=divergence.to_record(),
        hypotheses=[r.to_record() for r in ranking],
    )
    return PipelineResult(report, breaks, stagnation, divergence, ranking)


def figure_specs(series: TimeSeries, result: PipelineResult, settings: PipelineSettings) -> dict:
    """The four figure layouts: reciprocal/direct, full span and zoomed."""
    span = series.span
    overlays = []
    for i, seg in enumerate(result.breaks.segments):
        overlays.append(Overlay(seg, label=f"hyperbola {seg.line.span.start}-{seg.line.span.end}"))
    base = result.divergence.baseline
    # carry the baseline to the end of the data to expose the bend-away
    overlays.append(
        Overlay(base, label=f"hyperbola {base.line.span.start}-{base.line.span.end}", end=span.end)
    )
    marks = {b: str(b) for b in result.breaks.breakpoints}
    for h in settings.hypotheses:
        for b in h.boundaries:
            marks.setdefault(int(b), str(int(b)))
    if result.divergence.onset_year is not None:
        onset = result.divergence.onset_year
        marks[onset] = f"{marks[onset]} / divergence" if onset in marks else "divergence"
    annotations = sorted(marks.items())

    unit = series.unit or "value"
    specs = {}
    zoom_start = max(settings.zoom_start, span.start)
    layouts = [
        ("fig1_reciprocal_full", RECIPROCAL, YearRange(span.start, span.end)),
        ("fig2_reciprocal_zoom", RECIPROCAL, YearRange(zoom_start, span.end)),
        ("fig3_direct_full", DIRECT, YearRange(span.start, span.end)),
        ("fig4_direct_zoom", DIRECT, YearRange(zoom_start, span.end)),
    ]
    for name, space, yr in layouts:
        kept = [
            ov for ov in overlays if ov.extent()[1] >= yr.start and ov.extent()[0] <= yr.end
        ]
        what = "Reciprocal values of" if space == RECIPROCAL else ""
        specs[name] = PlotSpec(
            space=space,
            series=series,
            year_range=yr,
            overlays=tuple(kept),
            annotations=tuple(annotations),
            title=f"{what} {series.name} {yr.start}-{yr.end}".strip(),
            y_label=f"1 / ({unit})" if space == RECIPROCAL else unit,
            log_value=settings.log_value and space == DIRECT,
        )
    return specs


def render_figures(series, result, settings) -> dict[str, str]:
    return {name: render_plot(spec) for name, spec in figure_specs(series, result, settings).items()}


def to_json(data: dict) -> str:
    return json.dumps(_finite(data), indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def _g(x, digits=4):
    if x is None:
        return "none"
    if isinstance(x, str):
        return x
    return format(x, f".{digits}g")


def _human(report: AnalysisReport) -> str:
    lines = []
    prov = report.provenance
    lines.append(f"Hyperbolic growth analysis: {prov.get('name', '')}".rstrip())
    if prov.get("unit"):
        lines.append(f"Unit: {prov['unit']}")
    if prov.get("input"):
        lines.append(f"Input: {prov['input']}")
    lines.append("")

    if report.fits:
        lines.append("Reciprocal-space fits (1/S = a - k*t):")
        for f in report.fits:
            lo, hi = f["range"]
            lines.append(
                f"  {f.get('label', '')} [{lo}, {hi}]: a = {_g(f['a'], 6)}, k = {_g(f['k'], 6)}, "
                f"r2 = {_g(f['r2'], 6)}, singularity year {_g(f['singularity_year'], 6)}"
            )
        lines.append("")

    for s in report.stagnation:
        lo, hi = s["range"]
        if s["verdict"] == GROWTH:
            lines.append(
                f"No stagnation detected on [{lo},{hi}]: steady hyperbolic growth "
                f"(t = {_g(s['t_stat'])} > {_g(s['threshold'])})."
            )
        else:
            lines.append(
                f"Stagnation cannot be rejected on [{lo},{hi}] "
                f"(t = {_g(s['t_stat'])} <= {_g(s['threshold'])})."
            )

    b = report.breakpoints
    if b:
        years = ", ".join(str(y) for y in b["breakpoints"])
        support = "supported" if b.get("supported") else "not supported"
        lines.append(
            f"Transition between hyperbolic regimes around {years} "
            f"({support}; SSE improvement {_g(b.get('relative_improvement'))})."
        )
        ks = [seg["k"] for seg in b["segments"]]
        if len(ks) >= 2:
            pace = "faster" if ks[-1] > ks[0] else "slower"
            lines.append(f"  Growth after the transition is {pace}: k {_g(ks[0])} -> {_g(ks[-1])}.")

    d = report.divergence
    if d:
        if d["onset_year"] is None:
            lines.append("No diversion from the hyperbolic trajectory detected.")
        else:
            lo, hi = d["baseline"]["range"]
            lines.append(
                f"Growth diverted from the [{lo},{hi}] hyperbola to a slower trajectory "
                f"from around {d['onset_year']}."
            )
    lines.append("")

    lines.append("Hypothesis ranking (ascending AIC):")
    if not report.hypotheses:
        lines.append("  (none)")
    rank = 0
    for h in report.hypotheses:
        if h.get("error"):
            lines.append(f"  -  {h['name']}: not evaluated ({h['error']})")
            continue
        rank += 1
        lines.append(
            f"  {rank}. {h['name']}: AIC = {_g(h['aic'], 6)}, SSE = {_g(h['total_sse'], 6)}, "
            f"parameters = {h['n_params']}"
        )
    lines.append("")
    lines.append("Configuration:")
    lines.append("  " + json.dumps(_finite(report.config), sort_keys=False))
    return "\n".join(lines) + "\n"


def write_report(report: AnalysisReport, format: str = "structured") -> str:
    """``structured`` gives JSON with a fixed key order; ``human`` a summary."""
    if format == "structured":
        return to_json(report.to_dict())
    if format == "human":
        return _human(report)
    raise ValueError(f"format must be 'structured' or 'human', got {format!r}")
