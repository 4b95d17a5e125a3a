"""Command-line front end.

    hypergrowth fit        --input africa_gdp.csv --window 1:1820
    hypergrowth breaks     --input africa_gdp.csv --window 1:1913 --n-breaks 1
    hypergrowth stagnation --input africa_gdp.csv --window 1:1820
    hypergrowth diverge    --input africa_gdp.csv --baseline 1820:1950 --search-from 1920
    hypergrowth compare    --input africa_gdp.csv --hypotheses galor-ldc,nielsen-africa
    hypergrowth plot       --input africa_gdp.csv --space reciprocal --window 1500:2008 --out fig2.svg
    hypergrowth report     --input africa_gdp.csv --out-dir results/

Exit status: 0 success, 1 bad input or usage, 2 infeasible analysis.
Results go to stdout or files; diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass, field, fields, replace
from importlib import resources
from pathlib import Path

from .errors import AnalysisError, HypergrowthError, ValidationError
from .regimes import (
    AnalysisConfig,
    assess_break,
    compare_hypotheses,
    detect_divergence,
    fit_piecewise,
    get_hypothesis,
    parse_hypotheses,
    search_breakpoints,
    test_stagnation,
)
from .hyperbolic import fit_hyperbola
from .report import (
    PipelineSettings,
    figure_specs,
    render_figures,
    run_pipeline,
    to_json,
    write_report,
)
from .series import (
    BUNDLED_AFRICA,
    AFRICA_UNIT,
    TimeSeries,
    YearRange,
    parse_maddison_horizontal,
    parse_series_csv,
    window,
)
from .svg import DIRECT, RECIPROCAL, PlotSpec, render_plot

@dataclass
class RunConfig:
    input: str | None = None
    format: str = "canonical"
    delimiter: str = ","
    name: str | None = None
    unit: str | None = None
    window: str | None = None
    n_breaks: int = 1
    breakpoints: list[int] | None = None
    break_window: str = "1:1913"
    stagnation_window: str = "1:1820"
    baseline: str = "1820:1950"
    search_from: int = 1920
    hypotheses: list[str] = field(default_factory=lambda: ["galor-ldc", "nielsen-africa"])
    hypotheses_file: str | None = None
    space: str = RECIPROCAL
    log_value: bool = False
    zoom_start: int = 1500
    out: str | None = None
    out_dir: str | None = None
    thresholds: AnalysisConfig = field(default_factory=AnalysisConfig)

    def to_record(self) -> dict:
        """Echo of everything that affects results; output paths are left out."""
        rec = {}
        for f in fields(self):
            if f.name in ("out", "out_dir"):
                continue
            value = getattr(self, f.name)
            rec[f.name] = value.to_record() if isinstance(value, AnalysisConfig) else value
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(rec) - known
        if unknown:
            raise ValidationError(f"unknown config keys: {', '.join(sorted(unknown))}")
        rec = dict(rec)
        if "thresholds" in rec:
            rec["thresholds"] = AnalysisConfig(**rec["thresholds"])
        return cls(**rec)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated years, got {text!r}")


def _name_list(text: str) -> list[str]:
    return [p.strip() for p in text.split(",") if p.strip()]


def build_parser() -> argparse.ArgumentParser:
    # defaults are None so that only flags actually given override --config
    common = _Parser(add_help=False)
    g = common.add_argument_group("input")
    g.add_argument("--input", help=f"canonical CSV or Maddison export; '{BUNDLED_AFRICA}' falls back to the bundled fixture")
    g.add_argument("--format", help="'canonical' (default) or 'maddison:<row label>'")
    g.add_argument("--delimiter", choices=["comma", "tab"], help="Maddison export delimiter")
    g.add_argument("--name", help="series label (default: from input)")
    g.add_argument("--unit", help="unit string recorded in outputs")
    g.add_argument("--config", help="JSON run description; flags override it")
    g.add_argument("--window", help="START:END, inclusive years")
    g.add_argument("--out", help="write the result here instead of stdout")
    t = common.add_argument_group("thresholds")
    t.add_argument("--min-points", type=int)
    t.add_argument("--critical-value", type=float)
    t.add_argument("--run-length", type=int)
    t.add_argument("--exceedance-factor", type=float)
    t.add_argument("--break-support-threshold", type=float)

    parser = _Parser(prog="hypergrowth", description="Reciprocal-value analysis of hyperbolic growth.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("fit", parents=[common], help="single hyperbolic fit on a window")

    p = sub.add_parser("breaks", parents=[common], help="breakpoint search")
    p.add_argument("--n-breaks", type=int)
    p.add_argument("--breakpoints", type=_int_list, help="fixed breakpoints instead of searching")

    sub.add_parser("stagnation", parents=[common], help="stagnation test on a window")

    p = sub.add_parser("diverge", parents=[common], help="divergence-onset detection")
    p.add_argument("--baseline", help="START:END of the baseline fit")
    p.add_argument("--search-from", type=int)

    p = sub.add_parser("compare", parents=[common], help="rank regime hypotheses")
    p.add_argument("--hypotheses", type=_name_list, help="built-in names, comma-separated")
    p.add_argument("--hypotheses-file", help="JSON file of custom hypotheses")

    p = sub.add_parser("plot", parents=[common], help="emit one SVG figure")
    p.add_argument("--space", choices=[RECIPROCAL, DIRECT])
    p.add_argument("--log-value", action="store_true", default=None)

    p = sub.add_parser("report", parents=[common], help="full pipeline with figures")
    p.add_argument("--out-dir")
    p.add_argument("--n-breaks", type=int)
    p.add_argument("--break-window")
    p.add_argument("--stagnation-window")
    p.add_argument("--baseline")
    p.add_argument("--search-from", type=int)
    p.add_argument("--hypotheses", type=_name_list)
    p.add_argument("--hypotheses-file")
    p.add_argument("--zoom-start", type=int)
    p.add_argument("--log-value", action="store_true", default=None)
    return parser


_THRESHOLD_FLAGS = ("min_points", "critical_value", "run_length", "exceedance_factor", "break_support_threshold")


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        cfg = RunConfig.from_record(json.loads(Path(args.config).read_text(encoding="utf-8")))
    overrides = {}
    for f in fields(RunConfig):
        if f.name == "thresholds":
            continue
        value = getattr(args, f.name, None)
        if value is not None:
            overrides[f.name] = value
    if overrides.get("delimiter") is not None:
        overrides["delimiter"] = "\t" if overrides["delimiter"] == "tab" else ","
    cfg = replace(cfg, **overrides)
    thr = {k: getattr(args, k) for k in _THRESHOLD_FLAGS if getattr(args, k, None) is not None}
    if thr:
        cfg = replace(cfg, thresholds=replace(cfg.thresholds, **thr))
    if cfg.input is None:
        raise ValidationError("--input is required (directly or via --config)")
    return cfg


def read_input(cfg: RunConfig) -> tuple[TimeSeries, dict]:
    path = Path(cfg.input)
    if path.exists():
        text = path.read_text(encoding="utf-8")
    elif path.name == BUNDLED_AFRICA:
        text = resources.files("hypergrowth").joinpath("data", BUNDLED_AFRICA).read_text("utf-8")
    else:
        raise ValidationError(f"input file not found: {cfg.input}")

    if cfg.format == "canonical":
        default_name = "Africa" if path.name == BUNDLED_AFRICA else path.stem
        default_unit = AFRICA_UNIT if path.name == BUNDLED_AFRICA else ""
        series = parse_series_csv(text, cfg.name or default_name, cfg.unit or default_unit)
    elif cfg.format.startswith("maddison:"):
        label = cfg.format.split(":", 1)[1]
        series = parse_maddison_horizontal(text, label, delimiter=cfg.delimiter, unit=cfg.unit or "")
        if cfg.name:
            series = replace(series, name=cfg.name)
    else:
        raise ValidationError(f"unknown input format {cfg.format!r}")

    provenance = {
        "input": cfg.input,
        "sha256": hashlib.sha256(text.encode("utf-8")).hexdigest(),
        "name": series.name,
        "unit": series.unit,
        "n_observations": len(series),
        "range": [series.span.start, series.span.end] if len(series) else None,
    }
    return series, provenance


def _window(series: TimeSeries, text: str | None) -> TimeSeries:
    if text is None:
        return series
    span = YearRange.parse(text)
    sub = window(series, span)
    if len(sub) == 0:
        raise ValidationError(
            f"window {span} contains no observations (data span {series.span})"
        )
    return sub


def _hypotheses(cfg: RunConfig):
    hyps = [get_hypothesis(n) for n in cfg.hypotheses]
    if cfg.hypotheses_file:
        hyps.extend(parse_hypotheses(Path(cfg.hypotheses_file).read_text(encoding="utf-8")))
    return tuple(hyps)


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _settings(cfg: RunConfig) -> PipelineSettings:
    return PipelineSettings(
        break_window=YearRange.parse(cfg.break_window),
        n_breaks=cfg.n_breaks,
        stagnation_window=YearRange.parse(cfg.stagnation_window),
        baseline=YearRange.parse(cfg.baseline),
        search_from=cfg.search_from,
        hypotheses=_hypotheses(cfg),
        zoom_start=cfg.zoom_start,
        log_value=cfg.log_value,
        config=cfg.thresholds,
    )


def _run(command: str, cfg: RunConfig) -> int:
    series, provenance = read_input(cfg)
    thr = cfg.thresholds
    record = {"command": command, "provenance": provenance, "config": cfg.to_record()}

    if command == "fit":
        record["fit"] = fit_hyperbola(_window(series, cfg.window)).to_record()
    elif command == "breaks":
        sub = _window(series, cfg.window)
        if cfg.breakpoints:
            if len(cfg.breakpoints) == 1:
                model = assess_break(sub, cfg.breakpoints[0], config=thr)
            else:
                model = fit_piecewise(sub, cfg.breakpoints, thr)
        else:
            model = search_breakpoints(sub, cfg.n_breaks, config=thr)
        record["breakpoints"] = model.to_record()
    elif command == "stagnation":
        span = YearRange.parse(cfg.window) if cfg.window else series.span
        record["stagnation"] = test_stagnation(series, span, thr).to_record()
    elif command == "diverge":
        sub = _window(series, cfg.window)
        report = detect_divergence(sub, YearRange.parse(cfg.baseline), cfg.search_from, thr)
        record["divergence"] = report.to_record()
    elif command == "compare":
        ranking = compare_hypotheses(_window(series, cfg.window), _hypotheses(cfg), thr)
        record["hypotheses"] = [r.to_record() for r in ranking]
    elif command == "plot":
        return _plot(series, cfg)
    elif command == "report":
        return _report(series, provenance, cfg)
    _emit(to_json(record), cfg.out)
    return 0


def _plot(series: TimeSeries, cfg: RunConfig) -> int:
    span = YearRange.parse(cfg.window) if cfg.window else series.span
    _window(series, str(span))
    settings = _settings(cfg)
    # overlays come from the default pipeline when it is feasible on this data
    try:
        result = run_pipeline(series, settings)
        template = figure_specs(series, result, settings)["fig1_reciprocal_full"]
        overlays = tuple(
            ov for ov in template.overlays if ov.extent()[1] >= span.start and ov.extent()[0] <= span.end
        )
        annotations = template.annotations
    except AnalysisError as exc:
        print(f"hypergrowth: drawing data only ({exc})", file=sys.stderr)
        overlays, annotations = (), ()
    spec = PlotSpec(
        space=cfg.space,
        series=series,
        year_range=span,
        overlays=overlays,
        annotations=annotations,
        title=f"{'Reciprocal values of ' if cfg.space == RECIPROCAL else ''}{series.name} {span.start}-{span.end}",
        y_label=f"1 / ({series.unit or 'value'})" if cfg.space == RECIPROCAL else (series.unit or "value"),
        log_value=cfg.log_value and cfg.space == DIRECT,
    )
    _emit(render_plot(spec), cfg.out)
    return 0


def _report(series: TimeSeries, provenance: dict, cfg: RunConfig) -> int:
    sub = _window(series, cfg.window)
    settings = _settings(cfg)
    result = run_pipeline(sub, settings, provenance=provenance, config_echo=cfg.to_record())
    if cfg.out_dir:
        out = Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(write_report(result.report, "structured"), encoding="utf-8")
        (out / "report.txt").write_text(write_report(result.report, "human"), encoding="utf-8")
        for name, svg in render_figures(sub, result, settings).items():
            (out / f"{name}.svg").write_text(svg, encoding="utf-8")
        print(f"hypergrowth: wrote report and 4 figures to {out}", file=sys.stderr)
    else:
        _emit(write_report(result.report, "structured"), cfg.out)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        return _run(args.command, cfg)
    except AnalysisError as exc:
        print(f"hypergrowth: infeasible analysis: {exc}", file=sys.stderr)
        return 2
    except (HypergrowthError, OSError, ValueError, TypeError) as exc:
        print(f"hypergrowth: {exc}", file=sys.stderr)
        return 1


def run(argv: list[str]) -> int:
    """Like :func:`main` but returns the status for ``argparse`` exits too."""
    try:
        return main(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1


if __name__ == "__main__":
    sys.exit(main())
