import json
import re
import xml.etree.ElementTree as ET

import pytest
from hypothesis import given, settings, strategies as st

from hypergrowth import (
    LinearFit,
    NothingToPlotError,
    TimeSeries,
    ValidationError,
    YearRange,
    fit_hyperbola,
    fit_piecewise,
    window,
)
from hypergrowth.report import AnalysisReport, PipelineSettings, render_figures, run_pipeline, write_report
from hypergrowth.svg import DIRECT, RECIPROCAL, Overlay, PlotSpec, pixel_to_data, read_axes, render_plot

SVG_NS = "{http://www.w3.org/2000/svg}"


def _polylines(svg):
    root = ET.fromstring(svg)
    out = []
    for el in root.iter(f"{SVG_NS}polyline"):
        pts = [tuple(map(float, p.split(","))) for p in el.get("points").split()]
        out.append((el.get("data-label"), pts))
    return out


def _markers(svg):
    return ET.fromstring(svg).findall(f".//{SVG_NS}circle[@class='obs']")


@pytest.fixture(scope="module")
def africa_segments():
    from hypergrowth import load_africa

    return fit_piecewise(load_africa(), [1820]).segments


class TestRenderPlot:
    def test_figure_one_layout(self, africa, africa_segments):
        spec = PlotSpec(
            RECIPROCAL,
            africa,
            YearRange(1, 2008),
            overlays=[Overlay(s, label=f"seg{i}") for i, s in enumerate(africa_segments)],
            annotations=[(1820, "1820"), (1900, "1900"), (1950, "1950")],
            title="Figure 1",
        )
        svg = render_plot(spec)
        root = ET.fromstring(svg)
        assert root.tag == f"{SVG_NS}svg" and root.get("version") == "1.1"
        assert len(_markers(svg)) == len(africa)
        assert [label for label, _ in _polylines(svg)] == ["seg0", "seg1"]
        assert "href" not in svg

    def test_figure_four_layout(self, africa):
        base = fit_hyperbola(window(africa, YearRange(1820, 1950)))
        spec = PlotSpec(DIRECT, africa, YearRange(1500, 2008), overlays=[Overlay(base, end=2008)])
        svg = render_plot(spec)
        assert len(_markers(svg)) == len(window(africa, YearRange(1500, 2008)))
        ((_, pts),) = _polylines(svg)
        axes = read_axes(svg)
        last_year = pixel_to_data(axes, *pts[-1])[0]
        # curve stops at least one sample step before the singularity
        assert last_year <= base.singularity_year - 2 + 1e-3

    def test_deterministic(self, africa, africa_segments):
        spec = PlotSpec(RECIPROCAL, africa, YearRange(1, 2008), overlays=[Overlay(africa_segments[0])])
        assert render_plot(spec) == render_plot(spec)

    def test_sampling_step(self, africa, africa_segments):
        spec = PlotSpec(RECIPROCAL, africa, YearRange(1, 2008), overlays=[Overlay(africa_segments[0])])
        axes = read_axes(render_plot(spec))
        ((_, pts),) = _polylines(render_plot(spec))
        years = [pixel_to_data(axes, x, y)[0] for x, y in pts]
        # 6-digit pixel coordinates resolve ~0.003 years at this scale
        assert max(b - a for a, b in zip(years, years[1:])) <= 2.0 + 5e-3

    def test_nothing_to_plot(self, africa):
        with pytest.raises(NothingToPlotError):
            render_plot(PlotSpec(RECIPROCAL, africa, YearRange(-10, 0)))

    def test_overlay_outside_range(self, africa, africa_segments):
        with pytest.raises(ValidationError):
            PlotSpec(RECIPROCAL, africa, YearRange(1900, 2008), overlays=[Overlay(africa_segments[0])])

    def test_log_value_axis(self, africa):
        svg = render_plot(PlotSpec(DIRECT, africa, YearRange(1, 2008), log_value=True))
        assert read_axes(svg)["log_value"] is True
        assert len(_markers(svg)) == len(africa)

    def test_no_locale_or_exponent_noise(self, africa):
        svg = render_plot(PlotSpec(RECIPROCAL, africa, YearRange(1, 2008)))
        coords = re.findall(r'c[xy]="([^"]+)"', svg)
        assert coords and all(re.fullmatch(r"-?\d+(\.\d+)?", c) for c in coords)


@settings(max_examples=60, deadline=None)
@given(st.floats(1e-3, 1.0), st.floats(0.05, 0.95), st.integers(0, 1500), st.integers(100, 2000))
def test_reciprocal_lines_read_back(a, drop, start, length):
    end = start + length
    k = a * drop / end  # stays positive over the drawn span
    fit = LinearFit(a=a, k=k, r2=1.0, sse=0.0, n=2, span=YearRange(start, end))
    series = TimeSeries.from_pairs([(start, 1 / (a - k * start)), (end, 1 / (a - k * end))])
    svg = render_plot(PlotSpec(RECIPROCAL, series, YearRange(start, end), overlays=[Overlay(fit)]))
    axes = read_axes(svg)
    ((_, pts),) = _polylines(svg)
    (t1, r1), (t2, r2) = pixel_to_data(axes, *pts[0]), pixel_to_data(axes, *pts[-1])
    k_back = (r1 - r2) / (t2 - t1)
    a_back = r1 + k_back * t1
    assert k_back == pytest.approx(k, rel=5e-4)
    assert a_back == pytest.approx(a, rel=5e-4)


class TestWriteReport:
    def test_empty_ranking(self):
        report = AnalysisReport(provenance={"name": "x"}, config={})
        doc = json.loads(write_report(report, "structured"))
        assert list(doc) == ["provenance", "config", "fits", "breakpoints", "stagnation", "divergence", "hypotheses"]
        assert doc["hypotheses"] == []
        assert "(none)" in write_report(report, "human")

    def test_structured_round_trip(self, africa):
        text = write_report(run_pipeline(africa).report, "structured")
        assert json.dumps(json.loads(text), indent=2, ensure_ascii=False) + "\n" == text

    def test_full_africa_run(self, africa):
        result = run_pipeline(africa)
        doc = json.loads(write_report(result.report, "structured"))
        assert doc["breakpoints"]["breakpoints"] == [1820]
        assert 1940 <= doc["divergence"]["onset_year"] <= 1960
        assert [h["name"] for h in doc["hypotheses"]] == ["nielsen-africa", "galor-ldc"]
        assert doc["config"]["thresholds"]["min_points"] == 3
        human = write_report(result.report, "human")
        assert "No stagnation detected on [1,1820]" in human
        assert "around 1820" in human
        assert "slower trajectory" in human

    def test_non_finite_serialised(self):
        report = AnalysisReport(provenance={}, config={}, hypotheses=[{"name": "h", "aic": float("-inf")}])
        assert json.loads(write_report(report))["hypotheses"][0]["aic"] == "-inf"

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            write_report(AnalysisReport({}, {}), "yaml")

    def test_four_figures(self, africa):
        settings = PipelineSettings()
        figs = render_figures(africa, run_pipeline(africa, settings), settings)
        assert sorted(figs) == [
            "fig1_reciprocal_full",
            "fig2_reciprocal_zoom",
            "fig3_direct_full",
            "fig4_direct_zoom",
        ]
        assert len(_markers(figs["fig2_reciprocal_zoom"])) == len(window(africa, YearRange(1500, 2008)))
