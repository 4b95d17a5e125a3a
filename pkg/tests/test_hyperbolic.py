import json
import math
from pathlib import Path

import pytest
from hypothesis import assume, given, settings, strategies as st

import _oracle
from hypergrowth import (
    DegenerateInputError,
    HyperbolicFit,
    LinearFit,
    ReciprocalPoint,
    SingularityError,
    TimeSeries,
    YearRange,
    fit_hyperbola,
    fit_reciprocal_line,
    hyperbolic_predict,
    reciprocal_transform,
    residuals_reciprocal,
    singularity_year,
    window,
)

GOLDEN = json.loads((Path(__file__).parent / "golden" / "africa_ols.json").read_text())


def _line(a, k, span=(0, 1)):
    return LinearFit(a=a, k=k, r2=1.0, sse=0.0, n=2, span=YearRange(*span))


class TestReciprocalTransform:
    def test_arithmetic(self):
        s = TimeSeries.from_pairs([(100, 2.0), (1, 1.0)][::-1])
        assert reciprocal_transform(s) == [ReciprocalPoint(1, 1.0), ReciprocalPoint(100, 0.5)]

    def test_constant_series_is_flat(self):
        s = TimeSeries.from_pairs([(y, 4.0) for y in range(0, 1000, 100)])
        assert {p.recip for p in reciprocal_transform(s)} == {0.25}

    def test_constant_series_fits_zero_slope(self):
        s = TimeSeries.from_pairs([(y, 3.0) for y in range(0, 1000, 100)])
        fit = fit_reciprocal_line(reciprocal_transform(s))
        assert fit.k == 0.0
        assert fit.sse == 0.0
        assert fit.r2 == 1.0
        assert singularity_year(fit) is None


class TestFitReciprocalLine:
    def test_two_points(self):
        fit = fit_reciprocal_line([(0, 10.0), (100, 9.0)])
        assert fit.a == pytest.approx(10.0, rel=1e-15)
        assert fit.k == pytest.approx(0.01, rel=1e-13)
        assert fit.r2 == 1.0
        assert fit.sse == pytest.approx(0.0, abs=1e-28)
        assert fit.n == 2
        assert fit.span == YearRange(0, 100)

    def test_exact_line(self):
        pts = [(t, 12 - 0.005 * t) for t in range(0, 1001, 100)]
        fit = fit_reciprocal_line(pts)
        assert fit.a == pytest.approx(12, rel=1e-14)
        assert fit.k == pytest.approx(0.005, rel=1e-12)
        assert fit.sse == pytest.approx(0.0, abs=1e-26)

    @pytest.mark.parametrize("pts", [[], [(1, 2.0)], [(5, 1.0), (5, 2.0), (5, 3.0)]])
    def test_degenerate(self, pts):
        with pytest.raises(DegenerateInputError):
            fit_reciprocal_line(pts)

    def test_deterministic(self, africa):
        pts = reciprocal_transform(africa)
        assert fit_reciprocal_line(pts) == fit_reciprocal_line(list(pts))

    def test_africa_hyperbolic_epoch_against_golden(self, africa):
        gold = GOLDEN["windows"]["1:1820"]
        fit = fit_reciprocal_line(reciprocal_transform(window(africa, YearRange(1, 1820))))
        assert fit.n == gold["n"]
        assert fit.a == pytest.approx(gold["a"], rel=1e-10)
        assert fit.k == pytest.approx(gold["k"], rel=1e-10)
        assert fit.sse == pytest.approx(gold["sse"], rel=1e-10)

    def test_golden_is_still_what_the_oracle_says(self, africa):
        pts = [(o.year, 1.0 / o.value) for o in africa if o.year <= 1820]
        a, k, sse = _oracle.ols(pts)
        gold = GOLDEN["windows"]["1:1820"]
        assert (a, k) == pytest.approx((gold["a"], gold["k"]), rel=1e-14)

    def test_r2_in_unit_interval(self, africa):
        fit = fit_reciprocal_line(reciprocal_transform(africa))
        assert 0 <= fit.r2 <= 1


class TestPredict:
    def test_arithmetic(self):
        assert hyperbolic_predict(_line(10, 0.01), 0) == pytest.approx(0.1)

    def test_near_and_at_singularity(self):
        fit = _line(10, 0.01)
        assert hyperbolic_predict(fit, 999.999) > 1e4
        with pytest.raises(SingularityError) as info:
            hyperbolic_predict(fit, 1000)
        assert info.value.singularity == pytest.approx(1000)
        assert "1000" in str(info.value)

    def test_beyond_singularity(self):
        with pytest.raises(SingularityError):
            hyperbolic_predict(HyperbolicFit(_line(10, 0.01)), 1500)

    def test_predict_then_reciprocate_matches_line(self, africa):
        fit = fit_hyperbola(window(africa, YearRange(1, 1820)))
        for year in window(africa, YearRange(1, 1820)).years:
            assert 1.0 / hyperbolic_predict(fit, year) == pytest.approx(
                fit.a - fit.k * year, rel=1e-14
            )


class TestSingularityYear:
    @pytest.mark.parametrize("a, k, expected", [(10, 0.01, 1000.0), (10, 0.0, None), (10, -0.002, None)])
    def test_cases(self, a, k, expected):
        got = singularity_year(_line(a, k))
        if expected is None:
            assert got is None
        else:
            assert got == pytest.approx(expected)


class TestResiduals:
    def test_points_on_line(self):
        pts = [(t, 1.0 - 0.001 * t) for t in (0, 100, 200)]
        assert [r for _, r in residuals_reciprocal(_line(1.0, 0.001), pts)] == pytest.approx(
            [0, 0, 0], abs=1e-15
        )

    def test_sign_convention(self):
        # line predicts 0.015 at year 100; observed 0.02 lies above it
        (year, r), = residuals_reciprocal(_line(0.025, 0.0001), [(100, 0.02)])
        assert year == 100
        assert r == pytest.approx(0.005)

    def test_africa_post_1950_mostly_positive(self, africa):
        # against the fit of the faster post-1820 hyperbola
        base = fit_hyperbola(window(africa, YearRange(1820, 1950)))
        later = reciprocal_transform(window(africa, YearRange(1951, 2008)))
        res = [r for _, r in residuals_reciprocal(base, later)]
        assert sum(r > 0 for r in res) / len(res) > 0.9


# --- properties -----------------------------------------------------------

hyperbolas = st.tuples(
    st.floats(1e-5, 1e-1),  # k
    st.floats(100, 5000),  # singularity year
    st.integers(2, 40),  # points
    st.randoms(use_true_random=False),
)


def _sample(k, sing, n, rnd):
    years = sorted(rnd.sample(range(0, int(sing) - 1), min(n, int(sing) - 1)))
    a = k * sing
    return a, years, [(t, 1.0 / (1.0 / (a - k * t))) for t in years]


@settings(max_examples=200, deadline=None)
@given(hyperbolas)
def test_round_trip_recovery(params):
    k, sing, n, rnd = params
    a, years, pts = _sample(k, sing, n, rnd)
    fit = fit_reciprocal_line(pts)
    assert fit.a == pytest.approx(a, rel=1e-9)
    assert fit.k == pytest.approx(k, rel=1e-9)
    assert fit.sse <= 1e-18


noisy = st.lists(
    st.tuples(st.integers(0, 3000), st.floats(1.0, 1000.0)), min_size=3, max_size=30, unique_by=lambda p: p[0]
).map(sorted)


@given(noisy, st.floats(1e-3, 1e3))
def test_scale_covariance(pairs, c):
    s = TimeSeries.from_pairs(pairs)
    base = fit_hyperbola(s).line
    scaled = fit_hyperbola(s.scaled(c)).line
    tol = 1e-9 * (abs(base.a) + abs(base.k) * 3000)
    assert scaled.a * c == pytest.approx(base.a, abs=tol)
    assert scaled.k * c == pytest.approx(base.k, abs=tol / 3000)
    assert scaled.r2 == pytest.approx(base.r2, abs=1e-9)
    if base.k > 0 and scaled.k > 0 and base.k > 1e-6 * abs(base.a):
        assert scaled.singularity_year == pytest.approx(base.singularity_year, rel=1e-6)


@given(noisy, st.integers(-2000, 2000))
def test_time_shift_covariance(pairs, delta):
    s = TimeSeries.from_pairs(pairs)
    base = fit_hyperbola(s).line
    shifted = fit_hyperbola(s.shifted(delta)).line
    scale = max(1.0 / v for _, v in pairs)
    assert shifted.k == pytest.approx(base.k, abs=1e-12 * scale)
    assert shifted.a == pytest.approx(base.a + base.k * delta, abs=1e-10 * scale)
    if base.k > 1e-6 * scale:
        assert shifted.singularity_year == pytest.approx(base.singularity_year + delta, abs=1e-3)


@given(noisy)
def test_residuals_sum_to_zero(pairs):
    s = TimeSeries.from_pairs(pairs)
    fit = fit_hyperbola(s)
    total = math.fsum(r for _, r in residuals_reciprocal(fit, reciprocal_transform(s)))
    assert abs(total) <= 1e-12


@given(st.floats(1e-4, 1e-1), st.floats(100, 5000), st.lists(st.floats(0, 1), min_size=2, max_size=20))
def test_predict_increasing_below_singularity(k, sing, fractions):
    fit = _line(k * sing, k)
    years = sorted({int(f * (sing - 1)) for f in fractions})
    assume(len(years) >= 2)
    values = [hyperbolic_predict(fit, t) for t in years]
    assert all(b > a for a, b in zip(values, values[1:]))
