"""Reciprocal-value analysis of hyperbolic economic growth."""

from .errors import (
    AnalysisError,
    DegenerateInputError,
    HypergrowthError,
    InfeasiblePartitionError,
    InsufficientDataError,
    LabelNotFoundError,
    NothingToPlotError,
    ParseError,
    SingularityError,
    ValidationError,
)
from .hyperbolic import (
    HyperbolicFit,
    LinearFit,
    ReciprocalPoint,
    fit_hyperbola,
    fit_reciprocal_line,
    hyperbolic_predict,
    reciprocal_transform,
    residuals_reciprocal,
    singularity_year,
)
from .regimes import (
    BUILTIN_HYPOTHESES,
    AnalysisConfig,
    DivergenceReport,
    PiecewiseModel,
    RegimeHypothesis,
    StagnationVerdict,
    assess_break,
    compare_hypotheses,
    detect_divergence,
    fit_piecewise,
    search_breakpoints,
    test_stagnation,
)
from .series import (
    Observation,
    TimeSeries,
    YearRange,
    load_africa,
    parse_maddison_horizontal,
    parse_series_csv,
    to_csv,
    window,
)

__version__ = "0.1.0"
