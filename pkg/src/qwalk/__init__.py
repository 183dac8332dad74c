"""Coined quantum walk on the half line and its line-walk copy.

Three independent routes to the same distributions: unitary evolution,
combinatorial closed forms, and weak-limit densities, plus the verification
suites that cross-check them.
"""
from .asymptotics import (
    ApproxKind,
    DensityKind,
    KSReport,
    LimitDensity,
    approx_prob,
    cdf_at,
    density_at,
    ks_distance,
    total_mass,
)
from .closed_form import (
    BinomialTable,
    ExactParams,
    FormulaDomainError,
    Precision,
    PrecisionError,
    binomial_table,
    half_line_exact_by_inner,
    half_line_exact_total,
    half_line_exact_values,
    line_exact,
    line_exact_values,
)
from .core import (
    AmplitudePair,
    Coin,
    Distribution,
    DistributionRow,
    HalfLineState,
    LineState,
    WalkKind,
    initial_half_line,
    initial_line,
    make_coin,
    make_coin_pi,
)
from .evolution import (
    distribution,
    evolve,
    iter_states,
    step_half_line,
    step_line,
)
from .harness import (
    CheckResult,
    OutputTable,
    VerificationReport,
    emit,
    figure_data,
    run_checks,
)
from .qfield import (
    ExactDistribution,
    OracleLimitError,
    QFieldComplex,
    q2_oracle_distribution,
    q2_oracle_series,
)

__version__ = "0.1.0"

__all__ = [
    "AmplitudePair",
    "ApproxKind",
    "BinomialTable",
    "CheckResult",
    "Coin",
    "DensityKind",
    "Distribution",
    "DistributionRow",
    "ExactDistribution",
    "ExactParams",
    "FormulaDomainError",
    "HalfLineState",
    "KSReport",
    "LimitDensity",
    "LineState",
    "OracleLimitError",
    "OutputTable",
    "Precision",
    "PrecisionError",
    "QFieldComplex",
    "VerificationReport",
    "WalkKind",
    "approx_prob",
    "binomial_table",
    "cdf_at",
    "density_at",
    "distribution",
    "emit",
    "evolve",
    "figure_data",
    "half_line_exact_by_inner",
    "half_line_exact_total",
    "half_line_exact_values",
    "initial_half_line",
    "initial_line",
    "iter_states",
    "ks_distance",
    "line_exact",
    "line_exact_values",
    "make_coin",
    "make_coin_pi",
    "q2_oracle_distribution",
    "q2_oracle_series",
    "run_checks",
    "step_half_line",
    "step_line",
    "total_mass",
]
