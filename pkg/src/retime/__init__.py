"""retime: signal alignment on the constant-speed timescale.

The core idea: every smooth signal can be re-clocked, in closed form and
linear time, so that it traverses its trajectory at constant speed. Two
observations of the same trajectory under different clocks land on (nearly)
the same constant-speed signal, which makes alignment a pair of independent
O(T) transforms instead of a dynamic program. Exact and multiscale DP
aligners are included as baselines, plus a benchmark harness and CLI.
"""

from .bench import (
    AlignmentOutcome,
    ExperimentConfig,
    ExperimentReport,
    SignalSpec,
    comparison_experiment,
    emit_report,
    optimality_experiment,
)
from .dtw import (
    WarpingPath,
    Window,
    active_backend,
    coarsen,
    dtw_full,
    dtw_windowed,
    expand_window,
    fastdtw,
    normalized_error,
    use_backend,
)
from .errors import (
    ConfigError,
    CsvParseError,
    DegenerateWarp,
    IncompatibleSignals,
    InvalidWindow,
    RetimeError,
)
from .generate import TemplateSpec, generate_template, warped_pair
from .reparam import (
    ReparamResult,
    align_pair,
    arc_length_profile,
    cost_functional,
    invert_monotone,
    reparameterize,
    squared_speed,
)
from .signals import (
    Signal,
    derivative,
    pairwise_error,
    read_csv,
    resample,
    uniform_grid,
    write_csv,
)
from .warps import Warp, compose, identity, random_warp

__version__ = "0.1.0"

__all__ = [
    "Signal",
    "Warp",
    "WarpingPath",
    "Window",
    "ReparamResult",
    "TemplateSpec",
    "SignalSpec",
    "ExperimentConfig",
    "ExperimentReport",
    "AlignmentOutcome",
    "RetimeError",
    "IncompatibleSignals",
    "CsvParseError",
    "DegenerateWarp",
    "InvalidWindow",
    "ConfigError",
    "uniform_grid",
    "derivative",
    "resample",
    "pairwise_error",
    "read_csv",
    "write_csv",
    "identity",
    "compose",
    "random_warp",
    "squared_speed",
    "arc_length_profile",
    "invert_monotone",
    "cost_functional",
    "reparameterize",
    "align_pair",
    "dtw_full",
    "dtw_windowed",
    "coarsen",
    "expand_window",
    "fastdtw",
    "normalized_error",
    "use_backend",
    "active_backend",
    "generate_template",
    "warped_pair",
    "optimality_experiment",
    "comparison_experiment",
    "emit_report",
    "__version__",
]
