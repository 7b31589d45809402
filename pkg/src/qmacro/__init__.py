"""Measurement-based macroscopicity of two-branch superpositions.

Two sizes are provided for ``|Psi> ~ |phi>^N + (U|phi>)^N``: the
branch-distinguishability size ``C_delta`` (how many modes must be measured
to tell the branches apart) and the relative Fisher size ``N^rF`` (metrological
gain over the branches), together with the distinguishability-time speed
limits that relate them.
"""
from __future__ import annotations

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

from .branch_size import SizeReport, c_delta, delta_window, gaussian_cat_size, n_eff
from .config import DEFAULT_TOL, Tolerances
from .errors import (
    CapacityError,
    ConventionError,
    NumericalError,
    QMacroError,
    TruncationError,
    ValidationError,
    WindowError,
)
from .fisher import algebra, nf_measure, nrf_measure, qfi
from .speed_limits import nrf_time_ratio, tau_dist, tau_dist_ml
from .superposition import GeneralSuperposition, NamedState, StateName, build_superposition, named_state

__all__ = [
    "__version__",
    "CapacityError",
    "ConventionError",
    "DEFAULT_TOL",
    "GeneralSuperposition",
    "NamedState",
    "NumericalError",
    "QMacroError",
    "SizeReport",
    "StateName",
    "Tolerances",
    "TruncationError",
    "ValidationError",
    "WindowError",
    "algebra",
    "build_superposition",
    "c_delta",
    "delta_window",
    "gaussian_cat_size",
    "n_eff",
    "named_state",
    "nf_measure",
    "nrf_measure",
    "nrf_time_ratio",
    "qfi",
    "tau_dist",
    "tau_dist_ml",
]
