"""Radial k-plane transform: sharp constants, extremizers and diagnostics.

Profiles are NumPy arrays sampled on the nodes of a :class:`Grid`.
"""

from ._kplane import (
    ConfigError,
    DataError,
    DomainError,
    Error,
    Grid,
    IterationAnomaly,
    NumericalError,
    ParameterError,
    PreconditionError,
    __version__,
    adjoint,
    classify,
    constant_A,
    constant_B,
    exponents,
    extremizer,
    functional_ratio,
    operator_matrix,
    random_profile,
    resample,
    search,
    synthetic_sequence,
    transform,
    transform_indicator,
    verify,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
