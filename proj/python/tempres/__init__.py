"""Temporal-separation estimation with Hermite-Gauss projections.

Thin wrapper over the compiled ``_core`` extension.
"""

from ._core import (  # noqa: F401
    ConfigError,
    DataMismatchError,
    Error,
    ParameterError,
    __version__,
    analyze,
    channel_fi,
    channel_fi_analytic,
    fisher_report,
    intensity_crb,
    projection_probs,
    qfi,
    run_cli,
    simulate,
)
