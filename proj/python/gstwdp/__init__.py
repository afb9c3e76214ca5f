"""GS-TWDP composite fading channel statistics (C++ core)."""

from ._core import (
    ChannelParams,
    ConvergenceError,
    DomainError,
    FitError,
    GsTwdp,
    PoleError,
    SeriesPolicy,
    asep,
    asep_montecarlo,
    bessel_k,
    delta_from_gamma,
    fit,
    hyp1f2,
    ks_error,
    oracle_envelope_pdf,
    oracle_mgf,
    sample_envelope,
    tj_coefficient,
    tricomi_u,
)

__all__ = [
    "ChannelParams",
    "ConvergenceError",
    "DomainError",
    "FitError",
    "GsTwdp",
    "PoleError",
    "SeriesPolicy",
    "asep",
    "asep_montecarlo",
    "bessel_k",
    "delta_from_gamma",
    "fit",
    "hyp1f2",
    "ks_error",
    "oracle_envelope_pdf",
    "oracle_mgf",
    "sample_envelope",
    "tj_coefficient",
    "tricomi_u",
]
