"""Key-rate toolkit for QPSK CV-QKD with a quantum-scissor receiver.

Computes heralded states, homodyne mutual information, Gaussian-restricted
Holevo bounds and optimized secret-key rates, with an independent Fock-space
simulation as the verification path.
"""

from .covariance import (
    CovarianceTriplet,
    SymplecticSpectrum,
    cm_triplet,
    cm_triplet_contraction,
    correlation_z_qs,
    holevo_bound,
)
from .entropy import QuadratureGrid, entropy_xb, entropy_xb_given_xa, mutual_information
from .errors import (
    ConfigError,
    DegenerateHeraldError,
    DomainError,
    NumericalDomainError,
    ScissorQKDError,
    TruncationError,
    ValidationError,
)
from .optimize import SweepConfig, noise_ceiling, optimize_point, sweep
from .params import ChannelParams, ProtocolParams, ScissorParams
from .rates import (
    CorrelationCurves,
    RatePoint,
    correlation_curves,
    gg02_rate_noqs,
    key_rate_noqs_dm,
    key_rate_qs,
    plob_thermal,
)
from .scissor import (
    ConditionalHeraldedState,
    HeraldedState,
    SuccessProbability,
    conditional_density,
    conditional_state,
    heralded_state,
    output_density,
)

__version__ = "0.1.0"

__all__ = [
    "ChannelParams", "ScissorParams", "ProtocolParams",
    "HeraldedState", "ConditionalHeraldedState", "SuccessProbability",
    "heralded_state", "conditional_state", "output_density", "conditional_density",
    "QuadratureGrid", "entropy_xb", "entropy_xb_given_xa", "mutual_information",
    "CovarianceTriplet", "SymplecticSpectrum", "cm_triplet", "cm_triplet_contraction",
    "correlation_z_qs", "holevo_bound",
    "RatePoint", "CorrelationCurves", "key_rate_qs", "key_rate_noqs_dm",
    "gg02_rate_noqs", "correlation_curves", "plob_thermal",
    "SweepConfig", "optimize_point", "sweep", "noise_ceiling",
    "ScissorQKDError", "DomainError", "ValidationError", "ConfigError",
    "TruncationError", "DegenerateHeraldError", "NumericalDomainError",
]
