"""Channel, scissor and protocol parameters and the conversions between them.

Conventions
-----------
* Excess noise is stored transmitter-referred (``eps_tm``, shot-noise units);
  the channel-output-referred value ``eps = T * eps_tm / (1 - T)`` is a
  derived view.
* Covariance-matrix quantities use shot-noise units with vacuum quadrature
  variance 1.  Homodyne probability densities elsewhere in the package use
  the dimensionless outcome x with vacuum variance 1/2; mutual information
  is invariant under that rescaling, so the two conventions never meet in a
  single formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

DEFAULT_KAPPA_DB_PER_KM = 0.2


def transmissivity_from_length(length_km: float, kappa_db_per_km: float = DEFAULT_KAPPA_DB_PER_KM) -> float:
    """Fiber transmissivity T = 10^(-kappa*L/10) for a length in km."""
    if length_km < 0:
        raise DomainError(f"fiber length must be >= 0, got {length_km}")
    if kappa_db_per_km <= 0:
        raise DomainError(f"loss factor must be > 0, got {kappa_db_per_km}")
    return 10.0 ** (-kappa_db_per_km * length_km / 10.0)


def noise_factor(transmissivity: float, eps_tm: float) -> float:
    """Noise factor F = 1/2 + T*eps_tm/4 of the thermal-loss channel."""
    _check_transmissivity(transmissivity)
    if eps_tm < 0:
        raise DomainError(f"excess noise must be >= 0, got {eps_tm}")
    return 0.5 + 0.25 * transmissivity * eps_tm


def mu_from_gain(gain: float) -> float:
    """Beam-splitter transmittance mu = 1/(1+g^2) realizing scissor gain g."""
    if gain < 1:
        raise DomainError(f"scissor gain must be >= 1 (de-amplification unsupported), got {gain}")
    return 1.0 / (1.0 + gain * gain)


def gain_from_mu(mu: float) -> float:
    """Scissor gain g = sqrt((1-mu)/mu) of a beam splitter with transmittance mu."""
    if not 0 < mu <= 0.5:
        raise DomainError(f"transmittance must lie in (0, 1/2], got {mu}")
    return math.sqrt((1.0 - mu) / mu)


def eps_channel_from_tm(eps_tm: float, transmissivity: float) -> float:
    """Channel-output-referred excess noise from the transmitter-referred one."""
    _check_transmissivity(transmissivity)
    if eps_tm < 0:
        raise DomainError(f"excess noise must be >= 0, got {eps_tm}")
    if transmissivity == 1.0:
        if eps_tm > 0:
            raise DomainError("a lossless channel cannot carry transmitter-referred excess noise")
        return 0.0
    return eps_tm * transmissivity / (1.0 - transmissivity)


def eps_tm_from_channel(eps: float, transmissivity: float) -> float:
    """Transmitter-referred excess noise eps_tm = (1-T)*eps/T."""
    _check_transmissivity(transmissivity)
    if eps < 0:
        raise DomainError(f"excess noise must be >= 0, got {eps}")
    return (1.0 - transmissivity) * eps / transmissivity


def _check_transmissivity(transmissivity: float) -> None:
    if not 0 < transmissivity <= 1:
        raise DomainError(f"transmissivity must lie in (0, 1], got {transmissivity}")


@dataclass(frozen=True)
class ChannelParams:
    """Thermal-loss channel: transmissivity plus transmitter-referred excess noise."""

    transmissivity: float
    eps_tm: float = 0.0
    length_km: float | None = None
    kappa_db_per_km: float = DEFAULT_KAPPA_DB_PER_KM

    def __post_init__(self):
        _check_transmissivity(self.transmissivity)
        if self.eps_tm < 0:
            raise DomainError(f"excess noise must be >= 0, got {self.eps_tm}")

    @classmethod
    def from_length(
        cls,
        length_km: float,
        eps_tm: float = 0.0,
        kappa_db_per_km: float = DEFAULT_KAPPA_DB_PER_KM,
    ) -> "ChannelParams":
        T = transmissivity_from_length(length_km, kappa_db_per_km)
        return cls(transmissivity=T, eps_tm=eps_tm, length_km=length_km, kappa_db_per_km=kappa_db_per_km)

    @property
    def noise_factor(self) -> float:
        """F = 1/2 + T*eps_tm/4; equals 1/2 exactly for a noiseless channel."""
        return noise_factor(self.transmissivity, self.eps_tm)

    @property
    def eps_channel(self) -> float:
        """Excess noise referred to the channel output."""
        return eps_channel_from_tm(self.eps_tm, self.transmissivity)


@dataclass(frozen=True)
class ScissorParams:
    """Quantum-scissor setting; gain and beam-splitter transmittance determine each other."""

    gain: float

    def __post_init__(self):
        if self.gain < 1:
            raise DomainError(f"scissor gain must be >= 1, got {self.gain}")

    @classmethod
    def from_mu(cls, mu: float) -> "ScissorParams":
        return cls(gain=gain_from_mu(mu))

    @property
    def mu(self) -> float:
        return mu_from_gain(self.gain)


@dataclass(frozen=True)
class ProtocolParams:
    """QPSK protocol knobs: coherent amplitude, reconciliation efficiency, optional cap."""

    alpha: float
    beta: float = 1.0
    alpha_cap: float | None = None

    def __post_init__(self):
        if self.alpha < 0:
            raise DomainError(f"coherent amplitude must be >= 0, got {self.alpha}")
        if not 0 <= self.beta <= 1:
            raise DomainError(f"reconciliation efficiency must lie in [0, 1], got {self.beta}")
        if self.alpha_cap is not None and self.alpha_cap <= 0:
            raise DomainError(f"alpha cap must be > 0, got {self.alpha_cap}")

    @property
    def modulation_variance(self) -> float:
        """V_A = 2*alpha^2 in shot-noise units."""
        return 2.0 * self.alpha * self.alpha
