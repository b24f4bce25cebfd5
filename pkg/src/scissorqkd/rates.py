"""Key rates, no-amplifier baselines, correlation curves and the PLOB benchmark.

Rates are asymptotic reverse-reconciliation rates in bits per protocol use.
The scissor rate carries the herald probability: K = P_succ (beta I_AB -
chi_EB), clamped at zero.  The Holevo term is the Gaussian-restricted
estimate computed from the heralded covariance matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .constellation import z4_correlation
from .covariance import CovarianceTriplet, cm_triplet, correlation_z_qs, holevo_bound
from .entropy import QuadratureGrid, differential_entropy_bits, mutual_information
from .errors import DomainError
from .params import ChannelParams, ScissorParams
from .scissor import heralded_state

NAN = float("nan")


@dataclass(frozen=True)
class RatePoint:
    """One evaluated channel point: scissor rate plus reference curves."""

    length_km: float
    transmissivity: float
    eps_tm: float
    beta: float
    alpha_opt: float
    g_opt: float
    p_succ: float
    i_ab_bits: float
    chi_eb_bits: float
    key_rate: float
    baseline_noqs_dm: float = NAN
    baseline_gg02: float = NAN
    plob_bound: float = NAN

    def with_baselines(self, noqs_dm: float, gg02: float, plob: float) -> "RatePoint":
        return replace(self, baseline_noqs_dm=noqs_dm, baseline_gg02=gg02, plob_bound=plob)


def qs_rate_terms(
    alpha: float, ch: ChannelParams, qs: ScissorParams, beta: float = 1.0,
    grid: QuadratureGrid | None = None,
) -> tuple[float, float, float, float]:
    """(raw rate, p_succ, I_AB, chi_EB) with the raw rate left unclamped.

    The optimizer maximizes the raw objective P_succ (beta I - chi) so that
    the search surface is smooth through the zero-rate boundary.
    """
    _, prob = heralded_state(alpha, ch, qs)
    i_ab = mutual_information(alpha, ch, qs, grid)
    chi = holevo_bound(cm_triplet(alpha, ch, qs))
    raw = prob.p_succ * (beta * i_ab - chi)
    return raw, prob.p_succ, i_ab, chi


def key_rate_qs(
    alpha: float, ch: ChannelParams, qs: ScissorParams, beta: float = 1.0,
    grid: QuadratureGrid | None = None,
) -> RatePoint:
    """Scissor-assisted key rate at a fixed working point (alpha, g)."""
    raw, p_succ, i_ab, chi = qs_rate_terms(alpha, ch, qs, beta, grid)
    return RatePoint(
        length_km=ch.length_km if ch.length_km is not None else NAN,
        transmissivity=ch.transmissivity,
        eps_tm=ch.eps_tm,
        beta=beta,
        alpha_opt=alpha,
        g_opt=qs.gain,
        p_succ=p_succ,
        i_ab_bits=i_ab,
        chi_eb_bits=chi,
        key_rate=max(0.0, raw),
    )


def noqs_dm_cm(alpha: float, ch: ChannelParams) -> CovarianceTriplet:
    """Covariance triplet of the QPSK protocol without the scissor.

    Alice's variance is 1 + V_A with V_A = 2 alpha^2; the cross term carries
    the discrete-modulation correlation Z_4 of the source state.
    """
    T = ch.transmissivity
    v_a = 2.0 * alpha * alpha
    return CovarianceTriplet(
        v_x=1.0 + v_a,
        v_xy=math.sqrt(T) * z4_correlation(alpha),
        v_y=1.0 + T * (v_a + ch.eps_tm),
    )


def noqs_dm_mutual_information(
    alpha: float, ch: ChannelParams, grid: QuadratureGrid | None = None
) -> float:
    """I_AB of the no-scissor QPSK protocol through the entropy engine.

    Bob's outcome given symbol k is Gaussian with mean sqrt(2T) x_k and
    variance (1 + T eps_tm)/2 in the density convention (vacuum variance
    1/2); the unconditional outcome is the uniform two-component mixture.
    """
    grid = grid or QuadratureGrid()
    T = ch.transmissivity
    mean = math.sqrt(T) * alpha          # sqrt(2T) * alpha/sqrt(2)
    sigma2 = 0.5 * (1.0 + T * ch.eps_tm)
    norm = 1.0 / math.sqrt(2.0 * math.pi * sigma2)

    def conditional(x):
        return norm * np.exp(-((x - mean) ** 2) / (2.0 * sigma2))

    def mixture(x):
        return 0.5 * norm * (
            np.exp(-((x - mean) ** 2) / (2.0 * sigma2))
            + np.exp(-((x + mean) ** 2) / (2.0 * sigma2))
        )

    h_b = differential_entropy_bits(mixture, grid)
    h_cond = differential_entropy_bits(conditional, grid)
    return max(0.0, h_b - h_cond)


def key_rate_noqs_dm(
    alpha: float, ch: ChannelParams, beta: float = 1.0, grid: QuadratureGrid | None = None
) -> float:
    """Asymptotic rate of the QPSK protocol with no amplifier, clamped at 0."""
    if alpha == 0.0:
        return 0.0
    i_ab = noqs_dm_mutual_information(alpha, ch, grid)
    chi = holevo_bound(noqs_dm_cm(alpha, ch))
    return max(0.0, beta * i_ab - chi)


def gg02_cm(v_a: float, ch: ChannelParams) -> CovarianceTriplet:
    """Covariance triplet of the Gaussian-modulation (GG02) protocol."""
    if v_a < 0:
        raise DomainError(f"modulation variance must be >= 0, got {v_a}")
    T = ch.transmissivity
    z_g = math.sqrt(v_a * v_a + 2.0 * v_a)
    return CovarianceTriplet(
        v_x=v_a + 1.0,
        v_xy=math.sqrt(T) * z_g,
        v_y=1.0 + T * (v_a + ch.eps_tm),
    )


def gg02_rate_noqs(v_a: float, ch: ChannelParams, beta: float = 1.0) -> float:
    """Homodyne reverse-reconciliation GG02 rate, clamped at 0.

    I_AB comes from the Schur complement of the coherent-state covariance
    matrix: V_{y|x} = V_y - V_xy^2/(V_x + 1), which equals the physical
    conditional variance 1 + T eps_tm.
    """
    if v_a == 0.0:
        return 0.0
    cm = gg02_cm(v_a, ch)
    v_cond = cm.v_y - cm.v_xy ** 2 / (cm.v_x + 1.0)
    i_ab = 0.5 * math.log2(cm.v_y / v_cond)
    chi = holevo_bound(cm)
    return max(0.0, beta * i_ab - chi)


@dataclass(frozen=True)
class CorrelationCurves:
    """The four correlation parameters at one modulation variance."""

    z_g: float
    z_g_nla: float
    z4: float
    z4_qs: float


def correlation_curves(v_a: float, gain: float) -> CorrelationCurves:
    """Correlation parameters on a lossless, noiseless channel.

    z_g: Gaussian modulation; z_g_nla: Gaussian modulation behind an ideal
    noiseless amplifier of the same gain (pole at g^2 lambda^2 = 1);
    z4: QPSK without amplifier; z4_qs: QPSK with the scissor.
    """
    if v_a < 0:
        raise DomainError(f"modulation variance must be >= 0, got {v_a}")
    if v_a == 0.0:
        return CorrelationCurves(0.0, 0.0, 0.0, 0.0)
    alpha = math.sqrt(v_a / 2.0)
    lam2 = v_a / (v_a + 2.0)
    g2lam2 = gain * gain * lam2
    if g2lam2 >= 1.0:
        raise DomainError(
            f"ideal-amplifier pole: g^2 lambda^2 = {g2lam2:.4f} >= 1 at V_A = {v_a}"
        )
    v_a_amp = 2.0 * g2lam2 / (1.0 - g2lam2)
    ch = ChannelParams(transmissivity=1.0, eps_tm=0.0)
    qs = ScissorParams(gain=gain)
    return CorrelationCurves(
        z_g=math.sqrt(v_a * v_a + 2.0 * v_a),
        z_g_nla=math.sqrt(v_a_amp * v_a_amp + 2.0 * v_a_amp),
        z4=z4_correlation(alpha),
        z4_qs=correlation_z_qs(alpha, ch, qs),
    )


def plob_thermal(ch: ChannelParams) -> float:
    """Repeaterless secret-key capacity bound of the thermal-loss channel.

    Uses the equivalent mean thermal photon number nbar = eps_tm T / (2(1-T));
    the bound is -log2((1-T) T^nbar) - h(nbar) for nbar < T/(1-T) and 0 above,
    with h(n) = (n+1) log2(n+1) - n log2(n).
    """
    T = ch.transmissivity
    if not 0 < T < 1:
        raise DomainError(f"the thermal-loss bound needs T in (0, 1), got {T}")
    nbar = ch.eps_tm * T / (2.0 * (1.0 - T))
    if nbar >= T / (1.0 - T):
        return 0.0
    if nbar == 0.0:
        entropy = 0.0
    else:
        entropy = (nbar + 1.0) * math.log2(nbar + 1.0) - nbar * math.log2(nbar)
    return -math.log2((1.0 - T) * T ** nbar) - entropy
