"""Prepare-and-measure forward model of the quantum-scissor receiver.

Closed forms for the heralded output state in the {|0>, |1>} subspace, the
herald probabilities, and the homodyne outcome densities.  Densities use the
dimensionless outcome x with vacuum variance 1/2, i.e. <x|0> = pi^(-1/4)
exp(-x^2/2) and <x|1> = sqrt(2) x pi^(-1/4) exp(-x^2/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateHeraldError, DomainError, ValidationError
from .params import ChannelParams, ScissorParams

_SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class HeraldedState:
    """Scissor output for the symmetric QPSK mixture: a|0><0| + c|1><1|."""

    a: float
    c: float


@dataclass(frozen=True)
class ConditionalHeraldedState:
    """Scissor output conditioned on the sent symbol's x quadrature.

    rho = a_c|0><0| + b_c(|0><1| + |1><0|) + c_c|1><1| with real b_c.
    """

    a_c: float
    b_c: float
    c_c: float


@dataclass(frozen=True)
class SuccessProbability:
    """Single-pattern (D1-click) and total herald probabilities."""

    p_ps: float

    @property
    def p_succ(self) -> float:
        """Either detector pattern: p_succ = 2 * p_ps."""
        return 2.0 * self.p_ps


def _herald_pieces(alpha2_eff: float, ch: ChannelParams, qs: ScissorParams):
    """Shared coefficients of the heralded-state closed forms.

    alpha2_eff is the effective |input amplitude|^2 in the exponents; the
    unconditional state uses alpha^2, the conditional one (alpha^2+2x_k^2)/2.
    Returns (e1, p_ps, A, B, C, F, T, mu) where e1 = exp(-T a2/(2F+1)) and
    p_ps is evaluated through a cancellation-free regrouping so that small-mu
    and small-alpha limits stay exact.
    """
    T = ch.transmissivity
    F = ch.noise_factor
    mu = qs.mu
    twoF1 = 2.0 * F + 1.0
    th1 = T * alpha2_eff / twoF1
    th2 = T * alpha2_eff / (2.0 * F)
    e1 = math.exp(-th1)
    A = 2.0 * (twoF1 * twoF1 - mu * twoF1) / twoF1 ** 3
    B = 2.0 * mu * T * alpha2_eff / twoF1 ** 3
    C = (1.0 - mu) / (2.0 * F)
    # A - C = ((4F^2 - 1) + mu (4F^2 + 1)) / (2F (2F+1)^2), exact at F = 1/2
    a_minus_c = ((4.0 * F * F - 1.0) + mu * (4.0 * F * F + 1.0)) / (2.0 * F * twoF1 * twoF1)
    # p_ps = (A+B) e1 - C e2 with e2 = e1 * exp(th1 - th2)
    p_ps = e1 * (a_minus_c + B - C * math.expm1(th1 - th2))
    return e1, p_ps, A, B, C, F, T, mu


def heralded_state(alpha: float, ch: ChannelParams, qs: ScissorParams) -> tuple[HeraldedState, SuccessProbability]:
    """Heralded scissor output and success probability for the QPSK mixture."""
    if alpha < 0:
        raise DomainError(f"alpha must be >= 0, got {alpha}")
    e1, p_ps, A, B, C, F, T, mu = _herald_pieces(alpha * alpha, ch, qs)
    if p_ps <= 0.0:
        raise DegenerateHeraldError(f"herald probability vanished (p_ps={p_ps:.3e})")
    twoF1 = 2.0 * F + 1.0
    a = 2.0 * mu * (2.0 * F * twoF1 + T * alpha * alpha) * e1 / (twoF1 ** 3 * p_ps)
    # c = 2(1-mu) [e1/(2F+1) - e2/(4F)] / p_ps, regrouped around F = 1/2
    th_diff = T * alpha * alpha * (1.0 / twoF1 - 1.0 / (2.0 * F))
    bracket = (2.0 * F - 1.0) / (4.0 * F * twoF1) - math.expm1(th_diff) / (4.0 * F)
    c = 2.0 * (1.0 - mu) * e1 * bracket / p_ps
    return HeraldedState(a=a, c=c), SuccessProbability(p_ps=p_ps)


def conditional_state(
    x_index: int, alpha: float, ch: ChannelParams, qs: ScissorParams
) -> tuple[ConditionalHeraldedState, float]:
    """Heralded output given the sent symbol k, with its herald probability.

    The symbol enters only through x_k = Re(alpha_k) = +-alpha/sqrt(2); the
    diagonal part equals the unconditional state at the effective amplitude
    sqrt((alpha^2 + 2 x_k^2)/2) = alpha, while the off-diagonal coherence is
    proportional to x_k.
    """
    if x_index not in (0, 1, 2, 3):
        raise DomainError(f"x_index must be 0..3, got {x_index}")
    if alpha < 0:
        raise DomainError(f"alpha must be >= 0, got {alpha}")
    x_k = alpha * math.cos((2 * x_index + 1) * math.pi / 4)
    alpha2_eff = 0.5 * (alpha * alpha + 2.0 * x_k * x_k)
    e1, p_ps_c, A, B, C, F, T, mu = _herald_pieces(alpha2_eff, ch, qs)
    if p_ps_c <= 0.0:
        raise DegenerateHeraldError(f"herald probability vanished (p_ps={p_ps_c:.3e})")
    twoF1 = 2.0 * F + 1.0
    a_c = 2.0 * mu * (2.0 * F * twoF1 + T * alpha2_eff) * e1 / (twoF1 ** 3 * p_ps_c)
    b_c = -2.0 * math.sqrt(mu * (1.0 - mu) * T) * x_k * e1 / (twoF1 ** 2 * p_ps_c)
    return ConditionalHeraldedState(a_c=a_c, b_c=b_c, c_c=1.0 - a_c), p_ps_c


def output_density(x_b, state: HeraldedState):
    """Homodyne density f(x) = (a + 2c x^2) exp(-x^2)/sqrt(pi); vectorized in x."""
    x = np.asarray(x_b, dtype=float)
    return (state.a + 2.0 * state.c * x * x) * np.exp(-x * x) / _SQRT_PI


def conditional_density(x_b, state: ConditionalHeraldedState):
    """Conditional homodyne density (a_c + 2 sqrt(2) b_c x + 2 c_c x^2) exp(-x^2)/sqrt(pi).

    Raises ValidationError when the coefficients describe an invalid state
    (density negative somewhere), i.e. when b_c^2 > a_c * c_c.
    """
    if state.b_c * state.b_c > state.a_c * state.c_c + 1e-12:
        raise ValidationError(
            f"invalid conditional state: b_c^2={state.b_c**2:.3e} exceeds a_c*c_c={state.a_c * state.c_c:.3e}"
        )
    x = np.asarray(x_b, dtype=float)
    poly = state.a_c + 2.0 * math.sqrt(2.0) * state.b_c * x + 2.0 * state.c_c * x * x
    return poly * np.exp(-x * x) / _SQRT_PI
