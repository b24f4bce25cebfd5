"""Heralded Alice-Bob covariance triplet and the Gaussian-extremality Holevo bound.

The heralded bipartite state has a covariance matrix in standard symplectic
form diag-block (V_x 1, V_xy sigma_z; V_xy sigma_z, V_y 1), shot-noise units.
Two independent evaluation paths are provided:

* ``cm_triplet`` - closed forms in the sector-weight ratio sums, with
  arguments phi_1 = alpha^2 (1 - T/(2F+1)) and phi_2 = alpha^2 (1 - T/(2F)).
* ``cm_triplet_contraction`` - the psi-basis expansion of the heralded state
  contracted against the per-symbol-pair traces of the channel+scissor output
  (the H and S matrices), including the coherent overlap <alpha_l|alpha_k>.

Both agree with the brute-force Fock simulation to ~1e-14; the dual path
exists to catch transcription errors in either one.

Sign convention: V_xy > 0, i.e. the herald pattern for which Bob's outcome is
positively correlated with Alice's.  The opposite pattern flips V_xy and the
conditional coherence b_c together; rates are pattern-independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .constellation import alpha2_deltas, alpha2_omegas, alphas, psi_matrix_elements
from .errors import DomainError, NumericalDomainError
from .params import ChannelParams, ScissorParams
from .scissor import heralded_state

_EIGENVALUE_SLACK = 1e-9


@dataclass(frozen=True)
class CovarianceTriplet:
    """(V_x, V_xy, V_y) of a standard-form two-mode covariance matrix."""

    v_x: float
    v_xy: float
    v_y: float

    @property
    def determinant(self) -> float:
        """D = V_x V_y - V_xy^2 (the 4x4 determinant is D^2)."""
        return self.v_x * self.v_y - self.v_xy * self.v_xy


@dataclass(frozen=True)
class SymplecticSpectrum:
    """Symplectic eigenvalues entering the reverse-reconciliation Holevo bound."""

    lambda1: float
    lambda2: float
    lambda3: float


def _herald_coefficients(alpha: float, ch: ChannelParams, qs: ScissorParams):
    T = ch.transmissivity
    F = ch.noise_factor
    mu = qs.mu
    twoF1 = 2.0 * F + 1.0
    x = alpha * alpha
    A = 2.0 * (twoF1 * twoF1 - mu * twoF1) / twoF1 ** 3
    B = 2.0 * mu * T * x / twoF1 ** 3
    C = (1.0 - mu) / (2.0 * F)
    phi1 = x * (1.0 - T / twoF1)
    phi2 = x * (1.0 - T / (2.0 * F))
    return T, F, mu, twoF1, A, B, C, phi1, phi2


def cm_triplet(alpha: float, ch: ChannelParams, qs: ScissorParams) -> CovarianceTriplet:
    """Closed-form covariance triplet of the heralded state.

    At alpha = 0 this returns exactly (1, 0, 1): the herald then carries no
    information and the bipartite state stays vacuum.
    """
    if alpha < 0:
        raise DomainError(f"alpha must be >= 0, got {alpha}")
    T, F, mu, twoF1, A, B, C, phi1, phi2 = _herald_coefficients(alpha, ch, qs)
    state, prob = heralded_state(alpha, ch, qs)
    p = prob.p_ps
    ex = math.exp(-alpha * alpha)

    d1, d2, d3, d4 = alpha2_deltas(alpha)
    v_x = 1.0 + ex * (
        d1 * (A * math.sinh(phi1) + B * math.cosh(phi1) - C * math.sinh(phi2))
        + d2 * (A * math.cosh(phi1) + B * math.sinh(phi1) - C * math.cosh(phi2))
        + d3 * (A * math.sin(phi1) + B * math.cos(phi1) - C * math.sin(phi2))
        - d4 * (A * math.cos(phi1) - B * math.sin(phi1) - C * math.cos(phi2))
    ) / p

    # V_y = tr(rho_QS x^2) on the {|0>,|1>} subspace
    v_y = 1.0 + 2.0 * state.c

    w1, w2, w3, w4 = alpha2_omegas(alpha)
    v_xy = 2.0 * math.sqrt(mu * (1.0 - mu) * T) * ex * (
        w1 * math.cosh(phi1) + w2 * math.sinh(phi1) + w3 * math.cos(phi1) + w4 * math.sin(phi1)
    ) / (p * twoF1 ** 2)
    return CovarianceTriplet(v_x=v_x, v_xy=v_xy, v_y=v_y)


def h_matrix(alpha: float, ch: ChannelParams, qs: ScissorParams) -> np.ndarray:
    """H[k, l] = trace of the heralded channel+scissor output of |alpha_k><alpha_l|.

    H[0, 0] is the single-pattern success probability; the off-diagonal
    entries carry the coherent overlap <alpha_l|alpha_k>.
    """
    T, F, mu, twoF1, A, _, C, _, _ = _herald_coefficients(alpha, ch, qs)
    a = alphas(alpha)
    prod = a[:, None] * a[None, :].conj()
    overlap = np.exp(-alpha * alpha + prod)
    a_kl = A + 2.0 * mu * T * prod / twoF1 ** 3
    return overlap * (a_kl * np.exp(-T * prod / twoF1) - C * np.exp(-T * prod / (2.0 * F)))


def s_matrix(alpha: float, ch: ChannelParams, qs: ScissorParams) -> np.ndarray:
    """S[k, l] = trace of (heralded output of |alpha_k><alpha_l|) times x_B."""
    T, F, mu, twoF1, _, _, _, _, _ = _herald_coefficients(alpha, ch, qs)
    a = alphas(alpha)
    prod = a[:, None] * a[None, :].conj()
    overlap = np.exp(-alpha * alpha + prod)
    return (
        2.0 * math.sqrt(mu * (1.0 - mu) * T)
        * (a[:, None] + a[None, :].conj())
        * overlap
        * np.exp(-T * prod / twoF1)
        / twoF1 ** 2
    )


def cm_triplet_contraction(alpha: float, ch: ChannelParams, qs: ScissorParams) -> CovarianceTriplet:
    """Covariance triplet via the psi-basis contraction, as an independent path.

    V_x = sum_kl G_kl H_kl / (4 P) and V_xy = sum_kl N_kl S_kl / (4 P); V_y
    needs only the diagonal heralded state.
    """
    pme = psi_matrix_elements(alpha)
    H = h_matrix(alpha, ch, qs)
    S = s_matrix(alpha, ch, qs)
    p = H[0, 0].real
    if p <= 0:
        raise NumericalDomainError(f"herald probability vanished (p_ps={p:.3e})")
    v_x = complex(np.sum(pme.G * H)) / (4.0 * p)
    v_xy = complex(np.sum(pme.N * S)) / (4.0 * p)
    if abs(v_x.imag) > 1e-10 or abs(v_xy.imag) > 1e-10:
        raise NumericalDomainError("contraction produced a non-real covariance entry")
    state, _ = heralded_state(alpha, ch, qs)
    return CovarianceTriplet(v_x=v_x.real, v_xy=v_xy.real, v_y=1.0 + 2.0 * state.c)


def correlation_z_qs(alpha: float, ch: ChannelParams, qs: ScissorParams) -> float:
    """Correlation parameter of the heralded state, Z = V_xy / sqrt(T)."""
    return cm_triplet(alpha, ch, qs).v_xy / math.sqrt(ch.transmissivity)


def gfunc(x: float) -> float:
    """Bosonic entropy g(x) in bits; g(1) = 0 by the limit convention."""
    if x < 1.0:
        if x < 1.0 - _EIGENVALUE_SLACK:
            raise NumericalDomainError(f"symplectic eigenvalue below 1: {x}")
        x = 1.0
    up = 0.5 * (x + 1.0)
    dn = 0.5 * (x - 1.0)
    return float(xlogy(up, up) - xlogy(dn, dn)) / math.log(2.0)


def symplectic_spectrum(cm: CovarianceTriplet) -> SymplecticSpectrum:
    """Symplectic eigenvalues of the joint state and of Alice's state after
    Bob's homodyne measurement (reverse reconciliation)."""
    v_x, v_y, v_xy = cm.v_x, cm.v_y, cm.v_xy
    d = cm.determinant
    if d < 1.0 - _EIGENVALUE_SLACK:
        raise NumericalDomainError(f"unphysical covariance matrix: V_x V_y - V_xy^2 = {d}")
    w = v_x * v_x + v_y * v_y - 2.0 * v_xy * v_xy
    disc = w * w - 4.0 * d * d
    if disc < 0.0:
        if disc < -_EIGENVALUE_SLACK:
            raise NumericalDomainError(f"negative symplectic discriminant: {disc}")
        disc = 0.0
    root = math.sqrt(disc)
    lam1 = math.sqrt((w + root) / 2.0)
    lam2 = math.sqrt(max((w - root) / 2.0, 0.0))
    lam3 = math.sqrt(v_x * d / v_y)
    clamp = lambda lam: 1.0 if 1.0 - _EIGENVALUE_SLACK <= lam < 1.0 else lam
    return SymplecticSpectrum(lambda1=clamp(lam1), lambda2=clamp(lam2), lambda3=clamp(lam3))


def holevo_bound(cm: CovarianceTriplet) -> float:
    """Holevo information bound chi = g(L1) + g(L2) - g(L3) in bits.

    This is the eavesdropper information for the Gaussian (entangling-cloner)
    attack with the same covariance matrix; for the non-Gaussian heralded
    state it is the Gaussian-restricted estimate, not a general lower-bound
    certificate.
    """
    spec = symplectic_spectrum(cm)
    return gfunc(spec.lambda1) + gfunc(spec.lambda2) - gfunc(spec.lambda3)
