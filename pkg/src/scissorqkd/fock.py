"""Brute-force simulation of the entanglement-based scheme in truncated Fock space.

Independent verification path for the closed-form heralded states, herald
probabilities, homodyne densities and covariance moments: build the bipartite
source state, push one arm through the thermal-loss channel (as a P-function
average over coherent noise states) and the scissor network, project on the
herald pattern, and read everything off the resulting density operator.

Mode conventions
----------------
* Beam splitters act as b1 = sqrt(t) a1 + sqrt(1-t) a2 on annihilation
  operators (generator theta*(a1^dag a2 - a2^dag a1), cos(theta) = sqrt(t)).
* The single photon enters the transmittance-mu splitter; the transmitted
  part (amplitude sqrt(mu)) continues to the balanced splitter and the
  detectors, the reflected part becomes the scissor output arm.
* Herald pattern "d1": detector D1 sees one or more photons, D2 sees vacuum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import expm
from scipy.special import roots_hermite

from .constellation import lambdas, phi_fock_coeffs
from .errors import ConfigError, DegenerateHeraldError, DomainError, TruncationError
from .params import ChannelParams, ScissorParams

DEFAULT_CUTOFF = 30
DEFAULT_NOISE_NODES = 12


@lru_cache(maxsize=32)
def _bs_unitary(theta: float, d1: int, d2: int) -> np.ndarray:
    """Two-mode beam-splitter unitary on the truncated pair space.

    Built block-by-block in total photon number, so every block that fits the
    truncation is exact and the whole matrix is exactly unitary.  Pair index
    p = n1 * d2 + n2.
    """
    U = np.zeros((d1 * d2, d1 * d2))
    for total in range(d1 + d2 - 1):
        lo = max(0, total - (d2 - 1))
        hi = min(d1 - 1, total)
        js = np.arange(lo, hi + 1)
        size = len(js)
        K = np.zeros((size, size))
        for idx in range(size - 1):
            j = js[idx]
            amp = theta * math.sqrt((j + 1) * (total - j))
            K[idx + 1, idx] = amp
            K[idx, idx + 1] = -amp
        block = expm(K) if size > 1 else np.ones((1, 1))
        pair = js * d2 + (total - js)
        U[np.ix_(pair, pair)] = block
    return U


def beam_splitter(transmittance: float, d1: int, d2: int) -> np.ndarray:
    """Unitary of a beam splitter with the given transmittance."""
    if not 0 <= transmittance <= 1:
        raise DomainError(f"transmittance must lie in [0, 1], got {transmittance}")
    return _bs_unitary(math.acos(math.sqrt(transmittance)), d1, d2)


def coherent_vector(beta: complex, dim: int) -> np.ndarray:
    """Fock coefficients of |beta> up to dim-1."""
    n = np.arange(dim)
    log_fact = np.cumsum(np.log(np.maximum(n, 1)))
    if beta == 0:
        vec = np.zeros(dim, dtype=complex)
        vec[0] = 1.0
        return vec
    return np.exp(-0.5 * abs(beta) ** 2 + n * np.log(complex(beta)) - 0.5 * log_fact)


def thermal_noise_nodes(eps: float, n_nodes: int = DEFAULT_NOISE_NODES) -> list[tuple[complex, float]]:
    """Coherent-state nodes and weights for the thermal noise P-function.

    The noise state is a Gaussian P-function mixture with <|beta|^2> = eps/2;
    a 2D Gauss-Hermite rule turns it into a finite coherent-state ensemble.
    eps = 0 collapses to the single node beta = 0 (pure loss).
    """
    if eps < 0:
        raise DomainError(f"excess noise must be >= 0, got {eps}")
    if eps == 0:
        return [(0j, 1.0)]
    if n_nodes < 6:
        raise ConfigError(f"need at least 6 Gauss-Hermite nodes per quadrature for eps > 0, got {n_nodes}")
    x, w = roots_hermite(n_nodes)
    scale = math.sqrt(eps / 2.0)
    nodes = []
    for xr, wr in zip(x, w):
        for xi, wi in zip(x, w):
            nodes.append((scale * (xr + 1j * xi), wr * wi / math.pi))
    return nodes


def build_eb_state(alpha: float, n_cut: int = DEFAULT_CUTOFF, tail_tol: float = 1e-8) -> np.ndarray:
    """Bipartite source state sum_k sqrt(lambda_k)|phi_k>|phi_k> as a Fock array."""
    lam = lambdas(alpha)
    psi = np.zeros((n_cut + 1, n_cut + 1))
    for k in range(4):
        phi = phi_fock_coeffs(alpha, k, n_cut, tail_tol)
        psi += math.sqrt(lam[k]) * np.outer(phi, phi)
    tail = 1.0 - float(np.sum(psi * psi))
    if tail > tail_tol:
        raise TruncationError(f"n_cut={n_cut} too small for the source state at alpha={alpha}", tail)
    return psi


@dataclass
class LossyEnsemble:
    """Pure-state branches (weight, amplitudes) after the thermal-loss channel.

    Branch arrays have shape (*front, d_signal, d_noise); the leading axes are
    whatever modes the input state carried besides the signal mode.
    """

    branches: list[tuple[float, np.ndarray]]


def apply_thermal_loss(
    state: np.ndarray,
    transmissivity: float,
    eps: float,
    n_nodes: int = DEFAULT_NOISE_NODES,
    noise_cutoff: int | None = None,
) -> LossyEnsemble:
    """Propagate the last axis of `state` through the thermal-loss channel.

    Each P-function node contributes one pure branch: the signal is mixed with
    a coherent noise state on a transmittance-T beam splitter and the noise
    output mode is kept explicit (it is traced only after heralding).
    """
    d_sig = state.shape[-1]
    d_noise = noise_cutoff if noise_cutoff is not None else d_sig
    U = beam_splitter(transmissivity, d_sig, d_noise)
    branches = []
    for beta, weight in thermal_noise_nodes(eps, n_nodes):
        joint = state[..., :, None] * coherent_vector(beta, d_noise)
        front = joint.shape[:-2]
        mixed = joint.reshape(*front, d_sig * d_noise) @ U.T
        branches.append((weight, mixed.reshape(*front, d_sig, d_noise)))
    return LossyEnsemble(branches=branches)


def _herald_kernel(d_sig: int, mu_unused: None = None, pattern: str = "d1") -> np.ndarray:
    """K[n, a, c] = <pattern(n)| U_50:50 |a, c> with D-silent already projected.

    a is the signal mode entering the balanced splitter (up to d_sig-1
    photons), c in {0, 1} the single-photon arm.  Pattern "d1" keeps
    (n, 0) outcomes, "d2" keeps (0, n).
    """
    if pattern not in ("d1", "d2"):
        raise DomainError(f"herald pattern must be 'd1' or 'd2', got {pattern}")
    dbig = d_sig + 2
    U = beam_splitter(0.5, dbig, dbig)
    n = np.arange(d_sig + 1)
    if pattern == "d1":
        rows = n * dbig
    else:
        rows = n
    cols = (np.arange(d_sig)[:, None] * dbig + np.arange(2)[None, :]).reshape(-1)
    return U[np.ix_(rows, cols)].reshape(d_sig + 1, d_sig, 2)


def apply_scissor_and_herald(
    ensemble: LossyEnsemble, mu: float, pattern: str = "d1"
) -> tuple[np.ndarray, float]:
    """Heralded joint density operator and single-pattern success probability.

    Injects the single photon and vacuum ancillas, applies the transmittance-mu
    and balanced beam splitters, projects the detector modes on the requested
    one-click pattern, and traces the noise and detector modes.  Returns
    (rho, p_ps) where rho has shape (*front, 2, *front, 2) and includes the
    scissor output mode.
    """
    if not 0 < mu <= 0.5:
        raise DomainError(f"transmittance must lie in (0, 1/2], got {mu}")
    first = ensemble.branches[0][1]
    front = first.shape[:-2]
    d_sig, d_noise = first.shape[-2:]
    nf = int(np.prod(front)) if front else 1

    # single photon through the mu splitter: sqrt(mu)|1,0> - sqrt(1-mu)|0,1>
    photon_in = np.zeros(4)
    photon_in[1 * 2 + 0] = 1.0
    v = (beam_splitter(mu, 2, 2) @ photon_in).reshape(2, 2)

    K = _herald_kernel(d_sig, pattern=pattern)

    rho = np.zeros((nf, 2, nf, 2), dtype=complex)
    p_ps = 0.0
    for weight, amps in ensemble.branches:
        psi = amps.reshape(nf, d_sig, d_noise)
        # attach the photon pair, then contract signal and photon arms with K
        joint = psi[:, :, :, None, None] * v[None, None, None, :, :]
        out = np.einsum("fabcd,nac->fbdn", joint, K, optimize=True)
        heralded = out[..., 1:]                      # at least one click
        p_ps += weight * float(np.sum(np.abs(heralded) ** 2))
        rho += weight * np.einsum("fbdn,gbkn->fdgk", heralded, heralded.conj(), optimize=True)
    if p_ps < 1e-300:
        raise DegenerateHeraldError("herald pattern has vanishing probability")
    rho /= p_ps
    return rho.reshape(*front, 2, *front, 2), p_ps


def _x_matrix(dim: int) -> np.ndarray:
    """x = a + a^dag, tridiagonal in the Fock basis (vacuum variance 1)."""
    off = np.sqrt(np.arange(1, dim))
    return np.diag(off, 1) + np.diag(off, -1)


def _p_matrix(dim: int) -> np.ndarray:
    off = np.sqrt(np.arange(1, dim))
    return 1j * (np.diag(off, -1) - np.diag(off, 1))


def extract_moments(rho: np.ndarray) -> dict[str, float]:
    """Quadrature moments of a heralded (mode0, mode3) density operator.

    rho has shape (d0, 2, d0, 2) with rho[a, i, b, j] = <a i|rho|b j>.
    Returns first moments and the covariance entries in shot-noise units,
    including the p-quadrature cross moment (equal to -v_xy for the standard
    symplectic form).
    """
    d0 = rho.shape[0]
    X0 = _x_matrix(d0)
    X0sq = X0 @ X0
    P0 = _p_matrix(d0)
    X3 = np.array([[0.0, 1.0], [1.0, 0.0]])
    X3sq = np.array([[1.0, 0.0], [0.0, 3.0]])
    P3 = np.array([[0.0, -1j], [1j, 0.0]])

    def expect(M0, M3):
        return complex(np.einsum("aibj,ba,ji->", rho, M0, M3))

    eye0 = np.eye(d0)
    eye3 = np.eye(2)
    return {
        "mean_x0": expect(X0, eye3).real,
        "mean_x3": expect(eye0, X3).real,
        "v_x": expect(X0sq, eye3).real,
        "v_y": expect(eye0, X3sq).real,
        "v_xy": expect(X0, X3).real,
        "v_pp": expect(P0, P3).real,
    }


def extract_homodyne_density(rho2: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Homodyne density of a {|0>,|1>}-supported state at the points xs.

    Uses the vacuum-variance-1/2 wavefunctions psi_0 and psi_1, matching the
    closed-form density convention.
    """
    xs = np.asarray(xs, dtype=float)
    g = np.exp(-xs * xs / 2.0) / math.pi ** 0.25
    psi0 = g
    psi1 = math.sqrt(2.0) * xs * g
    return (
        rho2[0, 0].real * psi0 * psi0
        + 2.0 * rho2[0, 1].real * psi0 * psi1
        + rho2[1, 1].real * psi1 * psi1
    )


def heralded_eb_state(
    alpha: float,
    ch: ChannelParams,
    qs: ScissorParams,
    n_cut: int = DEFAULT_CUTOFF,
    n_nodes: int = DEFAULT_NOISE_NODES,
    noise_cutoff: int | None = None,
    pattern: str = "d1",
) -> tuple[np.ndarray, float]:
    """Full entanglement-based pipeline: source, channel, scissor, herald.

    Returns (rho03, p_ps) with rho03 of shape (n_cut+1, 2, n_cut+1, 2).
    """
    source = build_eb_state(alpha, n_cut)
    ensemble = apply_thermal_loss(
        source, ch.transmissivity, ch.eps_channel, n_nodes=n_nodes, noise_cutoff=noise_cutoff
    )
    return apply_scissor_and_herald(ensemble, qs.mu, pattern=pattern)


def heralded_pm_state(
    input_amplitude: complex,
    ch: ChannelParams,
    qs: ScissorParams,
    n_cut: int = DEFAULT_CUTOFF,
    n_nodes: int = DEFAULT_NOISE_NODES,
    noise_cutoff: int | None = None,
    pattern: str = "d1",
) -> tuple[np.ndarray, float]:
    """Prepare-and-measure pipeline for a single coherent input.

    Returns the 2x2 heralded output state and the single-pattern success
    probability.
    """
    signal = coherent_vector(input_amplitude, n_cut + 1)
    ensemble = apply_thermal_loss(
        signal, ch.transmissivity, ch.eps_channel, n_nodes=n_nodes, noise_cutoff=noise_cutoff
    )
    rho, p_ps = apply_scissor_and_herald(ensemble, qs.mu, pattern=pattern)
    return rho, p_ps


def heralded_pm_mixture(
    alpha: float,
    ch: ChannelParams,
    qs: ScissorParams,
    n_cut: int = DEFAULT_CUTOFF,
    n_nodes: int = DEFAULT_NOISE_NODES,
    noise_cutoff: int | None = None,
    pattern: str = "d1",
) -> tuple[np.ndarray, float]:
    """Heralded output for the uniform QPSK mixture of coherent inputs."""
    k = np.arange(4)
    amps = alpha * np.exp(1j * (2 * k + 1) * np.pi / 4)
    rho = np.zeros((2, 2), dtype=complex)
    p_ps = 0.0
    for amp in amps:
        rho_k, p_k = heralded_pm_state(amp, ch, qs, n_cut, n_nodes, noise_cutoff, pattern)
        rho += 0.25 * p_k * rho_k
        p_ps += 0.25 * p_k
    return rho / p_ps, p_ps
