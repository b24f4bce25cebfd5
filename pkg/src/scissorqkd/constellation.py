"""QPSK constellation algebra.

The four coherent states alpha_k = alpha * exp(i(2k+1)pi/4) decompose into
orthonormal sector states |phi_k> supported on Fock numbers n = k (mod 4),
with weights

    lambda_k = exp(-alpha^2) * sum_n alpha^(2(4n+k)) / (4n+k)!

Everything here is evaluated through the reduced sector sums
c_k(x) = sum_m x^(4m)/(4m+k)! with x = alpha^2, so that the ratio
combinations needed by the covariance closed forms stay finite and exact all
the way down to alpha = 0 (lambda_k = exp(-x) * x^k * c_k(x)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, TruncationError


def _sector_sums(x: float) -> np.ndarray:
    """c_k(x) = sum_m x^(4m)/(4m+k)! for k = 0..3."""
    if x < 0:
        raise DomainError(f"x = alpha^2 must be >= 0, got {x}")
    c = np.empty(4)
    x4 = x ** 4
    for k in range(4):
        term = 1.0 / math.factorial(k)
        total = term
        n = k
        while True:
            term *= x4 / ((n + 1) * (n + 2) * (n + 3) * (n + 4))
            n += 4
            new = total + term
            if new == total:
                break
            total = new
        c[k] = total
    return c


def lambdas(alpha: float) -> np.ndarray:
    """Sector weights lambda_0..3; they sum to 1 for every alpha."""
    if alpha < 0:
        raise DomainError(f"alpha must be >= 0, got {alpha}")
    x = alpha * alpha
    c = _sector_sums(x)
    powers = np.array([1.0, x, x * x, x * x * x])
    return math.exp(-x) * powers * c


def alphas(alpha: float) -> np.ndarray:
    """The four constellation amplitudes alpha * exp(i(2k+1)pi/4)."""
    k = np.arange(4)
    return alpha * np.exp(1j * (2 * k + 1) * np.pi / 4)


def x_quadrature_values(alpha: float) -> np.ndarray:
    """x_k = Re(alpha_k) = +-alpha/sqrt(2), the per-symbol x displacement."""
    return alphas(alpha).real


@dataclass(frozen=True)
class Constellation:
    """Amplitude, the four coherent amplitudes, and the sector weights."""

    alpha: float

    @property
    def alphas(self) -> np.ndarray:
        return alphas(self.alpha)

    @property
    def lambdas(self) -> np.ndarray:
        return lambdas(self.alpha)


def phi_fock_coeffs(alpha: float, k: int, n_cut: int, tail_tol: float = 1e-8) -> np.ndarray:
    """Fock coefficients of the sector state |phi_k> up to n_cut.

    The coefficients are real, alternate in sign within the sector and live
    only on n = k (mod 4).  Raises TruncationError when the omitted sector
    mass exceeds tail_tol.
    """
    if k not in (0, 1, 2, 3):
        raise DomainError(f"sector index must be 0..3, got {k}")
    if n_cut < k:
        raise DomainError(f"n_cut must be >= k, got n_cut={n_cut}, k={k}")
    if alpha < 0:
        raise DomainError(f"alpha must be >= 0, got {alpha}")
    x = alpha * alpha
    ck = _sector_sums(x)[k]
    coeffs = np.zeros(n_cut + 1)
    # coeff(n) = (-1)^n alpha^(4n) / (sqrt((4n+k)!) * sqrt(c_k)); sector mass
    # of the kept terms is sum_n x^(4n)/(4n+k)! / c_k.
    amp = 1.0 / math.sqrt(math.factorial(k))     # alpha^(4n)/sqrt((4n+k)!) at n = 0
    mass_term = 1.0 / math.factorial(k)
    kept_mass = 0.0
    sqrt_ck = math.sqrt(ck)
    n = 0
    idx = k
    while idx <= n_cut:
        coeffs[idx] = (-1.0) ** n * amp / sqrt_ck
        kept_mass += mass_term
        denom = (idx + 1) * (idx + 2) * (idx + 3) * (idx + 4)
        amp *= x * x / math.sqrt(denom)
        mass_term *= x ** 4 / denom
        n += 1
        idx += 4
    tail = max(0.0, 1.0 - kept_mass / ck)
    if tail > tail_tol:
        raise TruncationError(f"n_cut={n_cut} too small for |phi_{k}> at alpha={alpha}", tail)
    return coeffs


def psi_phases() -> np.ndarray:
    """Phase matrix E[k, m] = exp(-i(2k+1)m*pi/4) of the measurement basis.

    |psi_k> = (1/2) sum_m E[k, m] |phi_m>.  With this phase choice the
    bipartite state sum_k sqrt(lambda_k)|phi_k>|phi_k> equals
    (1/2) sum_k |psi_k>|alpha_k> exactly.
    """
    k = np.arange(4)[:, None]
    m = np.arange(4)[None, :]
    return np.exp(-1j * (2 * k + 1) * m * np.pi / 4)


def psi_fock_vectors(alpha: float, n_cut: int, tail_tol: float = 1e-8) -> np.ndarray:
    """The four orthonormal |psi_k> as rows of a (4, n_cut+1) Fock array."""
    phi = np.stack([phi_fock_coeffs(alpha, k, n_cut, tail_tol) for k in range(4)])
    return 0.5 * psi_phases() @ phi.astype(complex)


def _ladder_products(alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """(alpha * r_j, alpha^2 * R_j) with r_j = sqrt(lambda_j/lambda_j+1),
    R_j = sqrt(lambda_j/lambda_j+2), indices mod 4.  Finite at alpha = 0."""
    x = alpha * alpha
    c = _sector_sums(x)
    a4 = x * x
    ar = np.array([
        math.sqrt(c[0] / c[1]),
        math.sqrt(c[1] / c[2]),
        math.sqrt(c[2] / c[3]),
        a4 * math.sqrt(c[3] / c[0]),
    ])
    aR = np.array([
        math.sqrt(c[0] / c[2]),
        math.sqrt(c[1] / c[3]),
        a4 * math.sqrt(c[2] / c[0]),
        a4 * math.sqrt(c[3] / c[1]),
    ])
    return ar, aR


@dataclass(frozen=True)
class PsiMatrixElements:
    """Quadrature matrix elements in the psi basis.

    G[k, l] = <psi_l| x^2 |psi_k> and N[k, l] = <psi_l| x |psi_k> with
    x = a + a^dagger (vacuum variance 1).  Both are Hermitian.
    """

    G: np.ndarray
    N: np.ndarray


def psi_matrix_elements(alpha: float) -> PsiMatrixElements:
    """Evaluate G and N from the closed-form ladder action on |psi_k>.

    a|psi_k> and a^2|psi_k> stay inside span{|phi_m>} with coefficients given
    by sector-weight ratios, so the matrix elements reduce to 4-dimensional
    contractions with no Fock truncation at all.
    """
    if alpha < 0:
        raise DomainError(f"alpha must be >= 0, got {alpha}")
    ar, aR = _ladder_products(alpha)
    k = np.arange(4)[:, None]
    j = np.arange(4)[None, :]

    def phase(shift):
        return np.exp(-1j * (2 * k + 1) * (j + shift) * np.pi / 4)

    psi = 0.5 * phase(0)                  # |psi_k> in the phi basis
    avec = 0.5 * phase(1) * ar            # a|psi_k>
    a2vec = 0.5 * phase(2) * aR           # a^2|psi_k>

    N = avec @ psi.conj().T + psi @ avec.conj().T
    G = (
        np.eye(4, dtype=complex)
        + a2vec @ psi.conj().T
        + psi @ a2vec.conj().T
        + 2.0 * (avec @ avec.conj().T)
    )
    return PsiMatrixElements(G=G, N=N)


def alpha2_deltas(alpha: float) -> np.ndarray:
    """alpha^2 * (delta_1..delta_4), the lambda-ratio sums of the V_x closed form.

    delta_1 = l0/l1 + l2/l3, delta_2 = l1/l2 + l3/l0,
    delta_3 = l0/l1 - l2/l3, delta_4 = l1/l2 - l3/l0.
    Premultiplying by alpha^2 keeps every entry finite down to alpha = 0,
    where the values are (4, 2, -2, 2).
    """
    x = alpha * alpha
    c = _sector_sums(x)
    r01 = c[0] / c[1]
    r12 = c[1] / c[2]
    r23 = c[2] / c[3]
    r30 = x ** 4 * c[3] / c[0]
    return np.array([r01 + r23, r12 + r30, r01 - r23, r12 - r30])


def alpha2_omegas(alpha: float) -> np.ndarray:
    """alpha^2 * (omega_1..omega_4), the sqrt-ratio sums of the V_xy closed form.

    omega_1 = sqrt(l0/l1) + sqrt(l2/l3), omega_2 = sqrt(l1/l2) + sqrt(l3/l0),
    omega_3 and omega_4 the corresponding differences.  All four products
    vanish linearly at alpha = 0.
    """
    x = alpha * alpha
    c = _sector_sums(x)
    s01 = alpha * math.sqrt(c[0] / c[1])
    s12 = alpha * math.sqrt(c[1] / c[2])
    s23 = alpha * math.sqrt(c[2] / c[3])
    s30 = alpha ** 5 * math.sqrt(c[3] / c[0])
    return np.array([s01 + s23, s12 + s30, s01 - s23, s12 - s30])


def z4_correlation(alpha: float) -> float:
    """Correlation Z_4 = tr(|Psi><Psi| x_0 x_1) = 2 sum_k lambda_(k-1)^(3/2) / sqrt(lambda_k).

    This is the no-amplifier QPSK correlation of the bipartite source state,
    written through the sector sums so it stays exact for small alpha.
    """
    x = alpha * alpha
    c = _sector_sums(x)
    return 2.0 * math.exp(-x) * (
        alpha * math.sqrt(c[0] ** 3 / c[1])
        + alpha ** 3 * math.sqrt(c[1] ** 3 / c[2])
        + alpha ** 5 * math.sqrt(c[2] ** 3 / c[3])
        + alpha ** 11 * math.sqrt(c[3] ** 3 / c[0])
    )
