import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from scissorqkd.constellation import (
    alpha2_deltas,
    alpha2_omegas,
    alphas,
    lambdas,
    phi_fock_coeffs,
    psi_fock_vectors,
    psi_matrix_elements,
    x_quadrature_values,
    z4_correlation,
)
from scissorqkd.errors import DomainError, TruncationError


def brute_force_lambdas(alpha, terms=200):
    """Direct summation lambda_k = e^(-a^2) sum_n a^(2(4n+k))/(4n+k)!."""
    x = alpha * alpha
    out = np.zeros(4)
    for k in range(4):
        for n in range(terms):
            idx = 4 * n + k
            out[k] += x ** idx / math.factorial(idx)
            if idx > 4 and x ** idx / math.factorial(idx) < 1e-300:
                break
    return math.exp(-x) * out


def x_matrix(dim):
    off = np.sqrt(np.arange(1, dim))
    return np.diag(off, 1) + np.diag(off, -1)


def test_lambdas_vacuum():
    assert np.allclose(lambdas(0.0), [1.0, 0.0, 0.0, 0.0], atol=0)


def test_lambdas_match_brute_force_and_trig_forms():
    x = 0.25
    lam = lambdas(0.5)
    assert lam == pytest.approx(brute_force_lambdas(0.5), abs=1e-14)
    # the trigonometric closed forms with overall prefactor e^(-a^2)
    trig = math.exp(-x) * np.array([
        (math.cosh(x) + math.cos(x)) / 2,
        (math.sinh(x) + math.sin(x)) / 2,
        (math.cosh(x) - math.cos(x)) / 2,
        (math.sinh(x) - math.sin(x)) / 2,
    ])
    assert lam == pytest.approx(trig, abs=1e-14)


@given(st.floats(0.0, 2.5))
def test_lambdas_normalized(alpha):
    lam = lambdas(alpha)
    assert lam.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(lam >= 0)


def test_phi_vacuum_sector():
    coeffs = phi_fock_coeffs(0.0, 0, 10)
    expected = np.zeros(11)
    expected[0] = 1.0
    assert np.allclose(coeffs, expected, atol=0)


def test_phi_mod4_support():
    coeffs = phi_fock_coeffs(0.5, 1, 20)
    support = np.nonzero(coeffs)[0]
    assert list(support) == [1, 5, 9, 13, 17]


def test_phi_unit_norm():
    coeffs = phi_fock_coeffs(0.8, 2, 30)
    assert coeffs @ coeffs == pytest.approx(1.0, abs=1e-10)


def test_phi_truncation_error_carries_tail():
    with pytest.raises(TruncationError) as err:
        phi_fock_coeffs(1.2, 0, 4, tail_tol=1e-10)
    assert err.value.tail_mass > 1e-10


def test_phi_orthonormality():
    phis = np.stack([phi_fock_coeffs(0.9, k, 40) for k in range(4)])
    gram = phis @ phis.T
    assert np.allclose(gram, np.eye(4), atol=1e-12)


def test_psi_orthonormality():
    psis = psi_fock_vectors(0.7, 40)
    gram = psis @ psis.conj().T
    assert np.max(np.abs(gram - np.eye(4))) < 1e-10


def test_bipartite_state_reconstruction():
    """Both decompositions of the source state agree as Fock arrays."""
    alpha, n_cut = 0.6, 35
    lam = lambdas(alpha)
    phis = np.stack([phi_fock_coeffs(alpha, k, n_cut) for k in range(4)])
    schmidt = sum(math.sqrt(lam[k]) * np.outer(phis[k], phis[k]) for k in range(4))

    psis = psi_fock_vectors(alpha, n_cut)
    n = np.arange(n_cut + 1)
    log_fact = np.cumsum(np.log(np.maximum(n, 1)))
    rebuilt = np.zeros((n_cut + 1, n_cut + 1), dtype=complex)
    for k, amp in enumerate(alphas(alpha)):
        coherent = np.exp(-0.5 * abs(amp) ** 2 + n * np.log(amp) - 0.5 * log_fact)
        rebuilt += 0.5 * np.outer(psis[k], coherent)
    assert np.max(np.abs(rebuilt - schmidt)) < 1e-9


def test_x_quadrature_values():
    xs = x_quadrature_values(0.8)
    assert xs == pytest.approx([0.8 / math.sqrt(2), -0.8 / math.sqrt(2),
                                -0.8 / math.sqrt(2), 0.8 / math.sqrt(2)], abs=1e-14)


def test_psi_matrix_elements_against_fock():
    """Ladder-identity G, N equal the direct Fock-basis matrix elements."""
    alpha, n_cut = 0.5, 45
    psis = psi_fock_vectors(alpha, n_cut)
    X = x_matrix(n_cut + 1)
    X2 = X @ X
    pme = psi_matrix_elements(alpha)
    for k in range(4):
        for l in range(4):
            n_direct = psis[l].conj() @ X @ psis[k]
            g_direct = psis[l].conj() @ X2 @ psis[k]
            assert pme.N[k, l] == pytest.approx(n_direct, abs=1e-9)
            assert pme.G[k, l] == pytest.approx(g_direct, abs=1e-9)


def test_psi_matrix_elements_vacuum_limit():
    """At alpha = 0 the psi states are fixed superpositions of |0..3>; the
    ladder forms must reproduce their Fock matrix elements (continuity)."""
    psis = psi_fock_vectors(0.0, 10)
    X = x_matrix(11)
    pme = psi_matrix_elements(0.0)
    for k in range(4):
        for l in range(4):
            assert pme.N[k, l] == pytest.approx(psis[l].conj() @ X @ psis[k], abs=1e-12)


@pytest.mark.parametrize("alpha", [0.0, 0.3, 0.9])
def test_source_variance_from_psi_matrix_elements(alpha):
    """Contracting G against the symbol overlaps gives the source-state
    variance 1 + 2 alpha^2 on Alice's side (no amplifier, no herald)."""
    pme = psi_matrix_elements(alpha)
    a = alphas(alpha)
    overlap = np.exp(-alpha * alpha + a[:, None] * a[None, :].conj())
    v_x = np.sum(pme.G * overlap).real / 4.0
    assert v_x == pytest.approx(1.0 + 2.0 * alpha * alpha, abs=1e-12)


@settings(max_examples=25)
@given(st.floats(0.0, 1.2))
def test_psi_matrix_elements_hermitian(alpha):
    pme = psi_matrix_elements(alpha)
    assert np.max(np.abs(pme.N - pme.N.conj().T)) < 1e-12
    assert np.max(np.abs(pme.G - pme.G.conj().T)) < 1e-12


def test_ratio_products_at_zero():
    assert alpha2_deltas(0.0) == pytest.approx([4.0, 2.0, -2.0, 2.0], abs=1e-14)
    assert alpha2_omegas(0.0) == pytest.approx([0.0, 0.0, 0.0, 0.0], abs=0)


def test_ratio_products_match_lambda_ratios():
    alpha = 0.8
    lam = lambdas(alpha)
    x = alpha * alpha
    d = alpha2_deltas(alpha)
    assert d[0] == pytest.approx(x * (lam[0] / lam[1] + lam[2] / lam[3]), rel=1e-12)
    assert d[1] == pytest.approx(x * (lam[1] / lam[2] + lam[3] / lam[0]), rel=1e-12)
    assert d[2] == pytest.approx(x * (lam[0] / lam[1] - lam[2] / lam[3]), rel=1e-12)
    assert d[3] == pytest.approx(x * (lam[1] / lam[2] - lam[3] / lam[0]), rel=1e-12)
    w = alpha2_omegas(alpha)
    assert w[0] == pytest.approx(x * (math.sqrt(lam[0] / lam[1]) + math.sqrt(lam[2] / lam[3])), rel=1e-12)
    assert w[3] == pytest.approx(x * (math.sqrt(lam[1] / lam[2]) - math.sqrt(lam[3] / lam[0])), rel=1e-12)


def test_z4_against_fock_contraction():
    """Z_4 = tr(|Psi><Psi| x0 x1) evaluated directly on the Fock array."""
    alpha, n_cut = 0.7, 40
    lam = lambdas(alpha)
    phis = np.stack([phi_fock_coeffs(alpha, k, n_cut) for k in range(4)])
    psi = sum(math.sqrt(lam[k]) * np.outer(phis[k], phis[k]) for k in range(4))
    X = x_matrix(n_cut + 1)
    direct = np.einsum("ab,ac,bd,cd->", psi, X, X, psi)
    assert z4_correlation(alpha) == pytest.approx(direct, abs=1e-9)


def test_domain_errors():
    with pytest.raises(DomainError):
        lambdas(-0.1)
    with pytest.raises(DomainError):
        phi_fock_coeffs(0.5, 4, 10)
    with pytest.raises(DomainError):
        phi_fock_coeffs(0.5, 2, 1)
