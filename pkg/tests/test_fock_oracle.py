import math

import numpy as np
import pytest

from scissorqkd import fock
from scissorqkd.constellation import psi_fock_vectors
from scissorqkd.errors import ConfigError, DomainError, TruncationError
from scissorqkd.params import ChannelParams, ScissorParams
from scissorqkd.scissor import conditional_state, heralded_state


def test_beam_splitter_unitary_and_coherent_action():
    U = fock.beam_splitter(0.7, 12, 12)
    assert np.allclose(U @ U.T, np.eye(144), atol=1e-12)
    # coherent in both ports stays coherent with rotated amplitudes
    a, b = 0.6, -0.3 + 0.2j
    joint = np.outer(fock.coherent_vector(a, 12), fock.coherent_vector(b, 12)).reshape(-1)
    out = (U @ joint).reshape(12, 12)
    t = math.sqrt(0.7)
    r = math.sqrt(0.3)
    expected = np.outer(
        fock.coherent_vector(t * a + r * b, 12),
        fock.coherent_vector(t * b - r * a, 12),
    )
    assert np.max(np.abs(out - expected)) < 1e-9


def test_build_eb_state_vacuum_and_norm():
    assert np.allclose(fock.build_eb_state(0.0, 5), np.eye(6)[:, :1] @ np.eye(6)[:1, :], atol=0)
    psi = fock.build_eb_state(0.5, 30)
    assert np.sum(psi * psi) == pytest.approx(1.0, abs=1e-10)


def test_build_eb_state_mode1_mean_photon():
    alpha = 0.8
    psi = fock.build_eb_state(alpha, 30)
    marginal = np.einsum("ab,ab->b", psi, psi)
    n = np.arange(31)
    assert marginal @ n == pytest.approx(alpha * alpha, abs=1e-8)


def test_build_eb_state_truncation_error():
    with pytest.raises(TruncationError):
        fock.build_eb_state(1.3, 5)


def test_thermal_nodes():
    assert fock.thermal_noise_nodes(0.0) == [(0j, 1.0)]
    nodes = fock.thermal_noise_nodes(0.2, 10)
    assert sum(w for _, w in nodes) == pytest.approx(1.0, abs=1e-12)
    assert sum(w * abs(b) ** 2 for b, w in nodes) == pytest.approx(0.1, abs=1e-12)
    with pytest.raises(ConfigError):
        fock.thermal_noise_nodes(0.2, 4)
    with pytest.raises(DomainError):
        fock.thermal_noise_nodes(-0.1)


def test_thermal_loss_identity_channel():
    state = fock.coherent_vector(0.4 + 0.1j, 15)
    ens = fock.apply_thermal_loss(state, 1.0, 0.0, noise_cutoff=8)
    assert len(ens.branches) == 1
    w, amps = ens.branches[0]
    marginal = np.einsum("ab,ab->a", amps, amps.conj()).real
    orig = np.abs(state) ** 2
    assert np.max(np.abs(marginal - orig)) < 1e-12


def test_thermal_loss_vacuum_mean_photon():
    T, eps = 0.3, 0.4
    state = fock.coherent_vector(0.0, 10)
    ens = fock.apply_thermal_loss(state, T, eps, n_nodes=12, noise_cutoff=10)
    n = np.arange(10)
    mean = sum(
        w * float(np.einsum("ab,ab->a", amps, amps.conj()).real @ n)
        for w, amps in ens.branches
    )
    assert mean == pytest.approx((1.0 - T) * eps / 2.0, abs=1e-8)


def test_vacuum_herald():
    ch = ChannelParams(transmissivity=0.4, eps_tm=0.0)
    qs = ScissorParams(gain=2.0)
    rho, p = fock.heralded_pm_state(0j, ch, qs, n_cut=12)
    assert p == pytest.approx(qs.mu / 2.0, abs=1e-12)
    assert rho[0, 0].real == pytest.approx(1.0, abs=1e-12)
    # EB side: vacuum source heralds vacuum on both modes
    rho_eb, p_eb = fock.heralded_eb_state(0.0, ch, qs, n_cut=10)
    assert p_eb == pytest.approx(qs.mu / 2.0, abs=1e-12)
    assert rho_eb[0, 0, 0, 0].real == pytest.approx(1.0, abs=1e-12)


def test_herald_pattern_exchange():
    ch = ChannelParams(transmissivity=0.2, eps_tm=0.05)
    qs = ScissorParams(gain=2.0)
    r1, p1 = fock.heralded_pm_state(0.5 * np.exp(1j * np.pi / 4), ch, qs, n_cut=20, noise_cutoff=12)
    r2, p2 = fock.heralded_pm_state(0.5 * np.exp(1j * np.pi / 4), ch, qs, n_cut=20, noise_cutoff=12, pattern="d2")
    assert p1 == pytest.approx(p2, abs=1e-12)
    # patterns agree on populations and flip the coherence sign
    assert r1[0, 0] == pytest.approx(r2[0, 0], abs=1e-12)
    assert r1[0, 1] == pytest.approx(-r2[0, 1], abs=1e-12)


def test_heralded_state_trace_and_moment_structure():
    alpha = 0.5
    ch = ChannelParams(transmissivity=0.1, eps_tm=0.05)
    qs = ScissorParams(gain=2.0)
    rho, p = fock.heralded_eb_state(alpha, ch, qs, n_cut=25, noise_cutoff=15, pattern="d2")
    trace = np.einsum("aiai->", rho)
    assert trace.real == pytest.approx(1.0, abs=1e-10)
    assert abs(trace.imag) < 1e-12
    m = fock.extract_moments(rho)
    # four-fold constellation symmetry kills first moments; the p-quadrature
    # cross moment mirrors the x one (sigma_z block structure)
    assert abs(m["mean_x0"]) < 1e-10
    assert abs(m["mean_x3"]) < 1e-10
    assert m["v_pp"] == pytest.approx(-m["v_xy"], abs=1e-12)


def test_eb_matches_pm_unconditional():
    alpha = 0.5
    ch = ChannelParams(transmissivity=0.1, eps_tm=0.05)
    qs = ScissorParams(gain=2.0)
    rho_eb, p_eb = fock.heralded_eb_state(alpha, ch, qs, n_cut=25, noise_cutoff=15)
    rho_pm, p_pm = fock.heralded_pm_mixture(alpha, ch, qs, n_cut=25, noise_cutoff=15)
    assert p_eb == pytest.approx(p_pm, abs=1e-12)
    bob = np.einsum("aiaj->ij", rho_eb)
    assert np.max(np.abs(bob - rho_pm)) < 1e-12


def test_eb_projection_reproduces_conditional_states():
    """Projecting Alice's mode on the measurement basis collapses Bob's mode
    to the per-symbol heralded states of the closed-form model."""
    alpha, n_cut = 0.5, 25
    ch = ChannelParams(transmissivity=0.1, eps_tm=0.05)
    qs = ScissorParams(gain=2.0)
    rho, p_eb = fock.heralded_eb_state(alpha, ch, qs, n_cut=n_cut, noise_cutoff=15)
    psis = psi_fock_vectors(alpha, n_cut)
    coherences = []
    for k in range(4):
        u = psis[k]
        cond = np.einsum("a,aibj,b->ij", u.conj(), rho, u)
        weight = np.trace(cond).real
        cond = cond / weight
        closed, p_c = conditional_state(k, alpha, ch, qs)
        assert cond[0, 0].real == pytest.approx(closed.a_c, abs=1e-10)
        assert cond[1, 1].real == pytest.approx(closed.c_c, abs=1e-10)
        assert cond[0, 1].real == pytest.approx(closed.b_c, abs=1e-10)
        # each symbol occurs with probability 1/4; the conditional herald
        # probability matches the closed form
        assert 4.0 * weight * p_eb == pytest.approx(p_c, abs=1e-12)
        coherences.append(cond[0, 1])
    # the imaginary parts (momentum information) cancel between the two
    # symbols sharing each x value
    assert coherences[0].imag == pytest.approx(-coherences[3].imag, abs=1e-12)
    assert coherences[1].imag == pytest.approx(-coherences[2].imag, abs=1e-12)


def test_truncation_convergence_spot():
    """Raising the cutoff barely moves the reported quantities (fast spot
    check; the acceptance suite runs the full version)."""
    alpha = 0.5
    ch = ChannelParams(transmissivity=0.5, eps_tm=0.0)
    qs = ScissorParams(gain=2.0)
    r1, p1 = fock.heralded_eb_state(alpha, ch, qs, n_cut=20, pattern="d2")
    r2, p2 = fock.heralded_eb_state(alpha, ch, qs, n_cut=28, pattern="d2")
    m1, m2 = fock.extract_moments(r1), fock.extract_moments(r2)
    assert abs(p1 - p2) < 1e-10
    for key in ("v_x", "v_y", "v_xy"):
        assert abs(m1[key] - m2[key]) < 1e-10


def test_homodyne_density_matches_state():
    rho = np.array([[0.8, 0.1], [0.1, 0.2]])
    xs = np.linspace(-4, 4, 41)
    f = fock.extract_homodyne_density(rho, xs)
    g = np.exp(-xs * xs / 2) / math.pi ** 0.25
    expected = 0.8 * g * g + 2 * 0.1 * math.sqrt(2) * xs * g * g + 0.2 * 2 * xs * xs * g * g
    assert np.max(np.abs(f - expected)) < 1e-12
