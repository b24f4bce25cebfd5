import math

import pytest
from hypothesis import given, strategies as st

from scissorqkd.errors import DomainError
from scissorqkd.params import (
    ChannelParams,
    ProtocolParams,
    ScissorParams,
    eps_channel_from_tm,
    eps_tm_from_channel,
    gain_from_mu,
    mu_from_gain,
    noise_factor,
    transmissivity_from_length,
)


def test_transmissivity_examples():
    assert transmissivity_from_length(0.0, 0.2) == 1.0
    assert transmissivity_from_length(100.0, 0.2) == pytest.approx(0.01, rel=1e-12)
    assert transmissivity_from_length(50.0, 0.2) == pytest.approx(0.1, rel=1e-12)


def test_transmissivity_rejects_negative_length():
    with pytest.raises(DomainError):
        transmissivity_from_length(-1.0)


@given(st.floats(0.0, 500.0), st.floats(0.0, 500.0))
def test_transmissivity_strictly_decreasing(l1, l2):
    if l1 == l2:
        return
    lo, hi = sorted((l1, l2))
    assert transmissivity_from_length(hi) < transmissivity_from_length(lo)


def test_noise_factor_examples():
    assert noise_factor(0.5, 0.0) == 0.5
    assert noise_factor(1.0, 0.05) == pytest.approx(0.5125, abs=1e-15)
    assert noise_factor(0.01, 0.05) == pytest.approx(0.500125, abs=1e-15)


def test_mu_from_gain_examples():
    assert mu_from_gain(1.0) == 0.5
    assert mu_from_gain(2.0) == pytest.approx(0.2, rel=1e-14)
    assert mu_from_gain(3.0) == pytest.approx(0.1, rel=1e-14)
    with pytest.raises(DomainError):
        mu_from_gain(0.9)


@given(st.floats(1.0, 10.0))
def test_gain_mu_round_trip(gain):
    assert gain_from_mu(mu_from_gain(gain)) == pytest.approx(gain, abs=1e-12)


@given(st.floats(0.0, 1.0), st.floats(0.01, 0.99))
def test_eps_conversion_round_trip(eps, T):
    assert eps_tm_from_channel(eps_channel_from_tm(eps, T), T) == pytest.approx(eps, abs=1e-12)


def test_channel_params():
    ch = ChannelParams.from_length(100.0, eps_tm=0.05)
    assert ch.transmissivity == pytest.approx(0.01, rel=1e-12)
    assert ch.noise_factor == pytest.approx(0.5 + 0.25 * 0.01 * 0.05, abs=1e-15)
    assert ch.noise_factor >= 0.5
    # channel-referred view round-trips
    assert eps_tm_from_channel(ch.eps_channel, ch.transmissivity) == pytest.approx(0.05, abs=1e-12)
    with pytest.raises(DomainError):
        ChannelParams(transmissivity=0.0)
    with pytest.raises(DomainError):
        ChannelParams(transmissivity=0.5, eps_tm=-0.1)


def test_lossless_channel_noise_view():
    assert ChannelParams(transmissivity=1.0).eps_channel == 0.0
    with pytest.raises(DomainError):
        _ = ChannelParams(transmissivity=1.0, eps_tm=0.01).eps_channel


def test_scissor_params():
    qs = ScissorParams(gain=2.0)
    assert qs.mu == pytest.approx(0.2, rel=1e-14)
    assert ScissorParams.from_mu(0.5).gain == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(DomainError):
        ScissorParams(gain=0.5)


def test_protocol_params():
    p = ProtocolParams(alpha=0.5, beta=0.95, alpha_cap=0.5)
    assert p.modulation_variance == pytest.approx(0.5, rel=1e-14)
    with pytest.raises(DomainError):
        ProtocolParams(alpha=-0.1)
    with pytest.raises(DomainError):
        ProtocolParams(alpha=0.5, beta=1.5)
