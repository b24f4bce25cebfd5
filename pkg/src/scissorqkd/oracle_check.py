"""Closed forms versus the Fock-space simulation on a standard parameter grid.

This is the package's core verification: for every grid point the heralded
state coefficients, herald probabilities, conditional homodyne densities and
the covariance triplet are computed both ways and compared.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fock
from .covariance import cm_triplet
from .params import ChannelParams, ScissorParams
from .scissor import conditional_density, conditional_state, heralded_state

COLUMNS = (
    "alpha", "T", "eps_tm", "g", "err_state", "err_p_succ",
    "err_cond_density", "err_v_x", "err_v_y", "err_v_xy", "passed",
)

DEFAULT_ALPHAS = (0.1, 0.5, 0.9)
DEFAULT_TRANSMISSIVITIES = (0.5, 0.1, 0.01)
DEFAULT_EPS = (0.0, 0.05)
DEFAULT_GAINS = (1.0, 2.0)

_DENSITY_POINTS = np.linspace(-5.0, 5.0, 21)


@dataclass(frozen=True)
class OracleReport:
    rows: list[list[float]]
    all_passed: bool

    @property
    def worst_error(self) -> float:
        return max(max(row[4:10]) for row in self.rows)


def check_point(
    alpha: float,
    ch: ChannelParams,
    qs: ScissorParams,
    n_cut: int = 30,
    n_nodes: int = 12,
    noise_cutoff: int | None = 20,
) -> dict[str, float]:
    """Compare every closed-form quantity against the simulation at one point."""
    state, prob = heralded_state(alpha, ch, qs)
    rho_pm, p_pm = fock.heralded_pm_mixture(
        alpha, ch, qs, n_cut=n_cut, n_nodes=n_nodes, noise_cutoff=noise_cutoff
    )
    err_state = max(
        abs(state.a - rho_pm[0, 0].real),
        abs(state.c - rho_pm[1, 1].real),
        abs(rho_pm[0, 1]),                      # the mixture has no coherence
    )
    err_p = abs(prob.p_ps - p_pm)

    # conditional state: symbols 0 and 3 share x_k; their average is the
    # x-conditioned state with real coherence (imaginary parts cancel)
    cond, p_cond = conditional_state(0, alpha, ch, qs)
    amps = alpha * np.exp(1j * np.array([np.pi / 4, 7 * np.pi / 4]))
    rho_sum = np.zeros((2, 2), dtype=complex)
    p_sum = 0.0
    for amp in amps:
        rho_k, p_k = fock.heralded_pm_state(
            amp, ch, qs, n_cut=n_cut, n_nodes=n_nodes, noise_cutoff=noise_cutoff
        )
        rho_sum += 0.5 * p_k * rho_k
        p_sum += 0.5 * p_k
    rho_cond = rho_sum / p_sum
    err_p = max(err_p, abs(p_cond - p_sum))
    density_closed = conditional_density(_DENSITY_POINTS, cond)
    density_oracle = fock.extract_homodyne_density(rho_cond, _DENSITY_POINTS)
    err_density = float(np.max(np.abs(density_closed - density_oracle)))

    cm = cm_triplet(alpha, ch, qs)
    rho_eb, _ = fock.heralded_eb_state(
        alpha, ch, qs, n_cut=n_cut, n_nodes=n_nodes, noise_cutoff=noise_cutoff, pattern="d2"
    )
    moments = fock.extract_moments(rho_eb)
    return {
        "err_state": err_state,
        "err_p_succ": err_p,
        "err_cond_density": err_density,
        "err_v_x": abs(cm.v_x - moments["v_x"]),
        "err_v_y": abs(cm.v_y - moments["v_y"]),
        "err_v_xy": abs(cm.v_xy - moments["v_xy"]),
    }


def run_grid(
    n_cut: int = 30,
    tolerance: float = 1e-6,
    alphas: tuple[float, ...] = DEFAULT_ALPHAS,
    transmissivities: tuple[float, ...] = DEFAULT_TRANSMISSIVITIES,
    eps_values: tuple[float, ...] = DEFAULT_EPS,
    gains: tuple[float, ...] = DEFAULT_GAINS,
    n_nodes: int = 12,
    noise_cutoff: int | None = 20,
) -> OracleReport:
    rows = []
    ok = True
    for alpha in alphas:
        for T in transmissivities:
            for eps in eps_values:
                for gain in gains:
                    ch = ChannelParams(transmissivity=T, eps_tm=eps)
                    qs = ScissorParams(gain=gain)
                    errs = check_point(alpha, ch, qs, n_cut, n_nodes, noise_cutoff)
                    passed = max(errs.values()) <= tolerance
                    ok = ok and passed
                    rows.append([
                        alpha, T, eps, gain,
                        errs["err_state"], errs["err_p_succ"], errs["err_cond_density"],
                        errs["err_v_x"], errs["err_v_y"], errs["err_v_xy"],
                        1.0 if passed else 0.0,
                    ])
    return OracleReport(rows=rows, all_passed=ok)
