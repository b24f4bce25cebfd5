"""Differential entropies of the homodyne outcome and the mutual information.

The outcome densities are polynomials times a Gaussian, so a composite
Simpson rule on [-L, L] converges geometrically; a Gauss-Hermite scheme is
available as a cross-check.  All entropies are in bits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.special import roots_hermite

from .errors import ConfigError, NumericalDomainError, ValidationError
from .params import ChannelParams, ScissorParams
from .scissor import (
    ConditionalHeraldedState,
    HeraldedState,
    conditional_density,
    conditional_state,
    heralded_state,
    output_density,
)

_DENSITY_FLOOR = 1e-300
_NORMALIZATION_TOL = 1e-6
_NEGATIVE_CLAMP = 1e-9


@dataclass(frozen=True)
class QuadratureGrid:
    """Quadrature settings for the entropy integrals.

    scheme "simpson": composite Simpson on [-half_width, half_width] with an
    odd node count.  scheme "gauss-hermite": rule of order gh_order with
    weight exp(-x^2).
    """

    scheme: str = "simpson"
    half_width: float = 10.0
    nodes: int = 4001
    gh_order: int = 200

    def __post_init__(self):
        if self.scheme not in ("simpson", "gauss-hermite"):
            raise ConfigError(f"unknown quadrature scheme {self.scheme!r}")
        if self.scheme == "simpson":
            if self.nodes < 3 or self.nodes % 2 == 0:
                raise ConfigError(f"Simpson rule needs an odd node count >= 3, got {self.nodes}")
            if self.half_width < 6.0:
                raise ConfigError(f"half width below 6 truncates sub-Gaussian tails, got {self.half_width}")
        elif self.gh_order < 10:
            raise ConfigError(f"Gauss-Hermite order too small: {self.gh_order}")

    @cached_property
    def points(self) -> np.ndarray:
        if self.scheme == "simpson":
            return np.linspace(-self.half_width, self.half_width, self.nodes)
        return roots_hermite(self.gh_order)[0]

    @cached_property
    def weights(self) -> np.ndarray:
        if self.scheme == "simpson":
            h = 2.0 * self.half_width / (self.nodes - 1)
            w = np.full(self.nodes, 2.0)
            w[1::2] = 4.0
            w[0] = w[-1] = 1.0
            return w * h / 3.0
        # undo the exp(-x^2) weight so the rule integrates plain densities
        x, w = roots_hermite(self.gh_order)
        return w * np.exp(x * x)

    def refined(self) -> "QuadratureGrid":
        """Same grid with roughly doubled resolution (for convergence checks)."""
        if self.scheme == "simpson":
            return QuadratureGrid("simpson", self.half_width, 2 * self.nodes - 1, self.gh_order)
        return QuadratureGrid("gauss-hermite", self.half_width, self.nodes, 2 * self.gh_order)


def differential_entropy_bits(density, grid: QuadratureGrid) -> float:
    """-integral f log2 f for a density given as a vectorized callable.

    The integrand is defined as 0 wherever f < 1e-300.  Raises
    ValidationError when the density is not normalized on the grid.
    """
    f = np.asarray(density(grid.points), dtype=float)
    if np.any(f < -1e-12):
        raise ValidationError("density is negative on the quadrature grid")
    norm = float(np.dot(grid.weights, f))
    if abs(norm - 1.0) > _NORMALIZATION_TOL:
        raise ValidationError(f"density integrates to {norm}, expected 1")
    mask = f > _DENSITY_FLOOR
    integrand = np.zeros_like(f)
    integrand[mask] = -f[mask] * np.log2(f[mask])
    return float(np.dot(grid.weights, integrand))


def entropy_xb(state: HeraldedState, grid: QuadratureGrid) -> float:
    """Differential entropy of the unconditional homodyne outcome, in bits."""
    return differential_entropy_bits(lambda x: output_density(x, state), grid)


def entropy_xb_given_xa(states: list[ConditionalHeraldedState], grid: QuadratureGrid) -> float:
    """Conditional entropy: uniform average of the per-symbol outcome entropies."""
    if len(states) != 4:
        raise ValidationError(f"expected 4 conditional states, got {len(states)}")
    total = 0.0
    for state in states:
        total += differential_entropy_bits(lambda x: conditional_density(x, state), grid)
    return total / 4.0


def mutual_information(
    alpha: float,
    ch: ChannelParams,
    qs: ScissorParams,
    grid: QuadratureGrid | None = None,
) -> float:
    """I(X_A; X_B) = H(X_B) - H(X_B | X_A) of the post-selected outcomes, bits."""
    grid = grid or QuadratureGrid()
    state, _ = heralded_state(alpha, ch, qs)
    conditionals = [conditional_state(k, alpha, ch, qs)[0] for k in range(4)]
    info = entropy_xb(state, grid) - entropy_xb_given_xa(conditionals, grid)
    if info < 0.0:
        if info < -_NEGATIVE_CLAMP:
            raise NumericalDomainError(f"mutual information came out negative: {info}")
        info = 0.0
    return info
