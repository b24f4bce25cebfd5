"""Working-point optimization and distance/noise sweeps.

The rate surface is cheap to evaluate, so optimization is an exhaustive
coarse grid over (alpha, gain) followed by one local refinement pass around
the coarse optimum.  Everything is deterministic: grids are fixed, ties are
broken toward smaller alpha and then smaller gain.
"""

from __future__ import annotations

import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .entropy import QuadratureGrid
from .errors import ConfigError, ScissorQKDError
from .params import ChannelParams, ScissorParams
from .rates import (
    NAN,
    RatePoint,
    gg02_rate_noqs,
    key_rate_noqs_dm,
    plob_thermal,
    qs_rate_terms,
)

PROTOCOLS = ("qs-dm", "noqs-dm", "gg02", "plob")


def default_alpha_grid() -> tuple[float, ...]:
    return tuple(np.round(np.arange(0.05, 1.2001, 0.05), 10))


def default_g_grid() -> tuple[float, ...]:
    return tuple(np.geomspace(1.0, 10.0, 20))


def default_va_grid() -> tuple[float, ...]:
    return tuple(np.geomspace(0.01, 100.0, 40))


@dataclass(frozen=True)
class SweepConfig:
    """Grids and protocol selection for sweeps and optimization."""

    lengths_km: tuple[float, ...] = ()
    eps_tm: tuple[float, ...] = (0.0,)
    beta: float = 1.0
    alpha_grid: tuple[float, ...] = field(default_factory=default_alpha_grid)
    g_grid: tuple[float, ...] = field(default_factory=default_g_grid)
    va_grid: tuple[float, ...] = field(default_factory=default_va_grid)
    alpha_cap: float | None = None
    protocol: str = "qs-dm"
    grid_nodes: int = 4001
    kappa_db_per_km: float = 0.2
    jobs: int = 1

    def __post_init__(self):
        if self.protocol not in PROTOCOLS:
            raise ConfigError(f"unknown protocol {self.protocol!r}; pick one of {PROTOCOLS}")
        if not self.alpha_grid or not self.g_grid:
            raise ConfigError("alpha and gain grids must be non-empty")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be >= 1, got {self.jobs}")

    @property
    def capped_alpha_grid(self) -> tuple[float, ...]:
        if self.alpha_cap is None:
            return self.alpha_grid
        capped = tuple(a for a in self.alpha_grid if a <= self.alpha_cap)
        if not capped:
            raise ConfigError(f"alpha cap {self.alpha_cap} removes the whole alpha grid")
        return capped

    @property
    def quadrature(self) -> QuadratureGrid:
        return QuadratureGrid(nodes=self.grid_nodes)


def _refined_alpha(center: float, cap: float | None) -> list[float]:
    lo = max(0.01, center - 0.05)
    hi = center + 0.05
    if cap is not None:
        hi = min(hi, cap)
    return [round(lo + 0.01 * i, 10) for i in range(int(round((hi - lo) / 0.01)) + 1)]


def _refined_gain(grid: tuple[float, ...], center_idx: int) -> list[float]:
    lo = grid[max(0, center_idx - 1)]
    hi = grid[min(len(grid) - 1, center_idx + 1)]
    if lo == hi:
        return [lo]
    return list(np.geomspace(lo, hi, 11))


def optimize_point(ch: ChannelParams, beta: float, cfg: SweepConfig) -> RatePoint:
    """Maximize the scissor rate over (alpha, gain) at one channel setting.

    Maximizes the raw objective P_succ (beta I - chi), then clamps.  When no
    grid point is positive, the returned point sits at the grid minimum with
    rate 0.
    """
    quad = cfg.quadrature
    alphas = cfg.capped_alpha_grid
    gains = cfg.g_grid

    def evaluate(alpha, gain):
        return qs_rate_terms(alpha, ch, ScissorParams(gain=gain), beta, quad)

    best = (-np.inf, alphas[0], gains[0], 0)
    for alpha in alphas:
        for gi, gain in enumerate(gains):
            raw = evaluate(alpha, gain)[0]
            if raw > best[0]:
                best = (raw, alpha, gain, gi)

    refined = (best[0], best[1], best[2])
    for alpha in _refined_alpha(best[1], cfg.alpha_cap):
        for gain in _refined_gain(gains, best[3]):
            raw = evaluate(alpha, gain)[0]
            if raw > refined[0]:
                refined = (raw, alpha, gain)

    raw, alpha_opt, g_opt = refined
    if raw <= 0.0:
        alpha_opt, g_opt = alphas[0], gains[0]
    raw, p_succ, i_ab, chi = evaluate(alpha_opt, g_opt)
    return RatePoint(
        length_km=ch.length_km if ch.length_km is not None else NAN,
        transmissivity=ch.transmissivity,
        eps_tm=ch.eps_tm,
        beta=beta,
        alpha_opt=alpha_opt,
        g_opt=g_opt,
        p_succ=p_succ,
        i_ab_bits=i_ab,
        chi_eb_bits=chi,
        key_rate=max(0.0, raw),
    )


def optimize_noqs_dm(ch: ChannelParams, beta: float, cfg: SweepConfig) -> tuple[float, float]:
    """(best rate, best alpha) of the no-scissor QPSK protocol."""
    quad = cfg.quadrature
    best = (0.0, cfg.alpha_grid[0])
    for alpha in cfg.alpha_grid:
        rate = key_rate_noqs_dm(alpha, ch, beta, quad)
        if rate > best[0]:
            best = (rate, alpha)
    return best


def optimize_gg02(ch: ChannelParams, beta: float, cfg: SweepConfig) -> tuple[float, float]:
    """(best rate, best V_A) of the Gaussian-modulation baseline."""
    best = (0.0, cfg.va_grid[0])
    for v_a in cfg.va_grid:
        rate = gg02_rate_noqs(v_a, ch, beta)
        if rate > best[0]:
            best = (rate, v_a)
    if best[0] > 0.0:
        idx = cfg.va_grid.index(best[1])
        lo = cfg.va_grid[max(0, idx - 1)]
        hi = cfg.va_grid[min(len(cfg.va_grid) - 1, idx + 1)]
        for v_a in np.geomspace(lo, hi, 11):
            rate = gg02_rate_noqs(float(v_a), ch, beta)
            if rate > best[0]:
                best = (rate, float(v_a))
    return best


def _safe_plob(ch: ChannelParams) -> float:
    if not 0 < ch.transmissivity < 1:
        return NAN
    return plob_thermal(ch)


def evaluate_row(ch: ChannelParams, cfg: SweepConfig) -> RatePoint:
    """One sweep row: the selected protocol plus reference columns."""
    beta = cfg.beta
    if cfg.protocol == "qs-dm":
        point = optimize_point(ch, beta, cfg)
        return point.with_baselines(
            noqs_dm=optimize_noqs_dm(ch, beta, cfg)[0],
            gg02=optimize_gg02(ch, beta, cfg)[0],
            plob=_safe_plob(ch),
        )
    empty = RatePoint(
        length_km=ch.length_km if ch.length_km is not None else NAN,
        transmissivity=ch.transmissivity,
        eps_tm=ch.eps_tm,
        beta=beta,
        alpha_opt=NAN, g_opt=NAN, p_succ=NAN, i_ab_bits=NAN, chi_eb_bits=NAN, key_rate=NAN,
    )
    if cfg.protocol == "noqs-dm":
        rate, alpha = optimize_noqs_dm(ch, beta, cfg)
        return replace(empty, alpha_opt=alpha, baseline_noqs_dm=rate)
    if cfg.protocol == "gg02":
        rate, _ = optimize_gg02(ch, beta, cfg)
        return replace(empty, baseline_gg02=rate)
    return replace(empty, plob_bound=_safe_plob(ch))


def _row_worker(args: tuple[SweepConfig, float, float]) -> RatePoint:
    cfg, length, eps = args
    ch = ChannelParams.from_length(length, eps_tm=eps, kappa_db_per_km=cfg.kappa_db_per_km)
    return evaluate_row(ch, cfg)


def sweep(cfg: SweepConfig) -> list[RatePoint]:
    """Evaluate every (length, eps_tm) pair, in input order.

    Rows are independent; failures are reported on stderr and emitted as
    NaN-filled rows so the sweep always completes.
    """
    jobs = [(cfg, length, eps) for length in cfg.lengths_km for eps in cfg.eps_tm]

    def failed_row(length, eps, exc) -> RatePoint:
        print(f"sweep row (L={length} km, eps_tm={eps}) failed: {exc}", file=sys.stderr)
        return RatePoint(
            length_km=length, transmissivity=NAN, eps_tm=eps, beta=cfg.beta,
            alpha_opt=NAN, g_opt=NAN, p_succ=NAN, i_ab_bits=NAN,
            chi_eb_bits=NAN, key_rate=NAN,
        )

    results: list[RatePoint] = []
    if cfg.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            futures = [pool.submit(_row_worker, job) for job in jobs]
            for (_, length, eps), future in zip(jobs, futures):
                try:
                    results.append(future.result())
                except ScissorQKDError as exc:
                    results.append(failed_row(length, eps, exc))
        return results
    for job in jobs:
        _, length, eps = job
        try:
            results.append(_row_worker(job))
        except ScissorQKDError as exc:
            results.append(failed_row(length, eps, exc))
    return results


def noise_ceiling(
    cfg: SweepConfig | None = None,
    lengths_km: tuple[float, ...] = tuple(float(L) for L in range(20, 301, 20)),
    lo: float = 0.0,
    hi: float = 0.12,
    tol: float = 1e-3,
) -> float:
    """Largest eps_tm with a positive optimized rate anywhere, by bisection.

    The predicate scans the length grid and stops at the first positive rate.
    """
    cfg = cfg or SweepConfig()

    def has_key(eps: float) -> bool:
        for length in lengths_km:
            ch = ChannelParams.from_length(length, eps_tm=eps, kappa_db_per_km=cfg.kappa_db_per_km)
            if optimize_point(ch, cfg.beta, cfg).key_rate > 0.0:
                return True
        return False

    if not has_key(lo):
        raise ConfigError(f"no positive rate even at eps_tm={lo}; bisection bracket invalid")
    if has_key(hi):
        return hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if has_key(mid):
            lo = mid
        else:
            hi = mid
    return lo
