"""Command-line interface.

Subcommands: rate (single working point), optimize (one optimized point),
sweep (distance/noise grid), correlations (lossless-channel correlation
curves), oracle-check (closed forms vs the Fock-space simulation).

Exit codes: 0 success, 2 invalid configuration, 3 numerical-domain failure
(including oracle-check mismatches).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .entropy import QuadratureGrid
from .errors import ConfigError, DegenerateHeraldError, DomainError, NumericalDomainError
from .optimize import PROTOCOLS, SweepConfig, evaluate_row, optimize_gg02, optimize_noqs_dm, sweep
from .params import ChannelParams, ScissorParams
from .rates import NAN, RatePoint, gg02_rate_noqs, key_rate_noqs_dm, key_rate_qs, plob_thermal
from . import oracle_check

RATE_COLUMNS = (
    "length_km", "T", "eps_tm", "beta", "alpha_opt", "g_opt", "p_succ",
    "i_ab_bits", "chi_eb_bits", "key_rate", "baseline_noqs_dm",
    "baseline_gg02", "plob_bound",
)

CORRELATION_COLUMNS = ("v_a", "z_g", "z_g_nla", "z4", "z4_qs")


def _fmt(value: float) -> str:
    return f"{value:.10g}"


def _rate_row(point: RatePoint) -> list[float]:
    return [
        point.length_km, point.transmissivity, point.eps_tm, point.beta,
        point.alpha_opt, point.g_opt, point.p_succ, point.i_ab_bits,
        point.chi_eb_bits, point.key_rate, point.baseline_noqs_dm,
        point.baseline_gg02, point.plob_bound,
    ]


def write_table(columns, rows, fmt: str, output) -> None:
    if fmt == "csv":
        output.write(",".join(columns) + "\n")
        for row in rows:
            output.write(",".join(_fmt(v) for v in row) + "\n")
    else:
        payload = [
            {name: float(_fmt(value)) for name, value in zip(columns, row)}
            for row in rows
        ]
        json.dump(payload, output, indent=2)
        output.write("\n")


def _parse_float_list(text: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in text.split(",") if tok.strip())


def _parse_lengths(text: str) -> tuple[float, ...]:
    """Either a comma list ("10,20") or a range "start:stop:step" in km."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"length range must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise ConfigError(f"bad length range {text!r}")
        n = int(np.floor((stop - start) / step + 1e-9)) + 1
        return tuple(round(start + i * step, 9) for i in range(n))
    return _parse_float_list(text)


def _load_config_file(path: str, parser: argparse.ArgumentParser, known: set[str]) -> dict:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in known:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            values[key.replace("-", "_")] = value
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scissorqkd",
        description="Key rates for QPSK CV-QKD with a quantum-scissor receiver.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, lengths=True):
        if lengths:
            p.add_argument("--length-km", type=str, default="100",
                           help="fiber length(s): value, comma list, or start:stop:step")
            p.add_argument("--eps-tm", type=str, default="0",
                           help="transmitter-referred excess noise value(s), comma separated")
        p.add_argument("--beta", type=float, default=1.0, help="reconciliation efficiency")
        p.add_argument("--config", type=str, default=None, help="key=value config file")
        p.add_argument("--output", type=str, default=None, help="output file (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p_rate = sub.add_parser("rate", help="rate at a fixed working point")
    add_common(p_rate)
    p_rate.add_argument("--alpha", type=float, required=False, default=0.5)
    p_rate.add_argument("--gain", type=float, required=False, default=2.0)
    p_rate.add_argument("--grid-nodes", type=int, default=4001)

    p_opt = sub.add_parser("optimize", help="optimize (alpha, gain) at one channel point")
    add_common(p_opt)
    p_opt.add_argument("--alpha-cap", type=float, default=None)
    p_opt.add_argument("--protocol", choices=PROTOCOLS, default="qs-dm")
    p_opt.add_argument("--grid-nodes", type=int, default=4001)
    p_opt.add_argument("--jobs", type=int, default=1)

    p_sweep = sub.add_parser("sweep", help="optimized rates over a distance/noise grid")
    add_common(p_sweep)
    p_sweep.add_argument("--alpha-cap", type=float, default=None)
    p_sweep.add_argument("--protocol", choices=PROTOCOLS, default="qs-dm")
    p_sweep.add_argument("--grid-nodes", type=int, default=4001)
    p_sweep.add_argument("--jobs", type=int, default=1)

    p_corr = sub.add_parser("correlations", help="correlation curves on a lossless channel")
    add_common(p_corr, lengths=False)
    p_corr.add_argument("--gain", type=float, default=2.0)
    p_corr.add_argument("--va-max", type=float, default=0.5)
    p_corr.add_argument("--va-step", type=float, default=0.005)

    p_oracle = sub.add_parser("oracle-check", help="closed forms vs Fock-space simulation")
    add_common(p_oracle, lengths=False)
    p_oracle.add_argument("--fock-cutoff", type=int, default=30)
    p_oracle.add_argument("--tolerance", type=float, default=1e-6)
    return parser


def _apply_config_file(args: argparse.Namespace, parser: argparse.ArgumentParser, argv) -> None:
    if getattr(args, "config", None) is None:
        return
    known = {
        "length-km", "eps-tm", "beta", "alpha", "gain", "alpha-cap", "protocol",
        "output", "format", "grid-nodes", "fock-cutoff", "jobs", "va-max",
        "va-step", "tolerance",
    }
    overrides = _load_config_file(args.config, parser, known)
    cli_tokens = {tok.split("=", 1)[0] for tok in argv if tok.startswith("--")}
    casts = {
        "beta": float, "alpha": float, "gain": float, "alpha_cap": float,
        "grid_nodes": int, "fock_cutoff": int, "jobs": int,
        "va_max": float, "va_step": float, "tolerance": float,
    }
    for key, raw in overrides.items():
        flag = "--" + key.replace("_", "-")
        if flag in cli_tokens or not hasattr(args, key):
            continue  # explicit flags win; ignore keys the subcommand lacks
        setattr(args, key, casts.get(key, str)(raw))


def _open_output(args):
    if args.output is None:
        return sys.stdout, False
    return open(args.output, "w", encoding="utf-8"), True


def _cmd_rate(args) -> int:
    lengths = _parse_lengths(args.length_km)
    eps_list = _parse_float_list(args.eps_tm)
    grid = QuadratureGrid(nodes=args.grid_nodes)
    qs = ScissorParams(gain=args.gain)
    rows = []
    for length in lengths:
        for eps in eps_list:
            ch = ChannelParams.from_length(length, eps_tm=eps)
            point = key_rate_qs(args.alpha, ch, qs, args.beta, grid)
            rows.append(_rate_row(point.with_baselines(
                noqs_dm=key_rate_noqs_dm(args.alpha, ch, args.beta, grid),
                gg02=gg02_rate_noqs(2.0 * args.alpha ** 2, ch, args.beta),
                plob=plob_thermal(ch) if 0 < ch.transmissivity < 1 else NAN,
            )))
    out, close = _open_output(args)
    try:
        write_table(RATE_COLUMNS, rows, args.format, out)
    finally:
        if close:
            out.close()
    return 0


def _sweep_config(args) -> SweepConfig:
    return SweepConfig(
        lengths_km=_parse_lengths(args.length_km),
        eps_tm=_parse_float_list(args.eps_tm),
        beta=args.beta,
        alpha_cap=args.alpha_cap,
        protocol=args.protocol,
        grid_nodes=args.grid_nodes,
        jobs=args.jobs,
    )


def _cmd_sweep(args) -> int:
    cfg = _sweep_config(args)
    points = sweep(cfg)
    out, close = _open_output(args)
    try:
        write_table(RATE_COLUMNS, [_rate_row(p) for p in points], args.format, out)
    finally:
        if close:
            out.close()
    return 0


def _cmd_correlations(args) -> int:
    from .rates import correlation_curves

    n = int(round(args.va_max / args.va_step))
    rows = []
    for i in range(1, n + 1):
        v_a = round(i * args.va_step, 12)
        curves = correlation_curves(v_a, args.gain)
        rows.append([v_a, curves.z_g, curves.z_g_nla, curves.z4, curves.z4_qs])
    out, close = _open_output(args)
    try:
        write_table(CORRELATION_COLUMNS, rows, args.format, out)
    finally:
        if close:
            out.close()
    return 0


def _cmd_oracle_check(args) -> int:
    report = oracle_check.run_grid(n_cut=args.fock_cutoff, tolerance=args.tolerance)
    out, close = _open_output(args)
    try:
        write_table(oracle_check.COLUMNS, report.rows, args.format, out)
    finally:
        if close:
            out.close()
    return 0 if report.all_passed else 3


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config_file(args, parser, argv)
        if args.command == "rate":
            return _cmd_rate(args)
        if args.command == "optimize":
            return _cmd_sweep(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "correlations":
            return _cmd_correlations(args)
        return _cmd_oracle_check(args)
    except (ConfigError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericalDomainError, DegenerateHeraldError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
