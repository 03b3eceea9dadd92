"""Command-line front end.

Subcommands expose each pipeline stage for scripting and figure-data
regeneration:

    gate         exact gate output state + diagnostics header
    stationary   stationary-phase output state + fidelity vs exact
    diagnostics  scalar diagnostics (theta, p_plus, lambda, parity)
    wigner       Wigner function of the exact output (or of the input)
    sweep        metric map over a (y_m, gamma) rectangle + guide curves

Exit codes: 0 success, 2 validation failure, 3 degenerate physics outcome,
4 I/O failure. Identical configuration produces byte-identical output
files; every output embeds the fully resolved configuration.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import math
import sys

import numpy as np

from . import __version__
from .errors import CatgateError, ContractError, DegenerateOutcomeError, DomainError
from .numerics import GridSpec
from .states import (
    FockSpec,
    WaveFunction,
    make_coherent,
    make_fock,
    fidelity,
    wavefunction_to_json,
    write_wavefunction_csv,
)
from . import gate as gate_mod
from .sweeps import (
    METRICS,
    SweepSpec,
    overlay_guides,
    run_sweep,
    sweep_to_json,
    write_guides_csv,
    write_sweep_csv,
)
from .wigner import (
    DEFAULT_P_AXIS,
    default_thread_count,
    transform,
    wigner_to_json,
    write_wigner_csv,
)

DEFAULT_GRID = GridSpec(-12.0, 12.0, 2401)
DEFAULT_SWEEP_YM = (0.5, 16.0)
DEFAULT_SWEEP_GAMMA = (0.02, 0.6)
DEFAULT_CELLS = (60, 60)


class CliError(Exception):
    def __init__(self, message: str, code: int = 2):
        super().__init__(message)
        self.code = code


# ----------------------------------------------------------------------
# flag parsing helpers; every failure names the offending flag
# ----------------------------------------------------------------------

def _parse_float(text: str, flag: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise CliError(f"{flag}: expected a number, got {text!r}") from None
    if not math.isfinite(v):
        raise CliError(f"{flag}: value must be finite, got {text!r}")
    return v


def _parse_scalar(text: str, flag: str) -> float:
    if ":" in text:
        raise CliError(f"{flag}: expected a single value, got range {text!r}")
    return _parse_float(text, flag)


def _parse_range(text: str, flag: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise CliError(f"{flag}: expected a range lo:hi, got {text!r}")
    lo = _parse_float(parts[0], flag)
    hi = _parse_float(parts[1], flag)
    if not lo < hi:
        raise CliError(f"{flag}: range must satisfy lo < hi, got {text!r}")
    return lo, hi


def _parse_gridspec(text: str, flag: str) -> GridSpec:
    parts = text.split(":")
    if len(parts) != 3:
        raise CliError(f"{flag}: expected lo:hi:n_points, got {text!r}")
    lo = _parse_float(parts[0], flag)
    hi = _parse_float(parts[1], flag)
    try:
        n = int(parts[2])
    except ValueError:
        raise CliError(f"{flag}: n_points must be an integer, got {parts[2]!r}") from None
    try:
        return GridSpec(lo, hi, n)
    except DomainError as exc:
        raise CliError(f"{flag}: {exc}") from None


def _parse_cells(text: str, flag: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise CliError(f"{flag}: expected COLSxROWS like 60x60, got {text!r}")
    try:
        n_ym, n_gamma = int(parts[0]), int(parts[1])
    except ValueError:
        raise CliError(f"{flag}: cell counts must be integers, got {text!r}") from None
    if n_ym < 2 or n_gamma < 2:
        raise CliError(f"{flag}: cell counts must be >= 2, got {text!r}")
    return n_ym, n_gamma


def _parse_input(text: str, grid: GridSpec, flag: str = "--input") -> WaveFunction:
    kind, _, rest = text.partition(":")
    try:
        if kind == "fock":
            return make_fock(FockSpec(int(rest)), grid)
        if kind == "coherent":
            re_s, _, im_s = rest.partition(",")
            alpha = complex(_parse_float(re_s, flag), _parse_float(im_s or "0", flag))
            return make_coherent(alpha, grid)
    except ValueError:
        raise CliError(f"{flag}: malformed state descriptor {text!r}") from None
    except DomainError as exc:
        raise CliError(f"{flag}: {exc}") from None
    raise CliError(f"{flag}: unknown state kind {kind!r} (use fock:n or coherent:re,im)")


def _input_fock(text: str, flag: str = "--input") -> FockSpec:
    kind, _, rest = text.partition(":")
    if kind != "fock":
        raise CliError(f"{flag}: sweeps take Fock inputs only, got {text!r}")
    try:
        return FockSpec(int(rest))
    except (ValueError, DomainError) as exc:
        raise CliError(f"{flag}: {exc}") from None


# ----------------------------------------------------------------------
# output helpers
# ----------------------------------------------------------------------

def _fmt(value) -> str:
    if value is None:
        return "nan"
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def _config_lines(config: dict) -> list[str]:
    return [f"{key}={_fmt(value)}" for key, value in config.items()]


@contextlib.contextmanager
def _open_out(path: str | None):
    if path is None:
        yield sys.stdout
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            yield fh
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}", code=4) from None


def _grid_str(grid: GridSpec) -> str:
    return f"{grid.x_min!r}:{grid.x_max!r}:{grid.n_points}"


def _json_none_safe(obj):
    if isinstance(obj, dict):
        return {k: _json_none_safe(v) for k, v in obj.items()}
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------

def _state_command(args, which: str) -> int:
    grid = args.grid or DEFAULT_GRID
    ym = _parse_scalar(args.ym, "--ym")
    gamma = _parse_scalar(args.gamma, "--gamma")
    try:
        params = gate_mod.GateParams(gamma=gamma, y_m=ym)
    except DomainError as exc:
        raise CliError(f"--gamma/--ym: {exc}") from None
    psi = _parse_input(args.input, grid)
    exact = gate_mod.exact_output(psi, params)
    report = gate_mod.gate_report(psi, params, parity_tolerance=args.parity_tol, exact=exact)
    if which == "gate":
        out = exact
    else:
        out = gate_mod.stationary_output(psi, params)
        report = {"fidelity_vs_exact": fidelity(out, exact), **report}

    config = {
        "command": which,
        "input": args.input,
        "ym": ym,
        "gamma": gamma,
        "grid": _grid_str(grid),
        "parity_tol": args.parity_tol,
        "format": args.format,
    }
    with _open_out(args.output) as fh:
        if args.format == "json":
            obj = {"config": config, "diagnostics": _json_none_safe(report)}
            obj["state"] = wavefunction_to_json(out)
            json.dump(obj, fh, indent=1)
            fh.write("\n")
        else:
            header = _config_lines(config) + _config_lines(report)
            write_wavefunction_csv(out, fh, header_lines=header)
    if args.plot:
        from .plotting import plot_wavefunction

        plot_wavefunction(out, args.plot, title=f"{which} output, y_m={ym}, gamma={gamma}")
    return 0


def _cmd_diagnostics(args) -> int:
    ym = _parse_scalar(args.ym, "--ym")
    gamma = _parse_scalar(args.gamma, "--gamma")
    try:
        params = gate_mod.GateParams(gamma=gamma, y_m=ym)
        diag = gate_mod.cat_diagnostics(params)
    except DomainError as exc:
        raise CliError(f"--gamma/--ym: {exc}") from None
    parity = gate_mod.classify_parity(diag, args.parity_tol)
    fields = {
        "theta": diag.theta,
        "p_plus": diag.p_plus,
        "alpha_re": diag.alpha.real,
        "alpha_im": diag.alpha.imag,
        "lambda_shear": diag.lambda_shear,
        "lambda_shear_rounded": diag.lambda_shear_rounded,
        "parity_angle": diag.parity_angle,
        "parity": parity,
    }
    config = {
        "command": "diagnostics",
        "ym": ym,
        "gamma": gamma,
        "parity_tol": args.parity_tol,
        "format": args.format,
    }
    with _open_out(args.output) as fh:
        if args.format == "json":
            json.dump({"config": config, "diagnostics": fields}, fh, indent=1)
            fh.write("\n")
        else:
            for line in _config_lines(config):
                fh.write(f"# {line}\n")
            fh.write("key,value\n")
            for key, value in fields.items():
                fh.write(f"{key},{_fmt(value)}\n")
    return 0


def _cmd_wigner(args) -> int:
    grid = args.grid or DEFAULT_GRID
    p_axis = args.pgrid or DEFAULT_P_AXIS
    psi = _parse_input(args.input, grid)
    config = {
        "command": "wigner",
        "input": args.input,
        "no_gate": args.no_gate,
        "grid": _grid_str(grid),
        "pgrid": _grid_str(p_axis),
        "format": args.format,
        "threads": args.threads,
    }
    if args.no_gate:
        state = psi
        config["ym"] = None
        config["gamma"] = None
    else:
        ym = _parse_scalar(args.ym, "--ym")
        gamma = _parse_scalar(args.gamma, "--gamma")
        try:
            params = gate_mod.GateParams(gamma=gamma, y_m=ym)
        except DomainError as exc:
            raise CliError(f"--gamma/--ym: {exc}") from None
        state = gate_mod.exact_output(psi, params)
        config["ym"] = ym
        config["gamma"] = gamma
    w = transform(state, p_axis, threads=args.threads)
    with _open_out(args.output) as fh:
        if args.format == "json":
            json.dump({"config": config, "wigner": wigner_to_json(w)}, fh, indent=1)
            fh.write("\n")
        else:
            write_wigner_csv(w, fh, header_lines=_config_lines(config))
    if args.plot:
        from .plotting import plot_wigner

        plot_wigner(w, args.plot, title=f"W(x, p), input {args.input}")
    return 0


def _cmd_sweep(args) -> int:
    ym_lo, ym_hi = _parse_range(args.ym, "--ym")
    g_lo, g_hi = _parse_range(args.gamma, "--gamma")
    n_ym, n_gamma = args.cells
    if g_lo <= 0:
        raise CliError(f"--gamma: sweep range must be strictly positive, got {g_lo}")
    spec = SweepSpec(
        y_m_axis=GridSpec(ym_lo, ym_hi, n_ym),
        gamma_axis=GridSpec(g_lo, g_hi, n_gamma),
        input=_input_fock(args.input),
        metric=args.metric,
    )
    result = run_sweep(spec, threads=args.threads)
    guides = overlay_guides(spec)
    config = {
        "command": "sweep",
        "metric": args.metric,
        "input": args.input,
        "ym": f"{ym_lo!r}:{ym_hi!r}",
        "gamma": f"{g_lo!r}:{g_hi!r}",
        "cells": f"{n_ym}x{n_gamma}",
        "format": args.format,
        "threads": args.threads,
    }
    guides_path = args.guides
    if guides_path is None and args.output is not None:
        base, _, _ = args.output.rpartition(".")
        guides_path = (base or args.output) + ".guides.csv"
    with _open_out(args.output) as fh:
        if args.format == "json":
            obj = {"config": config, "sweep": sweep_to_json(result)}
            json.dump(obj, fh, indent=1)
            fh.write("\n")
        else:
            write_sweep_csv(result, fh, header_lines=_config_lines(config))
        if guides_path is None and args.format == "csv":
            fh.write("\n")
            write_guides_csv(guides, fh, header_lines=["guides"])
    if guides_path is not None:
        with _open_out(guides_path) as fh:
            write_guides_csv(guides, fh, header_lines=_config_lines(config))
    finite = result.values[np.isfinite(result.values)]
    if finite.size:
        summary = (
            f"sweep {args.metric}: min={float(finite.min())!r} max={float(finite.max())!r} "
            f"failures={len(result.failures)}"
        )
    else:
        summary = f"sweep {args.metric}: no finite cells, failures={len(result.failures)}"
    print(summary, file=sys.stderr)
    if args.plot:
        from .plotting import plot_sweep

        plot_sweep(result, guides, args.plot, title=f"{args.metric}, input {args.input}")
    return 0


# ----------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------

def _add_common(sub, with_state=True, with_params=True):
    if with_state:
        sub.add_argument("--input", default="fock:0",
                         help="input state: fock:n or coherent:re,im (default fock:0)")
        sub.add_argument("--grid", type=lambda s: _parse_gridspec(s, "--grid"),
                         default=None, metavar="LO:HI:N",
                         help="coordinate grid override (default -12:12:2401)")
    if with_params:
        sub.add_argument("--ym", required=True, help="homodyne outcome y_m")
        sub.add_argument("--gamma", required=True, help="cubic-phase strength gamma")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--output", "-o", default=None, metavar="PATH",
                     help="output path (default: standard output)")
    sub.add_argument("--plot", default=None, metavar="PNG",
                     help="also render a figure to this file")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catgate",
        description="Simulate the measurement-induced cubic-phase gate that "
                    "prepares cat-state superpositions.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    for name in ("gate", "stationary"):
        sub = subs.add_parser(name, help=f"compute the {name} output state")
        _add_common(sub)
        sub.add_argument("--parity-tol", dest="parity_tol", type=float, default=0.05,
                         help="parity classification tolerance in radians (default 0.05)")

    sub = subs.add_parser("diagnostics", help="scalar cat diagnostics only")
    _add_common(sub, with_state=False)
    sub.add_argument("--parity-tol", dest="parity_tol", type=float, default=0.05)
    sub.set_defaults(plot=None)

    sub = subs.add_parser("wigner", help="Wigner function of the gate output")
    _add_common(sub, with_params=False)
    sub.add_argument("--ym", default=None, help="homodyne outcome y_m")
    sub.add_argument("--gamma", default=None, help="cubic-phase strength gamma")
    sub.add_argument("--no-gate", dest="no_gate", action="store_true",
                     help="transform the input state itself (skip the gate)")
    sub.add_argument("--pgrid", type=lambda s: _parse_gridspec(s, "--pgrid"),
                     default=None, metavar="LO:HI:N",
                     help="momentum axis override (default -10:10:801)")
    sub.add_argument("--threads", type=int, default=None)

    sub = subs.add_parser("sweep", help="metric map over a (y_m, gamma) rectangle")
    sub.add_argument("--metric", choices=METRICS, default="infidelity_cat")
    sub.add_argument("--input", default="fock:0", help="input state: fock:n")
    sub.add_argument("--ym", default=f"{DEFAULT_SWEEP_YM[0]}:{DEFAULT_SWEEP_YM[1]}",
                     help="y_m range lo:hi (default 0.5:16)")
    sub.add_argument("--gamma", default=f"{DEFAULT_SWEEP_GAMMA[0]}:{DEFAULT_SWEEP_GAMMA[1]}",
                     help="gamma range lo:hi (default 0.02:0.6)")
    sub.add_argument("--cells", type=lambda s: _parse_cells(s, "--cells"),
                     default=DEFAULT_CELLS, metavar="AxB",
                     help="resolution as n_ym x n_gamma (default 60x60)")
    sub.add_argument("--guides", default=None, metavar="PATH",
                     help="guide-curve CSV path (default: <output>.guides.csv)")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--output", "-o", default=None, metavar="PATH")
    sub.add_argument("--plot", default=None, metavar="PNG")
    sub.add_argument("--threads", type=int, default=None)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "threads", None) is None and args.command in ("wigner", "sweep"):
            args.threads = default_thread_count()
        if args.command in ("gate", "stationary"):
            if args.ym is None or args.gamma is None:
                raise CliError("--ym and --gamma are required")
            return _state_command(args, args.command)
        if args.command == "diagnostics":
            return _cmd_diagnostics(args)
        if args.command == "wigner":
            if not args.no_gate and (args.ym is None or args.gamma is None):
                raise CliError("--ym and --gamma are required unless --no-gate is given")
            return _cmd_wigner(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        raise CliError(f"unknown command {args.command!r}")
    except CliError as exc:
        print(f"catgate {args.command}: {exc}", file=sys.stderr)
        return exc.code
    except DegenerateOutcomeError as exc:
        print(f"catgate {args.command}: degenerate outcome: {exc}", file=sys.stderr)
        return 3
    except (DomainError, ContractError) as exc:
        print(f"catgate {args.command}: {exc}", file=sys.stderr)
        return 2
    except CatgateError as exc:
        print(f"catgate {args.command}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"catgate {args.command}: I/O error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
