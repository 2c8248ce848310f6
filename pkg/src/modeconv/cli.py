"""Command-line front end: sweeps, bandwidth reports, maps, optimization, validation.

Configuration is a single JSON document given as a file path (or ``-`` for
standard input); a handful of flags override top-level scalars for quick
variations.  Every emitted CSV/JSON value uses a fixed 12-decimal scientific
format and fixed row/key order, so identical runs produce byte-identical files.

Exit codes: 0 success, 1 configuration/input error, 2 numerical failure
(singular drive frequency, non-convergent time integration).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .analysis import (
    COARSE_KAPPA_POINTS,
    DEFAULT_SCAN_POINTS,
    ConverterFamily,
    high_efficiency_intervals,
    optimize_kappa,
)
from .converter import DetunedParams, ResonantParams, detuned_network, resonant_network, two_mode_network
from .ensemble import (
    collective_couplings,
    default_validation_ensemble,
    elimination_error,
    ensemble_from_dict,
    microscopic_network,
)
from .errors import (
    ModeconvError,
    NonConvergentError,
    SingularAtFrequencyError,
    StepTooLargeError,
)
from .formatting import csv_text, json_text
from .network import network_from_dict
from .scattering import transmission, transmission_grid
from .timedomain import steady_state_response, trace_csv_text

SETUPS = ("resonant", "detuned", "two_mode", "microscopic", "custom")
FAMILY_SETUPS = ("resonant", "detuned", "two_mode")

# Defaults for the `eliminate` command: the reference damping and an
# even-point window straddling omega = 0 (uniform compensated ensembles are
# exactly singular there).
ELIMINATE_DEFAULT_KAPPA = 2.6
ELIMINATE_DEFAULT_WINDOW = (-1.5, 1.5, 300)


class ConfigError(Exception):
    """Configuration problem; the message names the offending field."""


class UsageError(Exception):
    """Bad command-line usage."""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------- config plumbing


def _load_config(args) -> dict:
    path = getattr(args, "config", None)
    if path is None:
        cfg: dict = {}
    else:
        if path == "-":
            text = sys.stdin.read()
        else:
            text = Path(path).read_text()
        try:
            cfg = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        if not isinstance(cfg, dict):
            raise ConfigError("config must be a JSON object")
        cfg = dict(cfg)

    for flag, key in (
        ("g", "g"),
        ("kappa", "kappa"),
        ("delta_mu", "delta_mu"),
        ("threshold", "threshold"),
        ("omega", "omega"),
        ("amplitude", "amplitude"),
        ("out", "output"),
        ("trace_out", "trace_output"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            cfg[key] = value
    window_overrides = {
        "min": getattr(args, "omega_min", None),
        "max": getattr(args, "omega_max", None),
        "points": getattr(args, "omega_points", None),
    }
    if any(v is not None for v in window_overrides.values()):
        window = cfg.get("window")
        window = dict(window) if isinstance(window, dict) else {}
        for key, value in window_overrides.items():
            if value is not None:
                window[key] = value
        cfg["window"] = window
    return cfg


def _check_keys(cfg: dict, allowed: set, command: str):
    unknown = sorted(set(cfg) - allowed)
    if unknown:
        raise ConfigError(f"field '{unknown[0]}' does not apply to '{command}' with this setup")


def _number(cfg: dict, key: str, default=None, required: bool = False) -> float:
    if key not in cfg:
        if required:
            raise ConfigError(f"missing required field '{key}'")
        return default
    value = cfg[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"field '{key}' must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"field '{key}' must be finite, got {value}")
    return value


def _positive(cfg: dict, key: str, default=None, required: bool = False) -> float:
    value = _number(cfg, key, default=default, required=required)
    if value is not None and value <= 0.0:
        raise ConfigError(f"field '{key}' must be positive, got {value}")
    return value


def _int_field(doc: dict, key: str, owner: str, minimum: int) -> int:
    if key not in doc:
        raise ConfigError(f"missing required field '{owner}.{key}'")
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"field '{owner}.{key}' must be an integer, got {value!r}")
    if value < minimum:
        raise ConfigError(f"field '{owner}.{key}' must be >= {minimum}, got {value}")
    return value


def _window(cfg: dict, required: bool = True, default=None) -> tuple[float, float, int] | None:
    if "window" not in cfg:
        if required:
            raise ConfigError("missing required field 'window' ({min, max, points})")
        return default
    doc = cfg["window"]
    if not isinstance(doc, dict):
        raise ConfigError("field 'window' must be an object with min, max, points")
    extra = sorted(set(doc) - {"min", "max", "points"})
    if extra:
        raise ConfigError(f"unknown field 'window.{extra[0]}'")
    w_min = _number(doc, "min", required=True)
    w_max = _number(doc, "max", required=True)
    if w_max <= w_min:
        raise ConfigError(f"window requires min < max, got [{w_min}, {w_max}]")
    points = _int_field(doc, "points", "window", 2)
    return w_min, w_max, points


def _kappa_range(cfg: dict, need_points: bool) -> tuple[float, float, int | None]:
    if "kappa_range" not in cfg:
        raise ConfigError("missing required field 'kappa_range'")
    doc = cfg["kappa_range"]
    if not isinstance(doc, dict):
        raise ConfigError("field 'kappa_range' must be an object with min, max" +
                          (", points" if need_points else ""))
    extra = sorted(set(doc) - {"min", "max", "points"})
    if extra:
        raise ConfigError(f"unknown field 'kappa_range.{extra[0]}'")
    k_min = _number(doc, "min", required=True)
    k_max = _number(doc, "max", required=True)
    if k_min <= 0.0 or k_max < k_min:
        raise ConfigError(f"kappa_range requires 0 < min <= max, got [{k_min}, {k_max}]")
    if need_points or "points" in doc:
        points = _int_field(doc, "points", "kappa_range", 2)
    else:
        points = None
    return k_min, k_max, points


def _threshold(cfg: dict) -> float:
    value = _number(cfg, "threshold", required=True)
    if not 0.0 < value < 1.0:
        raise ConfigError(f"field 'threshold' must lie in (0, 1), got {value}")
    return value


def _setup(cfg: dict) -> str:
    if "setup" not in cfg:
        raise ConfigError("missing required field 'setup'")
    setup = cfg["setup"]
    if setup not in SETUPS:
        raise ConfigError(f"field 'setup' must be one of {', '.join(SETUPS)}; got {setup!r}")
    return setup


def _load_ensemble(cfg: dict):
    raw = cfg.get("ensemble")
    if raw is None:
        return default_validation_ensemble()
    if isinstance(raw, str):
        try:
            raw = json.loads(Path(raw).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"ensemble file is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("field 'ensemble' must be an ensemble object or a path to one")
    try:
        return ensemble_from_dict(raw)
    except ValueError as exc:
        raise ConfigError(f"field 'ensemble' is malformed: {exc}") from None


def _load_custom_network(cfg: dict):
    raw = cfg.get("network")
    if raw is None:
        raise ConfigError("setup 'custom' requires field 'network'")
    if isinstance(raw, str):
        try:
            raw = json.loads(Path(raw).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"network file is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("field 'network' must be a network object or a path to one")
    try:
        return network_from_dict(raw)
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"field 'network' is malformed: {exc}") from None


def _build_single_network(cfg: dict, command: str):
    """Resolve (network, in_port, out_port) for commands driving one network."""
    setup = _setup(cfg)
    common = {"setup", "window", "output"}
    if command == "bandwidth":
        common |= {"threshold"}
    if command == "timedomain":
        common |= {"omega", "amplitude", "trace_output"}
    if setup == "resonant":
        _check_keys(cfg, common | {"g", "kappa"}, command)
        g = _number(cfg, "g", default=1.0)
        kappa = _positive(cfg, "kappa", required=True)
        net = resonant_network(ResonantParams(g, g, kappa, kappa))
    elif setup == "detuned":
        _check_keys(cfg, common | {"g", "kappa", "delta_mu"}, command)
        g = _number(cfg, "g", default=1.0)
        kappa = _positive(cfg, "kappa", required=True)
        delta_mu = _number(cfg, "delta_mu", default=0.0)
        net = detuned_network(DetunedParams(g, g, kappa, kappa, delta_mu=delta_mu))
    elif setup == "two_mode":
        _check_keys(cfg, common | {"g", "kappa"}, command)
        g = _number(cfg, "g", default=1.0)
        kappa = _positive(cfg, "kappa", required=True)
        net = two_mode_network(g, kappa, kappa)
    elif setup == "microscopic":
        _check_keys(cfg, common | {"kappa", "ensemble", "compensate_stark"}, command)
        kappa = _positive(cfg, "kappa", required=True)
        compensate = cfg.get("compensate_stark", True)
        if not isinstance(compensate, bool):
            raise ConfigError("field 'compensate_stark' must be true or false")
        net = microscopic_network(_load_ensemble(cfg), kappa, kappa, compensate_stark=compensate)
    else:  # custom
        _check_keys(cfg, common | {"network", "in_port", "out_port"}, command)
        net = _load_custom_network(cfg)
    ports = net.port_labels()
    if not ports:
        raise ConfigError("network has no damped modes, so no ports to drive")
    in_port = cfg.get("in_port", ports[0])
    out_port = cfg.get("out_port", ports[-1])
    for key, label in (("in_port", in_port), ("out_port", out_port)):
        if label not in ports:
            raise ConfigError(f"field '{key}' must name a damped mode; ports are {ports}")
    return net, in_port, out_port


def _family(cfg: dict, command: str) -> ConverterFamily:
    setup = _setup(cfg)
    if setup not in FAMILY_SETUPS:
        raise ConfigError(
            f"setup '{setup}' does not define a kappa family; "
            f"'{command}' accepts {', '.join(FAMILY_SETUPS)}"
        )
    allowed = {"setup", "g", "kappa_range", "window", "output"}
    if command == "optimize":
        allowed |= {"threshold"}
    if setup == "detuned":
        allowed |= {"delta_mu"}
    _check_keys(cfg, allowed, command)
    g = _number(cfg, "g", default=1.0)
    delta_mu = _number(cfg, "delta_mu", default=0.0) if setup == "detuned" else 0.0
    return ConverterFamily(kind=setup, g=g, delta_mu=delta_mu)


def _write_output(cfg: dict, text: str):
    target = cfg.get("output", "-")
    if not isinstance(target, str):
        raise ConfigError("field 'output' must be a path string")
    if target == "-":
        sys.stdout.write(text)
    else:
        with open(target, "w", newline="\n") as handle:
            handle.write(text)


# ---------------------------------------------------------------- command cores


def _sweep_text(net, in_port: str, out_port: str, window: tuple[float, float, int]) -> str:
    w_min, w_max, points = window
    grid = np.linspace(w_min, w_max, points)
    etas = np.abs(transmission_grid(net, grid, in_port, out_port, on_singular="raise")) ** 2
    return csv_text("omega,eta", zip(grid, etas))


def _bandwidth_doc(net, in_port, out_port, threshold, omega_range, points) -> dict:
    report = high_efficiency_intervals(net, in_port, out_port, threshold, omega_range, points)
    return {
        "threshold": report.threshold,
        "intervals": [
            {"lo": iv.lo, "hi": iv.hi, "width": iv.width} for iv in report.intervals
        ],
        "max_width": report.max_width,
    }


def _map_text(family: ConverterFamily, kappa_range, window) -> str:
    k_min, k_max, k_points = kappa_range
    w_min, w_max, w_points = window
    kappas = np.linspace(k_min, k_max, k_points)
    omegas = np.linspace(w_min, w_max, w_points)
    rows = []
    for kappa in kappas:
        net = family.build(float(kappa))
        ports = net.port_labels()
        etas = np.abs(
            transmission_grid(net, omegas, ports[0], ports[-1], on_singular="raise")
        ) ** 2
        rows.extend((float(kappa), float(w), float(e)) for w, e in zip(omegas, etas))
    return csv_text("kappa,omega,eta", rows)


def _optimize_doc(family: ConverterFamily, threshold, kappa_range, coarse_points, window) -> dict:
    omega_range = None if window is None else (window[0], window[1])
    kappa_star, width_star = optimize_kappa(
        family,
        threshold,
        kappa_range,
        coarse_points=coarse_points,
        omega_range=omega_range,
    )
    return {"threshold": threshold, "kappa_star": kappa_star, "max_width": width_star}


def _eliminate_doc(ens, kappa: float, window: tuple[float, float, int]) -> dict:
    w_min, w_max, points = window
    cc = collective_couplings(ens)
    grid = np.linspace(w_min, w_max, points)
    error = elimination_error(ens, kappa, kappa, grid)
    return {
        "s_o": cc.s_o,
        "s_mu": cc.s_mu,
        "mode_mismatch": cc.mode_mismatch,
        "stark_a": cc.stark_a,
        "stark_c": cc.stark_c,
        "max_eta_error": error,
        "omega_window": [w_min, w_max, points],
    }


def _timedomain_docs(net, in_port, out_port, omega, amplitude):
    reference = transmission(net, omega, in_port, out_port)
    ratio, result = steady_state_response(net, omega, in_port, out_port, amplitude=amplitude)
    doc = {
        "omega": omega,
        "ratio_re": ratio.real,
        "ratio_im": ratio.imag,
        "freq_domain_re": reference.real,
        "freq_domain_im": reference.imag,
        "abs_error": 0.0 if amplitude == 0.0 else abs(ratio - reference),
    }
    if amplitude == 0.0:
        doc["note"] = "ZeroDrive"
    return doc, result


# ---------------------------------------------------------------- command handlers


def _cmd_sweep(args):
    cfg = _load_config(args)
    net, in_port, out_port = _build_single_network(cfg, "sweep")
    window = _window(cfg, required=True)
    _write_output(cfg, _sweep_text(net, in_port, out_port, window))


def _cmd_bandwidth(args):
    cfg = _load_config(args)
    net, in_port, out_port = _build_single_network(cfg, "bandwidth")
    threshold = _threshold(cfg)
    if "window" not in cfg:
        raise ConfigError("missing required field 'window' (search range)")
    doc = cfg["window"]
    if not isinstance(doc, dict):
        raise ConfigError("field 'window' must be an object with min, max")
    extra = sorted(set(doc) - {"min", "max", "points"})
    if extra:
        raise ConfigError(f"unknown field 'window.{extra[0]}'")
    w_min = _number(doc, "min", required=True)
    w_max = _number(doc, "max", required=True)
    if w_max <= w_min:
        raise ConfigError(f"window requires min < max, got [{w_min}, {w_max}]")
    points = _int_field(doc, "points", "window", 2) if "points" in doc else DEFAULT_SCAN_POINTS
    _write_output(
        cfg, json_text(_bandwidth_doc(net, in_port, out_port, threshold, (w_min, w_max), points)) + "\n"
    )


def _cmd_map(args):
    cfg = _load_config(args)
    family = _family(cfg, "map")
    kappa_range = _kappa_range(cfg, need_points=True)
    window = _window(cfg, required=True)
    _write_output(cfg, _map_text(family, kappa_range, window))


def _cmd_optimize(args):
    cfg = _load_config(args)
    family = _family(cfg, "optimize")
    threshold = _threshold(cfg)
    k_min, k_max, points = _kappa_range(cfg, need_points=False)
    window = _window(cfg, required=False)
    coarse = points if points is not None else COARSE_KAPPA_POINTS
    _write_output(
        cfg, json_text(_optimize_doc(family, threshold, (k_min, k_max), coarse, window)) + "\n"
    )


def _cmd_eliminate(args):
    cfg = _load_config(args)
    allowed = {"setup", "ensemble", "kappa", "window", "output"}
    if cfg.get("setup", "microscopic") != "microscopic":
        raise ConfigError("'eliminate' validates the microscopic setup only")
    _check_keys(cfg, allowed, "eliminate")
    ens = _load_ensemble(cfg)
    kappa = _positive(cfg, "kappa", default=ELIMINATE_DEFAULT_KAPPA)
    window = _window(cfg, required=False, default=ELIMINATE_DEFAULT_WINDOW)
    _write_output(cfg, json_text(_eliminate_doc(ens, kappa, window)) + "\n")


def _cmd_timedomain(args):
    cfg = _load_config(args)
    net, in_port, out_port = _build_single_network(cfg, "timedomain")
    omega = _number(cfg, "omega", required=True)
    amplitude = _number(cfg, "amplitude", default=1.0)
    doc, result = _timedomain_docs(net, in_port, out_port, omega, amplitude)
    trace_target = cfg.get("trace_output")
    if trace_target is not None:
        if not isinstance(trace_target, str) or trace_target == "-":
            raise ConfigError("field 'trace_output' must be a file path")
        with open(trace_target, "w", newline="\n") as handle:
            handle.write(trace_csv_text(net, result))
    _write_output(cfg, json_text(doc) + "\n")


# ---------------------------------------------------------------- presets


def _write_file(out_dir: Path, name: str, text: str):
    with open(out_dir / name, "w", newline="\n") as handle:
        handle.write(text)


def _preset_fig2(out_dir: Path):
    window = (-3.0, 3.0, 601)
    resonant = resonant_network(ResonantParams(1.0, 1.0, 2.6, 2.6))
    detuned = detuned_network(DetunedParams(1.0, 1.0, 0.2, 0.2, delta_mu=10.0))
    eliminated = two_mode_network(0.1, 0.2, 0.2)
    _write_file(out_dir, "fig2_resonant_sweep.csv", _sweep_text(resonant, "a", "b", window))
    _write_file(out_dir, "fig2_detuned_sweep.csv", _sweep_text(detuned, "a", "b", window))
    _write_file(out_dir, "fig2_two_mode_sweep.csv", _sweep_text(eliminated, "a", "b", window))
    _write_file(
        out_dir,
        "fig2_resonant_bandwidth.json",
        json_text(_bandwidth_doc(resonant, "a", "b", 0.999, (-3.0, 3.0), DEFAULT_SCAN_POINTS)) + "\n",
    )


def _preset_fig3(out_dir: Path):
    kappa_range = (0.1, 5.0, 99)
    windows = {0: (-3.0, 3.0, 241), 1: (-3.0, 5.0, 321), 3: (-3.0, 7.0, 401), 10: (-3.0, 12.0, 601)}
    for delta_mu, window in windows.items():
        if delta_mu == 0:
            family = ConverterFamily(kind="resonant", g=1.0)
        else:
            family = ConverterFamily(kind="detuned", g=1.0, delta_mu=float(delta_mu))
        _write_file(out_dir, f"fig3_map_dmu{delta_mu}.csv", _map_text(family, kappa_range, window))


def _preset_fig4(out_dir: Path):
    for delta_mu in (0, 1, 3, 10):
        if delta_mu == 0:
            family = ConverterFamily(kind="resonant", g=1.0)
        else:
            family = ConverterFamily(kind="detuned", g=1.0, delta_mu=float(delta_mu))
        doc = _optimize_doc(family, 0.99, (0.1, 8.0), COARSE_KAPPA_POINTS, None)
        _write_file(out_dir, f"fig4_optimize_dmu{delta_mu}.json", json_text(doc) + "\n")


_PRESETS = {"fig2": _preset_fig2, "fig3": _preset_fig3, "fig4": _preset_fig4}


def _cmd_reproduce(args):
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    _PRESETS[args.preset](out_dir)


# ---------------------------------------------------------------- entry point


def _add_common_flags(sub):
    sub.add_argument("config", nargs="?", default=None, help="JSON config path, or - for stdin")
    sub.add_argument("--g", type=float, default=None, help="override coupling strength g")
    sub.add_argument("--kappa", type=float, default=None, help="override damping rate kappa")
    sub.add_argument("--delta-mu", dest="delta_mu", type=float, default=None,
                     help="override intermediate-mode detuning")
    sub.add_argument("--threshold", type=float, default=None, help="override efficiency threshold")
    sub.add_argument("--omega-min", dest="omega_min", type=float, default=None)
    sub.add_argument("--omega-max", dest="omega_max", type=float, default=None)
    sub.add_argument("--omega-points", dest="omega_points", type=int, default=None)
    sub.add_argument("--out", default=None, help="output path (default: stdout)")


def _build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="modeconv",
        description="Frequency-domain coupled-mode converter simulator",
    )
    subparsers = parser.add_subparsers(dest="command")

    for name, handler, extra in (
        ("sweep", _cmd_sweep, "efficiency vs frequency (CSV omega,eta)"),
        ("bandwidth", _cmd_bandwidth, "above-threshold intervals (JSON report)"),
        ("map", _cmd_map, "efficiency map over kappa and omega (CSV kappa,omega,eta)"),
        ("optimize", _cmd_optimize, "bandwidth-maximizing kappa (JSON report)"),
        ("eliminate", _cmd_eliminate, "validate the microscopic-to-effective reduction (JSON)"),
        ("timedomain", _cmd_timedomain, "time-domain cross-check of one S element (JSON)"),
    ):
        sub = subparsers.add_parser(name, help=extra)
        _add_common_flags(sub)
        if name == "timedomain":
            sub.add_argument("--omega", type=float, default=None, help="override drive frequency")
            sub.add_argument("--amplitude", type=float, default=None, help="override drive amplitude")
            sub.add_argument("--trace-out", dest="trace_out", default=None,
                             help="write the integration trace CSV here")
        sub.set_defaults(handler=handler)

    repro = subparsers.add_parser("reproduce", help="emit a named reference data bundle")
    repro.add_argument("--preset", required=True, choices=sorted(_PRESETS))
    repro.add_argument("--out-dir", dest="out_dir", default=".", help="directory for the bundle")
    repro.set_defaults(handler=_cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 1
    if getattr(args, "handler", None) is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        args.handler(args)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 1
    except (SingularAtFrequencyError, NonConvergentError, StepTooLargeError) as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 2
    except ModeconvError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 1
    except (ValueError, KeyError, TypeError) as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
