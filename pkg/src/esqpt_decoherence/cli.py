"""Command-line front end: data for every figure plus the critical-line calculator.

Subcommands::

    spectrum    alpha, parity, level_index, energy
    decohere    t, r_abs            (one file per coupling)
    rmax-scan   lambda, r_max, t_peak, degenerate_flag, error
    scaling     n_bosons, lambda_dip, r_max, lambda_c, r_max_lambda_c (+ JSON fit summary)
    critical    JSON with alpha_c, lambda_star, lambda_c and optional numerics

Exit codes: 0 success, 2 invalid parameters, 3 numerical failure, 4 capacity.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import meanfield
from .dynamics import (DEFAULT_T_MAX, InsufficientOscillationsError, decoherence_weights,
                       default_dt, dominant_frequency, find_r_max,
                       quench_energy, sample_series)
from .eigen import full_spectrum
from .errors import BracketingError, CapacityError, ESQPTError, InvalidParameterError
from .model import PARITIES, ModelParams
from .scaling import (DEFAULT_SIZES, finite_size_scaling, find_dip, meanfield_bracket,
                      power_law_fit, rmax_scan)
from .tables import render_csv, render_json

log = logging.getLogger("esqpt_decoherence")

SPECTRUM_MAX_N = 2000
DEFAULT_DECOHERE_LAMBDAS = (1.0, 1.5, 2.0, 2.5, 3.0)

DEFAULTS = {
    "spectrum": {"n_bosons": 50, "alpha_min": 0.0, "alpha_max": 1.0, "alpha_steps": 51},
    "decohere": {"alpha": 0.0, "n_bosons": 2000, "t_max": DEFAULT_T_MAX},
    "rmax-scan": {"alpha": 0.0, "n_bosons": 600, "t_max": DEFAULT_T_MAX, "lambda_steps": 41},
    "scaling": {"alpha": 0.0, "t_max": DEFAULT_T_MAX},
    "critical": {"alpha": 0.0, "format": "json"},
}

# config-file keys accepted per subcommand, with their converters
_KEYS = {
    "alpha": float, "lambda": str, "n_bosons": int, "t_max": float, "dt": float,
    "lambda_min": float, "lambda_max": float, "lambda_steps": int,
    "alpha_min": float, "alpha_max": float, "alpha_steps": int,
    "sizes": str, "output": str, "format": str, "synthetic": str, "summary": str,
}


def _float_list(text):
    if isinstance(text, (int, float)):
        return [float(text)]
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError as exc:
        raise InvalidParameterError(f"cannot parse number list {text!r}") from exc


def load_config(path) -> dict:
    """JSON object or ``key = value`` lines (``#`` comments allowed)."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
        if not isinstance(data, dict):
            raise InvalidParameterError("JSON config must be an object")
    except json.JSONDecodeError:
        data = {}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = line.partition("=")
            if not sep:
                raise InvalidParameterError(f"bad config line {raw!r}")
            data[key.strip()] = val.strip()
    out = {}
    for key, val in data.items():
        norm = key.replace("-", "_")
        if norm not in _KEYS:
            raise InvalidParameterError(f"unknown config key {key!r}")
        conv = _KEYS[norm]
        try:
            out[norm] = conv(val) if not isinstance(val, list) else ",".join(map(str, val))
        except ValueError as exc:
            raise InvalidParameterError(f"bad value for {key}: {val!r}") from exc
    return out


def resolve(args: argparse.Namespace) -> dict:
    """Defaults < config file < explicit flags."""
    cfg = dict(DEFAULTS[args.command])
    if args.config:
        cfg.update(load_config(args.config))
    for key in _KEYS:
        val = getattr(args, key if key != "lambda" else "lam", None)
        if val is not None:
            cfg[key] = val
    cfg.setdefault("format", "csv")
    if cfg["format"] not in ("csv", "json"):
        raise InvalidParameterError(f"format must be csv or json, got {cfg['format']!r}")
    return cfg


def _emit(text, output):
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def _lambda_grid(cfg, alpha):
    if "lambda" in cfg and cfg.get("lambda_min") is None:
        grid = _float_list(cfg["lambda"])
    else:
        if cfg.get("lambda_min") is None or cfg.get("lambda_max") is None:
            lo, hi = meanfield_bracket(alpha, 0.5)
        else:
            lo, hi = cfg["lambda_min"], cfg["lambda_max"]
        steps = cfg.get("lambda_steps", 41)
        if steps < 1:
            raise InvalidParameterError("lambda-steps must be >= 1 (empty grid)")
        if hi < lo:
            raise InvalidParameterError("lambda-max must be >= lambda-min")
        grid = list(np.linspace(lo, hi, steps)) if steps > 1 else [lo]
    if not grid:
        raise InvalidParameterError("lambda grid is empty")
    return [float(v) for v in grid]


# --- subcommands ----------------------------------------------------------

def cmd_spectrum(cfg) -> str:
    n = cfg["n_bosons"]
    if n > SPECTRUM_MAX_N:
        raise CapacityError(f"spectrum emission limited to N <= {SPECTRUM_MAX_N}, got {n}")
    if "alpha" in cfg:
        alphas = [cfg["alpha"]]
    else:
        if cfg["alpha_steps"] < 1:
            raise InvalidParameterError("alpha-steps must be >= 1")
        alphas = list(np.linspace(cfg["alpha_min"], cfg["alpha_max"], cfg["alpha_steps"]))
    params = [ModelParams(float(a), 0.0, n) for a in alphas]

    rows = []
    for p in params:
        spec = full_spectrum(p)
        for parity in PARITIES:
            for k, e in enumerate(spec[parity].eigenvalues):
                rows.append((p.alpha, parity, k, float(e)))
    if cfg["format"] == "json":
        return render_json({"n_bosons": n, "levels": [
            {"alpha": r[0], "parity": r[1], "level_index": r[2], "energy": r[3]} for r in rows]})
    return render_csv(["alpha", "parity", "level_index", "energy"], rows, {"n_bosons": n})


def _decohere_one(params, t_max, dt):
    w = decoherence_weights(params)
    step = default_dt(w) if dt is None else dt
    series = sample_series(w, t_max, step)
    peak = find_r_max(series, w)
    try:
        freq = dominant_frequency(series, w)
    except InsufficientOscillationsError:
        freq = None
    return w, step, series, peak, freq


def cmd_decohere(cfg) -> dict:
    """Returns ``{output_path_or_None: text}``; several couplings give several files."""
    lams = _float_list(cfg.get("lambda", DEFAULT_DECOHERE_LAMBDAS))
    if not lams:
        raise InvalidParameterError("no coupling given")
    if not cfg["t_max"] > 0:
        raise InvalidParameterError("t-max must be > 0")
    dt = cfg.get("dt")
    if dt is not None and not dt > 0:
        raise InvalidParameterError("dt must be > 0")
    params = [ModelParams(cfg["alpha"], lam, cfg["n_bosons"]) for lam in lams]

    out = {}
    output = cfg.get("output")
    for p in params:
        w, step, series, peak, freq = _decohere_one(p, cfg["t_max"], dt)
        meta = {"alpha": p.alpha, "lambda": p.lam, "n_bosons": p.n_bosons, "dt": step,
                "r_max": peak.r_max, "t_peak": peak.t_peak,
                "frequency": freq if freq is not None else float("nan")}
        if cfg["format"] == "json":
            text = render_json({**meta, "t": series.times.tolist(), "r_abs": series.values.tolist()})
        else:
            text = render_csv(["t", "r_abs"], zip(series.times.tolist(), series.values.tolist()), meta)
        out[_per_lambda_path(output, p.lam, len(params))] = text
        log.info("lambda=%g r_max=%.6g t_peak=%.6g", p.lam, peak.r_max, peak.t_peak)
    return out


def _per_lambda_path(output, lam, count):
    if output in (None, "-") or count == 1:
        return output
    path = Path(output)
    return str(path.with_name(f"{path.stem}_lambda{format(lam, 'g')}{path.suffix}"))


def cmd_rmax_scan(cfg) -> str:
    alpha, n = cfg["alpha"], cfg["n_bosons"]
    ModelParams(alpha, 0.0, n)
    grid = _lambda_grid(cfg, alpha)
    for lam in grid:
        ModelParams(alpha, lam, n)
    curve = rmax_scan(alpha, n, grid, t_max=cfg["t_max"], dt=cfg.get("dt"))
    errors = dict(curve.errors)
    rows = []
    for i, (lam, peak) in enumerate(zip(curve.lambdas, curve.peaks)):
        if peak is None:
            rows.append((float(lam), float("nan"), float("nan"), 0, errors[i]))
        else:
            rows.append((float(lam), peak.r_max, peak.t_peak, int(peak.degenerate), ""))
    if cfg["format"] == "json":
        return render_json({"alpha": alpha, "n_bosons": n, "points": [
            dict(zip(["lambda", "r_max", "t_peak", "degenerate_flag", "error"], r)) for r in rows]})
    return render_csv(["lambda", "r_max", "t_peak", "degenerate_flag", "error"], rows,
                      {"alpha": alpha, "n_bosons": n})


def cmd_scaling(cfg):
    """Returns ``(table_text, summary_dict)``."""
    alpha = cfg["alpha"]
    sizes = [int(s) for s in _float_list(cfg.get("sizes", ",".join(map(str, DEFAULT_SIZES))))]
    if len(sizes) < 3:
        raise InvalidParameterError("scaling needs at least 3 sizes")
    for n in sizes:
        ModelParams(alpha, 0.0, n)

    if cfg.get("synthetic"):
        amp, gamma = _float_list(cfg["synthetic"])
        rows = [(n, float("nan"), amp * n ** (-gamma)) for n in sizes]
        fit = power_law_fit([(n, r) for n, _, r in rows])
        summary = {"alpha": alpha, "A": fit.amplitude_A, "gamma": fit.exponent_gamma,
                   "rms_log_residual": fit.rms_log_residual, "synthetic": True}
        return render_csv(["n_bosons", "lambda_dip", "r_max"], rows, {"alpha": alpha}), summary

    meanfield.lambda_c(alpha)
    points, fit, fit_lc = finite_size_scaling(alpha, sizes, t_max=cfg["t_max"], dt=cfg.get("dt"))
    rows = [(p.n_bosons, p.lambda_dip, p.r_max_dip, p.lambda_c, p.r_max_lambda_c) for p in points]
    summary = {"alpha": alpha, "A": fit.amplitude_A, "gamma": fit.exponent_gamma,
               "rms_log_residual": fit.rms_log_residual,
               "lambda_c_fit": {"A": fit_lc.amplitude_A, "gamma": fit_lc.exponent_gamma,
                                "rms_log_residual": fit_lc.rms_log_residual}}
    table = render_csv(["n_bosons", "lambda_dip", "r_max", "lambda_c", "r_max_lambda_c"], rows,
                       {"alpha": alpha})
    return table, summary


def cmd_critical(cfg) -> str:
    alpha = cfg["alpha"]
    ModelParams(alpha, 0.0, 1)
    result = {"alpha": alpha, "alpha_c": meanfield.critical_alpha(),
              "lambda_star": meanfield.lambda_star(alpha),
              "lambda_c_meanfield": meanfield.lambda_c(alpha)}
    n = cfg.get("n_bosons")
    if n is not None:
        lc = result["lambda_c_meanfield"]
        params = ModelParams(alpha, lc, n)
        result["n_bosons"] = n
        result["quench_energy_at_lambda_c"] = quench_energy(params)
        try:
            result["lambda_c_numeric"] = find_dip(alpha, n, meanfield_bracket(alpha)).lam
        except BracketingError as exc:
            result["lambda_c_numeric"] = None
            result["lambda_c_numeric_error"] = str(exc)
    if cfg["format"] == "csv":
        keys = list(result)
        return render_csv(keys, [[result[k] for k in keys]])
    return render_json(result)


# --- argument parsing -----------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="esqpt-decoherence", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON or key=value file; flags override it")
        p.add_argument("--alpha", type=float)
        p.add_argument("--n-bosons", type=int)
        p.add_argument("--output", "-o")
        p.add_argument("--format", choices=["csv", "json"])
        return p

    sp = common(sub.add_parser("spectrum", help="levels of H0 vs alpha"))
    sp.add_argument("--alpha-min", type=float)
    sp.add_argument("--alpha-max", type=float)
    sp.add_argument("--alpha-steps", type=int)

    dp = common(sub.add_parser("decohere", help="|r(t)| time series"))
    dp.add_argument("--lambda", dest="lam", help="coupling or comma list of couplings")
    dp.add_argument("--t-max", type=float)
    dp.add_argument("--dt", type=float)

    rp = common(sub.add_parser("rmax-scan", help="r_max vs coupling"))
    rp.add_argument("--lambda", dest="lam", help="explicit comma list of couplings")
    rp.add_argument("--lambda-min", type=float)
    rp.add_argument("--lambda-max", type=float)
    rp.add_argument("--lambda-steps", type=int)
    rp.add_argument("--t-max", type=float)
    rp.add_argument("--dt", type=float)

    cp = common(sub.add_parser("scaling", help="r_max at the dip vs N, with power-law fit"))
    cp.add_argument("--sizes", help="comma list of boson numbers")
    cp.add_argument("--t-max", type=float)
    cp.add_argument("--dt", type=float)
    cp.add_argument("--summary", help="path for the JSON fit summary (default: stderr)")
    cp.add_argument("--synthetic", metavar="A,GAMMA",
                    help="skip the physics and fit r = A N^-gamma (self-test)")

    common(sub.add_parser("critical", help="critical couplings for alpha"))
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = resolve(args)
        output = cfg.get("output")
        if args.command == "spectrum":
            _emit(cmd_spectrum(cfg), output)
        elif args.command == "decohere":
            for path, text in cmd_decohere(cfg).items():
                _emit(text, path)
        elif args.command == "rmax-scan":
            _emit(cmd_rmax_scan(cfg), output)
        elif args.command == "scaling":
            table, summary = cmd_scaling(cfg)
            _emit(table, output)
            text = render_json(summary)
            if cfg.get("summary"):
                Path(cfg["summary"]).write_text(text)
            else:
                sys.stderr.write(text)
        elif args.command == "critical":
            _emit(cmd_critical(cfg), output)
    except ESQPTError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
