#!/usr/bin/env python3
"""geoflow command line.

    geoflow.py verify-identities --dim 1 --seed 42 --samples 50
    geoflow.py verify-curvature  --dim 2 --samples 50 --seed 7
    geoflow.py simulate config/presets/hs_cosine.json --out hs_cosine.csv
    geoflow.py crosscheck-1d     --seed 42 --resolution 256 --T 0.1

Exit codes: 0 pass, 1 verification failure, 2 usage/config error, 3 blow-up.
JSON reports go to stdout (or --out); logging goes to stderr and the run log.
"""
import argparse
import sys
import time
from dataclasses import asdict
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional

from core.curvature_engine import curvature_survey
from core.errors import BandLimitError, BlowupError, ConfigError, GridSpecError
from core.fd_oracle import FdField, hs2_literal_run
from core.geodesic_flow import (
    CSV_COLUMNS,
    GeodesicState,
    initial_state,
    integrate,
    reconstruct_velocity,
    rk4_convergence_order,
    simulate,
)
from core.identity_suite import run_identity_suite
from core.spectral_core import GridSpec, random_band_limited, remove_mean
from utils.cli import load_preset, load_run_config
from utils.config_utils import (
    fallback_log_file_path,
    load_tool_config,
    resolve_log_file_path,
    resolve_thread_count,
)
from utils.logger import configure_logging, logError, logInfo, logWarn
from utils.report_io import dumps_report, utc_now_iso_z, write_json_report, write_timeseries_csv

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_BLOWUP = 3

CROSSCHECK_MODES = 3
CROSSCHECK_DECAY = 2.0
ORDER_STUDY_T_END = 0.1
ORDER_STUDY_DTS = (4e-3, 2e-3, 1e-3)
REPORT_OUT_HELP = "Write the JSON report here instead of stdout (relative paths go under paths.output_root)"


# ---------- Helpers ----------
def _tolerance_for(tool_config: Dict[str, Any], suite: str, dimension: Optional[int] = None) -> float:
    value = (tool_config.get("tolerances", {}) or {}).get(suite)
    if isinstance(value, dict):
        value = value.get(str(dimension))
    if value is None:
        raise ConfigError(f"❌ No default tolerance for '{suite}' in tool config")
    return float(value)


def _section(tool_config: Dict[str, Any], name: str) -> Dict[str, Any]:
    return tool_config.get(name, {}) or {}


def _per_dimension(value: Any, dimension: int) -> Any:
    return value.get(str(dimension)) if isinstance(value, dict) else value


def _output_path(out: str, tool_config: Dict[str, Any]) -> Path:
    """Absolute paths are kept; relative ones are anchored at paths.output_root."""
    path = Path(out)
    if path.is_absolute():
        return path
    root = _section(tool_config, "paths").get("output_root")
    return Path(root) / path if root else path


def _emit(report: Dict[str, Any], out: Optional[str], tool_config: Dict[str, Any]) -> None:
    if out:
        written = write_json_report(report, _output_path(out, tool_config))
        logInfo(f"📄 Report written: {written}")
    else:
        sys.stdout.write(dumps_report(report))
        sys.stdout.flush()


def _require_positive(name: str, value, allow_zero: bool = False) -> None:
    if value is None:
        return
    if value < 0 or (value == 0 and not allow_zero):
        raise ConfigError(f"❌ {name} must be > 0, got {value}")


# ---------- Commands ----------
def cmd_verify_identities(args, tool_config: Dict[str, Any]) -> int:
    defaults = _section(tool_config, "identities")
    samples = args.samples if args.samples is not None else int(defaults.get("samples", 50))
    seed = args.seed if args.seed is not None else int(defaults.get("seed", 42))
    tolerance = args.tol if args.tol is not None else _tolerance_for(tool_config, "identities")
    _require_positive("--tol", tolerance)

    try:
        report = run_identity_suite(
            dimension=args.dim,
            seed=seed,
            samples=samples,
            tolerance=tolerance,
            points_per_axis=args.points,
            active_modes=args.modes,
            show_progress=args.progress,
        )
    except (GridSpecError, BandLimitError) as e:
        raise ConfigError(str(e)) from e
    payload = report.to_dict()
    payload["suite"] = "identities"
    payload["pass"] = report.passed
    payload["timestamp"] = utc_now_iso_z()
    _emit(payload, args.out, tool_config)
    if not report.passed:
        for check in report.failures():
            logError(f"❌ {check.name}: max residual {check.max_residual:.3e} > {check.threshold:.0e}")
        return EXIT_FAILED
    return EXIT_OK


def cmd_verify_curvature(args, tool_config: Dict[str, Any]) -> int:
    defaults = _section(tool_config, "survey")
    samples = args.samples
    if samples is None:
        samples = int(_per_dimension(defaults.get("samples", 50), args.dim))
    if samples < 1:
        raise ConfigError(f"❌ --samples must be >= 1, got {samples}")
    seed = args.seed if args.seed is not None else int(defaults.get("seed", 42))
    tolerance = args.tol if args.tol is not None else _tolerance_for(tool_config, "curvature", args.dim)
    _require_positive("--tol", tolerance)
    threads = args.threads if args.threads is not None else resolve_thread_count(tool_config)
    _require_positive("--threads", threads)

    try:
        report = curvature_survey(
            dimension=args.dim,
            samples=samples,
            seed=seed,
            active_modes=args.modes,
            points_per_axis=args.points,
            threads=threads,
            show_progress=args.progress,
        )
    except (GridSpecError, BandLimitError) as e:
        raise ConfigError(str(e)) from e
    passed = report.max_rel_error <= tolerance and report.route_spread_max <= tolerance
    payload = report.to_dict()
    payload.update({"suite": "curvature", "tolerance": tolerance, "pass": passed, "timestamp": utc_now_iso_z()})
    _emit(payload, args.out, tool_config)
    if not passed:
        logError(
            f"❌ Curvature check failed: max_rel_error={report.max_rel_error:.3e}, "
            f"route_spread_max={report.route_spread_max:.3e}, tolerance={tolerance:.0e}"
        )
        return EXIT_FAILED
    return EXIT_OK


def cmd_simulate(args, tool_config: Dict[str, Any]) -> int:
    if bool(args.run_config) == bool(args.preset):
        raise ConfigError("❌ Give exactly one of a run config path or --preset")
    config = load_run_config(args.run_config) if args.run_config else load_preset(args.preset)
    if args.blowup_threshold is not None:
        _require_positive("--blowup-threshold", args.blowup_threshold)
        config.blowup_threshold = args.blowup_threshold

    series = simulate(config, show_progress=args.progress)
    rows = [asdict(r) for r in series.rows]
    summary: Dict[str, Any] = {
        "status": series.status,
        "blowup_time": series.blowup_time,
        "final": rows[-1],
        "initial": rows[0],
        "energy_drift": series.energy_drift(),
        "mass_drift": series.mass_drift(),
        "rows": len(rows),
        "metadata": series.metadata,
        "timestamp": utc_now_iso_z(),
    }
    if args.out:
        csv_path = write_timeseries_csv(rows, CSV_COLUMNS, _output_path(args.out, tool_config))
        summary["csv"] = str(csv_path)
        logInfo(f"📄 Time series written: {csv_path}")

    if args.order_study and series.status == "completed":
        state = initial_state(config)
        t_end = min(ORDER_STUDY_T_END, config.t_end)
        dts = list(ORDER_STUDY_DTS)
        orders = rk4_convergence_order(state, t_end, dts)
        summary["rk4_order"] = {"dts": dts, "t_end": t_end, "orders": orders}
        logInfo(f"📐 Observed RK4 orders: {', '.join(f'{o:.3f}' for o in orders)}")

    _emit(summary, args.summary_out, tool_config)
    return EXIT_BLOWUP if series.status == "blowup" else EXIT_OK


def crosscheck_initial_data(spec: GridSpec, seed: int, amplitude: float, rho_mean: float):
    """σ₀ = amplitude·r/max|r| (zero mean), ρ₀ = rho_mean·(1 + ¼ r₂/max|r₂|)."""
    r = remove_mean(random_band_limited(spec, seed, CROSSCHECK_MODES, CROSSCHECK_DECAY))
    r2 = remove_mean(random_band_limited(spec, seed + 1, CROSSCHECK_MODES, CROSSCHECK_DECAY))
    sigma = r * (amplitude / r.sup_norm())
    rho = r2 * (0.25 * rho_mean / r2.sup_norm()) + rho_mean
    return sigma, rho


def cmd_crosscheck_1d(args, tool_config: Dict[str, Any]) -> int:
    defaults = _section(tool_config, "crosscheck")
    seed = args.seed if args.seed is not None else int(defaults.get("seed", 42))
    points = args.resolution if args.resolution is not None else int(defaults.get("resolution", 256))
    t_end = args.T if args.T is not None else float(defaults.get("t_end", 0.1))
    dt = args.dt if args.dt is not None else float(defaults.get("dt", 1e-3))
    amplitude = args.amplitude if args.amplitude is not None else float(defaults.get("amplitude", 1.0))
    rho_mean = args.rho_mean if args.rho_mean is not None else float(defaults.get("rho_mean", 0.5))
    threshold = args.blowup_threshold
    if threshold is None:
        threshold = float(_section(tool_config, "simulation").get("blowup_threshold", 1e6))
    tolerance = args.tol if args.tol is not None else _tolerance_for(tool_config, "crosscheck")
    for name, value in (("--T", t_end), ("--dt", dt), ("--amplitude", amplitude),
                        ("--blowup-threshold", threshold), ("--tol", tolerance)):
        _require_positive(name, value)
    if dt > t_end:
        raise ConfigError(f"❌ --dt={dt} exceeds --T={t_end}")

    try:
        spec = GridSpec(dimension=1, points_per_axis=points)
        sigma0, rho0 = crosscheck_initial_data(spec, seed, amplitude, rho_mean)
    except (GridSpecError, BandLimitError) as e:
        raise ConfigError(str(e)) from e
    logInfo(f"🔁 Cross-check on T¹: M={points}, T={t_end}, dt={dt}, seed={seed}, amplitude={amplitude}")

    spectral_status, spectral_blowup = "completed", None
    start = GeodesicState(t=0.0, sigma=sigma0, rho=rho0)
    try:
        spectral = integrate(start, t_end, dt, threshold)
    except BlowupError as exc:
        logWarn(f"⚠️  Spectral run: {exc}")
        spectral_status, spectral_blowup = "blowup", exc.failed_t
        spectral = exc.last_state

    u0 = FdField(reconstruct_velocity(sigma0).components[0].grid_values())
    fd_run = hs2_literal_run(u0, FdField(rho0.grid_values()), dt, t_end, threshold)

    sigma_diff = float(abs(spectral.sigma.grid_values() - fd_run.state.sigma.values).max())
    rho_diff = float(abs(spectral.rho.grid_values() - fd_run.state.rho.values).max())
    blew_up = spectral_status == "blowup" or fd_run.status == "blowup"
    passed = not blew_up and sigma_diff <= tolerance and rho_diff <= tolerance

    report = {
        "suite": "crosscheck_1d",
        "seed": seed,
        "points_per_axis": points,
        "t_end": t_end,
        "dt": dt,
        "amplitude": amplitude,
        "rho_mean": rho_mean,
        "tolerance": tolerance,
        "spectral": {"status": spectral_status, "blowup_time": spectral_blowup, "t": spectral.t},
        "finite_difference": {"status": fd_run.status, "blowup_time": fd_run.blowup_time, "t": fd_run.state.t},
        "sigma_sup_diff": sigma_diff,
        "rho_sup_diff": rho_diff,
        "pass": passed,
        "timestamp": utc_now_iso_z(),
    }
    _emit(report, args.out, tool_config)
    if blew_up:
        logWarn(
            f"⚠️  Blow-up before T={t_end}: spectral at {spectral_blowup}, finite difference at {fd_run.blowup_time}"
        )
        return EXIT_BLOWUP
    if not passed:
        logError(f"❌ Formulations disagree: σ diff {sigma_diff:.3e}, ρ diff {rho_diff:.3e} > {tolerance:.0e}")
        return EXIT_FAILED
    logInfo(f"✅ Formulations agree: σ diff {sigma_diff:.3e}, ρ diff {rho_diff:.3e}")
    return EXIT_OK


# ---------- Parser ----------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="Tool config file (default: config/geoflow_config.json)")
    common.add_argument("--verbose", action="store_true", help="Enable debug output on the console")
    common.add_argument("--progress", action="store_true", help="Show progress bars")

    parser = argparse.ArgumentParser(
        description="Operator calculus, curvature verification and geodesic flow on flat tori",
        formatter_class=argparse.RawTextHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ident = sub.add_parser("verify-identities", parents=[common], help="Run the identity suite")
    ident.add_argument("--dim", type=int, choices=(1, 2), default=1)
    ident.add_argument("--seed", type=int, default=None)
    ident.add_argument("--samples", type=int, default=None)
    ident.add_argument("--tol", type=float, default=None)
    ident.add_argument("--points", type=int, default=None, help="Grid points per axis")
    ident.add_argument("--modes", type=int, default=None, help="Active Fourier modes per axis")
    ident.add_argument("--out", default=None, help=REPORT_OUT_HELP)
    ident.set_defaults(handler=cmd_verify_identities)

    curv = sub.add_parser("verify-curvature", parents=[common], help="Survey the sectional curvature")
    curv.add_argument("--dim", type=int, choices=(1, 2), default=1)
    curv.add_argument("--samples", type=int, default=None)
    curv.add_argument("--seed", type=int, default=None)
    curv.add_argument("--modes", type=int, default=None, help="Active Fourier modes per axis")
    curv.add_argument("--points", type=int, default=None, help="Grid points per axis")
    curv.add_argument("--tol", type=float, default=None)
    curv.add_argument("--threads", type=int, default=None, help="Worker threads (default: GEOFLOW_THREADS or cores)")
    curv.add_argument("--out", default=None, help=REPORT_OUT_HELP)
    curv.set_defaults(handler=cmd_verify_curvature)

    sim = sub.add_parser("simulate", parents=[common], help="Integrate the geodesic equation")
    sim.add_argument("run_config", nargs="?", default=None, help="RunConfig JSON file")
    sim.add_argument("--preset", default=None, help="Preset name under config/presets/")
    sim.add_argument("--out", default=None, help="Write the CSV time series here (relative paths go under paths.output_root)")
    sim.add_argument("--summary-out", default=None, help="Write the JSON summary here instead of stdout")
    sim.add_argument("--blowup-threshold", type=float, default=None)
    sim.add_argument("--order-study", action="store_true", help="Also estimate the RK4 order by step halving")
    sim.set_defaults(handler=cmd_simulate)

    cross = sub.add_parser("crosscheck-1d", parents=[common], help="Spectral vs literal finite-difference run")
    cross.add_argument("--seed", type=int, default=None)
    cross.add_argument("--resolution", type=int, default=None)
    cross.add_argument("--T", type=float, default=None)
    cross.add_argument("--dt", type=float, default=None)
    cross.add_argument("--amplitude", type=float, default=None)
    cross.add_argument("--rho-mean", type=float, default=None)
    cross.add_argument("--blowup-threshold", type=float, default=None)
    cross.add_argument("--tol", type=float, default=None)
    cross.add_argument("--out", default=None, help=REPORT_OUT_HELP)
    cross.set_defaults(handler=cmd_crosscheck_1d)
    return parser


def _setup_logging(args, tool_config: Optional[Dict[str, Any]]) -> None:
    timestamp = datetime.now().strftime('%Y%m%d_%H%M%S')
    log_file = configure_logging(args.verbose, resolve_log_file_path(tool_config, timestamp))
    if log_file is None:
        # Configured log path is not writable; fall back to the project-local logs/.
        log_file = configure_logging(args.verbose, fallback_log_file_path(timestamp))
    logInfo("=" * 80)
    logInfo(f"📝 Geoflow Run: {timestamp}")
    logInfo(f"📋 Command: geoflow.py {args.command}")
    logInfo(f"📁 Log file: {log_file}")
    logInfo("=" * 80)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE

    try:
        tool_config = load_tool_config(args.config)
    except ConfigError as e:
        configure_logging(args.verbose)
        logError(str(e))
        return EXIT_USAGE

    _setup_logging(args, tool_config)
    started = time.perf_counter()
    try:
        code = args.handler(args, tool_config)
    except ConfigError as e:
        logError(str(e))
        return EXIT_USAGE
    except BlowupError as e:
        logError(str(e))
        return EXIT_BLOWUP
    except Exception as e:
        logError(f"❌ Unexpected error in {args.command}: {e}")
        raise
    logInfo(f"🏁 {args.command} finished with exit code {code} in {time.perf_counter() - started:.2f}s")
    return code


if __name__ == "__main__":
    sys.exit(main())
