"""
Command line tool for the weak measurement Stern-Gerlach simulation.

    python weakspin.py weak-curves --theta 2.9 --steps 629 --out curves.csv
    python weakspin.py simulate --config run.cfg --velocities 900,1200,1717 --out density.csv
    python weakspin.py calibrate --tolerance 0.035 --out scan.csv
    python weakspin.py plan --config run.cfg
"""

import argparse
import logging
import sys

import numpy as np
import pandas as pd

from calibration import run_calibration, calibration_params
from datautil.config import RunConfig, load_config, default_config
from datautil.logs import setup_logging
from datautil.tables import write_table
from physics.errors import WeakSpinError, NoValidLimit, ConfigError, OrthogonalSelection
from physics.experiment import ExperimentParams
from physics.parameters import get_parameter
from physics.propagation import exact_detector_density, exact_grid
from physics.spin import weak_value
from physics.wavepacket import first_order_detector_density, first_order_mean, evolved_width
from planner import plan
from planner.sweeps import velocity_sweep


logger = logging.getLogger("weakspin")

DEFAULT_SWEEP_VELOCITIES = (900.0, 1200.0, 1717.0)


def parse_velocities(text: str) -> list[float]:
    try:
        velocities = [float(value) for value in text.split(',') if value.strip()]
    except ValueError:
        raise ConfigError(f"Velocities must be a comma separated list of numbers, got '{text}'.")
    if not velocities:
        raise ConfigError("At least one velocity is required.")
    return velocities


def read_config(path) -> RunConfig:
    return default_config() if path is None else load_config(path)


def emit(frame: pd.DataFrame, out, metadata: dict):
    if out is None:
        for key, value in metadata.items():
            print(f"# {key} = {value}")
        print(frame.to_csv(index=False, float_format='%.10g'), end='')
    else:
        write_table(frame, out, metadata)
        logger.info("Wrote %d rows to %s", len(frame), out)


def weak_curve_point(theta: float, phi: float) -> tuple[float, float]:
    """(W_Re, W_Im) at one angle pair; NaN where the selection is orthogonal."""
    try:
        w = weak_value(theta, phi)
    except OrthogonalSelection:
        # W_Re = sin(theta) / (1 + cos(phi) cos(theta)) stays 0 along phi when sin(theta) = 0
        real = 0.0 if abs(np.sin(theta)) < 1e-12 else np.nan
        return real, np.nan
    return w.real, w.imag


def weak_curves(args) -> int:
    if args.steps < 2:
        raise ConfigError(f"At least 2 steps are required, got {args.steps}.")
    if not args.phi_max > args.phi_min:
        raise ConfigError(f"phi-max ({args.phi_max}) must exceed phi-min ({args.phi_min}).")

    theta = 2.9 if args.theta is None else args.theta
    phis = np.linspace(args.phi_min, args.phi_max, args.steps)
    values = np.array([weak_curve_point(theta, phi) for phi in phis]).reshape(-1, 2)

    diverging = int(np.isnan(values[:, 1]).sum())
    if diverging:
        logger.warning("The weak value diverges at %d of %d phi values; written as NaN.", diverging, len(phis))

    frame = pd.DataFrame({
        'phi': phis,
        'W_Re': values[:, 0],
        'W_Im': values[:, 1],
    })
    emit(frame, args.out, {'theta': theta})
    return 0


def simulation_grid(runs: list[ExperimentParams], points: int = None) -> np.ndarray:
    """One grid holding every exact component and every first order mean."""

    half_widths = get_parameter('grid_half_widths')
    low, high = np.inf, -np.inf
    for params in runs:
        exact = exact_grid(params)
        width = evolved_width(params.sigma, params.flight_time, params.mass)
        center = first_order_mean(params)
        low = min(low, exact[0], center - half_widths * width)
        high = max(high, exact[-1], center + half_widths * width)

    if points is None:
        points = get_parameter('grid_points')
    return np.linspace(low, high, points)


def simulate(args) -> int:
    config = read_config(args.config)
    if args.theta is not None:
        config = config.replace(theta=args.theta)

    if args.velocities is None:
        runs = {None: config.to_params()}
    else:
        runs = {v: config.replace(beam_velocity=v).to_params() for v in parse_velocities(args.velocities)}

    z_grid = simulation_grid(list(runs.values()), config.grid_points)
    columns = {'z': z_grid}
    metadata = {}

    for velocity, params in runs.items():
        suffix = '' if velocity is None else f"_v{velocity:g}"
        first_order = first_order_detector_density(params, z_grid)
        exact = exact_detector_density(params, z_grid)
        summary = plan(params)

        columns[f"density_first_order{suffix}"] = first_order.density
        columns[f"density_exact{suffix}"] = exact.density
        metadata.update({
            f"limit{suffix}": summary.limit,
            f"displacement{suffix}": summary.displacement,
            f"mean_first_order{suffix}": first_order.mean,
            f"mean_exact{suffix}": exact.mean,
            f"weight_first_order{suffix}": first_order.total_weight,
            f"weight_exact{suffix}": exact.metadata['post_selected_weight'],
        })
        logger.info("v = %g m/s: L = %.3f, displacement %.2f um", params.beam_velocity, summary.limit, summary.displacement * 1e6)

    emit(pd.DataFrame(columns), args.out, metadata)
    return 0


def calibrate(args) -> int:
    if args.config is None:
        base = calibration_params(args.theta)
    else:
        base = read_config(args.config).to_params()
        if args.theta is not None:
            base = base.replace(theta=args.theta)

    result = run_calibration(base, args.tolerance, log=False)
    print(f"L* = {result.max_limit:.2f}")

    if args.out is not None:
        write_table(result.scan.to_frame(), args.out, {
            'max_limit': result.max_limit,
            'tolerance': result.tolerance,
            'implied_tolerance': result.implied_tolerance,
            'theta': base.theta,
        })
    return 0


def plan_experiment(args) -> int:
    config = read_config(args.config)
    if args.theta is not None:
        config = config.replace(theta=args.theta)
    params = config.to_params()

    pitch = config.detector_pitch if args.pitch is None else args.pitch
    summary = plan(params, detector_pitch=pitch)
    verdict = "resolvable" if summary.resolvable else "at or below the detector resolution"

    print(f"L = {summary.limit:.3f}")
    print(f"displacement = {summary.displacement * 1e6:.1f} um ({verdict}, {summary.margin:.2f} x pitch)")
    print(f"evolved width = {summary.evolved_width * 1e6:.1f} um")
    print(f"post-selection probability = {summary.post_selection_probability:.4g}")

    velocities = DEFAULT_SWEEP_VELOCITIES if args.velocities is None else parse_velocities(args.velocities)
    sweep = velocity_sweep(params, velocities, summary.limit, pitch)

    if args.out is not None:
        write_table(sweep, args.out, {
            'limit': summary.limit,
            'displacement': summary.displacement,
            'detector_pitch': summary.detector_pitch,
            'resolvable': summary.resolvable,
        })
    else:
        print(sweep.to_string(index=False))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weakspin", description="Weak measurement Stern-Gerlach simulation.")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging.")
    commands = parser.add_subparsers(dest="command", required=True)

    curves = commands.add_parser("weak-curves", help="Real and imaginary weak value against phi.")
    curves.add_argument("--theta", type=float, default=None, help="Spin vector angle in rad (default 2.9).")
    curves.add_argument("--phi-min", type=float, default=0.0)
    curves.add_argument("--phi-max", type=float, default=2 * np.pi)
    curves.add_argument("--steps", type=int, default=629)
    curves.add_argument("--out", default=None)
    curves.set_defaults(handler=weak_curves)

    for name, handler, description in [
        ("simulate", simulate, "Exact and first order detector densities."),
        ("calibrate", calibrate, "Largest limit L for which first order and exact means agree."),
        ("plan", plan_experiment, "Displacement, resolvability and velocity sweep."),
    ]:
        command = commands.add_parser(name, help=description)
        command.add_argument("--config", default=None, help="Key-value or .json configuration file.")
        command.add_argument("--out", default=None, help="Output CSV path.")
        command.add_argument("--theta", type=float, default=None)
        command.set_defaults(handler=handler)
        if name == "calibrate":
            command.add_argument("--tolerance", type=float, default=None, help="Relative mean deviation allowed.")
        else:
            command.add_argument("--velocities", default=None, help="Comma separated beam velocities in m/s.")
        if name == "plan":
            command.add_argument("--pitch", type=float, default=None, help="Detector pitch in m.")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)

    try:
        return args.handler(args)
    except NoValidLimit as error:
        print(f"error: {error}", file=sys.stderr)
        return 3
    except (WeakSpinError, OSError) as error:
        print(f"error: {error}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
