import json
import logging
import sys
from typing import Any, Dict, List, Optional

import numpy as np

from .cli import merge_cli_options, parse_arguments
from .config import configure_logging, read_config, validate_config
from .constants import EXIT_IDENTITY_FAILURE, EXIT_OK, STDOUT_ICON
from .driving import ConstantDriving, make_driving_function
from .errors import BlowUpError, EllLoewnerError, NoBracketError
from .faber import velocities, velocity_table_to_json
from .formatter import (
    complex_to_json,
    format_scan,
    parse_complex,
    write_grid_csv,
    write_json,
    write_text,
    write_trajectory_csv,
)
from .hodograph import (
    Reduction,
    TimesVector,
    hydrodynamic_residuals,
    make_profile,
    parse_coordinate,
    times_grid,
)
from .loewner import ReductionState, TrajectoryInterpolant, integrate, trajectory_residuals
from .progress import ProgressIndicator
from .report import ResidualReport
from .series import LaurentTailSeries
from .theta import ModularParam, ModularPoint, theta_eval
from .verify import run_verify


def _show_progress() -> bool:
    return sys.stdout.isatty()


def _series(coefficients: List[complex], order: int) -> LaurentTailSeries:
    """c_1..c_N, zero-padded up to the requested order."""
    padded = list(coefficients) + [0j] * (order - len(coefficients))
    return LaurentTailSeries(tuple(padded))


def _initial_state(config: Dict[str, Any], points=()) -> ReductionState:
    series = _series(config['series'], config['series_order'])
    return ReductionState.initial(config['y0'], config['eta0'], series, points)


def _finish(report: ResidualReport, path: str) -> int:
    print(report.summary())
    write_json(path, report.to_dict(), "Residual report")
    return EXIT_OK if report.passed else EXIT_IDENTITY_FAILURE


def cmd_theta(args) -> int:
    """Print theta_a or one of its u-derivatives as {re, im}."""
    tau = ModularParam(parse_complex(args.tau))
    value = theta_eval(args.a, ModularPoint(parse_complex(args.u), tau), args.du)
    print(json.dumps(complex_to_json(value)))
    return EXIT_OK


def cmd_verify(args) -> int:
    """Run the identity suites on seeded samples."""
    config = read_config(args.config, 'verify', require_seed=False)
    config = validate_config(merge_cli_options(args, config), 'verify')
    total = len(config['suites']) * config['samples']
    logging.debug(f"Verifying {config['suites']} with {config['samples']} samples, seed {config['seed']}")
    with ProgressIndicator("Verifying", total=total, enabled=_show_progress()) as progress:
        report = run_verify(
            config['suites'], config['samples'], config['seed'],
            tolerance=config['tolerance'],
            s_prime_form=config['s_prime_form'],
            pole_guard=config['pole_guard'],
            tau_band=tuple(config['tau_band']),
            threads=args.threads,
            progress=progress,
        )
    return _finish(report, config['output'])


def cmd_loewner(args) -> int:
    """Integrate a reduction, write the trajectory CSV and its residual report."""
    config = validate_config(merge_cli_options(args, read_config(args.config, 'loewner')), 'loewner')
    kappa = make_driving_function(config['kappa'])
    initial = _initial_state(config, list(config['points'].items()))
    samples = [float(y) for y in np.linspace(config['y0'], config['y_end'], config['samples'])]
    try:
        with ProgressIndicator("Integrating", enabled=_show_progress()):
            trajectory = integrate(
                initial, kappa, config['y_end'], samples=samples,
                rtol=config['rtol'], atol=config['atol'], h_min=config['h_min'],
                pole_guard=config['pole_guard'], y_min=config['y_min'],
            )
    except BlowUpError as e:
        metadata = {
            'status': 'blow_up',
            'message': str(e),
            'y': e.y,
            'argument': complex_to_json(e.argument),
            'last_good_y': e.last_good_y,
        }
        write_json(config['report'], ResidualReport(metadata=metadata).to_dict(), "Blow-up report")
        raise

    write_trajectory_csv(config['output'], trajectory)
    report = trajectory_residuals(trajectory, config['s_prime_form'], config['pole_guard'], config['tolerance'])
    report.metadata.update({'status': 'completed', 'kappa': kappa.describe(), 'seed': config['seed']})
    return _finish(report, config['report'])


def cmd_faber(args) -> int:
    """Velocity table at a single state."""
    tau = ModularParam(parse_complex(args.tau), purely_imaginary=True)
    coefficients = [parse_complex(c) for c in args.coeffs.split(',')]
    order = len(coefficients) if args.order is None else args.order
    series = _series(coefficients, max(order, len(coefficients)))
    state = ReductionState.initial(tau.y, args.eta, series)
    table = velocities(state, ConstantDriving(args.kappa), order, args.convention)
    text = velocity_table_to_json(table)
    if args.output:
        write_text(args.output, text + '\n', "Velocity table")
    else:
        print(text)
        logging.debug(f"{STDOUT_ICON} velocity table up to k = {order}")
    return EXIT_OK


def cmd_hodograph(args) -> int:
    """Solve the hodograph relation on a times grid and check the hydrodynamic equations."""
    config = validate_config(merge_cli_options(args, read_config(args.config, 'hodograph')), 'hodograph')
    kappa = make_driving_function(config['kappa'])
    times_config = config['times']
    times = TimesVector(times_config['t0'], tuple(times_config['t']), times_config['tbar'])
    order = times.K if config['order'] is None else config['order']
    phi = make_profile(config['profile'])
    grid_config = config['grid']
    axes = [parse_coordinate(name) for name in grid_config['axes']]
    grid = times_grid(times, axes, grid_config['size'], grid_config['spacing'])

    with ProgressIndicator("Building reduction", enabled=_show_progress()):
        interpolant = TrajectoryInterpolant.build(
            _initial_state(config), kappa, config['y_end'], nodes=config['nodes'],
            rtol=config['rtol'], atol=config['atol'], pole_guard=config['pole_guard'],
        )
    reduction = Reduction(interpolant, order, config['convention'], config['pole_guard'])
    with ProgressIndicator("Solving hodograph", total=len(grid), enabled=_show_progress()) as progress:
        report, nodes = hydrodynamic_residuals(
            grid, phi, reduction, tuple(config['bracket']), config['fd_step'], config['tolerance'],
            seed=config['newton_seed'], cross=config['cross'], progress=progress,
        )
    write_grid_csv(config['output'], nodes)
    report.metadata.update({'grid_nodes': len(nodes), 'order': order, 'convention': config['convention']})
    return _finish(report, config['report'])


COMMANDS = {
    'theta': cmd_theta,
    'verify': cmd_verify,
    'loewner': cmd_loewner,
    'faber': cmd_faber,
    'hodograph': cmd_hodograph,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point for the ell-loewner tool."""
    # Parse command-line arguments
    args = parse_arguments(argv)

    # Configure logging
    configure_logging(args.debug)

    try:
        return COMMANDS[args.command](args)
    except NoBracketError as e:
        logging.error(f"{type(e).__name__}: {e}")
        if e.scan:
            print(format_scan(e.scan))
        return e.exit_code
    except EllLoewnerError as e:
        logging.error(f"{type(e).__name__}: {e}")
        return e.exit_code


if __name__ == '__main__':
    sys.exit(main())
