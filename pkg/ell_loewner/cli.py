"""Module for handling command-line arguments."""
import argparse
from typing import Any, Dict, List, Optional, Tuple

from .constants import MAX_PUBLIC_DU_ORDER, S_PRIME_FORMS, VERIFY_SUITES
from .errors import InputError


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        '--debug',
        action='store_true',
        help='Enable debug logging'
    )
    parser.add_argument(
        '--threads',
        type=int,
        help='Worker cap for sampling suites (overrides ELL_LOEWNER_THREADS)'
    )


def parse_arguments(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command-line arguments.

    Args:
        argv: List of command-line arguments (defaults to sys.argv[1:])

    Returns:
        Parsed command-line arguments
    """
    parser = argparse.ArgumentParser(
        prog='ell-loewner',
        description='Elliptic Loewner reductions: theta kernel, identity checks, flows, velocities and hodograph solutions.',
        formatter_class=argparse.RawDescriptionHelpFormatter
    )
    _add_common(parser)
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True

    theta = subparsers.add_parser('theta', help='Evaluate a theta function or one of its u-derivatives')
    theta.add_argument('--a', type=int, required=True, choices=(1, 2, 3, 4), help='Theta index')
    theta.add_argument('--u', required=True, help='Argument u as a+bi')
    theta.add_argument('--tau', required=True, help='Modular parameter tau as a+bi')
    theta.add_argument('--du', type=int, default=0, help=f'Order of the u-derivative (0..{MAX_PUBLIC_DU_ORDER})')

    verify = subparsers.add_parser('verify', help='Check the identities on seeded random samples')
    verify.add_argument('--config', help='JSON file with verify settings')
    verify.add_argument(
        '--suite',
        help=f"'all' or a comma-separated list of: {', '.join(VERIFY_SUITES)}"
    )
    verify.add_argument('--samples', type=int, help='Samples per suite')
    verify.add_argument('--seed', type=int, help='Master seed (required)')
    verify.add_argument('--tol', type=float, help='Tolerance overriding the per-suite defaults')
    verify.add_argument('--s-prime-form', choices=S_PRIME_FORMS, help="Form of S' used inside the identities")
    verify.add_argument('--tau-band', help='Range of Im tau as lo,hi')
    verify.add_argument('--pole-guard', type=float, help='Rejection radius around zero lattices')
    verify.add_argument('--output', help='Write the JSON report to this file')

    loewner = subparsers.add_parser('loewner', help='Integrate a reduction and write the trajectory CSV')
    loewner.add_argument('--config', help='JSON run configuration')
    loewner.add_argument('--output', help='Trajectory CSV path')
    loewner.add_argument('--report', help='Residual report JSON path')

    faber = subparsers.add_parser('faber', help='Velocities phi_k, psi_k at one state')
    faber.add_argument('--tau', required=True, help='Purely imaginary tau as a+bi')
    faber.add_argument('--eta', type=float, required=True, help='Real parameter eta')
    faber.add_argument('--kappa', type=float, required=True, help='Driving value kappa')
    faber.add_argument('--coeffs', required=True, help='Comma-separated c_1..c_N as a+bi')
    faber.add_argument('--order', type=int, help='Highest velocity index (default: N)')
    faber.add_argument('--convention', choices=('expansion', 'generating'), default='expansion',
                       help='Velocity convention')
    faber.add_argument('--output', help='Write the velocity table JSON to this file')

    hodograph = subparsers.add_parser('hodograph', help='Solve the hodograph relation on a times grid')
    hodograph.add_argument('--config', help='JSON run configuration')
    hodograph.add_argument('--output', help='Grid CSV path')
    hodograph.add_argument('--report', help='Residual report JSON path')

    for sub in (theta, verify, loewner, faber, hodograph):
        sub.add_argument('--debug', action='store_true', default=argparse.SUPPRESS, help=argparse.SUPPRESS)
        sub.add_argument('--threads', type=int, default=argparse.SUPPRESS, help=argparse.SUPPRESS)

    return parser.parse_args(argv)


def parse_suites(text: str) -> List[str]:
    """'all' or a comma-separated list of suite names."""
    names = [name.strip() for name in text.split(',') if name.strip()]
    if names == ['all']:
        return list(VERIFY_SUITES)
    unknown = [name for name in names if name not in VERIFY_SUITES]
    if unknown or not names:
        raise InputError(f"unknown suite(s) {unknown or text!r}; expected 'all' or names from {list(VERIFY_SUITES)}")
    return names


def parse_band(text: str) -> Tuple[float, float]:
    try:
        lo, hi = (float(part) for part in text.split(','))
    except ValueError as e:
        raise InputError(f"--tau-band expects lo,hi, got {text!r}") from e
    if not 0 < lo < hi:
        raise InputError(f"--tau-band needs 0 < lo < hi, got {text!r}")
    return lo, hi


def merge_cli_options(args: argparse.Namespace, config: Dict[str, Any]) -> Dict[str, Any]:
    """Merge command-line arguments into configuration.

    Args:
        args: Parsed command-line arguments
        config: Configuration dictionary

    Returns:
        Updated configuration dictionary
    """
    if args.command == 'verify':
        if args.suite is not None:
            config['suites'] = parse_suites(args.suite)
        if args.tau_band is not None:
            config['tau_band'] = parse_band(args.tau_band)
        overrides = {
            'samples': args.samples,
            'seed': args.seed,
            'tolerance': args.tol,
            's_prime_form': args.s_prime_form,
            'pole_guard': args.pole_guard,
            'output': args.output,
        }
    elif args.command in ('loewner', 'hodograph'):
        overrides = {'output': args.output, 'report': args.report}
    else:
        overrides = {}
    config.update({key: value for key, value in overrides.items() if value is not None})
    return config
