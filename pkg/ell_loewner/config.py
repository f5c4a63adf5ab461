"""Module for handling configuration and logging setup."""
import copy
import json
import logging
import math
from typing import Any, Callable, Dict, Optional, Tuple

from .constants import (
    DEFAULT_ATOL,
    DEFAULT_FD_STEP,
    DEFAULT_GRID_SIZE,
    DEFAULT_GRID_SPACING,
    DEFAULT_H_MIN,
    DEFAULT_HODOGRAPH_TOLERANCE,
    DEFAULT_INTERPOLATION_NODES,
    DEFAULT_POLE_GUARD,
    DEFAULT_RTOL,
    DEFAULT_SAMPLE_GUARD,
    DEFAULT_SAMPLES,
    DEFAULT_TAU_BAND,
    DEFAULT_Y_MIN,
    MAX_SERIES_ORDER,
    S_PRIME_FORMS,
    VERIFY_SUITES,
)
from .errors import ConfigError
from .formatter import complex_from_json

SAMPLING_KINDS = ('verify',)


def configure_logging(debug: bool) -> None:
    """Configure logging based on debug flag.

    Args:
        debug: Whether to enable debug logging
    """
    if debug:
        logging.basicConfig(level=logging.DEBUG, format='%(levelname)s - %(message)s')
    else:
        logging.basicConfig(level=logging.INFO, format='%(message)s')


def _number(key: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"'{key}' must be a finite number, got {value!r}")
    return float(value)


def _positive(key: str, value: Any) -> float:
    value = _number(key, value)
    if value <= 0:
        raise ConfigError(f"'{key}' must be positive, got {value}")
    return value


def _count(key: str, value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigError(f"'{key}' must be a positive integer, got {value!r}")
    return value


def _integer(key: str, value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"'{key}' must be an integer, got {value!r}")
    return value


def _string(key: str, value: Any) -> str:
    if not isinstance(value, str) or not value:
        raise ConfigError(f"'{key}' must be a non-empty string, got {value!r}")
    return value


def _boolean(key: str, value: Any) -> bool:
    if not isinstance(value, bool):
        raise ConfigError(f"'{key}' must be true or false, got {value!r}")
    return value


def _object(key: str, value: Any) -> Dict[str, Any]:
    if not isinstance(value, dict):
        raise ConfigError(f"'{key}' must be an object, got {value!r}")
    return value


def _pair(key: str, value: Any) -> Tuple[float, float]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ConfigError(f"'{key}' must be a pair [lo, hi], got {value!r}")
    lo, hi = _number(key, value[0]), _number(key, value[1])
    if not lo < hi:
        raise ConfigError(f"'{key}' needs lo < hi, got {value!r}")
    return lo, hi


def _complex_list(key: str, value: Any):
    if not isinstance(value, list) or not value:
        raise ConfigError(f"'{key}' must be a non-empty list of complex scalars")
    try:
        return [complex_from_json(v) for v in value]
    except Exception as e:
        raise ConfigError(f"'{key}': {e}") from e


def _points(key: str, value: Any) -> Dict[str, complex]:
    value = _object(key, value)
    try:
        return {str(label): complex_from_json(z) for label, z in value.items()}
    except Exception as e:
        raise ConfigError(f"'{key}': {e}") from e


def _choice(options) -> Callable[[str, Any], str]:
    def check(key: str, value: Any) -> str:
        if value not in options:
            raise ConfigError(f"'{key}' must be one of {list(options)}, got {value!r}")
        return value
    return check


def _suites(key: str, value: Any):
    if not isinstance(value, list) or not value or any(v not in VERIFY_SUITES for v in value):
        raise ConfigError(f"'{key}' must be a list drawn from {list(VERIFY_SUITES)}, got {value!r}")
    return value


def _times(key: str, value: Any) -> Dict[str, Any]:
    value = _object(key, value)
    unknown = set(value) - {'t0', 't', 'tbar'}
    if unknown:
        raise ConfigError(f"'{key}' has unknown keys: {sorted(unknown)}")
    try:
        return {
            't0': complex_from_json(value.get('t0', 0.0)),
            't': [complex_from_json(v) for v in value.get('t', [])],
            'tbar': None if value.get('tbar') is None else [complex_from_json(v) for v in value['tbar']],
        }
    except Exception as e:
        raise ConfigError(f"'{key}': {e}") from e


def _grid(key: str, value: Any) -> Dict[str, Any]:
    value = _object(key, value)
    unknown = set(value) - {'axes', 'size', 'spacing'}
    if unknown:
        raise ConfigError(f"'{key}' has unknown keys: {sorted(unknown)}")
    axes = value.get('axes', ['t0', 't1'])
    if not isinstance(axes, list) or len(axes) not in (1, 2) or not all(isinstance(a, str) for a in axes):
        raise ConfigError(f"'{key}.axes' must name one or two time coordinates")
    return {
        'axes': axes,
        'size': _count(f"{key}.size", value.get('size', DEFAULT_GRID_SIZE)),
        'spacing': _positive(f"{key}.spacing", value.get('spacing', DEFAULT_GRID_SPACING)),
    }


Schema = Dict[str, Tuple[Callable[[str, Any], Any], Any]]

_REDUCTION_SCHEMA: Schema = {
    'kappa': (_object, {'kind': 'constant', 'value': 0.1}),
    'y0': (_positive, 1.5),
    'y_end': (_positive, 0.5),
    'eta0': (_number, 0.8),
    'series': (_complex_list, [1.0]),
    'series_order': (_count, 4),
    'rtol': (_positive, DEFAULT_RTOL),
    'atol': (_positive, DEFAULT_ATOL),
    'h_min': (_positive, DEFAULT_H_MIN),
    'pole_guard': (_positive, DEFAULT_POLE_GUARD),
    'y_min': (_positive, DEFAULT_Y_MIN),
    'seed': (_integer, None),
}

SCHEMAS: Dict[str, Schema] = {
    'loewner': dict(_REDUCTION_SCHEMA, **{
        'points': (_points, {'a': 3 + 1j, 'b': -2 + 2.5j}),
        'samples': (_count, 21),
        's_prime_form': (_choice(S_PRIME_FORMS), 'log_derivative'),
        'tolerance': (_positive, 1e-8),
        'output': (_string, 'trajectory.csv'),
        'report': (_string, 'loewner_report.json'),
    }),
    'hodograph': dict(_REDUCTION_SCHEMA, **{
        'y0': (_positive, 1.4),
        'y_end': (_positive, 0.6),
        'series': (_complex_list, [1.0, 0.1]),
        'rtol': (_positive, 1e-11),
        'atol': (_positive, 1e-13),
        'nodes': (_count, DEFAULT_INTERPOLATION_NODES),
        'times': (_times, {'t0': 0.2, 't': [0.1 + 0.05j, 0.05]}),
        'order': (_integer, None),
        'convention': (_choice(('expansion', 'generating')), 'expansion'),
        'profile': (_object, {'kind': 'polynomial_in_y', 'coefficients': [-10.0, 10.0]}),
        'bracket': (_pair, [0.7, 1.3]),
        'newton_seed': (_number, None),
        'grid': (_grid, {}),
        'fd_step': (_positive, DEFAULT_FD_STEP),
        'tolerance': (_positive, DEFAULT_HODOGRAPH_TOLERANCE),
        'cross': (_boolean, True),
        'output': (_string, 'hodograph_grid.csv'),
        'report': (_string, 'hodograph_report.json'),
    }),
    'verify': {
        'suites': (_suites, list(VERIFY_SUITES)),
        'samples': (_count, DEFAULT_SAMPLES),
        'seed': (_integer, None),
        'tolerance': (_positive, None),
        's_prime_form': (_choice(S_PRIME_FORMS), 'log_derivative'),
        'pole_guard': (_positive, DEFAULT_SAMPLE_GUARD),
        'tau_band': (_pair, list(DEFAULT_TAU_BAND)),
        'output': (_string, 'verify_report.json'),
    },
}


def defaults(kind: str) -> Dict[str, Any]:
    """Validated defaults for a subcommand."""
    return validate_config({}, kind, require_seed=False)


def validate_config(raw: Dict[str, Any], kind: str, require_seed: bool = True) -> Dict[str, Any]:
    """Merge raw values over the defaults and type-check every field."""
    if kind not in SCHEMAS:
        raise ConfigError(f"unknown configuration kind {kind!r}")
    schema = SCHEMAS[kind]
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        raise ConfigError(f"unknown {kind} configuration keys: {unknown}")
    config = {}
    for key, (check, default) in schema.items():
        value = raw.get(key, copy.deepcopy(default))
        config[key] = None if value is None else check(key, value)
    if require_seed and kind in SAMPLING_KINDS and config.get('seed') is None:
        raise ConfigError(f"'{kind}' runs sample at random and need an explicit 'seed'")
    if 'series' in config and 'series_order' in config:
        if len(config['series']) > config['series_order']:
            raise ConfigError("'series' has more coefficients than 'series_order'")
        if config['series_order'] > MAX_SERIES_ORDER:
            raise ConfigError(f"'series_order' exceeds the cap {MAX_SERIES_ORDER}")
    return config


def read_config(path: Optional[str], kind: str, require_seed: bool = True) -> Dict[str, Any]:
    """Read and validate a JSON run configuration.

    Args:
        path: Configuration file; None means defaults only
        kind: Subcommand whose schema applies
        require_seed: Enforce the seed requirement for sampling subcommands

    Returns:
        Configuration dictionary with defaults applied
    """
    logging.debug(f"Reading {kind} configuration from {path}")
    if path is None:
        return validate_config({}, kind, require_seed)
    try:
        with open(path, 'r') as f:
            raw = json.load(f)
    except FileNotFoundError as e:
        raise ConfigError(f"configuration file {path} not found") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON in {path}: {e}") from e
    if not isinstance(raw, dict):
        raise ConfigError(f"configuration in {path} must be a JSON object")
    return validate_config(raw, kind, require_seed)
