"""Driving functions kappa(y) for the elliptic Loewner flow."""
from typing import Any, Dict, Type

from ..errors import ConfigError
from .analytic import ConstantDriving, SinusoidDriving
from .base import DrivingFunction
from .tabulated import PiecewiseLinearDriving, TableDriving

__all__ = ['DrivingFunction', 'ConstantDriving', 'SinusoidDriving',
           'PiecewiseLinearDriving', 'TableDriving', 'make_driving_function']

DRIVERS: Dict[str, Type[DrivingFunction]] = {
    cls.kind: cls
    for cls in (ConstantDriving, SinusoidDriving, PiecewiseLinearDriving, TableDriving)
}


def make_driving_function(spec: Dict[str, Any]) -> DrivingFunction:
    """Build a driving function from a {'kind': ..., ...} mapping."""
    if not isinstance(spec, dict) or 'kind' not in spec:
        raise ConfigError(f"driving function must be an object with a 'kind', got {spec!r}")
    kind = spec['kind']
    if kind not in DRIVERS:
        raise ConfigError(f"unknown driving function kind {kind!r}; expected one of {sorted(DRIVERS)}")
    return DRIVERS[kind].from_spec(spec)
