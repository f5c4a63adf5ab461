"""Driving functions given by knots, interpolated linearly."""
import csv
import logging
import os
from typing import Any, Dict, Sequence

import numpy as np

from ..errors import ConfigError
from .base import DrivingFunction


class PiecewiseLinearDriving(DrivingFunction):
    kind = 'piecewise_linear'

    def __init__(self, knots: Sequence[float], values: Sequence[float]):
        knots = np.asarray(knots, dtype=float)
        values = np.asarray(values, dtype=float)
        if knots.ndim != 1 or knots.size < 2 or knots.shape != values.shape:
            raise ConfigError("knots and values must be 1-d sequences of equal length >= 2")
        if not np.all(np.isfinite(knots)) or not np.all(np.isfinite(values)):
            raise ConfigError("knots and values must be finite")
        if np.any(np.diff(knots) <= 0):
            raise ConfigError("knots must be strictly increasing")
        super().__init__((knots[0], knots[-1]))
        self.knots = knots
        self.values = values

    def _value(self, y: float) -> float:
        return float(np.interp(y, self.knots, self.values))

    def parameters(self) -> Dict[str, Any]:
        return {'knots': self.knots.tolist(), 'values': self.values.tolist()}

    @classmethod
    def from_spec(cls, spec: Dict[str, Any]) -> 'PiecewiseLinearDriving':
        if 'knots' not in spec or 'values' not in spec:
            raise ConfigError("piecewise_linear driving function needs 'knots' and 'values'")
        return cls(spec['knots'], spec['values'])


class TableDriving(PiecewiseLinearDriving):
    """Knots read from a CSV file with columns y, kappa."""

    kind = 'table'

    def __init__(self, path: str):
        self.path = path
        knots, values = self._read(path)
        super().__init__(knots, values)
        logging.debug(f"Loaded {len(knots)} kappa knots from {path}")

    @staticmethod
    def _read(path: str):
        if not os.path.exists(path):
            raise ConfigError(f"kappa table {path} does not exist")
        knots, values = [], []
        with open(path, newline='') as f:
            reader = csv.DictReader(f)
            if reader.fieldnames is None or not {'y', 'kappa'} <= set(reader.fieldnames):
                raise ConfigError(f"kappa table {path} needs a header with columns y,kappa")
            for row in reader:
                try:
                    knots.append(float(row['y']))
                    values.append(float(row['kappa']))
                except ValueError as e:
                    raise ConfigError(f"bad row in kappa table {path}: {row}") from e
        return knots, values

    def parameters(self) -> Dict[str, Any]:
        return {'path': self.path}

    @classmethod
    def from_spec(cls, spec: Dict[str, Any]) -> 'TableDriving':
        if 'path' not in spec:
            raise ConfigError("table driving function needs 'path'")
        return cls(spec['path'])
