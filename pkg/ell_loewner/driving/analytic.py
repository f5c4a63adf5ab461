"""Driving functions given by a formula."""
import math
from typing import Any, Dict

from .base import DrivingFunction


class ConstantDriving(DrivingFunction):
    kind = 'constant'

    def __init__(self, value: float, domain=(-math.inf, math.inf)):
        super().__init__(domain)
        self.value = float(value)

    def _value(self, y: float) -> float:
        return self.value

    def parameters(self) -> Dict[str, Any]:
        return {'value': self.value}

    @classmethod
    def from_spec(cls, spec: Dict[str, Any]) -> 'ConstantDriving':
        return cls(cls._number(spec, 'value'), cls._domain(spec))


class SinusoidDriving(DrivingFunction):
    """kappa(y) = offset + amplitude * sin(2 pi frequency y + phase)."""

    kind = 'sinusoid'

    def __init__(self, offset: float, amplitude: float, frequency: float, phase: float = 0.0,
                 domain=(-math.inf, math.inf)):
        super().__init__(domain)
        self.offset = float(offset)
        self.amplitude = float(amplitude)
        self.frequency = float(frequency)
        self.phase = float(phase)

    def _value(self, y: float) -> float:
        return self.offset + self.amplitude * math.sin(2 * math.pi * self.frequency * y + self.phase)

    def parameters(self) -> Dict[str, Any]:
        return {
            'offset': self.offset,
            'amplitude': self.amplitude,
            'frequency': self.frequency,
            'phase': self.phase,
        }

    @classmethod
    def from_spec(cls, spec: Dict[str, Any]) -> 'SinusoidDriving':
        return cls(
            cls._number(spec, 'offset', 0.0),
            cls._number(spec, 'amplitude'),
            cls._number(spec, 'frequency'),
            cls._number(spec, 'phase', 0.0),
            cls._domain(spec),
        )
