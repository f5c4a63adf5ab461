"""Base class for driving functions kappa(y)."""
import math
from abc import ABC, abstractmethod
from typing import Any, Dict, Tuple

from ..errors import ConfigError, DomainError


class DrivingFunction(ABC):
    """Real-valued kappa(y) on a closed y-interval."""

    kind: str = ''

    def __init__(self, domain: Tuple[float, float] = (-math.inf, math.inf)):
        lo, hi = (float(domain[0]), float(domain[1]))
        if not lo < hi:
            raise ConfigError(f"{self.kind} driving function needs lo < hi, got {domain}")
        self.domain = (lo, hi)

    @abstractmethod
    def _value(self, y: float) -> float:
        """kappa at a y already checked to lie in the domain."""
        pass

    @abstractmethod
    def parameters(self) -> Dict[str, Any]:
        """Parameters that reproduce this function through `from_spec`."""
        pass

    def __call__(self, y: float) -> float:
        y = float(y)
        lo, hi = self.domain
        if not lo <= y <= hi:
            raise DomainError(f"kappa ({self.kind}) is undefined at y = {y:g}; domain is [{lo:g}, {hi:g}]")
        value = float(self._value(y))
        if not math.isfinite(value):
            raise DomainError(f"kappa ({self.kind}) is not finite at y = {y:g}")
        return value

    def describe(self) -> Dict[str, Any]:
        spec = {'kind': self.kind}
        spec.update(self.parameters())
        if all(math.isfinite(v) for v in self.domain):
            spec.setdefault('domain', list(self.domain))
        return spec

    @staticmethod
    def _number(spec: Dict[str, Any], key: str, default: Any = None) -> float:
        value = spec.get(key, default)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"driving function field {key!r} must be a number, got {value!r}")
        return float(value)

    @staticmethod
    def _domain(spec: Dict[str, Any]) -> Tuple[float, float]:
        domain = spec.get('domain', (-math.inf, math.inf))
        if not isinstance(domain, (list, tuple)) or len(domain) != 2:
            raise ConfigError(f"driving function domain must be a pair, got {domain!r}")
        return float(domain[0]), float(domain[1])
