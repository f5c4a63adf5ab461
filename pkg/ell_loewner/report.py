"""Residual reports: per-identity maxima, means and pass/fail."""
import json
import math
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Union

from colorama import Fore, Style, init

from .constants import FAIL_MARK, PASS_MARK

# Initialize colorama
init()


@dataclass
class IdentityResult:
    name: str
    attempted: int
    rejected: int
    max_residual: float
    mean_residual: float
    tolerance: float

    @property
    def accepted(self) -> int:
        return self.attempted - self.rejected

    @property
    def passed(self) -> bool:
        return self.accepted > 0 and math.isfinite(self.max_residual) and self.max_residual <= self.tolerance

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'attempted': self.attempted,
            'rejected': self.rejected,
            'max_residual': self.max_residual,
            'mean_residual': self.mean_residual,
            'tolerance': self.tolerance,
            'passed': self.passed,
        }


@dataclass
class ResidualReport:
    results: List[IdentityResult] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.results) and all(r.passed for r in self.results)

    @property
    def max_residual(self) -> float:
        return max((r.max_residual for r in self.results), default=0.0)

    def result(self, name: str) -> IdentityResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def merged(self, other: 'ResidualReport') -> 'ResidualReport':
        metadata = dict(self.metadata)
        metadata.update(other.metadata)
        return ResidualReport(self.results + other.results, metadata)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'passed': self.passed,
            'results': [r.to_dict() for r in self.results],
            'metadata': self.metadata,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    def summary(self) -> str:
        """One coloured line per identity."""
        lines = []
        for r in self.results:
            symbol = PASS_MARK if r.passed else FAIL_MARK
            color = Fore.GREEN if r.passed else Fore.RED
            lines.append(
                f"{color}{symbol}{Style.RESET_ALL} {r.name:<24} max {r.max_residual:.3e}  "
                f"mean {r.mean_residual:.3e}  tol {r.tolerance:.1e}  "
                f"({r.accepted}/{r.attempted} samples)"
            )
        return "\n".join(lines)


class ResidualAccumulator:
    """Collects residual dictionaries sample by sample."""

    def __init__(self):
        self._values: 'OrderedDict[str, List[float]]' = OrderedDict()
        self.rejected = 0

    def record(self, residuals: Mapping[str, float]) -> None:
        for name, value in residuals.items():
            self._values.setdefault(name, []).append(float(value))

    def reject(self, count: int = 1) -> None:
        self.rejected += count

    def build(self, tolerance: Union[float, Mapping[str, float]],
              metadata: Optional[Dict[str, Any]] = None) -> ResidualReport:
        results = []
        for name, values in self._values.items():
            tol = tolerance[name] if isinstance(tolerance, Mapping) else tolerance
            results.append(IdentityResult(
                name=name,
                attempted=len(values) + self.rejected,
                rejected=self.rejected,
                max_residual=max(values),
                mean_residual=min(math.fsum(values) / len(values), max(values)),
                tolerance=float(tol),
            ))
        return ResidualReport(results, dict(metadata or {}))
