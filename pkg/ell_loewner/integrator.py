"""Adaptive Dormand-Prince 5(4) integrator with dense output.

Works on complex state vectors. The right-hand side may raise PoleError;
such trial steps are halved rather than rejected by error control, and a
run of MAX_POLE_HALVINGS consecutive halvings is reported as a blow-up.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, List, Sequence, Tuple

import numpy as np

from .constants import (
    DEFAULT_ATOL,
    DEFAULT_H_INITIAL,
    DEFAULT_H_MIN,
    DEFAULT_RTOL,
    MAX_POLE_HALVINGS,
    STEP_MAX_FACTOR,
    STEP_MIN_FACTOR,
    STEP_SAFETY,
)
from .errors import BlowUpError, DomainError, PoleError, StepSizeError

RightHandSide = Callable[[float, np.ndarray], np.ndarray]

# Butcher tableau rows for stages 2..6
BT = {
    1: [1 / 5],
    2: [3 / 40, 9 / 40],
    3: [44 / 45, -56 / 15, 32 / 9],
    4: [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    5: [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
}
C = [0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0]
B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84])

# Fifth-order minus embedded fourth-order weights, seven stages (FSAL)
TR = np.array([-71 / 57600, 0.0, 71 / 16695, -71 / 1920, 17253 / 339200, -22 / 525, 1 / 40])

# Continuous extension: x(t + s h) = x + h * (K^T P) [s, s^2, s^3, s^4]
P = np.array([
    [1, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0, 0, 0, 0],
    [0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])


@dataclass
class StepStats:
    accepted: int = 0
    rejected: int = 0
    pole_halvings: int = 0
    evaluations: int = 0


@dataclass
class IntegrationResult:
    """States at the requested sample points, in integration order."""
    samples: List[float]
    states: List[np.ndarray]
    final_t: float
    final_state: np.ndarray
    stats: StepStats = field(default_factory=StepStats)


class DormandPrince:
    """Dormand-Prince 5(4) pair with the fourth-order continuous extension."""

    def __init__(self, fun: RightHandSide, rtol: float = DEFAULT_RTOL, atol: float = DEFAULT_ATOL,
                 h_min: float = DEFAULT_H_MIN, h_initial: float = DEFAULT_H_INITIAL,
                 max_pole_halvings: int = MAX_POLE_HALVINGS):
        if rtol <= 0 or atol <= 0:
            raise DomainError(f"tolerances must be positive, got rtol={rtol}, atol={atol}")
        self.fun = fun
        self.rtol = rtol
        self.atol = atol
        self.h_min = h_min
        self.h_initial = h_initial
        self.max_pole_halvings = max_pole_halvings
        self.stats = StepStats()

    def _eval(self, t: float, x: np.ndarray) -> np.ndarray:
        self.stats.evaluations += 1
        return np.asarray(self.fun(t, x), dtype=complex)

    def _step(self, t: float, x: np.ndarray, f0: np.ndarray, h: float) -> Tuple[np.ndarray, np.ndarray]:
        """One trial step; returns the new state and the 7 x n stage matrix."""
        K = np.empty((7, x.size), dtype=complex)
        K[0] = f0
        for s, row in BT.items():
            dx = h * np.dot(row, K[:s])
            K[s] = self._eval(t + C[s] * h, x + dx)
        x_new = x + h * np.dot(B, K[:6])
        K[6] = self._eval(t + h, x_new)
        return x_new, K

    def _error_norm(self, x: np.ndarray, x_new: np.ndarray, K: np.ndarray, h: float) -> float:
        error = h * np.dot(TR, K)
        scale = self.atol + self.rtol * np.maximum(np.abs(x), np.abs(x_new))
        return float(np.sqrt(np.mean(np.abs(error / scale) ** 2)))

    @staticmethod
    def _dense(x: np.ndarray, K: np.ndarray, h: float, s: float) -> np.ndarray:
        Q = K.T @ P
        return x + h * (Q @ np.array([s, s * s, s ** 3, s ** 4]))

    def integrate(self, t0: float, x0: Sequence[complex], t_end: float,
                  samples: Sequence[float] = ()) -> IntegrationResult:
        """Integrate from t0 to t_end, reporting states at every sample.

        Args:
            t0: Initial value of the independent variable
            x0: Initial state
            t_end: Final value; may lie on either side of t0
            samples: Points between t0 and t_end (inclusive) at which to report

        Returns:
            IntegrationResult with samples ordered along the direction of integration
        """
        x = np.array(x0, dtype=complex)
        direction = 1.0 if t_end >= t0 else -1.0
        span = abs(t_end - t0)
        ordered = sorted(samples, key=lambda s: direction * (s - t0))
        for s in ordered:
            if direction * (s - t0) < 0 or direction * (s - t_end) > 0:
                raise DomainError(f"sample {s:g} is outside [{min(t0, t_end):g}, {max(t0, t_end):g}]")

        out_t: List[float] = []
        out_x: List[np.ndarray] = []
        pending = list(ordered)
        while pending and pending[0] == t0:
            out_t.append(pending.pop(0))
            out_x.append(x.copy())

        self.stats = StepStats()
        t = t0
        try:
            f = self._eval(t, x)
        except PoleError as e:
            raise BlowUpError(f"initial state violates the pole guard: {e}", y=t0,
                              argument=e.argument, last_good_y=t0) from e

        h = min(self.h_initial, span) if span > 0 else 0.0
        halvings = 0
        while direction * (t_end - t) > 0:
            remaining = abs(t_end - t)
            if h >= remaining or remaining - h < self.h_min:
                h = remaining
            if h < self.h_min and halvings == 0:
                raise StepSizeError(f"step size {h:.3g} fell below h_min = {self.h_min:g} at t = {t:.12g}", y=t)
            try:
                x_new, K = self._step(t, x, f, direction * h)
            except PoleError as e:
                halvings += 1
                self.stats.pole_halvings += 1
                if halvings > self.max_pole_halvings:
                    raise BlowUpError(
                        f"pole guard violated near t = {t + direction * h:.12g} "
                        f"(argument {e.argument:.6g}); last good t = {t:.12g}",
                        y=t + direction * h, argument=e.argument, last_good_y=t,
                    ) from e
                logging.debug(f"Pole guard hit at t = {t:.12g}, halving step to {h / 2:.3g}")
                h *= 0.5
                continue
            halvings = 0
            err = self._error_norm(x, x_new, K, h)
            if err > 1.0:
                self.stats.rejected += 1
                h *= max(STEP_MIN_FACTOR, STEP_SAFETY * err ** -0.2)
                logging.debug(f"Rejected step at t = {t:.12g} (error {err:.3g}), retrying with h = {h:.3g}")
                continue

            t_new = t_end if h == remaining else t + direction * h
            while pending and direction * (pending[0] - t_new) <= 0:
                s = pending.pop(0)
                out_t.append(s)
                out_x.append(x_new.copy() if s == t_new else self._dense(x, K, direction * h, (s - t) / (direction * h)))
            self.stats.accepted += 1
            t, x, f = t_new, x_new, K[6]
            factor = STEP_MAX_FACTOR if err == 0 else min(STEP_MAX_FACTOR, STEP_SAFETY * err ** -0.2)
            h *= factor

        logging.debug(f"Integration finished: {self.stats}")
        return IntegrationResult(samples=out_t, states=out_x, final_t=t, final_state=x, stats=self.stats)
