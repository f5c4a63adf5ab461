"""Elliptic Loewner flow of a one-variable reduction.

The flow runs in y = Im tau (tau = i y, so d/dy = i d/dtau):

    4 pi deta/dy = -E(xi) - E(xi_bar)
    4 pi du/dy   = -E(u + xi) + E(xi)
    4 pi dub/dy  = -E(ub + xi_bar) + E(xi_bar)

with xi = eta/2 + i kappa(y), xi_bar = eta/2 - i kappa(y). Laurent tail
coefficients follow from the Taylor expansion of -E(u + xi) + E(xi) in u.
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import chebyshev

from .constants import (
    DEFAULT_ATOL,
    DEFAULT_H_MIN,
    DEFAULT_IDENTITY_TOL,
    DEFAULT_INTERPOLATION_NODES,
    DEFAULT_POLE_GUARD,
    DEFAULT_RTOL,
    DEFAULT_Y_MIN,
    REALITY_TOL,
)
from .driving import DrivingFunction
from .elliptic import (
    FOUR_PI_I,
    e_combined,
    e_derivatives,
    normalized_residual,
    s_prime,
    total_s_derivative,
)
from .errors import DegenerateError, DomainError, PoleError, RangeError, RealityError
from .integrator import DormandPrince, StepStats
from .report import ResidualAccumulator, ResidualReport
from .series import LaurentTailSeries, compose
from .theta import ModularParam, ModularPoint, guard, theta_derivatives

FOUR_PI = 4 * math.pi

Points = Tuple[Tuple[str, complex], ...]


def xi_pair(eta: float, kappa_value: float) -> Tuple[complex, complex]:
    """xi = eta/2 + i kappa and its partner; xi + xi_bar == eta."""
    half = 0.5 * float(eta)
    return complex(half, kappa_value), complex(half, -kappa_value)


@dataclass(frozen=True)
class ReductionState:
    y: float
    eta: float
    u_points: Points
    ubar_points: Points
    series: LaurentTailSeries
    series_bar: LaurentTailSeries

    @classmethod
    def initial(cls, y: float, eta: float, series: LaurentTailSeries,
                points: Sequence[Tuple[str, complex]] = ()) -> 'ReductionState':
        """Conjugate-symmetric state with u(z) taken from the series at each marked z."""
        u_points = tuple((label, series.evaluate(z)) for label, z in points)
        ubar_points = tuple((label, u.conjugate()) for label, u in u_points)
        return cls(float(y), float(eta), u_points, ubar_points, series, series.conjugate())

    @property
    def tau(self) -> ModularParam:
        return ModularParam.imaginary(self.y)

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(label for label, _ in self.u_points)

    def validate(self, kappa: DrivingFunction) -> None:
        """Check the state is usable: labels paired, orders equal, xi + xi_bar == eta."""
        if self.labels != tuple(label for label, _ in self.ubar_points):
            raise DomainError("u_points and ubar_points must carry the same labels in the same order")
        if self.series.order != self.series_bar.order:
            raise DomainError("series and series_bar must have the same order")
        if not math.isfinite(self.eta):
            raise DomainError(f"eta must be finite, got {self.eta}")
        xi, xi_bar = xi_pair(self.eta, kappa(self.y))
        if xi + xi_bar != self.eta:
            raise DomainError(f"xi + xi_bar = {xi + xi_bar} differs from eta = {self.eta}")

    def symmetry_defect(self) -> float:
        """Largest departure from ubar = conj(u), cbar = conj(c)."""
        defects = [abs(ub - u.conjugate()) for (_, u), (_, ub) in zip(self.u_points, self.ubar_points)]
        defects += [abs(cb - c.conjugate()) for c, cb in zip(self.series.coeffs, self.series_bar.coeffs)]
        return max(defects, default=0.0)

    def pack(self) -> np.ndarray:
        return np.array(
            [self.eta]
            + [u for _, u in self.u_points]
            + [u for _, u in self.ubar_points]
            + list(self.series.coeffs)
            + list(self.series_bar.coeffs),
            dtype=complex,
        )

    def unpack(self, y: float, vector: np.ndarray) -> 'ReductionState':
        """A state shaped like self holding the values in vector."""
        n, order = len(self.u_points), self.series.order
        u = vector[1:1 + n]
        ub = vector[1 + n:1 + 2 * n]
        c = vector[1 + 2 * n:1 + 2 * n + order]
        cb = vector[1 + 2 * n + order:]
        return ReductionState(
            y=float(y),
            eta=float(vector[0].real),
            u_points=tuple((label, complex(v)) for label, v in zip(self.labels, u)),
            ubar_points=tuple((label, complex(v)) for label, v in zip(self.labels, ub)),
            series=LaurentTailSeries(tuple(c)),
            series_bar=LaurentTailSeries(tuple(cb)),
        )


@dataclass(frozen=True)
class StateRate:
    """y-derivatives of every component of a ReductionState."""
    eta: float
    u: Tuple[complex, ...]
    ubar: Tuple[complex, ...]
    series: np.ndarray
    series_bar: np.ndarray

    def pack(self) -> np.ndarray:
        return np.concatenate(([self.eta], self.u, self.ubar, self.series, self.series_bar)).astype(complex)


def eta_rate(eta: float, kappa_value: float, tau: ModularParam,
             pole_guard: float = DEFAULT_POLE_GUARD) -> float:
    """deta/dy, checked to be real before the imaginary part is dropped."""
    xi, xi_bar = xi_pair(eta, kappa_value)
    total = -(e_combined(ModularPoint(xi, tau), pole_guard) + e_combined(ModularPoint(xi_bar, tau), pole_guard))
    if abs(total.imag) >= REALITY_TOL * (1.0 + abs(total.real)):
        raise RealityError(f"deta/dy has imaginary part {total.imag:.3g} at eta={eta:g}, kappa={kappa_value:g}")
    return total.real / FOUR_PI


def eta_derivative_general(eta: float, xi: complex, tau: ModularParam,
                           pole_guard: float = DEFAULT_POLE_GUARD) -> complex:
    """deta/dtau = (E(xi - eta) - E(xi)) / (4 pi i), valid for any xi."""
    return (e_combined(ModularPoint(xi - eta, tau), pole_guard)
            - e_combined(ModularPoint(xi, tau), pole_guard)) / FOUR_PI_I


def point_rate(u: complex, xi: complex, tau: ModularParam, pole_guard: float = DEFAULT_POLE_GUARD) -> complex:
    """du/dy for a marked point."""
    if u == 0:
        return 0j
    return (-e_combined(ModularPoint(u + xi, tau), pole_guard)
            + e_combined(ModularPoint(xi, tau), pole_guard)) / FOUR_PI


def series_rate(series: LaurentTailSeries, xi: complex, tau: ModularParam,
                pole_guard: float = DEFAULT_POLE_GUARD) -> np.ndarray:
    """dc_k/dy for k = 1..N from -(1/4pi) sum_m E^(m)(xi) u^m / m!."""
    order = series.order
    derivatives = e_derivatives(xi, tau, order + 1, pole_guard)
    taylor = [derivatives[m] / math.factorial(m) for m in range(1, order + 1)]
    return -compose(taylor, series.padded(), order)[1:] / FOUR_PI


def rhs(state: ReductionState, kappa: DrivingFunction, pole_guard: float = DEFAULT_POLE_GUARD) -> StateRate:
    """y-derivative of the reduction state."""
    tau = state.tau
    kappa_value = kappa(state.y)
    xi, xi_bar = xi_pair(state.eta, kappa_value)
    return StateRate(
        eta=eta_rate(state.eta, kappa_value, tau, pole_guard),
        u=tuple(point_rate(u, xi, tau, pole_guard) for _, u in state.u_points),
        ubar=tuple(point_rate(u, xi_bar, tau, pole_guard) for _, u in state.ubar_points),
        series=series_rate(state.series, xi, tau, pole_guard),
        series_bar=series_rate(state.series_bar, xi_bar, tau, pole_guard),
    )


@dataclass
class Trajectory:
    states: List[ReductionState]
    kappa: DrivingFunction
    final: ReductionState
    stats: StepStats

    @property
    def ys(self) -> List[float]:
        return [s.y for s in self.states]


def integrate(initial: ReductionState, kappa: DrivingFunction, y_end: float,
              samples: Optional[Sequence[float]] = None, rtol: float = DEFAULT_RTOL,
              atol: float = DEFAULT_ATOL, h_min: float = DEFAULT_H_MIN,
              pole_guard: float = DEFAULT_POLE_GUARD, y_min: float = DEFAULT_Y_MIN) -> Trajectory:
    """Integrate the reduction from initial.y to y_end.

    Args:
        initial: State at the starting y
        kappa: Driving function
        y_end: Final y, above or below initial.y
        samples: y values for dense output (default: just y_end)
        rtol, atol, h_min: Step control
        pole_guard: Minimum distance from theta zero lattices
        y_min: Lower bound of the admissible band

    Returns:
        Trajectory with one state per sample, in integration order
    """
    if min(initial.y, y_end) < y_min:
        raise DomainError(f"integration path [{initial.y:g}, {y_end:g}] leaves the band y >= {y_min:g}")
    initial.validate(kappa)

    def fun(y: float, vector: np.ndarray) -> np.ndarray:
        return rhs(initial.unpack(y, vector), kappa, pole_guard).pack()

    solver = DormandPrince(fun, rtol=rtol, atol=atol, h_min=h_min)
    requested = [y_end] if samples is None else list(samples)
    logging.debug(f"Integrating reduction from y={initial.y:g} to y={y_end:g} "
                  f"({len(initial.u_points)} points, series order {initial.series.order})")
    result = solver.integrate(initial.y, initial.pack(), y_end, requested)
    states = [initial.unpack(y, x) for y, x in zip(result.samples, result.states)]
    final = initial.unpack(result.final_t, result.final_state)
    logging.debug(f"Accepted {result.stats.accepted} steps, rejected {result.stats.rejected}, "
                  f"pole halvings {result.stats.pole_halvings}")
    return Trajectory(states=states, kappa=kappa, final=final, stats=result.stats)


def dlog_rho_dtau(xi: complex, tau: ModularParam, pole_guard: float = DEFAULT_POLE_GUARD) -> complex:
    """d log rho / dtau from the c_1 flow and the tau-dependence of theta_2(0) theta_3(0)."""
    e_prime = e_derivatives(xi, tau, 2, pole_guard)[1]
    heat = sum(d[2] / d[0] for d in (theta_derivatives(a, 0j, tau, 2) for a in (2, 3)))
    return (-e_prime + heat) / FOUR_PI_I


def _coincident_ds_dtau(u: complex, xi: complex, tau: ModularParam, pole_guard: float) -> complex:
    """Limit of dS(u1 - u2)/dtau as u2 -> u1 along the flow."""
    guard(1, u + xi, tau, pole_guard)
    guard(4, u + xi, tau, pole_guard)
    e_prime = e_derivatives(u + xi, tau, 2, pole_guard)[1]
    t1 = theta_derivatives(1, 0j, tau, 3)
    t4 = theta_derivatives(4, 0j, tau, 2)
    return (-e_prime + t1[3] / t1[1] - t4[2] / t4[0]) / FOUR_PI_I


def identity_residuals(eta: float, kappa_value: float, u1: complex, u2: complex, ubar1: complex,
                       tau: ModularParam, s_prime_form: str = "log_derivative",
                       pole_guard: float = DEFAULT_POLE_GUARD) -> Dict[str, float]:
    """Pointwise residuals of the reduction identities at one admissible state.

    Every total tau-derivative is assembled from the flow rates and the
    S-dot identity; none of them is differentiated numerically.
    """
    xi, xi_bar = xi_pair(eta, kappa_value)

    def at(w: complex) -> ModularPoint:
        return ModularPoint(w, tau)

    def sp(w: complex) -> complex:
        return s_prime(at(w), s_prime_form, pole_guard)

    def rate(w: complex, x: complex) -> complex:
        return (-e_combined(at(w + x), pole_guard) + e_combined(at(x), pole_guard)) / FOUR_PI_I

    def ds(w: complex, dw: complex) -> complex:
        return total_s_derivative(at(w), dw, s_prime_form, pole_guard)

    du1, du2, dub1 = rate(u1, xi), rate(u2, xi), rate(ubar1, xi_bar)
    deta = eta_derivative_general(eta, xi, tau, pole_guard)
    dlog_rho = dlog_rho_dtau(xi, tau, pole_guard)

    ds_u1 = ds(u1, du1)
    ds_u2 = ds(u2, du2)
    ds_u2_eta = ds(u2 + eta, du2 + deta)
    ds_eta = ds(eta, deta)
    ds_ub1 = ds(ubar1, dub1)
    ds_mixed = ds(ubar1 + u2 + eta, dub1 + du2 + deta)
    if u1 == u2:
        ds_diff = _coincident_ds_dtau(u1, xi, tau, pole_guard)
    else:
        ds_diff = ds(u1 - u2, du1 - du2)

    sp_xi, sp_xi_bar = sp(xi), sp(xi_bar)
    sp_xi_eta, sp_xi_bar_eta = sp(xi - eta), sp(xi_bar - eta)
    sp_u1_xi, sp_u2_xi, sp_ub1_xi_bar = sp(u1 + xi), sp(u2 + xi), sp(ubar1 + xi_bar)

    return {
        'ds_u': normalized_residual(FOUR_PI_I * ds_u1, sp_u1_xi * sp_xi),
        'dlog_rho': normalized_residual(FOUR_PI_I * dlog_rho, sp_xi ** 2),
        'ds_u_shifted': normalized_residual(FOUR_PI_I * ds_u2_eta, sp_u2_xi * sp_xi_eta),
        'ds_difference': normalized_residual(FOUR_PI_I * ds_diff, sp_u1_xi * sp_u2_xi),
        'ds_eta': max(normalized_residual(FOUR_PI_I * ds_eta, sp_xi * sp_xi_eta),
                      normalized_residual(sp_xi * sp_xi_eta, sp_xi_bar * sp_xi_bar_eta)),
        'ds_ubar': normalized_residual(FOUR_PI_I * ds_ub1, sp_ub1_xi_bar * sp_xi_bar),
        'ds_mixed': normalized_residual(FOUR_PI_I * ds_mixed, sp_ub1_xi_bar * sp(-u2 - xi)),
        'product_rho': normalized_residual(ds_u1 * ds_u2, dlog_rho * ds_diff),
        'product_eta': normalized_residual(ds_u1 * ds_u2_eta, ds_eta * ds_diff),
        'product_mixed': normalized_residual(ds_ub1 * ds_u2, ds_eta * ds_mixed),
    }


def chain_rule_residuals(eta: float, kappa_value: float, u: complex, ubar: complex, tau: ModularParam,
                         s_prime_form: str = "log_derivative",
                         pole_guard: float = DEFAULT_POLE_GUARD) -> Dict[str, float]:
    """Chain-rule quotients of tau-derivatives against the generating ratios.

    (dS(u)/dtau) / (dlog rho/dtau) = S'(u + xi) / S'(xi)
    (dS(ub)/dtau) / (dS(eta)/dtau) = -S'(ub + xi_bar) / S'(xi)

    Both are compared cross-multiplied; dlog rho/dtau and dS(eta)/dtau may vanish.
    """
    xi, xi_bar = xi_pair(eta, kappa_value)

    def at(w: complex) -> ModularPoint:
        return ModularPoint(w, tau)

    def sp(w: complex) -> complex:
        return s_prime(at(w), s_prime_form, pole_guard)

    du = (-e_combined(at(u + xi), pole_guard) + e_combined(at(xi), pole_guard)) / FOUR_PI_I
    dub = (-e_combined(at(ubar + xi_bar), pole_guard) + e_combined(at(xi_bar), pole_guard)) / FOUR_PI_I
    deta = eta_derivative_general(eta, xi, tau, pole_guard)
    ds_u = total_s_derivative(at(u), du, s_prime_form, pole_guard)
    ds_ub = total_s_derivative(at(ubar), dub, s_prime_form, pole_guard)
    ds_eta = total_s_derivative(at(eta), deta, s_prime_form, pole_guard)
    sp_xi = sp(xi)
    dlog_rho = dlog_rho_dtau(xi, tau, pole_guard)
    return {
        'chain_holomorphic': normalized_residual(ds_u * sp_xi, dlog_rho * sp(u + xi)),
        'chain_antiholomorphic': normalized_residual(ds_ub * sp_xi, -ds_eta * sp(ubar + xi_bar)),
    }


def state_residuals(state: ReductionState, kappa: DrivingFunction, s_prime_form: str = "log_derivative",
                    pole_guard: float = DEFAULT_POLE_GUARD) -> Dict[str, float]:
    """Identity and chain-rule residuals at a state, using its first two marked points."""
    if not state.u_points:
        raise DomainError("consistency residuals need at least one marked point")
    u1 = state.u_points[0][1]
    u2 = state.u_points[1][1] if len(state.u_points) > 1 else u1
    ubar1 = state.ubar_points[0][1]
    kappa_value = kappa(state.y)
    residuals = identity_residuals(state.eta, kappa_value, u1, u2, ubar1, state.tau, s_prime_form, pole_guard)
    residuals.update(chain_rule_residuals(state.eta, kappa_value, u1, ubar1, state.tau, s_prime_form, pole_guard))
    return residuals


def consistency_residuals(state: ReductionState, kappa: DrivingFunction, s_prime_form: str = "log_derivative",
                          pole_guard: float = DEFAULT_POLE_GUARD,
                          tolerance: float = DEFAULT_IDENTITY_TOL) -> ResidualReport:
    """Reduction identities at a single state."""
    accumulator = ResidualAccumulator()
    accumulator.record(state_residuals(state, kappa, s_prime_form, pole_guard))
    return accumulator.build(tolerance, {'y': state.y, 'eta': state.eta, 'kappa': kappa(state.y)})


def trajectory_residuals(trajectory: Trajectory, s_prime_form: str = "log_derivative",
                         pole_guard: float = DEFAULT_POLE_GUARD,
                         tolerance: float = DEFAULT_IDENTITY_TOL) -> ResidualReport:
    """Reduction identities sampled at every dense-output state.

    States within the pole guard or with a degenerate denominator are
    counted as rejected.
    """
    accumulator = ResidualAccumulator()
    for state in trajectory.states:
        try:
            accumulator.record(state_residuals(state, trajectory.kappa, s_prime_form, pole_guard))
        except (PoleError, DegenerateError) as e:
            accumulator.reject()
            logging.debug(f"Residuals skipped at y={state.y:g}: {e}")
    stats = trajectory.stats
    metadata = {
        'y_start': trajectory.states[0].y if trajectory.states else None,
        'y_end': trajectory.final.y,
        'states': len(trajectory.states),
        'max_symmetry_defect': max((s.symmetry_defect() for s in trajectory.states), default=0.0),
        'steps': {'accepted': stats.accepted, 'rejected': stats.rejected,
                  'pole_halvings': stats.pole_halvings, 'evaluations': stats.evaluations},
        's_prime_form': s_prime_form,
    }
    return accumulator.build(tolerance, metadata)


class TrajectoryInterpolant:
    """Chebyshev interpolant of eta and the series coefficients on [lo, hi].

    Built from dense output at first-kind Chebyshev nodes. Evaluation returns
    a ReductionState without marked points.
    """

    def __init__(self, lo: float, hi: float, coefficients: np.ndarray, order: int, kappa: DrivingFunction):
        self.lo = lo
        self.hi = hi
        self.coefficients = coefficients
        self.order = order
        self.kappa = kappa

    @classmethod
    def build(cls, initial: ReductionState, kappa: DrivingFunction, y_other: float,
              nodes: int = DEFAULT_INTERPOLATION_NODES, rtol: float = 1e-11, atol: float = 1e-13,
              pole_guard: float = DEFAULT_POLE_GUARD) -> 'TrajectoryInterpolant':
        lo, hi = sorted((initial.y, float(y_other)))
        if hi - lo <= 0:
            raise DomainError("interpolation interval is empty")
        x = chebyshev.chebpts1(nodes)
        ys = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x
        seed = ReductionState(initial.y, initial.eta, (), (), initial.series, initial.series_bar)
        trajectory = integrate(seed, kappa, y_other, samples=list(ys), rtol=rtol, atol=atol,
                               pole_guard=pole_guard)
        by_y = sorted(trajectory.states, key=lambda s: s.y)
        values = np.array([s.pack() for s in by_y])
        coefficients = (chebyshev.chebfit(x, values.real, nodes - 1)
                        + 1j * chebyshev.chebfit(x, values.imag, nodes - 1))
        logging.debug(f"Chebyshev interpolant on [{lo:g}, {hi:g}] with {nodes} nodes; "
                      f"tail coefficient {np.max(np.abs(coefficients[-1])):.3g}")
        return cls(lo, hi, coefficients, initial.series.order, kappa)

    @property
    def domain(self) -> Tuple[float, float]:
        return self.lo, self.hi

    def __call__(self, y: float) -> ReductionState:
        y = float(y)
        slack = 1e-12 * (1.0 + abs(self.hi))
        if not self.lo - slack <= y <= self.hi + slack:
            raise RangeError(f"y = {y:g} is outside the precomputed trajectory [{self.lo:g}, {self.hi:g}]")
        x = (2.0 * y - self.lo - self.hi) / (self.hi - self.lo)
        vector = chebyshev.chebval(x, self.coefficients)
        n = self.order
        return ReductionState(
            y=y,
            eta=float(vector[0].real),
            u_points=(),
            ubar_points=(),
            series=LaurentTailSeries(tuple(vector[1:1 + n])),
            series_bar=LaurentTailSeries(tuple(vector[1 + n:])),
        )
