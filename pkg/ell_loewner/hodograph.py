"""Hodograph solution of a one-variable reduction.

The unknown y (tau = i y) is fixed implicitly by

    Re( t_0 phi_0 + sum_{k>=1} t_k phi_k(y) + sum_{k>=0} tbar_k psi_k(y) ) = Phi(y)

with velocities read from a smooth reduction. Derivatives with respect to
the complex times are Wirtinger derivatives; t_k and tbar_k are independent
coordinates whose default values are conjugate to each other.
"""
import itertools
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .constants import (
    DEFAULT_POLE_GUARD,
    GRADIENT_FD_STEP,
    NEWTON_FD_STEP,
    NEWTON_MAX_ITER,
    ROOT_RESIDUAL_TOL,
    ROOT_XTOL,
    SCAN_POINTS,
)
from .elliptic import s_prime
from .errors import ConfigError, DomainError, MaxIterError, NoBracketError, RangeError
from .faber import CONVENTIONS, VelocityTable, velocities
from .loewner import TrajectoryInterpolant
from .report import IdentityResult, ResidualReport
from .theta import ModularParam, ModularPoint

Coordinate = Tuple[str, int]


@dataclass(frozen=True)
class TimesVector:
    """t_0 and t_1..t_K; tbar_0..tbar_K default to the conjugates."""
    t0: complex
    t: Tuple[complex, ...] = ()
    tbar: Optional[Tuple[complex, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, 't0', complex(self.t0))
        object.__setattr__(self, 't', tuple(complex(v) for v in self.t))
        if self.tbar is not None:
            tbar = tuple(complex(v) for v in self.tbar)
            if len(tbar) != len(self.t) + 1:
                raise DomainError(f"tbar needs {len(self.t) + 1} entries (tbar_0..tbar_K), got {len(tbar)}")
            object.__setattr__(self, 'tbar', tbar)

    @property
    def K(self) -> int:
        return len(self.t)

    def holomorphic(self) -> Tuple[complex, ...]:
        return (self.t0,) + self.t

    def antiholomorphic(self) -> Tuple[complex, ...]:
        if self.tbar is None:
            return tuple(v.conjugate() for v in self.holomorphic())
        return self.tbar

    def value(self, coordinate: Coordinate) -> complex:
        kind, k = coordinate
        return self.holomorphic()[k] if kind == 't' else self.antiholomorphic()[k]

    def perturbed(self, coordinate: Coordinate, delta: complex) -> 'TimesVector':
        """Move one coordinate; its partner keeps its current value."""
        kind, k = coordinate
        hol = list(self.holomorphic())
        anti = list(self.antiholomorphic())
        if kind == 't':
            hol[k] += delta
        elif kind == 'tbar':
            anti[k] += delta
        else:
            raise DomainError(f"unknown time coordinate {coordinate!r}")
        return TimesVector(hol[0], tuple(hol[1:]), tuple(anti))

    def coordinates(self) -> List[Coordinate]:
        return [('t', k) for k in range(self.K + 1)] + [('tbar', k) for k in range(self.K + 1)]


def coordinate_name(coordinate: Coordinate) -> str:
    kind, k = coordinate
    return f"{kind}{k}"


def parse_coordinate(name: str) -> Coordinate:
    for kind in ('tbar', 't'):
        if name.startswith(kind) and name[len(kind):].isdigit():
            return kind, int(name[len(kind):])
    raise ConfigError(f"unknown time coordinate {name!r}; expected t<k> or tbar<k>")


class ProfileFunction(ABC):
    """Real profile Phi(y)."""

    kind: str = ''

    @abstractmethod
    def __call__(self, y: float) -> float:
        pass

    @abstractmethod
    def derivative(self, y: float) -> float:
        pass


class PolynomialProfile(ProfileFunction):
    """Phi(y) = sum_j a_j y^j."""

    kind = 'polynomial_in_y'

    def __init__(self, coefficients: Sequence[float]):
        if not coefficients:
            raise ConfigError("polynomial profile needs at least one coefficient")
        self.polynomial = np.polynomial.Polynomial([float(c) for c in coefficients])

    def __call__(self, y: float) -> float:
        return float(self.polynomial(y))

    def derivative(self, y: float) -> float:
        return float(self.polynomial.deriv()(y))


class TableProfile(ProfileFunction):
    """Linear interpolation of (knots, values); centred-difference derivative."""

    kind = 'table'

    def __init__(self, knots: Sequence[float], values: Sequence[float], step: float = 1e-6):
        self.knots = np.asarray(knots, dtype=float)
        self.values = np.asarray(values, dtype=float)
        if self.knots.size < 2 or self.knots.shape != self.values.shape:
            raise ConfigError("profile table needs matching knots and values (at least two)")
        if np.any(np.diff(self.knots) <= 0):
            raise ConfigError("profile knots must be strictly increasing")
        self.step = step

    def __call__(self, y: float) -> float:
        if not self.knots[0] <= y <= self.knots[-1]:
            raise RangeError(f"profile is undefined at y = {y:g}")
        return float(np.interp(y, self.knots, self.values))

    def derivative(self, y: float) -> float:
        lo = max(y - self.step, self.knots[0])
        hi = min(y + self.step, self.knots[-1])
        return (self(hi) - self(lo)) / (hi - lo)


def make_profile(spec: Dict[str, Any]) -> ProfileFunction:
    kind = spec.get('kind')
    if kind == PolynomialProfile.kind:
        return PolynomialProfile(spec.get('coefficients', []))
    if kind == TableProfile.kind:
        return TableProfile(spec.get('knots', []), spec.get('values', []))
    raise ConfigError(f"unknown profile kind {kind!r}; expected polynomial_in_y or table")


class Reduction:
    """A smooth reduction: velocity tables at any y of a precomputed interval."""

    def __init__(self, interpolant: TrajectoryInterpolant, order: int, convention: str = 'expansion',
                 pole_guard: float = DEFAULT_POLE_GUARD):
        if convention not in CONVENTIONS:
            raise ConfigError(f"unknown velocity convention {convention!r}")
        if not 0 <= order <= interpolant.order:
            raise ConfigError(f"velocity order {order} exceeds the series order {interpolant.order}")
        self.interpolant = interpolant
        self.order = order
        self.convention = convention
        self.pole_guard = pole_guard

    @property
    def kappa(self):
        return self.interpolant.kappa

    @property
    def domain(self) -> Tuple[float, float]:
        return self.interpolant.domain

    def velocity_table(self, y: float) -> VelocityTable:
        state = self.interpolant(y)
        return velocities(state, self.kappa, self.order, self.convention, self.pole_guard)


def hodograph_lhs(times: TimesVector, y: float, reduction: Reduction) -> complex:
    """t_0 phi_0 + sum t_k phi_k + sum tbar_k psi_k at y."""
    if times.K > reduction.order:
        raise DomainError(f"times carry K = {times.K} but the reduction has velocities up to {reduction.order}")
    table = reduction.velocity_table(y)
    hol = times.holomorphic()
    anti = times.antiholomorphic()
    value = sum(hol[k] * table.phi[k] for k in range(times.K + 1))
    return value + sum(anti[k] * table.psi[k] for k in range(times.K + 1))


def hodograph_residual(times: TimesVector, y: float, phi: ProfileFunction, reduction: Reduction) -> complex:
    return hodograph_lhs(times, y, reduction) - phi(y)


def scan_bracket(times: TimesVector, phi: ProfileFunction, reduction: Reduction,
                 bracket: Tuple[float, float], points: int = SCAN_POINTS) -> List[Tuple[float, float]]:
    """Re(residual) on an even grid over the bracket."""
    return [(float(y), hodograph_residual(times, y, phi, reduction).real)
            for y in np.linspace(bracket[0], bracket[1], points)]


def sign_changes(scan: Sequence[Tuple[float, float]]) -> int:
    return sum(1 for (_, a), (_, b) in zip(scan, scan[1:]) if a * b < 0 or (a == 0 and b != 0))


@dataclass(frozen=True)
class HodographSolution:
    y: float
    residual: float
    imag_residual: float
    iterations: int


def _fd_slope(f, y: float, lo: float, hi: float, step: float) -> float:
    a = max(y - step, lo)
    b = min(y + step, hi)
    return (f(b) - f(a)) / (b - a)


def solve(times: TimesVector, phi: ProfileFunction, reduction: Reduction, bracket: Tuple[float, float],
          seed: Optional[float] = None, max_iter: int = NEWTON_MAX_ITER) -> HodographSolution:
    """Root y* of Re(hodograph_lhs - Phi) by safeguarded Newton.

    Args:
        times: Hierarchy times
        phi: Profile function
        reduction: Smooth reduction covering the bracket
        bracket: Search interval in y
        seed: Newton start; required when the bracket has no sign change
        max_iter: Iteration cap

    Returns:
        HodographSolution; the imaginary part of the residual is a diagnostic only
    """
    a, b = sorted(float(v) for v in bracket)
    lo_dom, hi_dom = reduction.domain
    if a < lo_dom or b > hi_dom:
        raise RangeError(f"bracket [{a:g}, {b:g}] leaves the reduction interval [{lo_dom:g}, {hi_dom:g}]")

    def f(y: float) -> float:
        return hodograph_residual(times, y, phi, reduction).real

    fa, fb = f(a), f(b)
    bracketed = fa * fb <= 0
    if not bracketed and seed is None:
        scan = scan_bracket(times, phi, reduction, (a, b))
        raise NoBracketError(f"Re(residual) does not change sign on [{a:g}, {b:g}] and no seed was given", scan)

    if bracketed:
        neg, pos = (a, b) if fa <= 0 else (b, a)
        x = seed if seed is not None and a <= seed <= b else 0.5 * (a + b)
    else:
        x = float(seed)
        if not lo_dom <= x <= hi_dom:
            raise RangeError(f"seed {x:g} is outside the reduction interval")

    for iteration in range(1, max_iter + 1):
        fx = f(x)
        if fx == 0:
            break
        if bracketed:
            if fx < 0:
                neg = x
            else:
                pos = x
        slope = _fd_slope(f, x, lo_dom, hi_dom, NEWTON_FD_STEP * (1.0 + abs(x)))
        candidate = x - fx / slope if slope != 0 and math.isfinite(slope) else None
        if bracketed and (candidate is None or not min(neg, pos) <= candidate <= max(neg, pos)):
            candidate = 0.5 * (neg + pos)
        elif candidate is None or not lo_dom <= candidate <= hi_dom:
            raise MaxIterError(f"Newton left the reduction interval at iteration {iteration}")
        logging.debug(f"Newton iteration {iteration}: y = {candidate:.17g}, residual = {fx:.3e}")
        step = abs(candidate - x)
        x = candidate
        if step <= ROOT_XTOL * (1.0 + abs(x)):
            break
    else:
        raise MaxIterError(f"hodograph solve did not converge within {max_iter} iterations")

    value = hodograph_residual(times, x, phi, reduction)
    if abs(value.real) >= ROOT_RESIDUAL_TOL:
        raise MaxIterError(f"hodograph solve stalled at y = {x:.17g} with residual {value.real:.3e}")
    if abs(value.imag) > ROOT_RESIDUAL_TOL:
        logging.debug(f"Imaginary hodograph residual {value.imag:.3e} at y = {x:.17g}")
    return HodographSolution(y=x, residual=value.real, imag_residual=value.imag, iterations=iteration)


def wirtinger_derivative(times: TimesVector, coordinate: Coordinate, h: float, solve_at) -> complex:
    """d y / d coordinate = (d/dRe - i d/dIm) / 2 by centred differences."""
    d_re = (solve_at(times.perturbed(coordinate, h)) - solve_at(times.perturbed(coordinate, -h))) / (2 * h)
    d_im = (solve_at(times.perturbed(coordinate, 1j * h)) - solve_at(times.perturbed(coordinate, -1j * h))) / (2 * h)
    return 0.5 * (d_re - 1j * d_im)


def times_grid(base: TimesVector, axes: Sequence[Coordinate], size: int, spacing: float) -> List[TimesVector]:
    """Grid of size**len(axes) nodes moving the real parts of holomorphic coordinates.

    When base.tbar is implicit the conjugates move along with them.
    """
    for kind, k in axes:
        if kind != 't' or k > base.K:
            raise ConfigError(f"grid axis {coordinate_name((kind, k))} is not a holomorphic time t0..t{base.K}")
    offsets = [(i - (size - 1) / 2) * spacing for i in range(size)]
    nodes = []
    for deltas in itertools.product(offsets, repeat=len(axes)):
        hol = list(base.holomorphic())
        for (_, k), delta in zip(axes, deltas):
            hol[k] += delta
        nodes.append(TimesVector(hol[0], tuple(hol[1:]), base.tbar))
    return nodes


@dataclass
class NodeDerivatives:
    y: float
    derivatives: Dict[Coordinate, complex]
    table: VelocityTable


def _node_derivatives(times: TimesVector, y_star: float, h: float, phi: ProfileFunction,
                      reduction: Reduction, bracket: Tuple[float, float]) -> NodeDerivatives:
    def solve_at(t: TimesVector) -> float:
        return solve(t, phi, reduction, bracket, seed=y_star).y

    derivatives = {c: wirtinger_derivative(times, c, h, solve_at) for c in times.coordinates()}
    return NodeDerivatives(y=y_star, derivatives=derivatives, table=reduction.velocity_table(y_star))


def equation_residuals(node: NodeDerivatives, K: int,
                       pole_guard: float = DEFAULT_POLE_GUARD) -> Dict[str, float]:
    """Hydrodynamic equations at one node, normalized by |dy/dt_0|."""
    d0 = node.derivatives[('t', 0)]
    norm = abs(d0)
    table = node.table
    residuals = {}
    for k in range(1, K + 1):
        residuals[f"flow_t{k}"] = abs(node.derivatives[('t', k)] - table.phi[k] * d0) / norm
    for k in range(K + 1):
        residuals[f"flow_tbar{k}"] = abs(node.derivatives[('tbar', k)] - table.psi[k] * d0) / norm
    # dy/dtbar_0 = -S'(xi_bar)/S'(xi) dy/dt_0, with S' from the theta_1 theta_4 closed form
    tau = ModularParam(table.tau)
    ratio = (s_prime(ModularPoint(table.xi_bar, tau), "closed_form", pole_guard)
             / s_prime(ModularPoint(table.xi, tau), "closed_form", pole_guard))
    residuals['tbar0_closure'] = abs(node.derivatives[('tbar', 0)] + ratio * d0) / norm
    return residuals


def _implicit_gradient(times: TimesVector, coordinate: Coordinate, phi: ProfileFunction,
                       reduction: Reduction, bracket: Tuple[float, float], y_seed: float) -> complex:
    """g = dy/dcoordinate = -a / (2 F_y) from the implicit-function theorem."""
    y = solve(times, phi, reduction, bracket, seed=y_seed).y
    table = reduction.velocity_table(y)
    kind, k = coordinate
    a = table.phi[k] if kind == 't' else table.psi[k]
    lo, hi = reduction.domain

    def f(v: float) -> float:
        return hodograph_residual(times, v, phi, reduction).real

    slope = _fd_slope(f, y, lo, hi, GRADIENT_FD_STEP * (1.0 + abs(y)))
    return -a / (2.0 * slope)


def cross_derivative_residuals(times: TimesVector, y_star: float, h: float, phi: ProfileFunction,
                               reduction: Reduction, bracket: Tuple[float, float]) -> Dict[str, float]:
    """d_j g_k against d_k g_j for holomorphic coordinates j < k."""
    residuals = {}
    coordinates = [('t', k) for k in range(times.K + 1)]
    for i, cj in enumerate(coordinates):
        for ck in coordinates[i + 1:]:
            def gk(t: TimesVector, c=ck) -> complex:
                return _implicit_gradient(t, c, phi, reduction, bracket, y_star)

            def gj(t: TimesVector, c=cj) -> complex:
                return _implicit_gradient(t, c, phi, reduction, bracket, y_star)

            dj_gk = wirtinger_derivative(times, cj, h, gk)
            dk_gj = wirtinger_derivative(times, ck, h, gj)
            scale = max(abs(dj_gk), abs(dk_gj), 1e-300)
            residuals[f"cross_{coordinate_name(cj)}_{coordinate_name(ck)}"] = abs(dj_gk - dk_gj) / scale
    return residuals


@dataclass
class GridNodeResult:
    times: TimesVector
    solution: HodographSolution
    residuals: Dict[str, float]
    refined: Dict[str, float]


def hydrodynamic_residuals(grid: Iterable[TimesVector], phi: ProfileFunction, reduction: Reduction,
                           bracket: Tuple[float, float], h: float, tolerance: float,
                           seed: Optional[float] = None, cross: bool = True,
                           progress=None) -> Tuple[ResidualReport, List[GridNodeResult]]:
    """Solve at every node and check the hydrodynamic equations by finite differences.

    Residuals are computed at steps h and h/2; the observed order is
    log2(max residual at h / max residual at h/2). Each equation passes when
    its maximum at h stays below tolerance * h**2.
    """
    nodes: List[GridNodeResult] = []
    grid = list(grid)
    for index, times in enumerate(grid):
        solution = solve(times, phi, reduction, bracket, seed=seed)
        coarse = _node_derivatives(times, solution.y, h, phi, reduction, bracket)
        fine = _node_derivatives(times, solution.y, h / 2, phi, reduction, bracket)
        residuals = equation_residuals(coarse, times.K, reduction.pole_guard)
        refined = equation_residuals(fine, times.K, reduction.pole_guard)
        if cross and times.K >= 1:
            residuals.update(cross_derivative_residuals(times, solution.y, h, phi, reduction, bracket))
            refined.update(cross_derivative_residuals(times, solution.y, h / 2, phi, reduction, bracket))
        nodes.append(GridNodeResult(times, solution, residuals, refined))
        if progress is not None:
            progress.update(index + 1)

    results = []
    orders = {}
    for name in nodes[0].residuals:
        coarse_values = [n.residuals[name] for n in nodes]
        fine_values = [n.refined[name] for n in nodes]
        coarse_max, fine_max = max(coarse_values), max(fine_values)
        orders[name] = math.log2(coarse_max / fine_max) if fine_max > 0 and coarse_max > 0 else float('nan')
        results.append(IdentityResult(
            name=name,
            attempted=len(nodes),
            rejected=0,
            max_residual=coarse_max,
            mean_residual=min(math.fsum(coarse_values) / len(coarse_values), coarse_max),
            tolerance=tolerance * h * h,
        ))
    metadata = {
        'h': h,
        'orders': orders,
        'max_imag_residual': max(abs(n.solution.imag_residual) for n in nodes),
    }
    logging.debug(f"Hydrodynamic residual orders: {orders}")
    return ResidualReport(results, metadata), nodes
