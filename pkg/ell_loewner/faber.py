"""Elliptic Faber coefficients and the velocity tables built from them.

B'_k(v) is k times the coefficient of z^-k in S(u(z) + v) for a Laurent tail
u(z) = c_1/z + ... + c_N/z^N. The constant term of that expansion is S(v);
B'_0(v) = S'(v) is a convention and is stored separately.
"""
import json
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np

from .constants import DEFAULT_POLE_GUARD, DEGENERATE_TOL, MAX_SERIES_ORDER
from .driving import DrivingFunction
from .elliptic import s_derivatives, s_eval, s_prime
from .errors import DegenerateError, DomainError
from .formatter import complex_to_json
from .loewner import ReductionState, xi_pair
from .series import LaurentTailSeries, compose
from .theta import ModularParam, ModularPoint

CONVENTIONS = ('expansion', 'generating')


@dataclass(frozen=True)
class FaberCoefficients:
    order: int
    values: Tuple[complex, ...]
    v: complex
    b0: complex
    constant: complex

    def __getitem__(self, k: int) -> complex:
        if k == 0:
            return self.b0
        if not 1 <= k <= self.order:
            raise IndexError(f"Faber coefficient {k} is outside 0..{self.order}")
        return self.values[k - 1]


def _taylor(derivatives, count: int):
    return [derivatives[m] / math.factorial(m + 1) for m in range(count)]


def faber_coeffs(series: LaurentTailSeries, v: complex, tau: ModularParam,
                 pole_guard: float = DEFAULT_POLE_GUARD) -> FaberCoefficients:
    """B'_1(v)..B'_N(v) by truncated Taylor composition.

    Args:
        series: Laurent tail u(z); N is its order
        v: Base point, pole-guarded
        tau: Modular parameter

    Returns:
        FaberCoefficients with B'_0 = S'(v) and constant term S(v)
    """
    order = series.order
    if order > MAX_SERIES_ORDER:
        raise DomainError(f"series order {order} exceeds the cap {MAX_SERIES_ORDER}")
    base = s_eval(ModularPoint(v, tau), pole_guard)
    derivatives = s_derivatives(v, tau, order, pole_guard)
    composed = compose(_taylor(derivatives, order), series.padded(), order)
    values = tuple(k * composed[k] for k in range(1, order + 1))
    return FaberCoefficients(order=order, values=values, v=complex(v), b0=base.s_prime, constant=base.s)


def generating_coeffs(series: LaurentTailSeries, v: complex, tau: ModularParam,
                      pole_guard: float = DEFAULT_POLE_GUARD) -> np.ndarray:
    """Coefficients of S'(u(z) + v) in z^-k, k = 0..N (entry 0 is S'(v))."""
    order = series.order
    derivatives = s_derivatives(v, tau, order + 1, pole_guard)
    taylor = [derivatives[m] / math.factorial(m) for m in range(1, order + 1)]
    composed = compose(taylor, series.padded(), order)
    composed[0] = derivatives[0]
    return composed


@dataclass(frozen=True)
class VelocityTable:
    order: int
    phi: Tuple[complex, ...]
    psi: Tuple[complex, ...]
    xi: complex
    xi_bar: complex
    tau: complex
    convention: str = 'expansion'


def velocities(state: ReductionState, kappa: DrivingFunction, order: Optional[int] = None,
               convention: str = 'expansion', pole_guard: float = DEFAULT_POLE_GUARD) -> VelocityTable:
    """phi_k = B'_k(xi)/S'(xi) and psi_k = -Bbar'_k(xi_bar)/S'(xi), k = 0..order."""
    if convention not in CONVENTIONS:
        raise DomainError(f"unknown velocity convention {convention!r}; expected one of {CONVENTIONS}")
    order = state.series.order if order is None else order
    if not 0 <= order <= state.series.order:
        raise DomainError(f"velocity order {order} is outside 0..{state.series.order}")
    series = state.series.truncated(max(order, 1))
    series_bar = state.series_bar.truncated(max(order, 1))
    tau = state.tau
    xi, xi_bar = xi_pair(state.eta, kappa(state.y))
    sp_xi = s_prime(ModularPoint(xi, tau), pole_guard=pole_guard)
    if abs(sp_xi) < DEGENERATE_TOL:
        raise DegenerateError(f"|S'(xi)| = {abs(sp_xi):.3g} is below {DEGENERATE_TOL:g} at y = {state.y:g}")

    if convention == 'expansion':
        b = faber_coeffs(series, xi, tau, pole_guard)
        b_bar = faber_coeffs(series_bar, xi_bar, tau, pole_guard)
        numerators = [b[k] for k in range(order + 1)]
        numerators_bar = [b_bar[k] for k in range(order + 1)]
    else:
        g = generating_coeffs(series, xi, tau, pole_guard)
        g_bar = generating_coeffs(series_bar, xi_bar, tau, pole_guard)
        numerators = [g[0]] + [k * g[k] for k in range(1, order + 1)]
        numerators_bar = [g_bar[0]] + [k * g_bar[k] for k in range(1, order + 1)]

    phi = tuple(n / sp_xi for n in numerators)
    psi = tuple(-n / sp_xi for n in numerators_bar)
    logging.debug(f"Velocities at y={state.y:g}: phi_1={phi[1] if order else None}, psi_0={psi[0]}")
    return VelocityTable(order=order, phi=phi, psi=psi, xi=xi, xi_bar=xi_bar,
                         tau=tau.tau, convention=convention)


def velocity_table_to_dict(table: VelocityTable) -> Dict[str, Any]:
    return {
        'order': table.order,
        'convention': table.convention,
        'xi': complex_to_json(table.xi),
        'xi_bar': complex_to_json(table.xi_bar),
        'tau': complex_to_json(table.tau),
        'velocities': {
            str(k): {'phi': complex_to_json(table.phi[k]), 'psi': complex_to_json(table.psi[k])}
            for k in range(table.order + 1)
        },
    }


def velocity_table_to_json(table: VelocityTable) -> str:
    return json.dumps(velocity_table_to_dict(table), indent=2)
