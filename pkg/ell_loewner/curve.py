"""Uniformized elliptic spectral curve.

f = theta_4(u)/theta_1(u), g = theta_4(u+eta)/theta_1(u+eta), P = fg, W = f/g,
with real coefficients R, C determined by eta and a purely imaginary tau.
"""
import cmath
import logging
import math
from dataclasses import dataclass
from typing import Dict

from .constants import DEFAULT_POLE_GUARD, DEGENERATE_TOL, REALITY_TOL
from .elliptic import normalized_residual, s_eval
from .errors import DegenerateError, DomainError, RealityError
from .theta import ModularParam, ModularPoint, guard, theta_constants, theta_derivatives


def _theta(a: int, u: complex, tau: ModularParam) -> complex:
    return theta_derivatives(a, u, tau, 0)[0]


def _real(value: complex, name: str) -> float:
    if abs(value.imag) >= REALITY_TOL * max(1.0, abs(value.real)):
        raise RealityError(f"{name} = {value} has a non-negligible imaginary part")
    return value.real


@dataclass(frozen=True)
class CurveParams:
    eta: float
    tau: ModularParam
    R: float
    C: float


@dataclass(frozen=True)
class CurvePointValues:
    u: complex
    f: complex
    g: complex
    P: complex
    W: complex


def curve_params(eta: float, tau: ModularParam, pole_guard: float = DEFAULT_POLE_GUARD) -> CurveParams:
    """R and C of the curve W + 1/W = R^2 (P + 1/P) + C.

    Args:
        eta: Real point on the curve
        tau: Purely imaginary modular parameter
        pole_guard: Minimum distance of eta from the theta_4 zero lattice

    Returns:
        CurveParams with real R and C
    """
    if not tau.purely_imaginary:
        raise DomainError(f"curve parameters need a purely imaginary tau, got {tau.tau}")
    eta = float(eta)
    if not math.isfinite(eta):
        raise DomainError(f"eta must be finite, got {eta}")
    guard(4, eta, tau, pole_guard)
    th2, th3, th4 = theta_constants(tau)
    t1, t2, t3, t4 = (_theta(a, eta, tau) for a in (1, 2, 3, 4))
    R = _real(t1 / t4, "R")
    C = _real(2.0 * th4 ** 2 * t2 * t3 / (t4 ** 2 * th2 * th3), "C")
    logging.debug(f"curve params at eta={eta:g}, y={tau.y:g}: R={R:.15g}, C={C:.15g}")
    return CurveParams(eta=eta, tau=tau, R=R, C=C)


def curve_point(u: complex, params: CurveParams, pole_guard: float = DEFAULT_POLE_GUARD) -> CurvePointValues:
    """f, g, P, W at u."""
    tau = params.tau
    u = complex(u)
    guard(1, u, tau, pole_guard)
    guard(1, u + params.eta, tau, pole_guard)
    f = _theta(4, u, tau) / _theta(1, u, tau)
    g = _theta(4, u + params.eta, tau) / _theta(1, u + params.eta, tau)
    if abs(g) < DEGENERATE_TOL:
        raise DegenerateError(f"g({u:.6g}) = {g:.3g} vanishes; W = f/g is undefined")
    return CurvePointValues(u=u, f=f, g=g, P=f * g, W=f / g)


def _require_nonzero(value: complex, name: str) -> None:
    if abs(value) < DEGENERATE_TOL:
        raise DegenerateError(f"{name} = {value:.3g} is below {DEGENERATE_TOL:g}")


def t3_residual(values: CurvePointValues, params: CurveParams) -> float:
    """W + 1/W = R^2 (P + 1/P) + C."""
    _require_nonzero(values.W, "W")
    _require_nonzero(values.P, "P")
    r2 = params.R ** 2
    terms = (values.W, 1 / values.W, r2 * values.P, r2 / values.P, params.C)
    lhs = values.W + 1 / values.W
    rhs = r2 * (values.P + 1 / values.P) + params.C
    return normalized_residual(lhs, rhs, *terms)


def t6_residual(values: CurvePointValues, params: CurveParams) -> float:
    """R^2 (f^2 g^2 + 1) + C f g = f^2 + g^2."""
    f, g = values.f, values.g
    r2 = params.R ** 2
    terms = (r2 * f * f * g * g, r2, params.C * f * g, f * f, g * g)
    lhs = r2 * (f * f * g * g + 1) + params.C * f * g
    return normalized_residual(lhs, f * f + g * g, *terms)


def swap_residual(u: complex, params: CurveParams, pole_guard: float = DEFAULT_POLE_GUARD) -> float:
    """u -> -u - eta sends (f, g) to (-g, -f) and keeps the curve equation."""
    here = curve_point(u, params, pole_guard)
    there = curve_point(-complex(u) - params.eta, params, pole_guard)
    return max(
        normalized_residual(there.f, -here.g),
        normalized_residual(there.g, -here.f),
        t6_residual(there, params),
    )


def exponential_form_residual(values: CurvePointValues, params: CurveParams,
                              pole_guard: float = DEFAULT_POLE_GUARD) -> float:
    """f = exp(-S(u)) and g = exp(-S(u + eta))."""
    tau = params.tau
    s_u = s_eval(ModularPoint(values.u, tau), pole_guard).s
    s_ue = s_eval(ModularPoint(values.u + params.eta, tau), pole_guard).s
    return max(
        normalized_residual(values.f, cmath.exp(-s_u)),
        normalized_residual(values.g, cmath.exp(-s_ue)),
    )


def curve_identity_residuals(params: CurveParams, pole_guard: float = DEFAULT_POLE_GUARD) -> Dict[str, float]:
    """R = exp(S(eta)) and C / R = 2 S'(eta) / (pi theta_2(0) theta_3(0))."""
    tau = params.tau
    value = s_eval(ModularPoint(params.eta, tau), pole_guard)
    th2, th3, _ = theta_constants(tau)
    return {
        "r_identity": normalized_residual(params.R, cmath.exp(value.s)),
        "c_identity": normalized_residual(params.C / params.R,
                                          2.0 * value.s_prime / (math.pi * th2 * th3)),
    }


def quotient_identity_residuals(u1: complex, u2: complex, params: CurveParams, mixed: bool = False,
                                pole_guard: float = DEFAULT_POLE_GUARD) -> float:
    """Residual of the two quotient identities behind the curve's Hirota form.

    Unmixed: (W1 - W2) / (1 - P1 P2) against
    R * theta_1(u1+eta) theta_1(u2+eta) / (theta_4(u1+eta) theta_4(u2+eta)) * theta_1(u1-u2)/theta_4(u1-u2).
    Mixed: u2 plays the role of the conjugate point and the identity reads
    (1 - W1 W2) / (1 - P1 P2) with theta_1/theta_4 evaluated at u1 + u2 + eta.
    """
    tau, eta = params.tau, params.eta
    u1, u2 = complex(u1), complex(u2)
    if not mixed and u1 == u2:
        raise DegenerateError("u1 == u2: both sides of the quotient identity vanish identically")
    first = curve_point(u1, params, pole_guard)
    second = curve_point(u2, params, pole_guard)
    denominator = 1 - first.P * second.P
    if abs(denominator) < DEGENERATE_TOL:
        raise DegenerateError(f"|1 - P1 P2| = {abs(denominator):.3g} is below {DEGENERATE_TOL:g}")
    if mixed:
        numerator = 1 - first.W * second.W
        argument = u1 + u2 + eta
    else:
        numerator = first.W - second.W
        argument = u1 - u2
    for w in (u1 + eta, u2 + eta, argument):
        guard(4, w, tau, pole_guard)
    lhs = numerator / denominator
    rhs = (_theta(1, eta, tau) / _theta(4, eta, tau)
           * _theta(1, u1 + eta, tau) * _theta(1, u2 + eta, tau)
           / (_theta(4, u1 + eta, tau) * _theta(4, u2 + eta, tau))
           * _theta(1, argument, tau) / _theta(4, argument, tau))
    return normalized_residual(lhs, rhs)


def rho_from_c1(c1: complex, tau: ModularParam) -> complex:
    """rho = pi c_1 theta_2(0) theta_3(0)."""
    th2, th3, _ = theta_constants(tau)
    return math.pi * complex(c1) * th2 * th3
