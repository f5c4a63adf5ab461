"""Randomized identity suites.

Each suite draws samples from a seeded generator, evaluates a dictionary of
normalized residuals per sample and aggregates them into a ResidualReport.
Samples that land within the pole guard or hit a degenerate denominator are
rejected and redrawn from the same per-sample stream.
"""
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from .constants import (
    DEFAULT_ETA_WINDOW,
    DEFAULT_MAX_WORKERS,
    DEFAULT_SAMPLE_GUARD,
    DEFAULT_TAU_BAND,
    MAX_RESAMPLE_ATTEMPTS,
    REDUCTION_ETA_WINDOW,
    SUITE_TOLERANCES,
    THREADS_ENV_VAR,
    VERIFY_SUITES,
)
from .curve import (
    curve_identity_residuals,
    curve_params,
    curve_point,
    exponential_form_residual,
    quotient_identity_residuals,
    swap_residual,
    t3_residual,
    t6_residual,
)
from .elliptic import (
    identity_residual_ss2,
    identity_residual_ss3,
    landen_residual,
    s_prime_form_residuals,
)
from .errors import ConfigError, DegenerateError, NumericalError, PoleError
from .loewner import chain_rule_residuals, identity_residuals
from .report import ResidualAccumulator, ResidualReport
from .theta import ModularParam, ModularPoint, guard, theta_constants, theta_derivatives, theta_tau_derivative

Sample = Dict[str, object]
Residuals = Dict[str, float]


@dataclass(frozen=True)
class Suite:
    name: str
    sampler: Callable[[np.random.Generator, Tuple[float, float]], Sample]
    evaluate: Callable[[Sample, str, float], Residuals]
    diagnostics: FrozenSet[str] = frozenset()


def _y(rng: np.random.Generator, band: Tuple[float, float]) -> float:
    return float(rng.uniform(band[0], band[1]))


def _cell_point(rng: np.random.Generator, y: float) -> complex:
    return complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5 * y, 0.5 * y))


def _eta(rng: np.random.Generator, window: float = DEFAULT_ETA_WINDOW) -> float:
    return float(rng.uniform(window, 1.0 - window))


def _general_tau(rng: np.random.Generator, band: Tuple[float, float]) -> ModularParam:
    return ModularParam(complex(rng.uniform(-0.5, 0.5), _y(rng, band)))


def sample_general(rng: np.random.Generator, band: Tuple[float, float]) -> Sample:
    tau = _general_tau(rng, band)
    return {'tau': tau, 'u': _cell_point(rng, tau.y), 'a': int(rng.integers(1, 5))}


def sample_pair(rng: np.random.Generator, band: Tuple[float, float]) -> Sample:
    tau = _general_tau(rng, band)
    return {'tau': tau, 'x1': _cell_point(rng, tau.y), 'x2': _cell_point(rng, tau.y)}


def sample_curve(rng: np.random.Generator, band: Tuple[float, float]) -> Sample:
    tau = ModularParam.imaginary(_y(rng, band))
    return {'tau': tau, 'eta': _eta(rng), 'u1': _cell_point(rng, tau.y), 'u2': _cell_point(rng, tau.y)}


def sample_reduction(rng: np.random.Generator, band: Tuple[float, float]) -> Sample:
    tau = ModularParam.imaginary(_y(rng, band))
    return {
        'tau': tau,
        'eta': _eta(rng, REDUCTION_ETA_WINDOW),
        'kappa': float(rng.uniform(-0.4 * tau.y, 0.4 * tau.y)),
        'u1': _cell_point(rng, tau.y),
        'u2': _cell_point(rng, tau.y),
        'ubar1': _cell_point(rng, tau.y),
    }


def _relative(value: complex, reference: complex, scale: float) -> float:
    return abs(value - reference) / max(scale, 1e-300)


def evaluate_theta(sample: Sample, s_prime_form: str, pole_guard: float) -> Residuals:
    """Parity, quasi-periodicity, heat, conjugation and theta_1'(0)."""
    tau, u, a = sample['tau'], sample['u'], sample['a']
    guard(a, u, tau, pole_guard)
    value, _, second = theta_derivatives(a, u, tau, 2)
    parity_sign = -1 if a == 1 else 1
    one_sign = -1 if a in (1, 2) else 1
    tau_sign = -1 if a in (1, 4) else 1
    t = tau.tau
    shifted_one = theta_derivatives(a, u + 1, tau)[0]
    shifted_tau = theta_derivatives(a, u + t, tau)[0]
    factor = tau_sign * np.exp(-1j * math.pi * t - 2j * math.pi * u)
    mirrored = ModularParam(-t.conjugate())
    conj_value = theta_derivatives(a, u.conjugate(), mirrored)[0]
    th2, th3, th4 = theta_constants(tau)
    slope = theta_derivatives(1, 0j, tau, 1)[1]
    scale = abs(value)
    return {
        'parity': _relative(theta_derivatives(a, -u, tau)[0], parity_sign * value, scale),
        'quasi_periodicity': max(_relative(shifted_one, one_sign * value, scale),
                                 _relative(shifted_tau, factor * value, abs(shifted_tau))),
        'heat': _relative(4j * math.pi * theta_tau_derivative(a, ModularPoint(u, tau)), second,
                          abs(second) + scale),
        'conjugation': _relative(conj_value, value.conjugate(), scale),
        'theta1prime': _relative(slope, math.pi * th2 * th3 * th4, abs(slope)),
    }


def evaluate_sprime(sample: Sample, s_prime_form: str, pole_guard: float) -> Residuals:
    residuals = s_prime_form_residuals(ModularPoint(sample['u'], sample['tau']), pole_guard)
    return {'closed_form': residuals['closed_form'], 'printed_form': residuals['printed']}


def evaluate_ss2(sample: Sample, s_prime_form: str, pole_guard: float) -> Residuals:
    return {'s_dot': identity_residual_ss2(ModularPoint(sample['u'], sample['tau']), s_prime_form, pole_guard)}


def evaluate_ss3(sample: Sample, s_prime_form: str, pole_guard: float) -> Residuals:
    return {'addition': identity_residual_ss3(sample['x1'], sample['x2'], sample['tau'], s_prime_form, pole_guard)}


def evaluate_landen(sample: Sample, s_prime_form: str, pole_guard: float) -> Residuals:
    return {'landen': landen_residual(ModularPoint(sample['u'], sample['tau']), pole_guard)}


def evaluate_curve(sample: Sample, s_prime_form: str, pole_guard: float) -> Residuals:
    params = curve_params(sample['eta'], sample['tau'], pole_guard)
    values = curve_point(sample['u1'], params, pole_guard)
    residuals = {
        't3': t3_residual(values, params),
        't6': t6_residual(values, params),
        'swap': swap_residual(sample['u1'], params, pole_guard),
        'exponential_form': exponential_form_residual(values, params, pole_guard),
    }
    residuals.update(curve_identity_residuals(params, pole_guard))
    return residuals


def evaluate_quotient(sample: Sample, s_prime_form: str, pole_guard: float) -> Residuals:
    params = curve_params(sample['eta'], sample['tau'], pole_guard)
    u1, u2 = sample['u1'], sample['u2']
    return {
        'quotient': quotient_identity_residuals(u1, u2, params, False, pole_guard),
        'quotient_mixed': quotient_identity_residuals(u1, u2.conjugate(), params, True, pole_guard),
    }


def evaluate_reduction(sample: Sample, s_prime_form: str, pole_guard: float) -> Residuals:
    args = (sample['eta'], sample['kappa'])
    residuals = identity_residuals(*args, sample['u1'], sample['u2'], sample['ubar1'], sample['tau'],
                                   s_prime_form, pole_guard)
    residuals.update(chain_rule_residuals(*args, sample['u1'], sample['ubar1'], sample['tau'],
                                          s_prime_form, pole_guard))
    return residuals


SUITES: Dict[str, Suite] = {
    'theta': Suite('theta', sample_general, evaluate_theta),
    'sprime': Suite('sprime', sample_general, evaluate_sprime, frozenset({'printed_form'})),
    'ss2': Suite('ss2', sample_general, evaluate_ss2),
    'ss3': Suite('ss3', sample_pair, evaluate_ss3),
    'landen': Suite('landen', sample_general, evaluate_landen),
    'curve': Suite('curve', sample_curve, evaluate_curve),
    'quotient': Suite('quotient', sample_curve, evaluate_quotient),
    'ap': Suite('ap', sample_reduction, evaluate_reduction),
}


def worker_count(threads: Optional[int] = None) -> int:
    """Explicit value, else the environment variable, else the default."""
    if threads is None:
        raw = os.environ.get(THREADS_ENV_VAR)
        if raw is None:
            return DEFAULT_MAX_WORKERS
        try:
            threads = int(raw)
        except ValueError as e:
            raise ConfigError(f"{THREADS_ENV_VAR} must be an integer, got {raw!r}") from e
    if threads < 1:
        raise ConfigError(f"worker count must be >= 1, got {threads}")
    return threads


def _draw(suite: Suite, seed: int, index: int, band: Tuple[float, float], s_prime_form: str,
          pole_guard: float) -> Tuple[Residuals, int]:
    rng = np.random.default_rng([seed, VERIFY_SUITES.index(suite.name), index])
    rejected = 0
    for _ in range(MAX_RESAMPLE_ATTEMPTS):
        sample = suite.sampler(rng, band)
        try:
            return suite.evaluate(sample, s_prime_form, pole_guard), rejected
        except (PoleError, DegenerateError) as e:
            rejected += 1
            logging.debug(f"{suite.name} sample {index} rejected: {e}")
    raise NumericalError(
        f"{suite.name} sample {index}: {MAX_RESAMPLE_ATTEMPTS} consecutive draws hit the pole guard"
    )


def run_suite(name: str, samples: int, seed: int, tolerance: Optional[float] = None,
              s_prime_form: str = "log_derivative", pole_guard: float = DEFAULT_SAMPLE_GUARD,
              tau_band: Tuple[float, float] = DEFAULT_TAU_BAND, threads: Optional[int] = None,
              progress=None) -> ResidualReport:
    """Evaluate one suite on `samples` seeded draws.

    Args:
        name: Suite name (see VERIFY_SUITES)
        samples: Number of accepted samples
        seed: Master seed; sample i uses the stream (seed, suite, i)
        tolerance: Overrides the suite default
        s_prime_form: Form of S' used inside the identities
        pole_guard: Rejection radius around zero lattices
        tau_band: Range of Im tau
        threads: Worker cap (default from the environment)
        progress: Optional ProgressIndicator

    Returns:
        ResidualReport; results are assembled in sample order
    """
    if name not in SUITES:
        raise ConfigError(f"unknown suite {name!r}; expected one of {sorted(SUITES)}")
    if samples < 1:
        raise ConfigError(f"samples must be >= 1, got {samples}")
    suite = SUITES[name]
    tol = SUITE_TOLERANCES[name] if tolerance is None else tolerance

    def task(index: int) -> Tuple[Residuals, int]:
        outcome = _draw(suite, seed, index, tau_band, s_prime_form, pole_guard)
        if progress is not None:
            progress.advance()
        return outcome

    with ThreadPoolExecutor(max_workers=worker_count(threads)) as pool:
        outcomes = list(pool.map(task, range(samples)))

    accumulator = ResidualAccumulator()
    diagnostics: Dict[str, float] = {}
    for residuals, rejected in outcomes:
        accumulator.reject(rejected)
        accumulator.record({k: v for k, v in residuals.items() if k not in suite.diagnostics})
        for key in suite.diagnostics & residuals.keys():
            diagnostics[key] = max(diagnostics.get(key, 0.0), residuals[key])
    for key, value in diagnostics.items():
        if value > tol:
            logging.warning(f"{name}: diagnostic {key} reaches {value:.3e} (tolerance {tol:.1e})")

    metadata = {
        'suite': name,
        'samples': samples,
        'seed': seed,
        's_prime_form': s_prime_form,
        'tau_band': list(tau_band),
        f'{name}_diagnostics': diagnostics,
    }
    report = accumulator.build(tol, metadata)
    for result in report.results:
        result.name = f"{name}.{result.name}"
    return report


def run_verify(suites: Sequence[str], samples: int, seed: int, tolerance: Optional[float] = None,
               s_prime_form: str = "log_derivative", pole_guard: float = DEFAULT_SAMPLE_GUARD,
               tau_band: Tuple[float, float] = DEFAULT_TAU_BAND, threads: Optional[int] = None,
               progress=None) -> ResidualReport:
    """Run several suites and merge their reports."""
    report = ResidualReport(metadata={'seed': seed, 'samples': samples, 's_prime_form': s_prime_form})
    per_suite: List[Dict[str, object]] = []
    for name in suites:
        logging.debug(f"Running suite {name} with {samples} samples")
        suite_report = run_suite(name, samples, seed, tolerance, s_prime_form, pole_guard, tau_band,
                                 threads, progress)
        per_suite.append({'suite': name, 'passed': suite_report.passed,
                          'diagnostics': suite_report.metadata[f'{name}_diagnostics']})
        report = ResidualReport(report.results + suite_report.results, report.metadata)
    report.metadata['suites'] = per_suite
    return report
