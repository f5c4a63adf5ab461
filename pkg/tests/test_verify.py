"""Tests for the randomized identity suites."""
import os
import unittest
from unittest.mock import MagicMock, patch

from ell_loewner.constants import MAX_RESAMPLE_ATTEMPTS, THREADS_ENV_VAR, VERIFY_SUITES
from ell_loewner.errors import ConfigError, NumericalError
from ell_loewner.theta import ModularParam
from ell_loewner.verify import SUITES, Suite, evaluate_ss2, run_suite, run_verify, worker_count


class TestSuites(unittest.TestCase):
    """Test cases for each identity suite on a small seeded sample."""

    def test_every_suite_passes(self):
        for name in VERIFY_SUITES:
            with self.subTest(suite=name):
                report = run_suite(name, 12, seed=7, threads=2)
                self.assertTrue(report.passed, report.summary())
                self.assertTrue(all(r.name.startswith(f"{name}.") for r in report.results))
                self.assertEqual(report.metadata['seed'], 7)

    def test_reduction_suite_at_acceptance_scale(self):
        for samples, seed in ((1000, 7), (200, 1)):
            with self.subTest(seed=seed):
                report = run_suite('ap', samples, seed=seed, tolerance=1e-10, threads=4)
                self.assertTrue(report.passed, report.summary())
                names = [r.name for r in report.results]
                self.assertIn('ap.chain_holomorphic', names)
                self.assertIn('ap.chain_antiholomorphic', names)

    def test_deterministic_across_thread_counts(self):
        serial = run_suite('ss3', 16, seed=11, threads=1)
        parallel = run_suite('ss3', 16, seed=11, threads=4)
        self.assertEqual(serial.to_dict(), parallel.to_dict())

    def test_seed_changes_samples(self):
        first = run_suite('landen', 8, seed=1, threads=1)
        second = run_suite('landen', 8, seed=2, threads=1)
        self.assertNotEqual(first.results[0].max_residual, second.results[0].max_residual)

    def test_printed_form_is_rejected(self):
        for name in ('ss2', 'ap'):
            with self.subTest(suite=name):
                report = run_suite(name, 12, seed=7, s_prime_form='printed', threads=2)
                self.assertFalse(report.passed)

    def test_printed_form_is_a_diagnostic(self):
        report = run_suite('sprime', 12, seed=7, threads=2)
        self.assertEqual([r.name for r in report.results], ['sprime.closed_form'])
        self.assertGreater(report.metadata['sprime_diagnostics']['printed_form'], 1e-6)

    def test_tolerance_override(self):
        report = run_suite('ss2', 8, seed=7, tolerance=1e-30, threads=1)
        self.assertFalse(report.passed)
        self.assertEqual(report.results[0].tolerance, 1e-30)


class TestResampling(unittest.TestCase):
    """Test cases for pole-guard rejection."""

    def test_planted_pole_is_redrawn(self):
        calls = []

        def sampler(rng, band):
            calls.append(band)
            u = 0j if len(calls) == 1 else 0.2 + 0.1j
            return {'tau': ModularParam(1j), 'u': u}

        with patch.dict(SUITES, {'ss2': Suite('ss2', sampler, evaluate_ss2)}):
            report = run_suite('ss2', 1, seed=3, threads=1)
        result = report.results[0]
        self.assertEqual(result.rejected, 1)
        self.assertEqual(result.attempted, 2)
        self.assertTrue(report.passed)

    def test_persistent_pole_is_numerical_failure(self):
        def sampler(rng, band):
            return {'tau': ModularParam(1j), 'u': 1e-9 + 0j}

        counter = MagicMock(side_effect=evaluate_ss2)
        with patch.dict(SUITES, {'ss2': Suite('ss2', sampler, counter)}):
            with self.assertRaises(NumericalError):
                run_suite('ss2', 1, seed=3, threads=1)
        self.assertEqual(counter.call_count, MAX_RESAMPLE_ATTEMPTS)


class TestRunner(unittest.TestCase):
    """Test cases for workers, merging and progress."""

    def test_worker_count(self):
        self.assertEqual(worker_count(3), 3)
        with patch.dict(os.environ, {THREADS_ENV_VAR: '2'}):
            self.assertEqual(worker_count(), 2)
        with patch.dict(os.environ, {THREADS_ENV_VAR: 'many'}):
            with self.assertRaises(ConfigError):
                worker_count()
        with self.assertRaises(ConfigError):
            worker_count(0)

    def test_invalid_requests(self):
        with self.assertRaises(ConfigError):
            run_suite('ss9', 5, seed=1)
        with self.assertRaises(ConfigError):
            run_suite('ss2', 0, seed=1)

    def test_run_verify_merges(self):
        progress = MagicMock()
        report = run_verify(['theta', 'landen'], 5, seed=2, threads=1, progress=progress)
        self.assertEqual(progress.advance.call_count, 10)
        self.assertEqual([entry['suite'] for entry in report.metadata['suites']], ['theta', 'landen'])
        self.assertTrue(any(r.name.startswith('theta.') for r in report.results))
        self.assertTrue(any(r.name.startswith('landen.') for r in report.results))
        self.assertTrue(report.passed, report.summary())


if __name__ == '__main__':
    unittest.main()
