import csv
import importlib
import io
import json
import os
import shutil
import tempfile
import unittest
from unittest.mock import patch

from ell_loewner.constants import (
    EXIT_IDENTITY_FAILURE,
    EXIT_INVALID_INPUT,
    EXIT_NUMERICAL_FAILURE,
    EXIT_OK,
)
from ell_loewner.errors import BlowUpError
from ell_loewner.main import main


class TestMain(unittest.TestCase):
    def setUp(self):
        """Set up test environment."""
        self.test_dir = tempfile.mkdtemp()
        self.old_cwd = os.getcwd()
        os.chdir(self.test_dir)

    def tearDown(self):
        """Clean up test environment."""
        os.chdir(self.old_cwd)
        shutil.rmtree(self.test_dir)

    def run_main(self, argv):
        with patch('sys.stdout', new_callable=io.StringIO) as stdout:
            code = main(argv)
        return code, stdout.getvalue()

    def write_config(self, name, data):
        with open(name, 'w') as f:
            json.dump(data, f)
        return name

    def read_csv(self, path):
        with open(path, newline='') as f:
            return list(csv.DictReader(f))

    def test_theta_value(self):
        """Test theta_3(0 | i)."""
        code, out = self.run_main(['theta', '--a', '3', '--u', '0', '--tau', '1i'])
        self.assertEqual(code, EXIT_OK)
        value = json.loads(out)
        self.assertAlmostEqual(value['re'], 1.0864348112133080, places=14)
        self.assertEqual(value['im'], 0.0)

    def test_theta_input_errors(self):
        """Test that bad arguments exit with the input error code."""
        for argv in (
            ['theta', '--a', '1', '--u', '0.2', '--tau', '0.01i'],
            ['theta', '--a', '1', '--u', 'abc', '--tau', '1i'],
            ['theta', '--a', '1', '--u', '0.2', '--tau', '1i', '--du', '5'],
            ['theta', '--a', '1', '--u', '1000i', '--tau', '1i'],
        ):
            with self.subTest(argv=argv):
                code, _ = self.run_main(argv)
                self.assertEqual(code, EXIT_INVALID_INPUT)

    def test_verify_requires_seed(self):
        """Test that verify refuses to sample without a seed."""
        code, _ = self.run_main(['verify', '--suite', 'ss2', '--samples', '3'])
        self.assertEqual(code, EXIT_INVALID_INPUT)
        self.assertFalse(os.path.exists('verify_report.json'))

    def test_verify_writes_report(self):
        """Test a small verify run."""
        code, out = self.run_main(['verify', '--suite', 'ss2,landen', '--samples', '5', '--seed', '3',
                                   '--output', 'report.json', '--threads', '1'])
        self.assertEqual(code, EXIT_OK)
        self.assertIn('ss2.s_dot', out)
        with open('report.json') as f:
            report = json.load(f)
        self.assertTrue(report['passed'])
        self.assertEqual(report['metadata']['seed'], 3)

    def test_verify_printed_form_fails(self):
        """Test that the printed S' form fails the S-dot identity."""
        code, _ = self.run_main(['verify', '--suite', 'ss2', '--samples', '5', '--seed', '3',
                                 '--s-prime-form', 'printed', '--output', 'report.json'])
        self.assertEqual(code, EXIT_IDENTITY_FAILURE)

    def test_verify_config_file(self):
        """Test that the command line overrides the configuration file."""
        path = self.write_config('verify.json', {'suites': ['landen'], 'samples': 4, 'seed': 1})
        code, _ = self.run_main(['verify', '--config', path, '--seed', '9', '--output', 'out.json'])
        self.assertEqual(code, EXIT_OK)
        with open('out.json') as f:
            self.assertEqual(json.load(f)['metadata']['seed'], 9)

    def loewner_config(self, **overrides):
        config = {
            'kappa': {'kind': 'sinusoid', 'offset': 0.1, 'amplitude': 0.05, 'frequency': 1.0},
            'y0': 1.5,
            'y_end': 1.0,
            'eta0': 0.8,
            'series': ['1', '0.1+0.05i'],
            'series_order': 2,
            'points': {'a': '3+1i', 'b': '-2+2.5i'},
            'samples': 5,
        }
        config.update(overrides)
        return self.write_config('loewner.json', config)

    def test_loewner_run(self):
        """Test trajectory and report files and their determinism."""
        path = self.loewner_config()
        code, _ = self.run_main(['loewner', '--config', path, '--output', 'first.csv', '--report', 'first.json'])
        self.assertEqual(code, EXIT_OK)
        code, _ = self.run_main(['loewner', '--config', path, '--output', 'second.csv', '--report', 'second.json'])
        self.assertEqual(code, EXIT_OK)
        with open('first.csv') as a, open('second.csv') as b:
            self.assertEqual(a.read(), b.read())
        rows = self.read_csv('first.csv')
        self.assertEqual(len(rows), 5)
        self.assertEqual(float(rows[0]['y']), 1.5)
        self.assertEqual(float(rows[-1]['y']), 1.0)
        self.assertIn('re_u_a', rows[0])
        with open('first.json') as f:
            metadata = json.load(f)['metadata']
        self.assertEqual(metadata['status'], 'completed')
        self.assertEqual(metadata['kappa']['kind'], 'sinusoid')

    def test_loewner_eta_one(self):
        """Test that eta = 1 stays put while every residual sample is rejected."""
        path = self.loewner_config(kappa={'kind': 'constant', 'value': 0.1}, eta0=1.0)
        code, _ = self.run_main(['loewner', '--config', path])
        self.assertEqual(code, EXIT_IDENTITY_FAILURE)
        for row in self.read_csv('trajectory.csv'):
            self.assertAlmostEqual(float(row['eta']), 1.0, places=12)

    def test_loewner_blow_up(self):
        """Test that a blow-up writes its report and exits with the numerical code."""
        path = self.loewner_config()
        error = BlowUpError("pole guard violated", y=0.7, argument=0.5j, last_good_y=0.71)
        with patch.object(importlib.import_module('ell_loewner.main'), 'integrate', side_effect=error):
            code, _ = self.run_main(['loewner', '--config', path])
        self.assertEqual(code, EXIT_NUMERICAL_FAILURE)
        with open('loewner_report.json') as f:
            report = json.load(f)
        self.assertFalse(report['passed'])
        self.assertEqual(report['metadata']['status'], 'blow_up')
        self.assertEqual(report['metadata']['last_good_y'], 0.71)
        self.assertFalse(os.path.exists('trajectory.csv'))

    def test_loewner_bad_config(self):
        """Test that an unknown key is an input error."""
        path = self.loewner_config(etta=1.0)
        code, _ = self.run_main(['loewner', '--config', path])
        self.assertEqual(code, EXIT_INVALID_INPUT)

    def test_faber_table(self):
        """Test the velocity table on stdout and in a file."""
        argv = ['faber', '--tau', '1.2i', '--eta', '0.8', '--kappa', '0.1', '--coeffs', '1,0.2+0.1i']
        code, out = self.run_main(argv)
        self.assertEqual(code, EXIT_OK)
        table = json.loads(out)
        self.assertEqual(table['order'], 2)
        self.assertEqual(sorted(table['velocities']), ['0', '1', '2'])
        code, _ = self.run_main(argv + ['--order', '1', '--output', 'table.json'])
        self.assertEqual(code, EXIT_OK)
        with open('table.json') as f:
            self.assertEqual(json.load(f)['order'], 1)

    def test_faber_errors(self):
        """Test input and degenerate failures."""
        code, _ = self.run_main(['faber', '--tau', '0.1+1.2i', '--eta', '0.8', '--kappa', '0.1', '--coeffs', '1'])
        self.assertEqual(code, EXIT_INVALID_INPUT)
        code, _ = self.run_main(['faber', '--tau', '1.2i', '--eta', '1.0', '--kappa', '0', '--coeffs', '1'])
        self.assertEqual(code, EXIT_NUMERICAL_FAILURE)

    def hodograph_config(self, **overrides):
        config = {
            'kappa': {'kind': 'constant', 'value': 0.1},
            'y0': 1.4,
            'y_end': 0.6,
            'eta0': 0.8,
            'series': ['1', '0.1'],
            'series_order': 2,
            'nodes': 16,
            'times': {'t0': 0.2, 't': ['0.1+0.05i']},
            'grid': {'axes': ['t0'], 'size': 1},
            'cross': False,
        }
        config.update(overrides)
        return self.write_config('hodograph.json', config)

    def test_hodograph_run(self):
        """Test a single-node hodograph run."""
        code, _ = self.run_main(['hodograph', '--config', self.hodograph_config(), '--output', 'grid.csv'])
        self.assertEqual(code, EXIT_OK)
        rows = self.read_csv('grid.csv')
        self.assertEqual(len(rows), 1)
        self.assertIn('flow_t1', rows[0])
        self.assertTrue(0.7 <= float(rows[0]['y']) <= 1.3)
        with open('hodograph_report.json') as f:
            metadata = json.load(f)['metadata']
        self.assertEqual(metadata['grid_nodes'], 1)
        self.assertEqual(metadata['order'], 1)

    def test_hodograph_no_bracket(self):
        """Test that a missing bracket prints the scan and exits with the input code."""
        path = self.hodograph_config(profile={'kind': 'polynomial_in_y', 'coefficients': [1e6]})
        code, out = self.run_main(['hodograph', '--config', path])
        self.assertEqual(code, EXIT_INVALID_INPUT)
        self.assertIn('Re(residual)', out)
        self.assertEqual(len(out.strip().splitlines()), 101)
        self.assertFalse(os.path.exists('hodograph_grid.csv'))


if __name__ == '__main__':
    unittest.main()
