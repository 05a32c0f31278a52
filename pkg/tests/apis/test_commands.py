import os
import unittest

import yaml

import snpeaks
from snpeaks.apis.commands import (EXIT_CONFIG, EXIT_FAIL, EXIT_PASS,
                                   run_command)
from snpeaks.utils.common import generate_tempdir, read_table

POLAR = {
    'name': 'polar',
    'potential': {
        'type': 'SpherePotential',
        'R': 1.0,
        'q': 1.0,
        'beta': 0.5,
        'modulation': {
            'type': 'PolarModulation'
        }
    }
}


class RunCommandTestCase(unittest.TestCase):
    """
    """

    def test_unknown_command(self):
        with generate_tempdir() as tmpdir:
            code = run_command('no-such-command', dic=POLAR, output=tmpdir)
        self.assertEqual(code, EXIT_CONFIG)

    def test_config_errors(self):
        self.assertEqual(
            run_command('verify', path='/nonexistent/lab.yml'), EXIT_CONFIG)

        with generate_tempdir() as tmpdir:
            path = os.path.join(tmpdir, 'corrupt.yml')
            with open(path, 'w') as file:
                file.write('potential: {type: SpherePotential\n')
            self.assertEqual(run_command('verify', path=path), EXIT_CONFIG)

            dic = dict(POLAR, field3d={'cells': 48})
            self.assertEqual(
                run_command('verify', dic=dic, output=tmpdir), EXIT_CONFIG)

            dic = dict(POLAR, checks=['no_such_check'])
            self.assertEqual(
                run_command('verify', dic=dic, output=tmpdir), EXIT_CONFIG)

    def test_verify_pass(self):
        dic = dict(POLAR, checks=['potential.curvature_identity'])
        with generate_tempdir() as tmpdir:
            code = run_command('verify', dic=dic, output=tmpdir)
            frame = read_table(os.path.join(tmpdir, 'verify.csv'))
            with open(os.path.join(tmpdir, 'meta.yaml')) as file:
                meta = yaml.safe_load(file)

        self.assertEqual(code, EXIT_PASS)
        self.assertEqual(list(frame['key']), ['potential.curvature_identity'])
        self.assertTrue(bool(frame['passed'][0]))
        self.assertEqual(meta['verify']['failing'], [])
        self.assertEqual(meta['environment']['snpeaks'], snpeaks.__version__)

    def test_verify_fail(self):
        # the equator is not a critical point of the polar modulation
        dic = dict(
            POLAR,
            checks=['potential.assumptions'],
            reduction={'center': [1.0, 0.0, 0.0]})
        with generate_tempdir() as tmpdir:
            code = run_command('verify', dic=dic, output=tmpdir)
            with open(os.path.join(tmpdir, 'meta.yaml')) as file:
                meta = yaml.safe_load(file)

        self.assertEqual(code, EXIT_FAIL)
        self.assertEqual(meta['verify']['failing'], ['potential.assumptions'])

    def test_verify_mutation(self):
        # a 1% error in the Newton kernel fails the ground-state identities
        dic = dict(
            POLAR,
            checks=[
                'ground_state.nehari', 'ground_state.pohozaev',
                'ground_state.energy_ratio'
            ],
            radial={'N': 2048},
            mutation={'kernel_scale': 1.01})
        with generate_tempdir() as tmpdir:
            code = run_command('verify', dic=dic, output=tmpdir)
            frame = read_table(os.path.join(tmpdir, 'verify.csv'))
            with open(os.path.join(tmpdir, 'meta.yaml')) as file:
                meta = yaml.safe_load(file)

        self.assertEqual(code, EXIT_FAIL)
        failing = set(meta['verify']['failing'])
        self.assertIn('ground_state.nehari', failing)
        self.assertIn('ground_state.energy_ratio', failing)
        self.assertEqual(set(frame['key'][~frame['passed'].astype(bool)]),
                         failing)


if __name__ == "__main__":
    unittest.main()
