import os
import unittest

import yaml

from snpeaks.apis import Config
from snpeaks.errors import ConfigError
from snpeaks.models.potentials import ConstantPotential
from snpeaks.utils.common import generate_tempdir

BASE = {
    'name': 'base',
    'workers': 1,
    'field3d': {
        'cells': 64,
        'half_width': 12.0
    },
    'reduction': {
        'eps': [0.1, 0.05],
        'rho_factor': 16.0
    },
    'potential': {
        'type': 'ConstantPotential',
        'P0': 0.5
    }
}


def _write(path, dic):
    with open(path, 'w') as file:
        yaml.safe_dump(dic, file)
    return path


class ConfigTestCase(unittest.TestCase):
    """
    """

    def test_base_merge(self):
        with generate_tempdir() as tmpdir:
            os.makedirs(os.path.join(tmpdir, '_base_'))
            _write(os.path.join(tmpdir, '_base_', 'lab.yml'), BASE)
            path = _write(
                os.path.join(tmpdir, 'child.yml'), {
                    '_base_': '_base_/lab.yml',
                    'name': 'child',
                    'field3d': {
                        'cells': 32
                    },
                    'potential': {
                        'P0': 1.5
                    }
                })
            cfg = Config(path=path)

        self.assertEqual(cfg.dic['name'], 'child')
        self.assertEqual(cfg.field3d['cells'], 32)
        self.assertEqual(cfg.field3d['half_width'], 12.0)
        self.assertEqual(cfg.reduction['eps'], [0.1, 0.05])
        self.assertIsInstance(cfg.potential, ConstantPotential)
        self.assertAlmostEqual(cfg.potential.P0, 1.5)

    def test_not_inherited(self):
        with generate_tempdir() as tmpdir:
            _write(os.path.join(tmpdir, 'base.yml'), BASE)
            path = _write(
                os.path.join(tmpdir, 'child.yml'), {
                    '_base_': 'base.yml',
                    'reduction': {
                        '_inherited_': False,
                        'eps': [0.2]
                    }
                })
            cfg = Config(path=path)

        self.assertEqual(cfg.dic['reduction'], {'eps': [0.2]})
        # dropped keys fall back to the built-in defaults
        self.assertEqual(cfg.reduction['rho_factor'], 16.0)

    def test_defaults(self):
        cfg = Config(dic={'potential': {'type': 'ConstantPotential'}})
        self.assertEqual(cfg.field3d['cells'], 64)
        self.assertEqual(cfg.radial['N'], 4096)
        self.assertEqual(cfg.workers, 1)
        self.assertEqual(cfg.seed, 0)
        self.assertIsNone(cfg.only)
        self.assertEqual(cfg.checks, [])
        self.assertEqual(cfg.pohozaev['half_width'], 20.0)

    def test_overrides(self):
        with generate_tempdir() as tmpdir:
            cfg = Config(
                dic=BASE, output=tmpdir, workers=3, seed=7, only='ground_state')
            self.assertEqual(cfg.output, tmpdir)
        self.assertEqual(cfg.workers, 3)
        self.assertEqual(cfg.seed, 7)
        self.assertEqual(cfg.only, 'ground_state')

    def test_hash(self):
        first = Config(dic=BASE)
        second = Config(dic=BASE, workers=4, output='/tmp/elsewhere')
        self.assertEqual(first.hash, second.hash)
        self.assertEqual(len(first.hash), 64)

        changed = dict(BASE, seed=1)
        self.assertNotEqual(first.hash, Config(dic=changed).hash)

    def test_dump(self):
        cfg = Config(dic=BASE)
        with generate_tempdir() as tmpdir:
            path = os.path.join(tmpdir, 'resolved.yml')
            cfg.dump(path)
            reloaded = Config(path=path)
        self.assertEqual(reloaded.hash, cfg.hash)

    def test_file_errors(self):
        with self.assertRaises(ConfigError):
            Config()
        with self.assertRaises(ConfigError):
            Config(path='/nonexistent/lab.yml')

        with generate_tempdir() as tmpdir:
            path = os.path.join(tmpdir, 'lab.json')
            with open(path, 'w') as file:
                file.write('{}')
            with self.assertRaises(ConfigError):
                Config(path=path)

            path = os.path.join(tmpdir, 'broken.yml')
            with open(path, 'w') as file:
                file.write('radial: [1, 2\n')
            with self.assertRaises(ConfigError):
                Config(path=path)

            path = os.path.join(tmpdir, 'list.yml')
            with open(path, 'w') as file:
                file.write('- 1\n- 2\n')
            with self.assertRaises(ConfigError):
                Config(path=path)

            path = _write(
                os.path.join(tmpdir, 'orphan.yml'), {'_base_': 'missing.yml'})
            with self.assertRaises(ConfigError):
                Config(path=path)

    def test_validation(self):
        invalid = [
            dict(BASE, field3d={'cells': 48}),
            dict(BASE, field3d={'cells': 16}),
            dict(BASE, workers=0),
            dict(BASE, potential={'P0': 1.0}),
            dict(BASE, reduction={'eps': [0.1, -0.05]}),
            dict(BASE, radial={'N': 63}),
            dict(BASE, pohozaev={'half_width': 12.0}),
        ]
        for dic in invalid:
            with self.assertRaises(ConfigError):
                Config(dic=dic)

        # ConfigError is a ValueError for callers catching the builtin
        with self.assertRaises(ValueError):
            Config(dic=dict(BASE, workers=0))

    def test_unknown_component(self):
        cfg = Config(dic=dict(BASE, potential={'type': 'NoSuchPotential'}))
        with self.assertRaises(ConfigError):
            cfg.potential

    def test_shipped_configs(self):
        root = os.path.join(
            os.path.dirname(__file__), '..', '..', 'configs', 'polar')
        cfg = Config(path=os.path.join(root, 'polar_sphere.yml'))
        self.assertEqual(cfg.dic['name'], 'polar_sphere')
        self.assertEqual(cfg.potential_config['type'], 'SpherePotential')
        self.assertEqual(cfg.radial['N'], 4096)


if __name__ == "__main__":
    unittest.main()
