# Copyright (c) 2026 snpeaks Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import codecs
import copy
import os
from collections.abc import Iterable, Mapping
from typing import Any, Dict, Generic, List, Optional

import yaml

from snpeaks.env import get_output_root
from snpeaks.errors import ConfigError
from snpeaks.pohozaev.terms import MARGIN_CELLS
from snpeaks.utils.common import config_hash, to_builtin


class Config(object):
    '''Run configuration of the lab. Only yaml/yml files are supported.

    The following sections are read from the config file:
        radial: R_max, N and ell_max of the radial grid used for the ground state.
        spectral: N, R_max, ells and kernel_tol of the sector operators.
        field3d: cells, half_width (in units of delta), dt, max_steps and tol of 3D solves.
        potential: a potential config including type and family parameters.
            For potential types, please refer to snpeaks.models.potentials.
        reduction: eps ladder, rho factor and quadrature orders of the reduction.
        sweep: lambda ladder and target a values.
        pohozaev: rho factors, solve grid (cells, half_width), probe centers
            and eps ladder.
        checks: verify keys or key prefixes run by `verify`.
        tolerances: tolerance overrides.
        mutation: self-test flags (e.g. kernel_scale).
        output / workers / seed: run bookkeeping.

    Args:
        path (str) : The path of config file, supports yaml format only.
        dic (dict) : An already resolved config, used instead of a file.

    Examples:
        from snpeaks.apis.config import Config
        cfg = Config(path='configs/verify.yml', workers=4)
        model = cfg.potential
        ...
    '''

    def __init__(self,
                 *,
                 path: Optional[str] = None,
                 dic: Optional[Dict] = None,
                 output: Optional[str] = None,
                 workers: Optional[int] = None,
                 seed: Optional[int] = None,
                 only: Optional[str] = None):
        if dic is not None:
            self.dic = copy.deepcopy(dict(dic))
        else:
            if not path:
                raise ConfigError('Please specify the configuration file path.')

            if not os.path.exists(path):
                raise ConfigError('File {} does not exist'.format(path))

            if path.endswith('yml') or path.endswith('yaml'):
                self.dic = self._parse_from_yaml(path)
            else:
                raise ConfigError('Config file should in yaml format!')

        self._potential = None
        self.update(output=output, workers=workers, seed=seed, only=only)
        self.validate()

    def _update_dic(self, dic: Dict, base_dic: Dict):
        '''Update config from dic based base_dic
        '''
        base_dic = base_dic.copy()
        dic = dic.copy()

        if dic.get('_inherited_', True) == False:
            dic.pop('_inherited_')
            return dic

        for key, val in dic.items():
            if isinstance(val, dict) and key in base_dic and isinstance(
                    base_dic[key], dict):
                base_dic[key] = self._update_dic(val, base_dic[key])
            else:
                base_dic[key] = val
        return base_dic

    def _parse_from_yaml(self, path: str):
        '''Parse a yaml file and build config'''
        try:
            with codecs.open(path, 'r', 'utf-8') as file:
                dic = yaml.load(file, Loader=yaml.FullLoader)
        except yaml.YAMLError as e:
            raise ConfigError('Failed to parse {}: {}'.format(path, e))

        if not isinstance(dic, dict):
            raise ConfigError('Config {} is not a mapping'.format(path))

        if '_base_' in dic:
            cfg_dir = os.path.dirname(path)
            base_path = dic.pop('_base_')
            base_path = os.path.join(cfg_dir, base_path)
            if not os.path.exists(base_path):
                raise ConfigError('Base config {} does not exist'.format(
                    base_path))
            base_dic = self._parse_from_yaml(base_path)
            dic = self._update_dic(dic, base_dic)
        return dic

    def update(self,
               output: Optional[str] = None,
               workers: Optional[int] = None,
               seed: Optional[int] = None,
               only: Optional[str] = None):
        '''Update config'''
        if output is not None:
            self.dic['output'] = output

        if workers is not None:
            self.dic['workers'] = workers

        if seed is not None:
            self.dic['seed'] = seed

        if only is not None:
            self.dic['only'] = only

    def validate(self):
        """Raise ConfigError on malformed sections."""
        radial = self.radial
        _require_positive(radial, 'R_max', float)
        _require_positive(radial, 'N', int)
        if radial['N'] < 64 or radial['N'] % 2:
            raise ConfigError(
                'radial.N must be an even integer >= 64, got {}'.format(
                    radial['N']))
        _require_positive(radial, 'ell_max', int, allow_zero=True)

        spectral = self.spectral
        _require_positive(spectral, 'N', int)
        _require_positive(spectral, 'R_max', float)

        field3d = self.field3d
        _require_positive(field3d, 'cells', int)
        cells = field3d['cells']
        if cells < 32 or cells & (cells - 1):
            raise ConfigError(
                'field3d.cells must be a power of two >= 32, got {}'.format(
                    cells))
        _require_positive(field3d, 'half_width', float)

        pohozaev = self.pohozaev
        _require_positive(pohozaev, 'half_width', float)
        _require_positive(pohozaev, 'cells', int)
        reach = max(pohozaev['rho_factors']) + MARGIN_CELLS * 2 * pohozaev[
            'half_width'] / pohozaev['cells']
        if reach >= pohozaev['half_width']:
            raise ConfigError(
                'pohozaev.half_width {} leaves no clearance for rho factor {}'
                .format(pohozaev['half_width'], max(pohozaev['rho_factors'])))

        if not isinstance(self.workers, int) or self.workers < 1:
            raise ConfigError('workers must be a positive integer')

        if 'type' not in self.potential_config:
            raise ConfigError('No potential type specified.')

        for key in ('eps', ):
            values = self.reduction.get(key, [])
            if any(not _is_number(v) or v <= 0 for v in values):
                raise ConfigError('reduction.{} must hold positive numbers'.
                                  format(key))

    @property
    def radial(self) -> Dict:
        dic = {'R_max': 24.0, 'N': 4096, 'ell_max': 8, 'tol': 1e-10}
        dic.update(self.dic.get('radial', {}) or {})
        return dic

    @property
    def spectral(self) -> Dict:
        dic = {
            'N': 1024,
            'R_max': 24.0,
            'ells': [0, 1, 2, 3, 4],
            'kernel_tol': 1e-6,
            'num_eigs': 6
        }
        dic.update(self.dic.get('spectral', {}) or {})
        return dic

    @property
    def field3d(self) -> Dict:
        dic = {
            'cells': 64,
            'half_width': 12.0,
            'dt': None,
            'max_steps': 4000,
            'tol': 1e-9,
            'deltas': [0.15, 0.12, 0.1, 0.08]
        }
        dic.update(self.dic.get('field3d', {}) or {})
        return dic

    @property
    def reduction(self) -> Dict:
        dic = {
            'eps': [0.1, 0.0707, 0.05, 0.0354],
            'rho_factor': 16.0,
            'center': None,
            'correction_cells': 64
        }
        dic.update(self.dic.get('reduction', {}) or {})
        return dic

    @property
    def sweep(self) -> Dict:
        dic = {'lambdas': [25., 50., 100., 200., 400., 800.], 'targets': []}
        dic.update(self.dic.get('sweep', {}) or {})
        return dic

    @property
    def pohozaev(self) -> Dict:
        dic = {
            'rho_factors': [8.0, 12.0, 16.0],
            'probe_rho': 0.25,
            'probe_eps': [0.025, 0.0177, 0.0125, 0.0088],
            'centers': [[0., 0., 1.], [0., 0., -1.]],
            'threshold': 0.1,
            'delta': 0.1,
            'cells': 64,
            'half_width': 20.0
        }
        dic.update(self.dic.get('pohozaev', {}) or {})
        return dic

    @property
    def checks(self) -> List[str]:
        return list(self.dic.get('checks', []) or [])

    @property
    def tolerances(self) -> Dict:
        return dict(self.dic.get('tolerances', {}) or {})

    @property
    def mutation(self) -> Dict:
        dic = {'kernel_scale': 1.0}
        dic.update(self.dic.get('mutation', {}) or {})
        return dic

    @property
    def only(self) -> Optional[str]:
        return self.dic.get('only')

    @property
    def workers(self) -> int:
        return self.dic.get('workers', 1)

    @property
    def seed(self) -> int:
        return self.dic.get('seed', 0)

    @property
    def output(self) -> str:
        output = self.dic.get('output')
        if not output:
            output = os.path.join(get_output_root(),
                                  self.dic.get('name', 'run'))
        return output

    @property
    def potential_config(self) -> Dict:
        return copy.deepcopy(self.dic.get('potential', {}) or {})

    @property
    def potential(self):
        if self._potential is None:
            try:
                self._potential = self._load_object(self.potential_config)
            except (TypeError, KeyError) as e:
                raise ConfigError('Invalid potential config: {}'.format(e))
        return self._potential

    @property
    def hash(self) -> str:
        """Hash of everything that influences results."""
        dic = {
            k: v
            for k, v in self.dic.items() if k not in ('output', 'workers')
        }
        return config_hash(dic)

    def _load_component(self, com_name: str) -> Any:
        # lazy import
        import snpeaks.apis.manager as manager
        import snpeaks.models  # noqa: F401 registers potential families

        for com in manager.__all__:
            com = getattr(manager, com)
            if com_name in com.components_dict:
                return com[com_name]

        raise ConfigError(
            'The specified component was not found {}.'.format(com_name))

    def _load_object(self, obj: Generic, recursive: bool = True) -> Any:
        if isinstance(obj, Mapping):
            dic = dict(obj)
            component = self._load_component(
                dic.pop('type')) if 'type' in dic else dict

            if recursive:
                params = {}
                for key, val in dic.items():
                    params[key] = self._load_object(
                        obj=val, recursive=recursive)
            else:
                params = dic

            return component(**params)

        elif isinstance(obj, Iterable) and not isinstance(obj, str):
            return [self._load_object(item) for item in obj]

        return obj

    def dump(self, path: str):
        with open(path, 'w') as file:
            yaml.safe_dump(to_builtin(self.dic), file, sort_keys=True)

    def __str__(self) -> str:
        body = yaml.safe_dump(to_builtin(self.dic), sort_keys=True)
        return 'Config (hash {})\n{}'.format(self.hash[:12], body.rstrip())


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _require_positive(section: Dict, key: str, kind, allow_zero=False):
    value = section.get(key)
    if kind is int:
        ok = isinstance(value, int) and not isinstance(value, bool)
    else:
        ok = _is_number(value)
    if not ok or value < 0 or (value == 0 and not allow_zero):
        raise ConfigError('{} must be a positive {}, got {!r}'.format(
            key, kind.__name__, value))
