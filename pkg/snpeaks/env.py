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

import importlib
import os
import platform
import sys
from typing import Dict

import snpeaks

NUMERICAL_STACK = ('numpy', 'scipy', 'numba', 'sympy', 'pandas', 'yaml')
THREAD_FLAGS = ('NUMBA_NUM_THREADS', 'OMP_NUM_THREADS', 'MKL_NUM_THREADS',
                'OPENBLAS_NUM_THREADS')


def get_package_version(package: str) -> str:
    try:
        return str(importlib.import_module(package).__version__)
    except (ImportError, AttributeError):
        return 'not installed'


def get_stack_versions() -> Dict[str, str]:
    """Versions of the packages numerical results depend on."""
    versions = {'python': platform.python_version(),
                'snpeaks': snpeaks.__version__}
    versions.update({p: get_package_version(p) for p in NUMERICAL_STACK})
    return versions


def get_env_info() -> str:
    """Block logged at the start of every command."""
    width = max(len(k) for k in NUMERICAL_STACK + THREAD_FLAGS)
    lines = ['Environment']
    lines.append('  {:<{}} {}'.format('platform', width, platform.platform()))
    lines.append('  {:<{}} {}'.format('executable', width, sys.executable))
    for name, version in get_stack_versions().items():
        lines.append('  {:<{}} {}'.format(name, width, version))
    for flag in THREAD_FLAGS + ('SNPEAKS_OUTPUT', ):
        lines.append('  {:<{}} {}'.format(flag, width,
                                          os.environ.get(flag, '-')))
    return '\n'.join(lines)


def get_user_home() -> str:
    return os.path.expanduser('~')


def get_snpeaks_home() -> str:
    return os.path.join(get_user_home(), '.snpeaks')


def get_sub_home(directory: str) -> str:
    home = os.path.join(get_snpeaks_home(), directory)
    os.makedirs(home, exist_ok=True)
    return home


def get_output_root() -> str:
    '''Default root of result directories, `SNPEAKS_OUTPUT` wins if set.'''
    root = os.environ.get('SNPEAKS_OUTPUT')
    if root:
        os.makedirs(root, exist_ok=True)
        return root
    return get_sub_home('output')


USER_HOME = get_user_home()
SNPEAKS_HOME = get_snpeaks_home()

# silence numba performance warnings
os.environ["NUMBA_DISABLE_PERFORMANCE_WARNINGS"] = "1"
