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

import contextlib
import hashlib
import os
import tempfile
from typing import Dict, List, Mapping, Optional, Sequence, Union

import numpy as np
import pandas as pd
import yaml

FLOAT_FORMAT = '%.17g'


@contextlib.contextmanager
def generate_tempdir(directory: str = None, **kwargs):
    '''Generate a temporary directory'''
    with tempfile.TemporaryDirectory(dir=directory, **kwargs) as _dir:
        yield _dir


def to_builtin(obj):
    """Convert numpy scalars/arrays nested in dicts and lists to plain Python."""
    if isinstance(obj, Mapping):
        return {str(k): to_builtin(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_builtin(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_builtin(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def config_hash(dic: Dict) -> str:
    """SHA-256 of the canonical YAML dump of a resolved config."""
    text = yaml.safe_dump(to_builtin(dic), sort_keys=True)
    return hashlib.sha256(text.encode('utf-8')).hexdigest()


def write_table(path: str,
                rows: Union[List[Dict], Dict[str, Sequence]],
                columns: Optional[List[str]] = None,
                header: Optional[Dict] = None):
    """
    Write rows as CSV preceded by `# key=value` comment lines.

    Output depends only on the rows and the header, so identical inputs give
    identical bytes.
    """
    frame = pd.DataFrame(rows, columns=columns)
    dirname = os.path.dirname(path)
    if dirname:
        os.makedirs(dirname, exist_ok=True)

    with open(path, 'w', newline='') as file:
        for key, value in (header or {}).items():
            file.write('# {}={}\n'.format(key, value))
        frame.to_csv(
            file, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')


def read_table(path: str) -> pd.DataFrame:
    return pd.read_csv(path, comment='#')


def read_table_header(path: str) -> Dict[str, str]:
    header = {}
    with open(path) as file:
        for line in file:
            if not line.startswith('#'):
                break
            key, _, value = line[1:].strip().partition('=')
            header[key.strip()] = value.strip()
    return header


def write_key_values(path: str, values: Dict):
    """Flat `key = value` text, one entry per line, sorted by key."""
    with open(path, 'w') as file:
        for key in sorted(values):
            value = values[key]
            if isinstance(value, float):
                value = repr(value)
            file.write('{} = {}\n'.format(key, value))


def read_key_values(path: str) -> Dict[str, str]:
    values = {}
    with open(path) as file:
        for line in file:
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            key, _, value = line.partition('=')
            values[key.strip()] = value.strip()
    return values
