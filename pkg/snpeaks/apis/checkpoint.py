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

import abc
import contextlib
import copy
import os
from typing import Dict, Generic, Hashable, List, Optional

import filelock
import yaml
from easydict import EasyDict

from snpeaks.utils.common import to_builtin, write_table
from snpeaks.utils.logger import logger


class ResultStoreABC(abc.ABC):
    """
    """

    @abc.abstractmethod
    def have(self, name: str) -> bool:
        """
        """

    @abc.abstractmethod
    def path(self, name: str) -> str:
        """
        """

    @abc.abstractmethod
    def push_table(self, name: str, rows: List[Dict], **kwargs) -> str:
        """
        """

    @abc.abstractmethod
    def record(self, key: Hashable, value: Generic) -> bool:
        """
        """

    @property
    @abc.abstractmethod
    def meta(self) -> dict:
        """
        """

    @property
    @abc.abstractmethod
    def metafile(self) -> str:
        """
        """

    @property
    @abc.abstractmethod
    def rootdir(self) -> str:
        """
        """


class ResultStore(ResultStoreABC):
    """
    Output directory of one lab run.

    Artifacts (tables, plot scripts, fields, bundles) live next to a
    `meta.yaml` holding the config hash and the list of written artifacts.
    Every write of the meta file happens under a file lock on the directory,
    so concurrent workers may share a store.

    Args:
        save_dir (str): directory, created if missing.
        config_hash (str): hash written into the meta file and table headers.
        overwrite (bool): allow recording an existing meta key again.
    """

    def __init__(self,
                 save_dir: str,
                 config_hash: str = '',
                 overwrite: bool = True):
        self.save_dir = save_dir
        self._meta = EasyDict()

        self._meta.overwrite = overwrite
        self._meta.config_hash = config_hash
        self._meta.artifacts = []

        os.makedirs(self.save_dir, exist_ok=True)

        if os.path.exists(self.metafile):
            with open(self.metafile) as file, self.rwlock():
                dic = yaml.load(file, Loader=yaml.FullLoader) or {}
            if config_hash and dic.get('config_hash', config_hash) != config_hash:
                logger.warning(
                    'Result directory {} was written by another config, '
                    'artifacts will be replaced'.format(self.save_dir))
                dic = {}
            dic.pop('config_hash', None)
            self._meta.update(dic)

        self._sync_to_file()

    def have(self, name: str) -> bool:
        return name in self._meta.artifacts and os.path.exists(
            self.path(name))

    def path(self, name: str) -> str:
        return os.path.join(self.rootdir, name)

    def subdir(self, name: str) -> str:
        dirname = self.path(name)
        os.makedirs(dirname, exist_ok=True)
        self._register(name)
        return dirname

    def push_table(self,
                   name: str,
                   rows: List[Dict],
                   columns: Optional[List[str]] = None,
                   header: Optional[Dict] = None,
                   verbose: bool = False) -> str:
        """Write a CSV table whose first line carries the config hash."""
        full_header = {'config_hash': self._meta.config_hash}
        full_header.update(header or {})
        path = self.path(name)
        write_table(path, rows, columns=columns, header=full_header)
        self._register(name)

        if verbose:
            logger.info('Write table {}'.format(path))
        return path

    def push_text(self, name: str, text: str) -> str:
        path = self.path(name)
        with open(path, 'w') as file:
            file.write(text)
        self._register(name)
        return path

    def adopt(self, name: str) -> str:
        """Register a file written into the directory by someone else."""
        path = self.path(name)
        if not os.path.exists(path):
            raise FileNotFoundError(path)
        self._register(name)
        return path

    def record(self, key: Hashable, value: Generic) -> bool:
        if key in self._meta and not self._meta.overwrite:
            return False

        self._meta[key] = to_builtin(value)
        self._sync_to_file()
        return True

    @property
    def meta(self) -> dict:
        return copy.deepcopy(self._meta)

    @property
    def metafile(self) -> str:
        return os.path.join(self.rootdir, 'meta.yaml')

    @property
    def rootdir(self) -> str:
        return self.save_dir

    def _register(self, name: str):
        if name not in self._meta.artifacts:
            self._meta.artifacts.append(name)
            self._meta.artifacts.sort()
        self._sync_to_file()

    def _sync_to_file(self):
        with self.rwlock(), open(self.metafile, 'w') as file:
            yaml.safe_dump(to_builtin(dict(self._meta)), file)

    @contextlib.contextmanager
    def rwlock(self):
        lockfile = os.path.join(self.rootdir, '.lock')
        with filelock.FileLock(lockfile):
            yield
