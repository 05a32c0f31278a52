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
import functools
import logging
import sys
import time
from typing import Iterator, Optional, Sequence, Tuple

import colorlog

LEVELS = {
    'DEBUG': (logging.DEBUG, 'purple'),
    'INFO': (logging.INFO, 'cyan'),
    'WARNING': (logging.WARNING, 'yellow'),
    'ERROR': (logging.ERROR, 'red'),
    'CRITICAL': (logging.CRITICAL, 'bold_red'),
}

PLAIN_FORMAT = '%(asctime)-15s - %(levelname)8s - %(message)s'


def _format_metric(value) -> str:
    if isinstance(value, float):
        return '{:.6g}'.format(value) if abs(value) >= 1e-3 or value == 0 \
            else '{:.3e}'.format(value)
    return str(value)


class Logger(object):
    '''Logger of the lab, one stream handler on stderr.

    Solver loops report through `iteration`, ladders of independent runs
    through `enumerate`; worker processes silence themselves with `quiet`.

    Args:
        name(str) : Logger name, default is 'snpeaks'
    '''

    def __init__(self, name: Optional[str] = None):
        self.logger = logging.getLogger(name or 'snpeaks')

        for key, (level, _) in LEVELS.items():
            logging.addLevelName(level, key)
            setattr(self, key.lower(), functools.partial(self.log, level))

        self.handler = logging.StreamHandler()
        self.handler.setFormatter(self._formatter())
        self.logger.addHandler(self.handler)
        self.logger.setLevel(logging.DEBUG)
        self.logger.propagate = False
        self._muted = 0

    @staticmethod
    def _formatter() -> logging.Formatter:
        if sys.stderr.isatty():
            return colorlog.ColoredFormatter(
                '%(log_color)s%(asctime)-15s%(reset)s - %(levelname)8s - '
                '%(message)s',
                log_colors={key: color
                            for key, (_, color) in LEVELS.items()})
        return logging.Formatter(PLAIN_FORMAT)

    def set_level(self, level: str):
        if level.upper() not in LEVELS:
            raise ValueError('Unknown log level {}, choose from {}'.format(
                level, list(LEVELS)))
        self.logger.setLevel(LEVELS[level.upper()][0])

    def log(self, level: int, msg: str):
        if self._muted:
            return
        self.logger.log(level, msg)

    @contextlib.contextmanager
    def quiet(self, keep_errors: bool = True):
        '''Drop messages below ERROR (all of them if keep_errors is False).'''
        previous = self.logger.level
        if keep_errors:
            self.logger.setLevel(max(previous, logging.ERROR))
        else:
            self._muted += 1
        try:
            yield
        finally:
            if keep_errors:
                self.logger.setLevel(previous)
            else:
                self._muted -= 1

    def iteration(self,
                  solver: str,
                  it: int,
                  total: Optional[int] = None,
                  eta: Optional[str] = None,
                  level: int = logging.INFO,
                  **metrics):
        '''One progress line of an iterative solver,
        `[SCF] iter=12/400 t=1 residual=3.100e-09 eta=00:00:04`.
        '''
        parts = ['[{}]'.format(solver)]
        parts.append('iter={}'.format(it if total is None else '{}/{}'.format(
            it, total)))
        parts.extend('{}={}'.format(k, _format_metric(v))
                     for k, v in metrics.items())
        if eta is not None:
            parts.append('eta={}'.format(eta))
        self.log(level, ' '.join(parts))

    def enumerate(self, items: Sequence,
                  msg: str) -> Iterator[Tuple[int, object]]:
        '''Yield (index, item), logging `msg [i/n]` and the elapsed time.'''
        total = len(items)
        start = time.perf_counter()
        for index, item in enumerate(items):
            self.info('{} [{}/{}]'.format(msg, index + 1, total))
            yield index, item
        self.info('{} done in {:.1f}s'.format(msg,
                                              time.perf_counter() - start))


logger = Logger()
