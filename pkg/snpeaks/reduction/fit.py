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

import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from snpeaks.errors import InsufficientDataError
from snpeaks.utils.common import to_builtin, write_table
from snpeaks.utils.logger import logger
from snpeaks.utils.plotscript import write_gnuplot_script

__all__ = [
    'ExpansionFit', 'fit_power', 'richardson', 'check_ladder',
    'geometric_ladder'
]

MIN_POINTS = 4


def geometric_ladder(start: float, ratio: float, n: int) -> np.ndarray:
    return start * ratio**np.arange(n)


def check_ladder(eps: Sequence[float], minimum: int = MIN_POINTS):
    eps = np.asarray(eps, dtype=np.float64)
    if len(eps) < minimum:
        raise InsufficientDataError(
            'Need at least {} ladder values, got {}'.format(minimum, len(eps)))
    if np.any(eps <= 0):
        raise ValueError('Ladder values must be positive: {}'.format(
            eps.tolist()))
    ratios = eps[1:] / eps[:-1]
    if np.ptp(np.log(ratios)) > 0.1:
        logger.warning('Ladder {} is not geometrically spaced'.format(
            eps.tolist()))


def fit_power(x: Sequence[float], y: Sequence[float]) -> Tuple[float, float]:
    """
    Least-squares fit of |y| = C·x^p in log-log; returns (p, C). Exact
    zeros are dropped.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.abs(np.asarray(y, dtype=np.float64))
    keep = y > 0
    if keep.sum() < 2:
        raise InsufficientDataError('Power fit needs two nonzero values')
    slope, intercept = np.polyfit(np.log(x[keep]), np.log(y[keep]), 1)
    return float(slope), float(np.exp(intercept))


def richardson(x: Sequence[float], y: Sequence[float],
               power: float = 2.0) -> float:
    """
    Limit of y as x → 0 from the model y = C + D·x^power (least squares;
    the classical two-point Richardson formula for two values).
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if len(x) < 2:
        raise InsufficientDataError('Richardson needs two values')
    _, constant = np.polyfit(x**power, y, 1)
    return float(constant)


@dataclass
class ExpansionFit:
    """
    A measured quantity along a parameter ladder with its fitted leading
    power law and, when a prediction is available, the remainder fit.
    """
    name: str
    eps: np.ndarray
    measured: np.ndarray
    predicted: Optional[np.ndarray] = None
    power: float = float('nan')
    constant: float = float('nan')
    extrapolated: float = float('nan')
    remainder_power: float = float('nan')
    passed: Optional[bool] = None
    details: Dict = field(default_factory=dict)

    def __post_init__(self):
        self.eps = np.asarray(self.eps, dtype=np.float64)
        self.measured = np.asarray(self.measured, dtype=np.float64)
        if self.predicted is not None:
            self.predicted = np.asarray(self.predicted, dtype=np.float64)

    @property
    def residual(self) -> Optional[np.ndarray]:
        if self.predicted is None:
            return None
        return self.measured - self.predicted

    def fit_leading(self) -> 'ExpansionFit':
        self.power, self.constant = fit_power(self.eps, self.measured)
        return self

    def fit_remainder(self) -> 'ExpansionFit':
        residual = self.residual
        if residual is not None and np.count_nonzero(residual) >= 2:
            self.remainder_power = fit_power(self.eps, residual)[0]
        return self

    def rows(self) -> List[Dict]:
        rows = []
        for i, e in enumerate(self.eps):
            row = {'eps': float(e), 'measured': float(self.measured[i])}
            if self.predicted is not None:
                row['predicted'] = float(self.predicted[i])
                row['residual'] = float(self.residual[i])
            rows.append(row)
        return rows

    def summary(self) -> Dict:
        dic = {
            'name': self.name,
            'power': self.power,
            'constant': self.constant,
            'extrapolated': self.extrapolated,
            'remainder_power': self.remainder_power,
            'passed': self.passed,
        }
        dic.update(self.details)
        return to_builtin(dic)

    def to_csv(self, path: str, header: Optional[Dict] = None) -> str:
        columns = ['eps', 'measured']
        if self.predicted is not None:
            columns += ['predicted', 'residual']
        write_table(path, self.rows(), columns=columns, header=header)
        return path

    def plot_script(self, csv_path: str) -> str:
        series = [('1:(abs($2))', 'measured')]
        if self.predicted is not None:
            series += [('1:(abs($3))', 'predicted'),
                       ('1:(abs($4))', 'residual')]
        return write_gnuplot_script(
            os.path.splitext(csv_path)[0] + '.gp',
            csv_path,
            title='{} (fitted power {:.3f})'.format(self.name, self.power),
            xlabel='eps',
            ylabel=self.name,
            series=series)

    def __repr__(self):
        return 'ExpansionFit({}, power={:.4f}, constant={:.6g}, ' \
            'remainder_power={:.4f}, passed={})'.format(
                self.name, self.power, self.constant, self.remainder_power,
                self.passed)
