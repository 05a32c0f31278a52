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

import time
from typing import Optional


class Timer:
    """Wall-clock bookkeeping of an iterative solver.

    The remaining time is the number of iterations left to `iters` times an
    exponential moving average of the step duration. Solvers stopping on a
    residual usually finish early, so the ETA is an upper bound.

    Args:
        iters (int): iteration cap of the solver, 0 if there is none.
        momentum (float): weight of the previous average in each update.
    """

    def __init__(self, iters: int = 0, momentum: float = 0.5):
        self.iters = iters
        self.momentum = momentum
        self.cur_iter = 0
        self.start = time.perf_counter()
        self._last = self.start
        self._average: Optional[float] = None

    def step(self):
        now = time.perf_counter()
        duration = now - self._last
        self._last = now
        self.cur_iter += 1
        if self._average is None:
            self._average = duration
        else:
            self._average = self.momentum * self._average + (
                1 - self.momentum) * duration

    @property
    def elapsed(self) -> float:
        return self._last - self.start

    @property
    def speed(self) -> float:
        """Mean seconds per iteration."""
        return self.elapsed / self.cur_iter if self.cur_iter else 0.

    @property
    def eta(self) -> str:
        if not self.iters or self._average is None:
            return '--:--:--'
        seconds = int(max(self.iters - self.cur_iter, 0) * self._average)
        minutes, seconds = divmod(seconds, 60)
        hours, minutes = divmod(minutes, 60)
        return '{:02d}:{:02d}:{:02d}'.format(hours, minutes, seconds)
