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
from collections import namedtuple
from typing import Optional

SchedulerStatus = namedtuple('SchedulerStatus',
                             ['do_log', 'do_check', 'record_trace'])


class SchedulerABC(abc.ABC):
    """
    """

    @abc.abstractmethod
    def step(self, cur_iter: Optional[int] = None) -> SchedulerStatus:
        """
        """


class FlowScheduler(SchedulerABC):
    """
    Decides, per iteration of an iterative solver, whether to log progress,
    evaluate the (expensive) convergence check and append to the trace.

    Args:
        log_interval (int): log every this many iterations, 0 disables.
        check_interval (int): evaluate the stopping test every this many
            iterations; 1 checks every step.
        trace_interval (int): record a trace entry every this many iterations.
        warmup (int): iterations during which checks are skipped.
    """

    def __init__(self,
                 log_interval: int,
                 check_interval: int = 1,
                 trace_interval: int = 1,
                 warmup: int = 0):
        self.log_interval = log_interval
        self.check_interval = check_interval
        self.trace_interval = trace_interval
        self.warmup = warmup
        self.cur_iter = 0

    def step(self, cur_iter: Optional[int] = None) -> SchedulerStatus:
        if cur_iter is None:
            self.cur_iter += 1
        else:
            self.cur_iter = cur_iter

        do_log = self.log_interval != 0 and self.cur_iter % self.log_interval == 0
        do_check = self.cur_iter > self.warmup and self.check_interval != 0 \
            and self.cur_iter % self.check_interval == 0
        record_trace = self.trace_interval != 0 and self.cur_iter % self.trace_interval == 0

        return SchedulerStatus(do_log, do_check, record_trace)
