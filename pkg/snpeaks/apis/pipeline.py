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

import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, List, Optional, Sequence

from snpeaks import errors
from snpeaks.errors import LabError
from snpeaks.utils.logger import logger


@dataclass
class JobResult:
    index: int
    value: Any = None
    error: Optional[str] = None
    error_type: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def unwrap(self) -> Any:
        """The value, or the captured error raised again in this process."""
        if self.ok:
            return self.value
        cls = getattr(errors, self.error_type or '', None)
        if isinstance(cls, type) and issubclass(cls, LabError):
            raise cls(self.error)
        raise RuntimeError('{}: {}'.format(self.error_type, self.error))


def _run_single(fn: Callable, index: int, job: Any) -> JobResult:
    try:
        return JobResult(index=index, value=fn(job))
    except LabError as e:
        return JobResult(
            index=index, error=str(e), error_type=type(e).__name__)
    except Exception as e:
        logger.debug(traceback.format_exc())
        return JobResult(
            index=index, error=str(e), error_type=type(e).__name__)


def _run_in_worker(fn: Callable, index: int, job: Any) -> JobResult:
    # workers report errors only
    with logger.quiet():
        return _run_single(fn, index, job)


def run_jobs(fn: Callable,
             jobs: Sequence[Any],
             workers: int = 1,
             msg: str = 'Running jobs') -> List[JobResult]:
    """
    Run `fn(job)` for every job, in worker processes when `workers > 1`.

    Results come back in job order whatever the worker count, and failures
    are captured per job instead of aborting the ladder. `fn` and the jobs
    must be picklable.
    """
    jobs = list(jobs)
    if workers <= 1 or len(jobs) <= 1:
        results = []
        for index, job in logger.enumerate(jobs, msg):
            results.append(_run_single(fn, index, job))
        return results

    logger.info('{} on {} workers'.format(msg, workers))
    with ProcessPoolExecutor(max_workers=workers) as executor:
        futures = [
            executor.submit(_run_in_worker, fn, index, job)
            for index, job in enumerate(jobs)
        ]
        results = [future.result() for future in futures]

    return sorted(results, key=lambda r: r.index)
