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

from typing import List, Optional, Sequence

__all__ = [
    'LabError', 'ConfigError', 'GridMismatchError', 'CapabilityError',
    'GeometryError', 'WindowError', 'DomainError', 'InsufficientDataError',
    'RangeError', 'NormalDegeneracyError', 'NumericalError', 'IterationError',
    'BracketingError', 'DegeneracyError', 'IllConditionedError',
    'DiscretizationError', 'TruncationError', 'FlowDivergenceError'
]


class LabError(Exception):
    """Base class of every error raised by snpeaks.
    """


class ConfigError(LabError, ValueError):
    """Invalid or incomplete run configuration."""


class GridMismatchError(LabError, ValueError):
    """Two profiles that must share a grid do not."""


class CapabilityError(LabError, ValueError):
    """Request outside what an operation supports (e.g. ell > ell_max)."""


class GeometryError(LabError, ValueError):
    """
    Point off a surface, ball leaving its grid, overlapping balls.

    Args:
        distance (float): offending distance, if one applies.
    """

    def __init__(self, msg: str, distance: Optional[float] = None):
        super().__init__(msg)
        self.distance = distance


class WindowError(LabError, ValueError):
    pass


class DomainError(LabError, ValueError):
    pass


class InsufficientDataError(LabError, ValueError):
    pass


class RangeError(LabError, ValueError):
    """
    Root bracketing over a sampled ladder failed.

    Args:
        samples (list): (lambda, a) pairs seen while bracketing.
    """

    def __init__(self, msg: str, samples: Optional[Sequence] = None):
        super().__init__(msg)
        self.samples = list(samples or [])


class NormalDegeneracyError(LabError, ValueError):
    pass


class NumericalError(LabError, RuntimeError):
    """
    Failure of a numerical algorithm.

    Args:
        trace (list): per-iteration diagnostics collected before failing.
    """

    def __init__(self, msg: str, trace: Optional[List] = None):
        super().__init__(msg)
        self.trace = list(trace or [])


class IterationError(NumericalError):
    def __init__(self,
                 msg: str,
                 residual: float = float('nan'),
                 trace: Optional[List] = None):
        super().__init__(msg, trace)
        self.residual = residual


class BracketingError(NumericalError):
    pass


class DegeneracyError(NumericalError):
    pass


class IllConditionedError(NumericalError):
    pass


class DiscretizationError(NumericalError):
    pass


class TruncationError(NumericalError):
    pass


class FlowDivergenceError(NumericalError):
    pass
