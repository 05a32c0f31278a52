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

from .correction import (CorrectionResult, LinearizedOperator,
                         invertibility_ladder, solve_correction)
from .kernel import (EXPECTED_KERNEL, KernelReport, coercivity_bound,
                     kernel_report, sector_gap)
from .sector import (SectorOperator, build_Lbar, build_Ltilde, build_sectors,
                     kernel_candidates, profile_on)
