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

from .ansatz import PeakAnsatz
from .fit import (ExpansionFit, check_ladder, fit_power, geometric_ladder,
                  richardson)
from .force import (RHO_FACTOR, ReducedForceReport, moment_expansion,
                    peak_quadrature, predicted_force, reduced_force)
from .laws import (mu_a_expansion, normal_offset_constant,
                   reduction_mu_a_pairs, solve_normal_offset,
                   solve_peak_ladder, verify_normal_law,
                   verify_tangential_law)
from .peak import PeakSolution, force_jacobian, solve_peak
