// Copyright 2026 The nsum Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NSUM_GRADCHECK_HPP_
#define NSUM_GRADCHECK_HPP_

#include <cstddef>
#include <functional>
#include <string>

#include "nsum/tape.hpp"

namespace nsum {

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t checked = 0;
  // Coordinates where one-sided differences disagree (a kink such as a
  // max-pool tie lies within eps); these are skipped, not failed.
  std::size_t skipped_nonsmooth = 0;
};

struct GradCheckOptions {
  double eps = 1e-5;
  // Coordinates per parameter to probe; 0 checks every coordinate.
  std::size_t max_coords_per_param = 0;
  // Denominator floor in |a - n| / max(|a|, |n|, floor).
  double floor = 1e-5;
};

// Builds a scalar loss on a fresh tape from the current parameter values.
using ScalarFunction = std::function<Var(Tape<double>&)>;

// Compares backward() against central finite differences for every
// parameter in `params`. The function is evaluated twice at the starting
// point; differing values signal "non-deterministic-under-check".
GradCheckResult GradCheck(ParameterSet<double>& params, const ScalarFunction& fn,
                          const GradCheckOptions& options = {});

}  // namespace nsum

#endif  // NSUM_GRADCHECK_HPP_
