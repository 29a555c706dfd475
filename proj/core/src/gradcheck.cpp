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

#include "nsum/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace nsum {
namespace {

double Evaluate(const ScalarFunction& fn) {
  Tape<double> tape;
  const Var loss = fn(tape);
  return tape.value(loss)[0];
}

}  // namespace

GradCheckResult GradCheck(ParameterSet<double>& params, const ScalarFunction& fn,
                          const GradCheckOptions& options) {
  params.zero_grad();
  double f0 = 0.0;
  {
    Tape<double> tape;
    const Var loss = fn(tape);
    f0 = tape.value(loss)[0];
    tape.backward(loss);
  }
  if (Evaluate(fn) != f0)
    Fail("non-deterministic-under-check", "function value changed between identical evaluations");

  GradCheckResult result;
  const double eps = options.eps;
  for (std::size_t p = 0; p < params.size(); ++p) {
    auto& param = params[p];
    const std::size_t n = param.value.size();
    std::size_t stride = 1;
    if (options.max_coords_per_param > 0 && n > options.max_coords_per_param)
      stride = (n + options.max_coords_per_param - 1) / options.max_coords_per_param;
    for (std::size_t i = 0; i < n; i += stride) {
      const double saved = param.value[i];
      param.value[i] = saved + eps;
      const double fp = Evaluate(fn);
      param.value[i] = saved - eps;
      const double fm = Evaluate(fn);
      param.value[i] = saved;

      const double forward = (fp - f0) / eps;
      const double backward = (f0 - fm) / eps;
      const double scale = std::max({1.0, std::abs(forward), std::abs(backward)});
      if (std::abs(forward - backward) > 1e-2 * scale) {
        ++result.skipped_nonsmooth;
        continue;
      }
      const double numeric = (fp - fm) / (2.0 * eps);
      const double analytic = param.grad[i];
      const double denom = std::max({std::abs(numeric), std::abs(analytic), options.floor});
      const double rel = std::abs(numeric - analytic) / denom;
      ++result.checked;
      if (rel > result.max_relative_error || result.checked == 1) {
        if (rel >= result.max_relative_error) {
          result.max_relative_error = rel;
          result.worst_parameter = param.name;
          result.worst_index = i;
          result.worst_analytic = analytic;
          result.worst_numeric = numeric;
        }
      }
    }
  }
  return result;
}

}  // namespace nsum
