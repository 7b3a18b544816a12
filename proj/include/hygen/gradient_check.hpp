// Copyright (c) 2026 The HyGEN-cpp Authors. All Rights Reserved.
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

#pragma once

#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "hygen/autodiff.hpp"
#include "hygen/random.hpp"

namespace hygen::ad {

struct GradientCheckResult {
  double max_relative_error = 0.0;
  std::size_t entries_checked = 0;
};

/// Compares the tape's gradient of `loss_fn` against central differences.
///
/// The error for one entry is |analytic - numeric| / max(1, |analytic|); the
/// maximum over all checked entries is returned. When `max_entries_per_param`
/// is nonzero and `rng` is given, at most that many entries of each parameter
/// are checked, chosen without replacement.
inline GradientCheckResult gradient_check(const std::function<Value()>& loss_fn, std::vector<Value> params,
                                          double h = 1e-5, std::size_t max_entries_per_param = 0,
                                          Rng* rng = nullptr) {
  auto evaluate = [&]() {
    const double v = loss_fn().item();
    if (!std::isfinite(v)) throw NumericalError("gradient_check: loss is not finite");
    return v;
  };

  for (auto& p : params) p.zero_grad();
  Value loss = loss_fn();
  if (!std::isfinite(loss.item())) throw NumericalError("gradient_check: loss is not finite");
  loss.backward();
  std::vector<Matrix> analytic;
  analytic.reserve(params.size());
  for (const auto& p : params) analytic.push_back(p.grad());

  GradientCheckResult result;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Matrix& data = params[pi].mutable_data();
    std::vector<Eigen::Index> entries(static_cast<std::size_t>(data.size()));
    std::iota(entries.begin(), entries.end(), Eigen::Index{0});
    if (max_entries_per_param != 0 && rng != nullptr && entries.size() > max_entries_per_param) {
      shuffle_in_place(entries, *rng);
      entries.resize(max_entries_per_param);
    }
    for (const Eigen::Index e : entries) {
      const double saved = data(e);
      data(e) = saved + h;
      const double up = evaluate();
      data(e) = saved - h;
      const double down = evaluate();
      data(e) = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double a = analytic[pi](e);
      result.max_relative_error =
          std::max(result.max_relative_error, std::abs(a - numeric) / std::max(1.0, std::abs(a)));
      ++result.entries_checked;
    }
  }
  return result;
}

}  // namespace hygen::ad
