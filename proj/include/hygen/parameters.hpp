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
#include <string>
#include <vector>

#include "hygen/autodiff.hpp"
#include "hygen/random.hpp"

namespace hygen {

struct NamedParameter {
  std::string name;
  ad::Value value;
};

using ParameterList = std::vector<NamedParameter>;

/// Uniform in +-sqrt(6 / (fan_in + fan_out)).
inline ad::Matrix glorot_uniform(Eigen::Index rows, Eigen::Index cols, double fan_in, double fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / (fan_in + fan_out));
  ad::Matrix m(rows, cols);
  // Fill in row-major order so the draw sequence does not depend on storage order.
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = (2.0 * uniform_unit(rng) - 1.0) * limit;
  }
  return m;
}

inline ad::Value dense_weight(Eigen::Index fan_in, Eigen::Index fan_out, Rng& rng) {
  return ad::Value::parameter(
      glorot_uniform(fan_in, fan_out, static_cast<double>(fan_in), static_cast<double>(fan_out), rng));
}

inline ad::Value zero_row(Eigen::Index width) { return ad::Value::parameter(ad::Matrix::Zero(1, width)); }

inline std::vector<ad::Value> values_of(const ParameterList& params) {
  std::vector<ad::Value> out;
  out.reserve(params.size());
  for (const auto& p : params) out.push_back(p.value);
  return out;
}

inline std::size_t count_scalars(const ParameterList& params) {
  std::size_t n = 0;
  for (const auto& p : params) n += static_cast<std::size_t>(p.value.data().size());
  return n;
}

inline void zero_grads(const ParameterList& params) {
  for (auto p : params) p.value.zero_grad();
}

}  // namespace hygen
