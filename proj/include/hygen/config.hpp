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

#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hygen/errors.hpp"
#include "hygen/hypergraph.hpp"

namespace hygen {

/// Flat key=value text: one pair per line, '#' starts a comment line.
using KeyValues = std::map<std::string, std::string>;

inline KeyValues read_key_values(std::istream& in) {
  KeyValues out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = io::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    out[std::string(io::trim(body.substr(0, eq)))] = std::string(io::trim(body.substr(eq + 1)));
  }
  return out;
}

namespace detail {

inline double to_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("config key '" + key + "': '" + text + "' is not a number");
}

inline std::uint64_t to_unsigned(const std::string& key, const std::string& text) {
  try {
    if (!text.empty() && text.front() != '-') {
      std::size_t used = 0;
      const auto v = std::stoull(text, &used);
      if (used == text.size()) return v;
    }
  } catch (const std::exception&) {
  }
  throw UsageError("config key '" + key + "': '" + text + "' is not a non-negative integer");
}

inline bool to_bool(const std::string& key, const std::string& text) {
  if (text == "1" || text == "true") return true;
  if (text == "0" || text == "false") return false;
  throw UsageError("config key '" + key + "': '" + text + "' is not a boolean");
}

}  // namespace detail

struct TrainConfig {
  double lr_d = 1e-3;
  double lr_g = 1e-4;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  std::size_t batch_size = 32;
  std::size_t epochs = 100;
  /// Converge point of the similarity penalty, in (0, 1).
  double k = 0.5;
  /// Curvature of the similarity penalty, >= 1.
  double p = 2.0;
  /// Weight of the similarity penalty, >= 0.
  double beta = 0.1;
  std::uint64_t seed = 0;
  std::size_t d = 64;
  std::size_t layers = 2;
  std::size_t channels = 32;
  std::size_t noise_dim = 16;
  std::size_t eval_every = 5;
  /// +1 adds beta * penalty to the generator objective; -1 uses the penalty
  /// with a leading minus (rewards similarity beyond k).
  int reg_sign = 1;
  /// false feeds the decoder a zero latent (unguided generator ablation).
  bool positive_guided = true;
  /// true pools generated negatives with unit weights in the forward pass and
  /// sends the gradient to the memberships as if they had scaled the rows;
  /// false scales each member row by its membership probability.
  bool straight_through = false;

  void validate() const {
    if (!(k > 0.0 && k < 1.0)) throw ParameterError("k must lie in (0, 1), got " + std::to_string(k));
    if (!(p >= 1.0)) throw ParameterError("p must be at least 1, got " + std::to_string(p));
    if (!(beta >= 0.0)) throw ParameterError("beta must be non-negative, got " + std::to_string(beta));
    if (!(lr_d >= 0.0) || !(lr_g >= 0.0)) throw ParameterError("learning rates must be non-negative");
    if (batch_size == 0) throw ParameterError("batch_size must be positive");
    if (d == 0 || channels == 0) throw ParameterError("d and channels must be positive");
    if (eval_every == 0) throw ParameterError("eval_every must be positive");
    if (reg_sign != 1 && reg_sign != -1) throw ParameterError("reg_sign must be 1 or -1");
  }

  /// Applies `kv` on top of the current values. Unknown keys are usage errors.
  void apply(const KeyValues& kv) {
    for (const auto& [key, text] : kv) {
      using namespace detail;
      if (key == "lr_d") lr_d = to_double(key, text);
      else if (key == "lr_g") lr_g = to_double(key, text);
      else if (key == "adam_beta1") adam_beta1 = to_double(key, text);
      else if (key == "adam_beta2") adam_beta2 = to_double(key, text);
      else if (key == "batch_size") batch_size = to_unsigned(key, text);
      else if (key == "epochs") epochs = to_unsigned(key, text);
      else if (key == "k") k = to_double(key, text);
      else if (key == "p") p = to_double(key, text);
      else if (key == "beta") beta = to_double(key, text);
      else if (key == "seed") seed = to_unsigned(key, text);
      else if (key == "d") d = to_unsigned(key, text);
      else if (key == "layers") layers = to_unsigned(key, text);
      else if (key == "channels") channels = to_unsigned(key, text);
      else if (key == "noise_dim") noise_dim = to_unsigned(key, text);
      else if (key == "eval_every") eval_every = to_unsigned(key, text);
      else if (key == "reg_sign") {
        const double s = to_double(key, text);
        if (s != 1.0 && s != -1.0) throw UsageError("config key 'reg_sign': expected 1 or -1");
        reg_sign = static_cast<int>(s);
      } else if (key == "positive_guided") positive_guided = to_bool(key, text);
      else if (key == "straight_through") straight_through = to_bool(key, text);
      else throw UsageError("unknown config key '" + key + "'");
    }
  }

  KeyValues to_key_values() const {
    auto num = [](double v) {
      std::ostringstream os;
      os.precision(17);
      os << v;
      return os.str();
    };
    return {{"lr_d", num(lr_d)},
            {"lr_g", num(lr_g)},
            {"adam_beta1", num(adam_beta1)},
            {"adam_beta2", num(adam_beta2)},
            {"batch_size", std::to_string(batch_size)},
            {"epochs", std::to_string(epochs)},
            {"k", num(k)},
            {"p", num(p)},
            {"beta", num(beta)},
            {"seed", std::to_string(seed)},
            {"d", std::to_string(d)},
            {"layers", std::to_string(layers)},
            {"channels", std::to_string(channels)},
            {"noise_dim", std::to_string(noise_dim)},
            {"eval_every", std::to_string(eval_every)},
            {"reg_sign", std::to_string(reg_sign)},
            {"positive_guided", positive_guided ? "true" : "false"},
            {"straight_through", straight_through ? "true" : "false"}};
  }
};

inline TrainConfig load_train_config(std::istream& in) {
  TrainConfig config;
  config.apply(read_key_values(in));
  return config;
}

}  // namespace hygen
