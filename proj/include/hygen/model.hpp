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

#include <vector>

#include "hygen/config.hpp"
#include "hygen/discriminator.hpp"
#include "hygen/encoder.hpp"
#include "hygen/generator.hpp"

namespace hygen {

/// All learnable weights: hypergraph encoder, generator and discriminator.
struct Model {
  EncoderParams encoder;
  GeneratorParams generator;
  DiscriminatorParams discriminator;

  static Model init(std::size_t num_nodes, std::size_t feature_dim, const TrainConfig& config) {
    Rng rng = make_stream(config.seed, Stream::kInit);
    Model m;
    m.encoder = EncoderParams::init(feature_dim, config.d, config.layers, rng);
    const std::size_t embed_dim = config.layers == 0 ? feature_dim : config.d;
    m.generator = GeneratorParams::init({num_nodes, config.channels, config.d, config.noise_dim}, rng);
    m.discriminator = DiscriminatorParams::init(embed_dim, rng);
    return m;
  }

  /// Encoder parameters followed by discriminator parameters.
  ParameterList critic_parameters() const {
    ParameterList out = encoder.parameters();
    for (auto& p : discriminator.parameters()) out.push_back(std::move(p));
    return out;
  }

  ParameterList generator_parameters() const { return generator.parameters(); }

  ParameterList parameters() const {
    ParameterList out = critic_parameters();
    for (auto& p : generator.parameters()) out.push_back(std::move(p));
    return out;
  }

  std::vector<ad::Matrix> snapshot() const {
    std::vector<ad::Matrix> out;
    for (const auto& p : parameters()) out.push_back(p.value.data());
    return out;
  }

  void restore(const std::vector<ad::Matrix>& values) {
    auto params = parameters();
    if (values.size() != params.size()) throw StateError("model restore: parameter count mismatch");
    for (std::size_t i = 0; i < params.size(); ++i) params[i].value.mutable_data() = values[i];
  }
};

}  // namespace hygen
