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

// Planted-community hypergraphs. Nodes are split into communities of near
// equal size; each community contributes edges_per_community hyperedges whose
// members all come from that community, except a noise_edge_fraction of all
// hyperedges which draw members from the whole node set. Node features are a
// one-hot community indicator plus N(0, 0.1^2) noise.

#include <cmath>
#include <cstdint>
#include <istream>
#include <set>
#include <string>
#include <vector>

#include "hygen/config.hpp"
#include "hygen/errors.hpp"
#include "hygen/hypergraph.hpp"
#include "hygen/random.hpp"

namespace hygen {

struct SyntheticSpec {
  std::size_t num_nodes = 200;
  std::size_t num_communities = 20;
  std::size_t edges_per_community = 15;
  std::size_t size_min = 3;
  std::size_t size_max = 6;
  double noise_edge_fraction = 0.05;
  /// 0 means one column per community.
  std::size_t feature_dim = 0;
  std::uint64_t seed = 7;

  std::size_t resolved_feature_dim() const { return feature_dim == 0 ? num_communities : feature_dim; }

  void validate() const {
    if (num_communities == 0 || num_nodes < num_communities) {
      throw ParameterError("synthetic: need 1 <= num_communities <= num_nodes");
    }
    if (size_min < 2 || size_max < size_min) throw ParameterError("synthetic: need 2 <= size_min <= size_max");
    if (num_nodes / num_communities < size_min) {
      throw ParameterError("synthetic: a community of " + std::to_string(num_nodes / num_communities) +
                           " nodes is smaller than size_min = " + std::to_string(size_min));
    }
    if (!(noise_edge_fraction >= 0.0 && noise_edge_fraction <= 1.0)) {
      throw ParameterError("synthetic: noise_edge_fraction must lie in [0, 1]");
    }
    if (resolved_feature_dim() < num_communities) {
      throw ParameterError("synthetic: feature_dim must be at least num_communities");
    }
  }

  void apply(const KeyValues& kv) {
    for (const auto& [key, text] : kv) {
      using namespace detail;
      if (key == "num_nodes") num_nodes = to_unsigned(key, text);
      else if (key == "num_communities") num_communities = to_unsigned(key, text);
      else if (key == "edges_per_community") edges_per_community = to_unsigned(key, text);
      else if (key == "size_min") size_min = to_unsigned(key, text);
      else if (key == "size_max") size_max = to_unsigned(key, text);
      else if (key == "noise_edge_fraction") noise_edge_fraction = to_double(key, text);
      else if (key == "feature_dim") feature_dim = to_unsigned(key, text);
      else if (key == "seed") seed = to_unsigned(key, text);
      else throw UsageError("unknown synthetic spec key '" + key + "'");
    }
  }
};

struct SyntheticData {
  Hypergraph graph;
  std::vector<std::size_t> labels;
};

inline SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng = make_stream(spec.seed, Stream::kSynthetic);

  std::vector<std::size_t> order(spec.num_nodes);
  std::iota(order.begin(), order.end(), std::size_t{0});
  shuffle_in_place(order, rng);
  std::vector<std::vector<std::size_t>> communities(spec.num_communities);
  std::vector<std::size_t> labels(spec.num_nodes);
  for (std::size_t i = 0; i < spec.num_nodes; ++i) {
    const std::size_t c = i % spec.num_communities;
    communities[c].push_back(order[i]);
    labels[order[i]] = c;
  }

  const std::size_t total = spec.num_communities * spec.edges_per_community;
  const auto num_noise = static_cast<std::size_t>(std::llround(spec.noise_edge_fraction * static_cast<double>(total)));
  std::vector<char> is_noise(total, 0);
  std::fill(is_noise.begin(), is_noise.begin() + static_cast<std::ptrdiff_t>(num_noise), 1);
  shuffle_in_place(is_noise, rng);

  auto draw_from = [&](const std::vector<std::size_t>& pool, std::size_t upper) {
    const std::size_t hi = std::min(upper, pool.size());
    const std::size_t size = spec.size_min + uniform_index(rng, hi - spec.size_min + 1);
    std::vector<std::size_t> picked = pool;
    for (std::size_t i = 0; i < size; ++i) std::swap(picked[i], picked[i + uniform_index(rng, picked.size() - i)]);
    picked.resize(size);
    return make_node_set(std::move(picked));
  };

  std::set<NodeSet> seen;
  std::vector<NodeSet> edges;
  edges.reserve(total);
  constexpr std::size_t kMaxDraws = 1000;
  for (std::size_t t = 0; t < total; ++t) {
    const auto& home = communities[t / spec.edges_per_community];
    for (std::size_t attempt = 0;; ++attempt) {
      if (attempt == kMaxDraws) throw ParameterError("synthetic: cannot draw enough distinct hyperedges");
      NodeSet e = is_noise[t] ? draw_from(order, spec.size_max) : draw_from(home, spec.size_max);
      if (is_noise[t] && spec.num_communities > 1) {
        const bool single = std::all_of(e.begin(), e.end(), [&](std::size_t v) { return labels[v] == labels[e[0]]; });
        if (single) continue;
      }
      if (seen.insert(e).second) {
        edges.push_back(std::move(e));
        break;
      }
    }
  }

  const auto dim = static_cast<Eigen::Index>(spec.resolved_feature_dim());
  ad::Matrix features(static_cast<Eigen::Index>(spec.num_nodes), dim);
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) features(i, j) = 0.1 * standard_normal(rng);
    features(i, static_cast<Eigen::Index>(labels[static_cast<std::size_t>(i)])) += 1.0;
  }
  return {Hypergraph(spec.num_nodes, std::move(edges), std::move(features)), std::move(labels)};
}

}  // namespace hygen
