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

// Heuristic negative hyperedge samplers.
//
//   SNS  n nodes uniformly at random.
//   MNS  a connected n-node set in the clique expansion, grown from a random
//        expansion edge by repeatedly adding a random adjacent node.
//   CNS  a hyperedge with one member u swapped for an outside node v that is
//        adjacent to every remaining member.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hygen/errors.hpp"
#include "hygen/hypergraph.hpp"
#include "hygen/random.hpp"

namespace hygen {

enum class NegativeMethod { kSns, kMns, kCns };

inline constexpr std::array<NegativeMethod, 3> kAllNegativeMethods = {NegativeMethod::kSns, NegativeMethod::kMns,
                                                                      NegativeMethod::kCns};

inline std::string_view to_string(NegativeMethod m) {
  switch (m) {
    case NegativeMethod::kSns:
      return "sns";
    case NegativeMethod::kMns:
      return "mns";
    case NegativeMethod::kCns:
      return "cns";
  }
  return "?";
}

inline NegativeMethod parse_negative_method(std::string_view name) {
  for (const auto m : kAllNegativeMethods) {
    if (to_string(m) == name) return m;
  }
  throw UsageError("unknown sampling method '" + std::string(name) + "' (expected sns, mns or cns)");
}

struct SamplerOptions {
  std::size_t max_retries = 100;
  std::size_t size_floor = 2;
  /// Treat outputs that coincide with an existing hyperedge as failed attempts.
  bool dedup_positives = false;
};

/// Empirical distribution of hyperedge sizes.
class SizeDistribution {
 public:
  SizeDistribution() = default;

  /// Sizes below `floor` are ignored.
  explicit SizeDistribution(std::span<const std::size_t> sizes, std::size_t floor = 2) {
    std::map<std::size_t, std::size_t> counts;
    for (const auto s : sizes) {
      if (s >= floor) ++counts[s];
    }
    for (const auto& [size, count] : counts) {
      support_.push_back(size);
      total_ += count;
      cumulative_.push_back(total_);
    }
  }

  bool empty() const noexcept { return total_ == 0; }
  const std::vector<std::size_t>& support() const noexcept { return support_; }

  double probability(std::size_t size) const {
    for (std::size_t i = 0; i < support_.size(); ++i) {
      if (support_[i] == size) {
        const auto prev = i == 0 ? 0 : cumulative_[i - 1];
        return static_cast<double>(cumulative_[i] - prev) / static_cast<double>(total_);
      }
    }
    return 0.0;
  }

  std::size_t sample(Rng& rng) const {
    if (empty()) throw StateError("sample_size: size distribution is empty");
    const std::size_t draw = uniform_index(rng, total_);
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), draw);
    return support_[static_cast<std::size_t>(it - cumulative_.begin())];
  }

 private:
  std::vector<std::size_t> support_;
  std::vector<std::size_t> cumulative_;
  std::size_t total_ = 0;
};

inline std::size_t sample_size(const SizeDistribution& dist, Rng& rng) { return dist.sample(rng); }

/// Uniform n-subset of [0, num_nodes).
inline NodeSet sns(std::size_t num_nodes, std::size_t n, Rng& rng, std::size_t size_floor = 2) {
  if (n < size_floor || n > num_nodes) {
    throw ParameterError("sns: size " + std::to_string(n) + " outside [" + std::to_string(size_floor) + ", " +
                         std::to_string(num_nodes) + "]");
  }
  std::vector<std::size_t> pool(num_nodes);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < n; ++i) {
    std::swap(pool[i], pool[i + uniform_index(rng, num_nodes - i)]);
  }
  pool.resize(n);
  return make_node_set(std::move(pool));
}

inline NodeSet sns(const Hypergraph& h, std::size_t n, Rng& rng, std::size_t size_floor = 2) {
  return sns(h.num_nodes(), n, rng, size_floor);
}

/// Connected n-node set in the clique expansion.
inline NodeSet mns(const CliqueExpansion& graph, std::size_t n, Rng& rng, const SamplerOptions& options = {},
                   const Hypergraph* positives = nullptr) {
  if (n < std::max<std::size_t>(options.size_floor, 2) || n > graph.num_nodes()) {
    throw ParameterError("mns: size " + std::to_string(n) + " is out of range");
  }
  const auto& pairs = graph.edge_list();
  if (pairs.empty()) throw SamplingExhausted("mns: clique expansion has no edges");
  std::vector<char> in_set(graph.num_nodes(), 0);
  std::vector<char> in_frontier(graph.num_nodes(), 0);
  for (std::size_t attempt = 0; attempt < options.max_retries; ++attempt) {
    const auto [u, v] = pairs[uniform_index(rng, pairs.size())];
    std::vector<std::size_t> members{u, v};
    std::vector<std::size_t> frontier;
    in_set[u] = in_set[v] = 1;
    auto extend_frontier = [&](std::size_t node) {
      for (const auto w : graph.neighbors(node)) {
        if (!in_set[w] && !in_frontier[w]) {
          in_frontier[w] = 1;
          frontier.push_back(w);
        }
      }
    };
    extend_frontier(u);
    extend_frontier(v);
    while (members.size() < n && !frontier.empty()) {
      const std::size_t pick = uniform_index(rng, frontier.size());
      const std::size_t w = frontier[pick];
      frontier[pick] = frontier.back();
      frontier.pop_back();
      in_frontier[w] = 0;
      in_set[w] = 1;
      members.push_back(w);
      extend_frontier(w);
    }
    for (const auto m : members) in_set[m] = 0;
    for (const auto f : frontier) in_frontier[f] = 0;
    if (members.size() == n) {
      NodeSet out = make_node_set(std::move(members));
      if (options.dedup_positives && positives != nullptr && positives->contains_edge(out)) continue;
      return out;
    }
  }
  throw SamplingExhausted("mns: no connected set of size " + std::to_string(n) + " after " +
                          std::to_string(options.max_retries) + " attempts");
}

/// One-node replacement of a hyperedge of `h`. When `guides` is given, the
/// hyperedge is drawn from those indices only.
inline NodeSet cns(const Hypergraph& h, const CliqueExpansion& graph, Rng& rng, const SamplerOptions& options = {},
                   std::span<const std::size_t> guides = {}) {
  const std::size_t pool = guides.empty() ? h.num_edges() : guides.size();
  if (pool == 0) throw SamplingExhausted("cns: no hyperedges to perturb");
  std::vector<char> in_edge(h.num_nodes(), 0);
  for (std::size_t attempt = 0; attempt < options.max_retries; ++attempt) {
    const std::size_t pick = uniform_index(rng, pool);
    const NodeSet& e = h.edge(guides.empty() ? pick : guides[pick]);
    if (e.size() < 2) continue;
    const std::size_t removed = uniform_index(rng, e.size());
    NodeSet rest;
    rest.reserve(e.size() - 1);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (i != removed) rest.push_back(e[i]);
    }
    for (const auto m : e) in_edge[m] = 1;
    std::vector<std::size_t> replacements;
    for (const auto v : graph.neighbors(rest.front())) {
      if (in_edge[v]) continue;
      bool linked = true;
      for (std::size_t r = 1; r < rest.size() && linked; ++r) linked = graph.adjacent(rest[r], v);
      if (linked) replacements.push_back(v);
    }
    for (const auto m : e) in_edge[m] = 0;
    if (replacements.empty()) continue;
    rest.push_back(replacements[uniform_index(rng, replacements.size())]);
    NodeSet out = make_node_set(std::move(rest));
    if (options.dedup_positives && h.contains_edge(out)) continue;
    return out;
  }
  throw SamplingExhausted("cns: no valid (hyperedge, node, replacement) triple after " +
                          std::to_string(options.max_retries) + " attempts");
}

/// Draws `count` negatives with one method. Sizes for SNS and MNS come from
/// `sizes`; CNS keeps the size of the perturbed hyperedge.
inline std::vector<NodeSet> sample_negatives(NegativeMethod method, const Hypergraph& h, const CliqueExpansion& graph,
                                             const SizeDistribution& sizes, std::size_t count, Rng& rng,
                                             const SamplerOptions& options = {},
                                             std::span<const std::size_t> cns_guides = {}) {
  std::vector<NodeSet> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    switch (method) {
      case NegativeMethod::kSns: {
        const std::size_t n = std::min(sample_size(sizes, rng), h.num_nodes());
        NodeSet s = sns(h.num_nodes(), n, rng, options.size_floor);
        for (std::size_t retry = 0; options.dedup_positives && h.contains_edge(s); ++retry) {
          if (retry + 1 >= options.max_retries) throw SamplingExhausted("sns: every draw was a positive");
          s = sns(h.num_nodes(), n, rng, options.size_floor);
        }
        out.push_back(std::move(s));
        break;
      }
      case NegativeMethod::kMns:
        out.push_back(mns(graph, std::min(sample_size(sizes, rng), h.num_nodes()), rng, options, &h));
        break;
      case NegativeMethod::kCns:
        out.push_back(cns(h, graph, rng, options, cns_guides));
        break;
    }
  }
  return out;
}

}  // namespace hygen
