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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <memory>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hygen/autodiff.hpp"
#include "hygen/errors.hpp"
#include "hygen/random.hpp"

namespace hygen {

/// A hyperedge or candidate: strictly increasing node ids.
using NodeSet = std::vector<std::size_t>;

inline NodeSet make_node_set(std::vector<std::size_t> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

/// |V| x |E| 0/1 incidence in compressed row form. Row i lists the hyperedges
/// containing node i, in increasing order.
struct IncidenceMatrix {
  std::size_t num_rows = 0;
  std::size_t num_cols = 0;
  std::vector<std::size_t> row_offsets;
  std::vector<std::size_t> col_indices;

  std::span<const std::size_t> row(std::size_t i) const {
    return {col_indices.data() + row_offsets[i], row_offsets[i + 1] - row_offsets[i]};
  }

  bool contains(std::size_t i, std::size_t j) const {
    auto r = row(i);
    return std::binary_search(r.begin(), r.end(), j);
  }

  std::vector<std::size_t> column_sums() const {
    std::vector<std::size_t> sums(num_cols, 0);
    for (const auto j : col_indices) ++sums[j];
    return sums;
  }

  /// Recovers the hyperedge node sets from the matrix.
  std::vector<NodeSet> column_sets() const {
    std::vector<NodeSet> sets(num_cols);
    for (std::size_t i = 0; i < num_rows; ++i) {
      for (const auto j : row(i)) sets[j].push_back(i);
    }
    return sets;
  }
};

class Hypergraph {
 public:
  Hypergraph() = default;

  /// Edges are normalized to sets; repeated edges are dropped and counted in
  /// dropped_duplicates(). Empty edges and out-of-range ids throw.
  Hypergraph(std::size_t num_nodes, std::vector<NodeSet> edges, ad::Matrix features)
      : num_nodes_(num_nodes), features_(std::move(features)) {
    if (static_cast<std::size_t>(features_.rows()) != num_nodes_) {
      throw ShapeError("hypergraph: " + std::to_string(features_.rows()) + " feature rows for " +
                       std::to_string(num_nodes_) + " nodes");
    }
    std::set<NodeSet> seen;
    for (auto& e : edges) {
      NodeSet s = make_node_set(std::move(e));
      if (s.empty()) throw DomainError("hypergraph: empty hyperedge");
      if (s.back() >= num_nodes_) {
        throw ReferentialError("hypergraph: node id " + std::to_string(s.back()) + " is not below |V| = " +
                               std::to_string(num_nodes_));
      }
      if (!seen.insert(s).second) {
        ++dropped_duplicates_;
        continue;
      }
      edges_.push_back(std::move(s));
    }
    build_incidence();
  }

  std::size_t num_nodes() const noexcept { return num_nodes_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::size_t feature_dim() const noexcept { return static_cast<std::size_t>(features_.cols()); }
  std::size_t dropped_duplicates() const noexcept { return dropped_duplicates_; }
  const std::vector<NodeSet>& edges() const noexcept { return edges_; }
  const NodeSet& edge(std::size_t j) const { return edges_.at(j); }
  const ad::Matrix& features() const noexcept { return features_; }
  const IncidenceMatrix& incidence() const noexcept { return incidence_; }

  std::size_t node_degree(std::size_t i) const { return incidence_.row(i).size(); }

  bool contains_edge(const NodeSet& candidate) const {
    return std::binary_search(sorted_edges_.begin(), sorted_edges_.end(), candidate);
  }

  /// Same nodes and features, restricted to the listed hyperedges.
  Hypergraph restricted_to(std::span<const std::size_t> edge_indices) const {
    std::vector<NodeSet> kept;
    kept.reserve(edge_indices.size());
    for (const auto j : edge_indices) kept.push_back(edge(j));
    return Hypergraph(num_nodes_, std::move(kept), features_);
  }

  /// |E| x |V| operator averaging member node rows into each hyperedge.
  std::shared_ptr<const ad::SparseMatrix> node_to_edge_mean() const {
    std::vector<Eigen::Triplet<double>> triplets;
    for (std::size_t j = 0; j < edges_.size(); ++j) {
      const double w = 1.0 / static_cast<double>(edges_[j].size());
      for (const auto i : edges_[j]) {
        triplets.emplace_back(static_cast<int>(j), static_cast<int>(i), w);
      }
    }
    auto m = std::make_shared<ad::SparseMatrix>(static_cast<Eigen::Index>(edges_.size()),
                                                static_cast<Eigen::Index>(num_nodes_));
    m->setFromTriplets(triplets.begin(), triplets.end());
    return m;
  }

  /// |V| x |E| operator averaging incident hyperedge rows into each node.
  /// Nodes of degree zero get an all-zero row.
  std::shared_ptr<const ad::SparseMatrix> edge_to_node_mean() const {
    std::vector<Eigen::Triplet<double>> triplets;
    for (std::size_t i = 0; i < num_nodes_; ++i) {
      const auto r = incidence_.row(i);
      const double w = 1.0 / static_cast<double>(std::max<std::size_t>(r.size(), 1));
      for (const auto j : r) triplets.emplace_back(static_cast<int>(i), static_cast<int>(j), w);
    }
    auto m = std::make_shared<ad::SparseMatrix>(static_cast<Eigen::Index>(num_nodes_),
                                                static_cast<Eigen::Index>(edges_.size()));
    m->setFromTriplets(triplets.begin(), triplets.end());
    return m;
  }

  std::vector<std::size_t> edge_sizes() const {
    std::vector<std::size_t> sizes;
    sizes.reserve(edges_.size());
    for (const auto& e : edges_) sizes.push_back(e.size());
    return sizes;
  }

 private:
  void build_incidence() {
    incidence_.num_rows = num_nodes_;
    incidence_.num_cols = edges_.size();
    incidence_.row_offsets.assign(num_nodes_ + 1, 0);
    for (const auto& e : edges_) {
      for (const auto i : e) ++incidence_.row_offsets[i + 1];
    }
    std::partial_sum(incidence_.row_offsets.begin(), incidence_.row_offsets.end(),
                     incidence_.row_offsets.begin());
    incidence_.col_indices.assign(incidence_.row_offsets.back(), 0);
    std::vector<std::size_t> cursor(incidence_.row_offsets.begin(), incidence_.row_offsets.end() - 1);
    for (std::size_t j = 0; j < edges_.size(); ++j) {
      for (const auto i : edges_[j]) incidence_.col_indices[cursor[i]++] = j;
    }
    sorted_edges_ = edges_;
    std::sort(sorted_edges_.begin(), sorted_edges_.end());
  }

  std::size_t num_nodes_ = 0;
  std::vector<NodeSet> edges_;
  std::vector<NodeSet> sorted_edges_;
  ad::Matrix features_;
  IncidenceMatrix incidence_;
  std::size_t dropped_duplicates_ = 0;
};

// ---------------------------------------------------------------------------
// Clique expansion
// ---------------------------------------------------------------------------

/// Simple undirected graph joining every pair of nodes that share a hyperedge.
class CliqueExpansion {
 public:
  explicit CliqueExpansion(const Hypergraph& h) : offsets_(h.num_nodes() + 1, 0) {
    std::vector<std::vector<std::size_t>> adj(h.num_nodes());
    for (const auto& e : h.edges()) {
      for (std::size_t a = 0; a < e.size(); ++a) {
        for (std::size_t b = a + 1; b < e.size(); ++b) {
          adj[e[a]].push_back(e[b]);
          adj[e[b]].push_back(e[a]);
        }
      }
    }
    for (std::size_t u = 0; u < adj.size(); ++u) {
      auto& list = adj[u];
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
      offsets_[u + 1] = offsets_[u] + list.size();
      for (const auto v : list) {
        if (u < v) pairs_.emplace_back(u, v);
      }
    }
    neighbors_.reserve(offsets_.back());
    for (const auto& list : adj) neighbors_.insert(neighbors_.end(), list.begin(), list.end());
  }

  std::size_t num_nodes() const noexcept { return offsets_.size() - 1; }
  std::size_t num_edges() const noexcept { return pairs_.size(); }

  std::span<const std::size_t> neighbors(std::size_t u) const {
    return {neighbors_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
  }

  bool adjacent(std::size_t u, std::size_t v) const {
    auto n = neighbors(u);
    return std::binary_search(n.begin(), n.end(), v);
  }

  /// Unordered pairs (u < v) in lexicographic order.
  const std::vector<std::pair<std::size_t, std::size_t>>& edge_list() const noexcept { return pairs_; }

  /// True when `nodes` induces a connected subgraph (BFS restricted to `nodes`).
  bool induces_connected(const NodeSet& nodes) const {
    if (nodes.empty()) return false;
    std::vector<char> reached(nodes.size(), 0);
    std::vector<std::size_t> frontier{0};
    reached[0] = 1;
    std::size_t count = 1;
    while (!frontier.empty()) {
      const std::size_t at = frontier.back();
      frontier.pop_back();
      for (std::size_t other = 0; other < nodes.size(); ++other) {
        if (!reached[other] && adjacent(nodes[at], nodes[other])) {
          reached[other] = 1;
          ++count;
          frontier.push_back(other);
        }
      }
    }
    return count == nodes.size();
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> neighbors_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
};

inline CliqueExpansion clique_expand(const Hypergraph& h) { return CliqueExpansion(h); }

// ---------------------------------------------------------------------------
// Splits
// ---------------------------------------------------------------------------

struct SplitSet {
  std::vector<std::size_t> train;
  std::vector<std::size_t> valid;
  std::vector<std::size_t> test;

  friend bool operator==(const SplitSet&, const SplitSet&) = default;
};

/// Uniformly random 60/20/20 partition of the hyperedge indices.
inline SplitSet split_dataset(std::size_t num_edges, std::uint64_t seed) {
  if (num_edges < 5) {
    throw ParameterError("split_dataset: need at least 5 hyperedges, got " + std::to_string(num_edges));
  }
  std::vector<std::size_t> order(num_edges);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng = make_stream(seed, Stream::kSplit);
  shuffle_in_place(order, rng);
  const auto n = static_cast<double>(num_edges);
  const auto n_train = static_cast<std::size_t>(std::llround(0.6 * n));
  const auto n_valid = static_cast<std::size_t>(std::llround(0.2 * n));
  SplitSet split;
  split.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.valid.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train),
                     order.begin() + static_cast<std::ptrdiff_t>(n_train + n_valid));
  split.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train + n_valid), order.end());
  return split;
}

inline SplitSet split_dataset(const Hypergraph& h, std::uint64_t seed) {
  return split_dataset(h.num_edges(), seed);
}

// ---------------------------------------------------------------------------
// Text formats
// ---------------------------------------------------------------------------

namespace io {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::size_t parse_index(std::string_view token, std::size_t line_no) {
  token = trim(token);
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
    throw FormatError("line " + std::to_string(line_no) + ": '" + std::string(token) +
                      "' is not a non-negative integer");
  }
  return value;
}

inline std::vector<std::size_t> parse_index_list(std::string_view line, std::size_t line_no) {
  std::vector<std::size_t> ids;
  if (trim(line).empty()) return ids;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    ids.push_back(parse_index(line.substr(start, comma - start), line_no));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return ids;
}

/// One hyperedge per line as comma-separated node ids; lines starting with '#'
/// are comments.
inline std::vector<NodeSet> read_edges(std::istream& in) {
  std::vector<NodeSet> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (!body.empty() && body.front() == '#') continue;
    if (body.empty()) throw FormatError("line " + std::to_string(line_no) + ": empty hyperedge");
    edges.push_back(make_node_set(parse_index_list(body, line_no)));
  }
  return edges;
}

/// One node per line, space-separated floats; every row has the same width.
inline ad::Matrix read_features(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::istringstream fields(line);
    std::vector<double> row;
    std::string token;
    while (fields >> token) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(token, &used));
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw FormatError("feature line " + std::to_string(line_no) + ": '" + token + "' is not a number");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw FormatError("feature line " + std::to_string(line_no) + ": expected " +
                        std::to_string(rows.front().size()) + " values, found " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  ad::Matrix features(static_cast<Eigen::Index>(rows.size()),
                      rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return features;
}

inline Hypergraph parse_hypergraph(std::istream& edge_in, std::istream& feature_in) {
  ad::Matrix features = read_features(feature_in);
  const auto num_nodes = static_cast<std::size_t>(features.rows());
  return Hypergraph(num_nodes, read_edges(edge_in), std::move(features));
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

inline Hypergraph parse_hypergraph(const std::string& edge_path, const std::string& feature_path) {
  auto edges = open_input(edge_path);
  auto features = open_input(feature_path);
  return parse_hypergraph(edges, features);
}

inline void write_edges(std::ostream& out, std::span<const NodeSet> edges) {
  for (const auto& e : edges) {
    for (std::size_t i = 0; i < e.size(); ++i) out << (i ? "," : "") << e[i];
    out << '\n';
  }
}

inline void write_features(std::ostream& out, const ad::Matrix& features) {
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    for (Eigen::Index j = 0; j < features.cols(); ++j) out << (j ? " " : "") << features(i, j);
    out << '\n';
  }
}

inline void write_split(std::ostream& out, const SplitSet& split) {
  auto line = [&](const char* name, const std::vector<std::size_t>& ids) {
    out << name << ':';
    for (std::size_t i = 0; i < ids.size(); ++i) out << (i ? "," : "") << ids[i];
    out << '\n';
  };
  line("train", split.train);
  line("valid", split.valid);
  line("test", split.test);
}

/// Reads the three-line split format and checks that it partitions
/// [0, num_edges).
inline SplitSet read_split(std::istream& in, std::size_t num_edges) {
  SplitSet split;
  bool have[3] = {false, false, false};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto colon = body.find(':');
    if (colon == std::string_view::npos) throw FormatError("split line " + std::to_string(line_no) + ": missing ':'");
    const auto name = trim(body.substr(0, colon));
    auto ids = parse_index_list(body.substr(colon + 1), line_no);
    if (name == "train") {
      split.train = std::move(ids), have[0] = true;
    } else if (name == "valid") {
      split.valid = std::move(ids), have[1] = true;
    } else if (name == "test") {
      split.test = std::move(ids), have[2] = true;
    } else {
      throw FormatError("split line " + std::to_string(line_no) + ": unknown section '" + std::string(name) + "'");
    }
  }
  if (!have[0] || !have[1] || !have[2]) throw FormatError("split file needs train:, valid: and test: lines");
  std::vector<char> used(num_edges, 0);
  for (const auto* part : {&split.train, &split.valid, &split.test}) {
    for (const auto j : *part) {
      if (j >= num_edges) throw ReferentialError("split references hyperedge " + std::to_string(j));
      if (used[j]++) throw FormatError("split lists hyperedge " + std::to_string(j) + " twice");
    }
  }
  return split;
}

}  // namespace io
}  // namespace hygen
