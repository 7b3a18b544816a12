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
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hygen/errors.hpp"
#include "hygen/hypergraph.hpp"
#include "hygen/model.hpp"
#include "hygen/sampler.hpp"

namespace hygen {

// ---------------------------------------------------------------------------
// Ranking metrics
// ---------------------------------------------------------------------------

/// Probability that a random positive outscores a random negative, with ties
/// counted as one half. Computed from mid-ranks in O(n log n).
inline double auroc(std::span<const double> pos, std::span<const double> neg) {
  if (pos.empty() || neg.empty()) throw ParameterError("auroc: both score lists must be nonempty");
  std::vector<std::pair<double, bool>> all;
  all.reserve(pos.size() + neg.size());
  for (const double s : pos) all.emplace_back(s, true);
  for (const double s : neg) all.emplace_back(s, false);
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    std::size_t positives = 0;
    while (j < all.size() && all[j].first == all[i].first) positives += all[j++].second ? 1 : 0;
    // Ranks i+1 .. j share the mid-rank (i + 1 + j) / 2.
    rank_sum += static_cast<double>(positives) * static_cast<double>(i + 1 + j) / 2.0;
    i = j;
  }
  const auto np = static_cast<double>(pos.size());
  const auto nn = static_cast<double>(neg.size());
  return (rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

/// Mean precision at the rank of each positive. Scores are ranked in
/// descending order; ties keep input order, which is all positives followed
/// by all negatives.
inline double average_precision(std::span<const double> pos, std::span<const double> neg) {
  if (pos.empty()) throw ParameterError("average_precision: no positive scores");
  std::vector<std::pair<double, bool>> all;
  all.reserve(pos.size() + neg.size());
  for (const double s : pos) all.emplace_back(s, true);
  for (const double s : neg) all.emplace_back(s, false);
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  double precision_sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t r = 0; r < all.size(); ++r) {
    if (!all[r].second) continue;
    ++hits;
    precision_sum += static_cast<double>(hits) / static_cast<double>(r + 1);
  }
  return precision_sum / static_cast<double>(pos.size());
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct RegimeMetrics {
  double auroc = 0.0;
  double ap = 0.0;
};

struct EvalReport {
  /// Indexed by NegativeMethod; empty when the regime could not be sampled.
  std::array<std::optional<RegimeMetrics>, 3> regimes;
  double avg_auroc = 0.0;
  double avg_ap = 0.0;
  std::int64_t epoch = 0;
  std::uint64_t seed = 0;

  const std::optional<RegimeMetrics>& regime(NegativeMethod m) const { return regimes[static_cast<std::size_t>(m)]; }

  /// Recomputes the averages over the regimes that are present.
  void finalize() {
    double auc = 0.0;
    double ap = 0.0;
    std::size_t n = 0;
    for (const auto& r : regimes) {
      if (!r) continue;
      auc += r->auroc;
      ap += r->ap;
      ++n;
    }
    avg_auroc = n ? auc / static_cast<double>(n) : 0.0;
    avg_ap = n ? ap / static_cast<double>(n) : 0.0;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    for (const auto m : kAllNegativeMethods) {
      const auto& r = regime(m);
      const std::string name(to_string(m));
      j[name + "_auroc"] = r ? nlohmann::json(r->auroc) : nlohmann::json(nullptr);
      j[name + "_ap"] = r ? nlohmann::json(r->ap) : nlohmann::json(nullptr);
    }
    j["avg_auroc"] = avg_auroc;
    j["avg_ap"] = avg_ap;
    j["epoch"] = epoch;
    j["seed"] = seed;
    return j;
  }

  static std::string csv_header() {
    return "sns_auroc,mns_auroc,cns_auroc,avg_auroc,sns_ap,mns_ap,cns_ap,avg_ap";
  }

  std::string csv_row() const {
    std::ostringstream os;
    os.precision(17);
    auto cell = [&](const std::optional<double>& v) {
      if (v) os << *v;
    };
    for (const auto m : kAllNegativeMethods) {
      cell(regime(m) ? std::optional<double>(regime(m)->auroc) : std::nullopt);
      os << ',';
    }
    os << avg_auroc;
    for (const auto m : kAllNegativeMethods) {
      os << ',';
      cell(regime(m) ? std::optional<double>(regime(m)->ap) : std::nullopt);
    }
    os << ',' << avg_ap;
    return os.str();
  }
};

/// Epoch with the highest average AUROC; the earliest one on ties.
inline std::int64_t select_best(std::span<const std::pair<std::int64_t, EvalReport>> history) {
  if (history.empty()) throw ParameterError("select_best: empty history");
  std::size_t best = 0;
  for (std::size_t i = 1; i < history.size(); ++i) {
    if (history[i].second.avg_auroc > history[best].second.avg_auroc) best = i;
  }
  return history[best].first;
}

// ---------------------------------------------------------------------------
// Evaluation protocol
// ---------------------------------------------------------------------------

enum class SplitPart : std::uint64_t { kValid = 0, kTest = 1 };

/// Positives of one split part together with one fixed negative set per
/// sampling regime (same count as the positives).
struct EvalSet {
  std::vector<NodeSet> positives;
  std::array<std::optional<std::vector<NodeSet>>, 3> negatives;
  std::vector<std::string> warnings;
};

/// Everything derived from (hypergraph, split) that evaluation and training
/// share: the training-only incidence operators and the sampling structures.
struct DatasetView {
  const Hypergraph* full = nullptr;
  const SplitSet* split = nullptr;
  Hypergraph train_graph;
  EncoderOperators train_ops;
  CliqueExpansion expansion;
  SizeDistribution train_sizes;
  ad::Value features;

  DatasetView(const Hypergraph& h, const SplitSet& s)
      : full(&h),
        split(&s),
        train_graph(h.restricted_to(s.train)),
        train_ops(EncoderOperators::from(train_graph)),
        expansion(h),
        features(ad::Value::constant(h.features())) {
    const auto sizes = train_graph.edge_sizes();
    train_sizes = SizeDistribution(sizes);
  }
};

inline EvalSet build_eval_set(const DatasetView& data, SplitPart part, std::uint64_t seed,
                              const SamplerOptions& options = {}) {
  const auto& indices = part == SplitPart::kValid ? data.split->valid : data.split->test;
  EvalSet set;
  for (const auto j : indices) set.positives.push_back(data.full->edge(j));
  if (set.positives.empty()) throw ParameterError("evaluation split part has no positives");
  for (const auto m : kAllNegativeMethods) {
    Rng rng = make_stream(seed, Stream::kEval, static_cast<std::uint64_t>(part) * 3 + static_cast<std::uint64_t>(m));
    try {
      set.negatives[static_cast<std::size_t>(m)] = sample_negatives(m, *data.full, data.expansion, data.train_sizes,
                                                                    set.positives.size(), rng, options, indices);
    } catch (const SamplingExhausted& e) {
      set.warnings.push_back(std::string(to_string(m)) + " regime skipped: " + e.what());
    } catch (const ParameterError& e) {
      set.warnings.push_back(std::string(to_string(m)) + " regime skipped: " + e.what());
    }
  }
  return set;
}

/// Node embeddings of `model` on the training incidence, without a tape.
inline ad::Matrix node_embeddings(const Model& model, const DatasetView& data) {
  return encode(data.features, data.train_ops, model.encoder).nodes.data();
}

inline EvalReport evaluate_model(const Model& model, const DatasetView& data, const EvalSet& set) {
  const ad::Matrix emb = node_embeddings(model, data);
  const auto pos = score_all(set.positives, emb, model.discriminator);
  EvalReport report;
  for (const auto m : kAllNegativeMethods) {
    const auto& negs = set.negatives[static_cast<std::size_t>(m)];
    if (!negs) continue;
    const auto neg = score_all(*negs, emb, model.discriminator);
    report.regimes[static_cast<std::size_t>(m)] = RegimeMetrics{auroc(pos, neg), average_precision(pos, neg)};
  }
  report.finalize();
  return report;
}

}  // namespace hygen
