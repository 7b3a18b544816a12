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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hygen/autodiff.hpp"
#include "hygen/hypergraph.hpp"
#include "hygen/parameters.hpp"

namespace hygen {

/// Predictor d -> 128 -> 8 -> 1 with leaky_relu hidden units and a sigmoid output.
struct DiscriminatorParams {
  static constexpr Eigen::Index kHidden1 = 128;
  static constexpr Eigen::Index kHidden2 = 8;

  ad::Value w1, b1, w2, b2, w3, b3;

  static DiscriminatorParams init(std::size_t input_dim, Rng& rng) {
    const auto d = static_cast<Eigen::Index>(input_dim);
    DiscriminatorParams p;
    p.w1 = dense_weight(d, kHidden1, rng);
    p.b1 = zero_row(kHidden1);
    p.w2 = dense_weight(kHidden1, kHidden2, rng);
    p.b2 = zero_row(kHidden2);
    p.w3 = dense_weight(kHidden2, 1, rng);
    p.b3 = zero_row(1);
    return p;
  }

  ParameterList parameters() const {
    return {{"discriminator.w1", w1}, {"discriminator.b1", b1}, {"discriminator.w2", w2},
            {"discriminator.b2", b2}, {"discriminator.w3", w3}, {"discriminator.b3", b3}};
  }
};

/// Element-wise max minus element-wise min over the rows of `node_embs`
/// (m x d). Optional 1 x m weights in (0, 1] scale the rows first.
inline ad::Value aggregate_maxmin(const ad::Value& node_embs, const std::optional<ad::Value>& weights = std::nullopt) {
  if (node_embs.rows() == 0) throw DomainError("aggregate_maxmin: empty candidate");
  if (!weights) return ad::maxmin_rows(node_embs);
  const auto& w = weights->data();
  if ((w.array() <= 0.0).any() || (w.array() > 1.0).any()) {
    throw ParameterError("aggregate_maxmin: membership weights must lie in (0, 1]");
  }
  return ad::maxmin_rows(ad::scale_rows(node_embs, *weights));
}

/// Scores for B x d aggregated candidates, as B x 1 probabilities.
inline ad::Value predict(const ad::Value& aggregated, const DiscriminatorParams& p) {
  ad::Value h = ad::leaky_relu(ad::add_row_bias(ad::matmul(aggregated, p.w1), p.b1));
  h = ad::leaky_relu(ad::add_row_bias(ad::matmul(h, p.w2), p.b2));
  return ad::sigmoid(ad::add_row_bias(ad::matmul(h, p.w3), p.b3));
}

/// Gathers the member rows of `candidate` from P and pools them. With
/// `membership` (1 x |V|), each member row is scaled by its probability.
inline ad::Value aggregate_candidate(const NodeSet& candidate, const ad::Value& node_embeddings,
                                     const std::optional<ad::Value>& membership = std::nullopt) {
  if (candidate.empty()) throw DomainError("score_candidate: empty candidate");
  ad::Value rows = ad::gather_rows(node_embeddings, candidate);
  if (!membership) return aggregate_maxmin(rows);
  return aggregate_maxmin(rows, ad::gather_cols(*membership, candidate));
}

inline ad::Value score_candidate(const NodeSet& candidate, const ad::Value& node_embeddings,
                                 const DiscriminatorParams& p,
                                 const std::optional<ad::Value>& membership = std::nullopt) {
  return predict(aggregate_candidate(candidate, node_embeddings, membership), p);
}

struct ScoredBatch {
  ad::Value aggregated;  // B x d
  ad::Value scores;      // B x 1
};

/// Scores a batch of candidates. When `memberships` is nonempty it must hold one
/// 1 x |V| row per candidate.
inline ScoredBatch score_batch(std::span<const NodeSet> candidates, const ad::Value& node_embeddings,
                               const DiscriminatorParams& p, std::span<const ad::Value> memberships = {}) {
  if (!memberships.empty() && memberships.size() != candidates.size()) {
    throw ShapeError("score_batch: membership count does not match candidate count");
  }
  std::vector<ad::Value> rows;
  rows.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    rows.push_back(memberships.empty() ? aggregate_candidate(candidates[i], node_embeddings)
                                       : aggregate_candidate(candidates[i], node_embeddings, memberships[i]));
  }
  ad::Value aggregated = ad::concat_rows(rows);
  return {aggregated, predict(aggregated, p)};
}

/// Plain scores for evaluation, in input order.
inline std::vector<double> score_all(std::span<const NodeSet> candidates, const ad::Matrix& node_embeddings,
                                     const DiscriminatorParams& p) {
  if (candidates.empty()) return {};
  const auto batch = score_batch(candidates, ad::Value::constant(node_embeddings), p);
  std::vector<double> out(candidates.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = batch.scores.data()(static_cast<Eigen::Index>(i), 0);
  return out;
}

}  // namespace hygen
