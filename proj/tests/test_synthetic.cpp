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

#include <gtest/gtest.h>

#include <map>

#include "hygen/eval.hpp"
#include "hygen/sampler.hpp"
#include "hygen/synthetic.hpp"

namespace hygen {
namespace {

// Fraction of members that share the most common community label.
double modal_fraction(const NodeSet& e, const std::vector<std::size_t>& labels) {
  std::map<std::size_t, std::size_t> counts;
  std::size_t best = 0;
  for (const auto v : e) best = std::max(best, ++counts[labels[v]]);
  return static_cast<double>(best) / static_cast<double>(e.size());
}

TEST(Synthetic, DefaultSpecCounts) {
  const auto data = generate_synthetic(SyntheticSpec{});
  EXPECT_EQ(data.graph.num_nodes(), 200u);
  EXPECT_EQ(data.graph.num_edges(), 300u);
  EXPECT_EQ(data.graph.feature_dim(), 20u);
  EXPECT_EQ(data.labels.size(), 200u);
  std::size_t cross = 0;
  for (const auto& e : data.graph.edges()) {
    EXPECT_GE(e.size(), 3u);
    EXPECT_LE(e.size(), 6u);
    if (modal_fraction(e, data.labels) < 1.0) ++cross;
  }
  EXPECT_EQ(cross, 15u);
}

TEST(Synthetic, CommunitiesPartitionNodes) {
  const auto data = generate_synthetic(SyntheticSpec{});
  std::vector<std::size_t> sizes(20, 0);
  for (const auto c : data.labels) {
    ASSERT_LT(c, 20u);
    ++sizes[c];
  }
  for (const auto s : sizes) EXPECT_EQ(s, 10u);
}

TEST(Synthetic, NoiseFreeEdgesStayInOneCommunity) {
  SyntheticSpec spec;
  spec.noise_edge_fraction = 0.0;
  const auto data = generate_synthetic(spec);
  for (const auto& e : data.graph.edges()) EXPECT_EQ(modal_fraction(e, data.labels), 1.0);
}

TEST(Synthetic, FeaturesCarryCommunityIndicator) {
  const auto data = generate_synthetic(SyntheticSpec{});
  const auto& x = data.graph.features();
  for (std::size_t v = 0; v < data.labels.size(); ++v) {
    Eigen::Index arg = 0;
    x.row(static_cast<Eigen::Index>(v)).maxCoeff(&arg);
    EXPECT_EQ(static_cast<std::size_t>(arg), data.labels[v]);
  }
}

TEST(Synthetic, SameSeedSameGraph) {
  SyntheticSpec spec;
  spec.seed = 11;
  const auto a = generate_synthetic(spec);
  const auto b = generate_synthetic(spec);
  EXPECT_EQ(a.graph.edges(), b.graph.edges());
  EXPECT_TRUE(a.graph.features() == b.graph.features());
  EXPECT_EQ(a.labels, b.labels);
  spec.seed = 12;
  EXPECT_NE(generate_synthetic(spec).graph.edges(), a.graph.edges());
}

TEST(Synthetic, RejectsInvalidSpecs) {
  SyntheticSpec small;
  small.num_nodes = 40;
  small.num_communities = 20;
  EXPECT_THROW(generate_synthetic(small), ParameterError);
  SyntheticSpec sizes;
  sizes.size_min = 1;
  EXPECT_THROW(generate_synthetic(sizes), ParameterError);
  SyntheticSpec noise;
  noise.noise_edge_fraction = 1.5;
  EXPECT_THROW(generate_synthetic(noise), ParameterError);
}

TEST(Synthetic, SpecKeysParse) {
  SyntheticSpec spec;
  spec.apply({{"num_nodes", "50"}, {"num_communities", "5"}, {"noise_edge_fraction", "0.1"}, {"seed", "3"}});
  EXPECT_EQ(spec.num_nodes, 50u);
  EXPECT_EQ(spec.num_communities, 5u);
  EXPECT_DOUBLE_EQ(spec.noise_edge_fraction, 0.1);
  EXPECT_EQ(spec.seed, 3u);
  EXPECT_THROW(spec.apply({{"nodes", "3"}}), UsageError);
}

TEST(Synthetic, ModalCommunityOracleSeparatesSnsNegatives) {
  SyntheticSpec spec;
  spec.noise_edge_fraction = 0.0;
  const auto data = generate_synthetic(spec);
  const auto sizes = data.graph.edge_sizes();
  const SizeDistribution dist(sizes);
  Rng rng = make_stream(spec.seed, Stream::kSampler);
  const CliqueExpansion expansion(data.graph);
  const auto negs = sample_negatives(NegativeMethod::kSns, data.graph, expansion, dist, data.graph.num_edges(), rng);
  std::vector<double> pos, neg;
  for (const auto& e : data.graph.edges()) pos.push_back(modal_fraction(e, data.labels));
  for (const auto& e : negs) neg.push_back(modal_fraction(e, data.labels));
  EXPECT_GT(auroc(pos, neg), 0.9);
}

}  // namespace
}  // namespace hygen
