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

#include <algorithm>

#include "hygen/discriminator.hpp"
#include "hygen/gradcheck.hpp"
#include "hygen/gradient_check.hpp"

namespace hygen {
namespace {

ad::Value constant(std::initializer_list<std::initializer_list<double>> rows) {
  ad::Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (const double v : r) m(i, j++) = v;
    ++i;
  }
  return ad::Value::constant(m);
}

DiscriminatorParams random_discriminator(std::size_t d, std::uint64_t seed) {
  Rng rng = make_stream(seed, Stream::kInit);
  auto p = DiscriminatorParams::init(d, rng);
  for (auto& np : p.parameters()) {
    if (np.value.rows() == 1 && np.name.find(".b") != std::string::npos) {
      np.value.mutable_data() = hygen::detail::random_matrix(1, np.value.cols(), rng, -0.2, 0.2);
    }
  }
  return p;
}

TEST(MaxMin, Examples) {
  const auto out = aggregate_maxmin(constant({{1, 2}, {3, 0}})).data();
  EXPECT_DOUBLE_EQ(out(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(out(0, 1), 2.0);
  EXPECT_TRUE(aggregate_maxmin(constant({{4, -1, 7}})).data().isZero());
  EXPECT_TRUE(aggregate_maxmin(constant({{1, 5}, {1, 5}, {1, 5}})).data().isZero());
}

TEST(MaxMin, WeightedScalesRowsFirst) {
  const auto out = aggregate_maxmin(constant({{1, 2}, {3, 0}}), constant({{1.0, 0.5}})).data();
  EXPECT_DOUBLE_EQ(out(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(out(0, 1), 2.0);
}

TEST(MaxMin, RejectsWeightsOutsideUnitInterval) {
  const auto rows = constant({{1, 2}, {3, 0}});
  EXPECT_THROW(aggregate_maxmin(rows, constant({{1.0, 0.0}})), ParameterError);
  EXPECT_THROW(aggregate_maxmin(rows, constant({{1.2, 0.5}})), ParameterError);
  EXPECT_THROW(aggregate_maxmin(rows, constant({{-0.1, 0.5}})), ParameterError);
  EXPECT_NO_THROW(aggregate_maxmin(rows, constant({{1.0, 1e-9}})));
}

TEST(MaxMin, NonNegativeAndPermutationInvariant) {
  Rng rng = make_stream(2, Stream::kNoise);
  for (int trial = 0; trial < 50; ++trial) {
    const ad::Matrix m = hygen::detail::random_matrix(6, 4, rng);
    std::vector<std::size_t> perm = {0, 1, 2, 3, 4, 5};
    shuffle_in_place(perm, rng);
    ad::Matrix pm(6, 4);
    for (Eigen::Index i = 0; i < 6; ++i) pm.row(i) = m.row(static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)]));
    const auto a = aggregate_maxmin(ad::Value::constant(m)).data();
    const auto b = aggregate_maxmin(ad::Value::constant(pm)).data();
    EXPECT_TRUE((a.array() >= 0.0).all());
    EXPECT_TRUE(a == b);
  }
}

TEST(Discriminator, ZeroWeightsScoreOneHalf) {
  Rng rng = make_stream(1, Stream::kInit);
  auto p = DiscriminatorParams::init(3, rng);
  for (auto& np : p.parameters()) np.value.mutable_data().setZero();
  const auto s = predict(constant({{1, 2, 3}, {-4, 0, 9}}), p).data();
  EXPECT_DOUBLE_EQ(s(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(s(1, 0), 0.5);
}

TEST(Discriminator, ScoresInUnitIntervalAndShape) {
  const auto p = random_discriminator(4, 3);
  Rng rng = make_stream(3, Stream::kNoise);
  const ad::Value emb = ad::Value::constant(hygen::detail::random_matrix(8, 4, rng));
  const std::vector<NodeSet> cands = {{0, 1}, {2, 3, 4}, {5, 6, 7}, {0, 7}};
  const auto batch = score_batch(cands, emb, p);
  ASSERT_EQ(batch.scores.rows(), 4);
  ASSERT_EQ(batch.scores.cols(), 1);
  EXPECT_TRUE((batch.scores.data().array() > 0.0).all() && (batch.scores.data().array() < 1.0).all());
  const auto plain = score_all(cands, emb.data(), p);
  for (std::size_t i = 0; i < cands.size(); ++i) {
    EXPECT_DOUBLE_EQ(plain[i], score_candidate(cands[i], emb, p).item());
  }
}

TEST(Discriminator, MemberOrderDoesNotMatter) {
  const auto p = random_discriminator(4, 4);
  Rng rng = make_stream(4, Stream::kNoise);
  const ad::Matrix emb = hygen::detail::random_matrix(8, 4, rng);
  // Relabel nodes so the same member rows appear in a different gather order.
  ad::Matrix swapped = emb;
  swapped.row(1) = emb.row(6);
  swapped.row(6) = emb.row(1);
  const double a = score_candidate({1, 3, 6}, ad::Value::constant(emb), p).item();
  const double b = score_candidate({1, 3, 6}, ad::Value::constant(swapped), p).item();
  EXPECT_DOUBLE_EQ(a, b);
}

TEST(Discriminator, BatchRejectsMembershipCountMismatch) {
  const auto p = random_discriminator(2, 5);
  const std::vector<NodeSet> cands = {{0, 1}, {1, 2}};
  const std::vector<ad::Value> memberships = {constant({{0.5, 0.5, 0.5}})};
  EXPECT_THROW(score_batch(cands, constant({{1, 2}, {3, 4}, {5, 6}}), p, memberships), ShapeError);
  EXPECT_THROW(score_candidate({}, constant({{1, 2}}), p), DomainError);
}

TEST(Discriminator, GradientMatchesFiniteDifferences) {
  const auto p = random_discriminator(4, 6);
  Rng rng = make_stream(6, Stream::kNoise);
  auto emb = ad::Value::parameter(hygen::detail::random_matrix(6, 4, rng));
  auto membership = ad::Value::parameter(hygen::detail::random_matrix(1, 6, rng, 0.2, 0.9));
  const std::vector<NodeSet> cands = {{0, 1, 2}, {3, 4}, {1, 4, 5}};
  const std::vector<ad::Value> memberships(3, membership);
  auto loss = [&] { return ad::sum(score_batch(cands, emb, p, memberships).scores); };
  auto params = values_of(p.parameters());
  params.push_back(emb);
  params.push_back(membership);
  EXPECT_LT(ad::gradient_check(loss, params).max_relative_error, 1e-4);
}

}  // namespace
}  // namespace hygen
