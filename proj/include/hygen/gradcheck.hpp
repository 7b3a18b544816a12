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

// Finite-difference checks for every differentiable operation and for the
// complete adversarial objective on a 6-node toy hypergraph.

#include <algorithm>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "hygen/autodiff.hpp"
#include "hygen/gradient_check.hpp"
#include "hygen/model.hpp"
#include "hygen/training.hpp"

namespace hygen {

inline constexpr double kGradcheckTolerance = 1e-4;

struct GradcheckCase {
  std::string name;
  /// Returns the worst relative error over all points the case checks.
  std::function<double(Rng&)> run;
};

namespace detail {

inline ad::Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, double lo = -1.0, double hi = 1.0) {
  ad::Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = lo + (hi - lo) * uniform_unit(rng);
  }
  return m;
}

/// Entries with magnitude in [0.1, 1] and random sign, clear of the kink at 0.
inline ad::Matrix off_kink_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  ad::Matrix m = random_matrix(rows, cols, rng, 0.1, 1.0);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (uniform_unit(rng) < 0.5) m(i) = -m(i);
  }
  return m;
}

/// Checks sum(op(inputs) .* R) for a fixed random R at `points` random draws.
inline double check_op(Rng& rng, int points, const std::function<std::vector<ad::Value>(Rng&)>& make_inputs,
                       const std::function<ad::Value(const std::vector<ad::Value>&)>& op) {
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const auto inputs = make_inputs(rng);
    const ad::Value probe = op(inputs);
    const ad::Value weights = ad::Value::constant(random_matrix(probe.rows(), probe.cols(), rng));
    auto loss = [&]() { return ad::sum(ad::hadamard(op(inputs), weights)); };
    worst = std::max(worst, ad::gradient_check(loss, inputs).max_relative_error);
  }
  return worst;
}

inline ad::Value param(ad::Matrix m) { return ad::Value::parameter(std::move(m)); }

/// Smallest distance from the base point to a non-differentiable point of the
/// tape under `root`: leaky_relu inputs to 0, clamp inputs to their bounds,
/// and max/min pooling winners to the runner-up in each column (relative to
/// the column's largest magnitude).
/// Smallest per-channel standard deviation entering any AdaIN node under
/// `root`. Short signals with nearly equal entries make the normalization
/// sharply curved.
inline double adain_spread(const ad::Value& root) {
  double spread = std::numeric_limits<double>::infinity();
  root.for_each_node([&](const ad::Node& node) {
    if (node.op != "adain") return;
    const ad::Matrix& x = node.parents[0]->data;
    const Eigen::VectorXd mu = x.rowwise().mean();
    const Eigen::ArrayXd var = (x.colwise() - mu).array().square().rowwise().mean();
    spread = std::min(spread, var.sqrt().minCoeff());
  });
  return spread;
}

inline double kink_margin(const ad::Value& root, double clamp_lo, double clamp_hi) {
  double margin = std::numeric_limits<double>::infinity();
  root.for_each_node([&](const ad::Node& node) {
    if (node.parents.empty()) return;
    const ad::Matrix& in = node.parents[0]->data;
    if (node.op == "leaky_relu") {
      margin = std::min(margin, in.cwiseAbs().minCoeff());
    } else if (node.op == "clamp") {
      margin = std::min(margin, (in.array() - clamp_lo).abs().minCoeff());
      margin = std::min(margin, (in.array() - clamp_hi).abs().minCoeff());
    } else if (node.op == "maxmin_rows" && in.rows() > 1) {
      for (Eigen::Index j = 0; j < in.cols(); ++j) {
        std::vector<double> column(in.col(j).data(), in.col(j).data() + in.rows());
        std::sort(column.begin(), column.end());
        const double scale = std::max(std::abs(column.front()), std::abs(column.back()));
        if (scale == 0.0) continue;
        margin = std::min(margin, (column[1] - column[0]) / scale);
        margin = std::min(margin, (column[column.size() - 1] - column[column.size() - 2]) / scale);
      }
    }
  });
  return margin;
}

}  // namespace detail

/// The 6-node, 5-hyperedge instance used by the full-objective check.
inline Hypergraph toy_hypergraph(Rng& rng) {
  // No two nodes share a neighbourhood, so no embedding rows tie by symmetry.
  std::vector<NodeSet> edges = {{0, 1, 2}, {2, 3}, {3, 4, 5}, {0, 4}, {1, 5}};
  return Hypergraph(6, std::move(edges), detail::random_matrix(6, 4, rng));
}

/// L_D + L_G + beta * L_reg on one tape, with the generated sets fixed at the
/// base point so the objective is smooth in every parameter. Base points whose
/// pair similarities fall outside [0.05, 0.95] are redrawn: near the poles of
/// the penalty, central differences lose accuracy to truncation and to
/// cancellation in 1 - theta. Base points within kKinkMargin of a kink, or
/// with an AdaIN channel spread below kMinSpread, are redrawn as well.
inline double check_full_objective(Rng& rng, std::size_t entries_per_param = 6) {
  constexpr double kThetaLo = 0.05;
  constexpr double kThetaHi = 0.95;
  constexpr double kKinkMargin = 2e-4;
  constexpr double kMinSpread = 0.02;
  constexpr int kMaxDraws = 1000;
  // AdaIN over length-2 signals and the penalty poles give the composed
  // objective large third derivatives; the O(h^2) truncation term dominates at
  // h = 1e-5.
  constexpr double kFullObjectiveStep = 1e-6;
  const Hypergraph h = toy_hypergraph(rng);
  TrainConfig config;
  config.d = 5;
  config.layers = 2;
  config.channels = 3;
  config.noise_dim = 3;
  const auto ops = EncoderOperators::from(h);
  const ad::Value features = ad::Value::constant(h.features());
  const std::vector<NodeSet> positives = h.edges();

  Model model;
  std::vector<ad::Matrix> noise;
  std::vector<NodeSet> selected;
  auto objective = [&]() {
    const Encoding enc = encode(features, ops, model.encoder);
    std::vector<ad::Value> memberships;
    for (std::size_t i = 0; i < positives.size(); ++i) {
      memberships.push_back(decode_membership(encode_positive(positives[i], model.generator),
                                              ad::Value::constant(noise[i]), model.generator));
      if (selected.size() < positives.size()) selected.push_back(select_topn(memberships.back().data(), 3));
    }
    const auto pos = score_batch(positives, enc.nodes, model.discriminator);
    const auto neg = score_batch(selected, enc.nodes, model.discriminator, memberships);
    ad::Value total = ad::add(loss_discriminator(pos.scores, neg.scores), loss_generator(neg.scores));
    total = ad::add(total, ad::scale(loss_regularization(pos.aggregated, neg.aggregated, config.k, config.p),
                                     config.beta));
    return std::make_pair(total, pair_similarity(pos.aggregated, neg.aggregated).data());
  };

  for (int draw = 0;; ++draw) {
    if (draw == kMaxDraws) throw NumericalError("gradcheck: no well-conditioned base point for the full objective");
    config.seed = rng();
    model = Model::init(h.num_nodes(), h.feature_dim(), config);
    // Shift biases off zero so no pre-activation sits exactly on a kink.
    for (auto& p : model.parameters()) {
      if (p.name.find("bias") != std::string::npos || p.name.find(".b") != std::string::npos) {
        p.value.mutable_data() += detail::random_matrix(p.value.rows(), p.value.cols(), rng, -0.2, 0.2);
      }
    }
    noise.clear();
    for (std::size_t i = 0; i < positives.size(); ++i) noise.push_back(gaussian_noise(config.noise_dim, rng));
    selected.clear();
    const auto [total, theta] = objective();
    const bool interior = theta.minCoeff() >= kThetaLo && theta.maxCoeff() <= kThetaHi &&
                          (theta.array() - config.k).abs().minCoeff() >= kKinkMargin;
    if (interior && detail::kink_margin(total, kThetaClamp, 1.0 - kThetaClamp) >= kKinkMargin &&
        detail::adain_spread(total) >= kMinSpread) {
      break;
    }
  }
  auto loss = [&]() { return objective().first; };
  return ad::gradient_check(loss, values_of(model.parameters()), kFullObjectiveStep, entries_per_param, &rng)
      .max_relative_error;
}

inline std::vector<GradcheckCase> default_gradcheck_cases() {
  using detail::check_op;
  using detail::off_kink_matrix;
  using detail::param;
  using detail::random_matrix;
  using Inputs = std::vector<ad::Value>;
  constexpr int kPoints = 10;
  std::vector<GradcheckCase> cases;
  cases.push_back({"matmul", [](Rng& rng) {
                     return check_op(
                         rng, kPoints, [](Rng& r) { return Inputs{param(random_matrix(3, 4, r)), param(random_matrix(4, 2, r))}; },
                         [](const Inputs& in) { return ad::matmul(in[0], in[1]); });
                   }});
  cases.push_back({"conv1d", [](Rng& rng) {
                     return check_op(
                         rng, kPoints,
                         [](Rng& r) {
                           return Inputs{param(random_matrix(2, 5, r)), param(random_matrix(3, 6, r)), param(random_matrix(3, 1, r))};
                         },
                         [](const Inputs& in) { return ad::conv1d(in[0], in[1], in[2]); });
                   }});
  cases.push_back({"avgpool1d", [](Rng& rng) {
                     return check_op(
                         rng, kPoints, [](Rng& r) { return Inputs{param(random_matrix(2, 7, r))}; },
                         [](const Inputs& in) { return ad::avgpool1d(in[0], 2); });
                   }});
  cases.push_back({"upsample_nearest", [](Rng& rng) {
                     return check_op(
                         rng, kPoints, [](Rng& r) { return Inputs{param(random_matrix(2, 3, r))}; },
                         [](const Inputs& in) { return ad::upsample_nearest(in[0], 2); });
                   }});
  cases.push_back({"leaky_relu", [](Rng& rng) {
                     return check_op(
                         rng, kPoints, [](Rng& r) { return Inputs{param(off_kink_matrix(3, 4, r))}; },
                         [](const Inputs& in) { return ad::leaky_relu(in[0]); });
                   }});
  cases.push_back({"sigmoid", [](Rng& rng) {
                     return check_op(
                         rng, kPoints, [](Rng& r) { return Inputs{param(random_matrix(3, 4, r, -4.0, 4.0))}; },
                         [](const Inputs& in) { return ad::sigmoid(in[0]); });
                   }});
  cases.push_back({"softplus", [](Rng& rng) {
                     return check_op(
                         rng, kPoints, [](Rng& r) { return Inputs{param(random_matrix(3, 4, r, -4.0, 4.0))}; },
                         [](const Inputs& in) { return ad::softplus(in[0]); });
                   }});
  cases.push_back({"adain", [](Rng& rng) {
                     return check_op(
                         rng, kPoints,
                         [](Rng& r) {
                           return Inputs{param(random_matrix(3, 6, r)), param(random_matrix(3, 1, r, 0.5, 2.0)),
                                         param(random_matrix(3, 1, r))};
                         },
                         [](const Inputs& in) { return ad::adain(in[0], in[1], in[2], 1e-5); });
                   }});
  cases.push_back({"cosine_similarity", [](Rng& rng) {
                     return check_op(
                         rng, kPoints, [](Rng& r) { return Inputs{param(random_matrix(1, 5, r)), param(random_matrix(1, 5, r))}; },
                         [](const Inputs& in) { return ad::cosine_similarity(in[0], in[1], 1e-8); });
                   }});
  cases.push_back({"maxmin_pool", [](Rng& rng) {
                     return check_op(
                         rng, kPoints,
                         [](Rng& r) { return Inputs{param(random_matrix(4, 3, r)), param(random_matrix(1, 4, r, 0.2, 1.0))}; },
                         [](const Inputs& in) { return ad::maxmin_rows(ad::scale_rows(in[0], in[1])); });
                   }});
  cases.push_back({"similarity_penalty", [](Rng& rng) {
                     return check_op(
                         rng, kPoints,
                         [](Rng& r) {
                           // Keep theta away from k = 0.5 where |theta - k| has a kink.
                           ad::Matrix t = random_matrix(1, 4, r, 0.05, 0.45);
                           for (Eigen::Index i = 0; i < t.size(); ++i) {
                             if (uniform_unit(r) < 0.5) t(i) += 0.5;
                           }
                           return Inputs{param(t)};
                         },
                         [](const Inputs& in) { return ad::similarity_penalty(in[0], 0.5, 2.0); });
                   }});
  cases.push_back({"structural", [](Rng& rng) {
                     return check_op(
                         rng, kPoints, [](Rng& r) { return Inputs{param(random_matrix(4, 6, r)), param(random_matrix(1, 3, r))}; },
                         [](const Inputs& in) {
                           const std::vector<std::size_t> rows = {2, 0, 2};
                           ad::Value g = ad::gather_rows(in[0], rows);
                           ad::Value flat = ad::reshape(ad::slice_cols(g, 1, 4), 1, 12);
                           ad::Value joined = ad::concat_cols(flat, in[1]);
                           return ad::transpose(ad::add_row_bias(ad::concat_rows(std::vector<ad::Value>{joined, joined}),
                                                                 ad::gather_cols(joined, std::vector<std::size_t>(15, 1))));
                         });
                   }});
  cases.push_back({"spmm", [](Rng& rng) {
                     Rng local = rng;
                     Hypergraph h = toy_hypergraph(local);
                     auto op = h.node_to_edge_mean();
                     return check_op(
                         rng, kPoints, [](Rng& r) { return Inputs{param(random_matrix(6, 3, r))}; },
                         [op](const Inputs& in) { return ad::spmm(op, in[0]); });
                   }});
  cases.push_back({"full_loss", [](Rng& rng) {
                     double worst = 0.0;
                     for (int i = 0; i < 3; ++i) worst = std::max(worst, check_full_objective(rng));
                     return worst;
                   }});
  return cases;
}

/// A case whose backward pass is deliberately wrong (d/dx x^2 reported as x).
inline GradcheckCase broken_gradient_case() {
  return {"broken_fixture", [](Rng& rng) {
            return detail::check_op(
                rng, 3, [](Rng& r) { return std::vector<ad::Value>{detail::param(detail::random_matrix(2, 2, r, 0.5, 1.0))}; },
                [](const std::vector<ad::Value>& in) {
                  return ad::Value::make(in[0].data().cwiseProduct(in[0].data()), "broken_square", {in[0]},
                                         [](ad::Node& self) {
                                           const auto& p = self.parents[0];
                                           p->grad += self.grad.cwiseProduct(p->data);
                                         });
                });
          }};
}

struct GradcheckOutcome {
  std::string name;
  double max_relative_error = 0.0;
  bool passed = false;
};

/// Runs the selected cases (all when `only` is empty) and prints one line per
/// case. Unknown names in `only` are usage errors.
inline std::vector<GradcheckOutcome> run_gradcheck(const std::vector<GradcheckCase>& cases,
                                                   const std::vector<std::string>& only, std::uint64_t seed,
                                                   std::ostream& out, double tolerance = kGradcheckTolerance) {
  for (const auto& name : only) {
    const bool known = std::any_of(cases.begin(), cases.end(), [&](const auto& c) { return c.name == name; });
    if (!known) throw UsageError("gradcheck: unknown op '" + name + "'");
  }
  std::vector<GradcheckOutcome> outcomes;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    if (!only.empty() && std::find(only.begin(), only.end(), c.name) == only.end()) continue;
    Rng rng = make_stream(seed, Stream::kInit, 1000 + i);
    const double err = c.run(rng);
    const bool ok = std::isfinite(err) && err < tolerance;
    outcomes.push_back({c.name, err, ok});
    out << std::left << std::setw(20) << c.name << " max_rel_error=" << std::scientific << std::setprecision(3) << err
        << std::defaultfloat << (ok ? "  PASS" : "  FAIL") << '\n';
  }
  return outcomes;
}

}  // namespace hygen
