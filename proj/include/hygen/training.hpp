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

// Adversarial training.
//
// Per batch of training positives:
//   1. the generator produces one negative per positive (guided by it);
//   2. critic step: encoder + discriminator minimize
//        L_D = -mean(D(pos)) + mean(D(neg))
//      with the generated memberships held constant;
//   3. generator step: the generator minimizes
//        L_G + reg_sign * beta * L_reg,   L_G = -mean(D(neg))
//      where L_reg is the mean similarity penalty between each positive's
//      pooled embedding and that of its generated negative. Node embeddings
//      are held constant in this step.

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "hygen/autodiff.hpp"
#include "hygen/config.hpp"
#include "hygen/eval.hpp"
#include "hygen/generator.hpp"
#include "hygen/model.hpp"

namespace hygen {

// ---------------------------------------------------------------------------
// Losses
// ---------------------------------------------------------------------------

inline ad::Value loss_discriminator(const ad::Value& pos_scores, const ad::Value& neg_scores) {
  if (pos_scores.data().size() == 0 || neg_scores.data().size() == 0) {
    throw ParameterError("loss_discriminator: empty batch");
  }
  if (pos_scores.data().size() != neg_scores.data().size()) {
    throw ParameterError("loss_discriminator: positive and negative batches differ in size");
  }
  return ad::sub(ad::mean(neg_scores), ad::mean(pos_scores));
}

inline ad::Value loss_generator(const ad::Value& neg_scores) {
  if (neg_scores.data().size() == 0) throw ParameterError("loss_generator: empty batch");
  return ad::scale(ad::mean(neg_scores), -1.0);
}

inline constexpr double kThetaClamp = 1e-4;

/// Cosine similarity of paired rows, clamped to [eps, 1 - eps].
inline ad::Value pair_similarity(const ad::Value& q_pos, const ad::Value& q_neg, double eps = kThetaClamp) {
  return ad::clamp(ad::row_cosine(q_pos, q_neg, 1e-8), eps, 1.0 - eps);
}

/// Mean over paired rows of (|theta - k| / (theta (1 - theta)))^p.
inline ad::Value loss_regularization(const ad::Value& q_pos, const ad::Value& q_neg, double k, double p,
                                     double eps = kThetaClamp) {
  if (!(k > 0.0 && k < 1.0)) throw ParameterError("loss_regularization: k must lie in (0, 1)");
  if (!(p >= 1.0)) throw ParameterError("loss_regularization: p must be at least 1");
  return ad::mean(ad::similarity_penalty(pair_similarity(q_pos, q_neg, eps), k, p));
}

/// Scalar form of the penalty, for analysis and tests.
inline double similarity_penalty_value(double theta, double k, double p) {
  return std::pow(std::abs(theta - k) / (theta * (1.0 - theta)), p);
}

// ---------------------------------------------------------------------------
// Optimizer
// ---------------------------------------------------------------------------

class Adam {
 public:
  Adam(double lr, double beta1, double beta2, double eps = 1e-8) : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  double learning_rate() const noexcept { return lr_; }

  void step(const ParameterList& params) {
    if (slots_.empty()) {
      for (const auto& p : params) {
        slots_.push_back({ad::Matrix::Zero(p.value.rows(), p.value.cols()), ad::Matrix::Zero(p.value.rows(), p.value.cols())});
      }
    }
    if (slots_.size() != params.size()) throw StateError("adam: parameter list changed between steps");
    ++t_;
    if (lr_ == 0.0) return;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
      auto value = params[i].value;
      const ad::Matrix& g = value.grad();
      auto& [m, v] = slots_[i];
      m = beta1_ * m + (1.0 - beta1_) * g;
      v = beta2_ * v + (1.0 - beta2_) * g.cwiseProduct(g);
      value.mutable_data().array() -= lr_ * (m.array() / c1) / ((v.array() / c2).sqrt() + eps_);
    }
  }

 private:
  struct Slot {
    ad::Matrix m;
    ad::Matrix v;
  };
  double lr_, beta1_, beta2_, eps_;
  std::vector<Slot> slots_;
  long t_ = 0;
};

// ---------------------------------------------------------------------------
// Trainer
// ---------------------------------------------------------------------------

struct StepStats {
  double loss_d = 0.0;
  double loss_g = 0.0;
  double loss_reg = 0.0;
  double mean_theta = 0.0;
};

struct EpochLog {
  std::size_t epoch = 0;
  StepStats stats;
  std::optional<double> valid_avg_auroc;
};

struct Checkpoint {
  static constexpr int kVersion = 1;

  TrainConfig config;
  std::size_t num_nodes = 0;
  std::size_t feature_dim = 0;
  std::vector<ad::Matrix> parameters;
  std::vector<std::string> parameter_names;
  std::size_t epoch = 0;
  std::optional<double> best_valid_auroc;
  std::string rng_state;

  Model to_model() const {
    Model m = Model::init(num_nodes, feature_dim, config);
    const auto params = m.parameters();
    if (params.size() != parameters.size()) throw VersionError("checkpoint: parameter count does not match config");
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (params[i].name != parameter_names[i] || params[i].value.rows() != parameters[i].rows() ||
          params[i].value.cols() != parameters[i].cols()) {
        throw VersionError("checkpoint: parameter '" + parameter_names[i] + "' does not match the model shape");
      }
    }
    m.restore(parameters);
    return m;
  }

  static Checkpoint from_model(const Model& model, const TrainConfig& config, std::size_t num_nodes,
                               std::size_t feature_dim) {
    Checkpoint c;
    c.config = config;
    c.num_nodes = num_nodes;
    c.feature_dim = feature_dim;
    for (const auto& p : model.parameters()) {
      c.parameter_names.push_back(p.name);
      c.parameters.push_back(p.value.data());
    }
    return c;
  }
};

class Trainer {
 public:
  Trainer(const Hypergraph& h, const SplitSet& split, TrainConfig config)
      : config_(validated(std::move(config))),
        data_(h, split),
        model_(Model::init(h.num_nodes(), h.feature_dim(), config_)),
        critic_opt_(config_.lr_d, config_.adam_beta1, config_.adam_beta2),
        generator_opt_(config_.lr_g, config_.adam_beta1, config_.adam_beta2),
        noise_rng_(make_stream(config_.seed, Stream::kNoise)),
        size_rng_(make_stream(config_.seed, Stream::kSampler)),
        shuffle_rng_(make_stream(config_.seed, Stream::kShuffle)) {
    if (split.train.empty()) throw ParameterError("train: training split is empty");
    if (data_.train_sizes.empty()) throw ParameterError("train: no training hyperedge has at least 2 nodes");
    if (!config_.positive_guided) model_.generator.zero_conditioning();
  }

  const TrainConfig& config() const noexcept { return config_; }
  const DatasetView& data() const noexcept { return data_; }
  Model& model() noexcept { return model_; }
  const Model& model() const noexcept { return model_; }
  std::size_t epochs_done() const noexcept { return epoch_; }

  /// One critic update followed by one generator update on `batch` (indices
  /// into the full hypergraph's edges).
  StepStats step(std::span<const std::size_t> batch) {
    std::vector<NodeSet> positives;
    positives.reserve(batch.size());
    for (const auto j : batch) positives.push_back(data_.full->edge(j));

    std::vector<NodeSet> negatives;
    std::vector<ad::Value> memberships;
    std::vector<ad::Value> frozen;
    for (const auto& e : positives) {
      auto gen = generate(e, model_.generator, data_.train_sizes, noise_rng_, size_rng_, config_.positive_guided);
      negatives.push_back(std::move(gen.nodes));
      if (config_.straight_through) {
        const ad::Matrix ones = ad::Matrix::Ones(1, gen.membership.cols());
        frozen.push_back(ad::Value::constant(ones));
        memberships.push_back(ad::straight_through(gen.membership, ones));
      } else {
        frozen.push_back(gen.membership.detach());
        memberships.push_back(std::move(gen.membership));
      }
    }

    StepStats stats;
    const auto critic_params = model_.critic_parameters();
    {
      const Encoding enc = encode(data_.features, data_.train_ops, model_.encoder);
      const auto pos = score_batch(positives, enc.nodes, model_.discriminator);
      const auto neg = score_batch(negatives, enc.nodes, model_.discriminator, frozen);
      ad::Value loss = loss_discriminator(pos.scores, neg.scores);
      stats.loss_d = loss.item();
      check_finite(stats, "L_D");
      zero_grads(critic_params);
      loss.backward();
      critic_opt_.step(critic_params);
    }

    const auto gen_params = model_.generator_parameters();
    {
      const ad::Value nodes = encode(data_.features, data_.train_ops, model_.encoder).nodes.detach();
      const auto pos = score_batch(positives, nodes, model_.discriminator);
      const auto neg = score_batch(negatives, nodes, model_.discriminator, memberships);
      ad::Value loss_g = loss_generator(neg.scores);
      ad::Value loss_reg = loss_regularization(pos.aggregated, neg.aggregated, config_.k, config_.p);
      stats.loss_g = loss_g.item();
      stats.loss_reg = loss_reg.item();
      stats.mean_theta = pair_similarity(pos.aggregated, neg.aggregated).data().mean();
      check_finite(stats, "L_G/L_reg");
      ad::Value total = ad::add(loss_g, ad::scale(loss_reg, config_.reg_sign * config_.beta));
      zero_grads(gen_params);
      total.backward();
      generator_opt_.step(gen_params);
    }
    return stats;
  }

  /// One pass over the shuffled training positives. Returns batch-averaged
  /// statistics.
  StepStats run_epoch() {
    std::vector<std::size_t> order = data_.split->train;
    shuffle_in_place(order, shuffle_rng_);
    StepStats total;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += config_.batch_size) {
      const std::size_t end = std::min(order.size(), start + config_.batch_size);
      current_batch_ = batches;
      const auto s = step(std::span<const std::size_t>(order).subspan(start, end - start));
      total.loss_d += s.loss_d;
      total.loss_g += s.loss_g;
      total.loss_reg += s.loss_reg;
      total.mean_theta += s.mean_theta;
      ++batches;
    }
    ++epoch_;
    const auto n = static_cast<double>(batches);
    return {total.loss_d / n, total.loss_g / n, total.loss_reg / n, total.mean_theta / n};
  }

  std::string rng_state() const {
    std::ostringstream os;
    os << noise_rng_ << ' ' << size_rng_ << ' ' << shuffle_rng_;
    return os.str();
  }

 private:
  static TrainConfig validated(TrainConfig config) {
    config.validate();
    return config;
  }

  void check_finite(const StepStats& s, const char* stage) const {
    if (std::isfinite(s.loss_d) && std::isfinite(s.loss_g) && std::isfinite(s.loss_reg)) return;
    std::ostringstream os;
    os << "non-finite loss in " << stage << " at epoch " << epoch_ + 1 << ", batch " << current_batch_
       << " (L_D=" << s.loss_d << ", L_G=" << s.loss_g << ", L_reg=" << s.loss_reg << ")";
    throw NumericalError(os.str());
  }

  TrainConfig config_;
  DatasetView data_;
  Model model_;
  Adam critic_opt_;
  Adam generator_opt_;
  Rng noise_rng_;
  Rng size_rng_;
  Rng shuffle_rng_;
  std::size_t epoch_ = 0;
  std::size_t current_batch_ = 0;
};

struct TrainResult {
  Checkpoint checkpoint;
  std::vector<EpochLog> history;
};

using EpochCallback = std::function<void(const EpochLog&)>;

/// Trains for config.epochs epochs, evaluating on the validation part every
/// eval_every epochs and after the last one. The returned checkpoint holds the
/// parameters with the best average validation AUROC; with zero epochs it
/// holds the initial parameters.
inline TrainResult train(const Hypergraph& h, const SplitSet& split, const TrainConfig& config,
                         const EpochCallback& on_epoch = {}) {
  Trainer trainer(h, split, config);
  const EvalSet valid = build_eval_set(trainer.data(), SplitPart::kValid, config.seed);

  TrainResult result;
  std::vector<std::pair<std::int64_t, EvalReport>> evaluations;
  std::vector<std::vector<ad::Matrix>> snapshots;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    EpochLog log;
    log.epoch = epoch;
    log.stats = trainer.run_epoch();
    if (epoch % config.eval_every == 0 || epoch == config.epochs) {
      EvalReport report = evaluate_model(trainer.model(), trainer.data(), valid);
      report.epoch = static_cast<std::int64_t>(epoch);
      report.seed = config.seed;
      log.valid_avg_auroc = report.avg_auroc;
      evaluations.emplace_back(static_cast<std::int64_t>(epoch), report);
      snapshots.push_back(trainer.model().snapshot());
    }
    if (on_epoch) on_epoch(log);
    result.history.push_back(log);
  }

  // Parameter handles are shared, so restoring rewinds the trainer's model.
  Model& best = trainer.model();
  std::size_t best_epoch = 0;
  std::optional<double> best_auroc;
  if (!evaluations.empty()) {
    const auto epoch = select_best(evaluations);
    for (std::size_t i = 0; i < evaluations.size(); ++i) {
      if (evaluations[i].first == epoch) {
        best.restore(snapshots[i]);
        best_auroc = evaluations[i].second.avg_auroc;
      }
    }
    best_epoch = static_cast<std::size_t>(epoch);
  }
  result.checkpoint = Checkpoint::from_model(best, config, h.num_nodes(), h.feature_dim());
  result.checkpoint.epoch = best_epoch;
  result.checkpoint.best_valid_auroc = best_auroc;
  result.checkpoint.rng_state = trainer.rng_state();
  return result;
}

}  // namespace hygen
