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

// Positive-guided negative hyperedge generator.
//
// The encoder reads the 0/1 membership vector of a positive hyperedge as a
// one-channel signal of length |V| and runs three conv -> avgpool(2) ->
// leaky_relu stages, then flattens and projects to a latent q.
//
// The decoder projects [q | z] to a channels x ceil(|V|/4) signal and runs
// three conv -> AdaIN -> leaky_relu stages, doubling the length between
// stages by nearest-neighbour upsampling. AdaIN scale (through softplus) and
// shift are affine maps of q. A per-position channel projection, truncation
// to |V| and a sigmoid give the membership probabilities c.

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "hygen/autodiff.hpp"
#include "hygen/hypergraph.hpp"
#include "hygen/parameters.hpp"
#include "hygen/random.hpp"
#include "hygen/sampler.hpp"

namespace hygen {

struct GeneratorShape {
  std::size_t num_nodes = 0;
  std::size_t channels = 32;
  std::size_t latent_dim = 64;
  std::size_t noise_dim = 16;

  static constexpr int kStages = 3;

  std::size_t encoder_out_length() const {
    std::size_t len = num_nodes;
    for (int i = 0; i < kStages; ++i) len = (len + 1) / 2;
    return len;
  }
  std::size_t decoder_in_length() const { return (num_nodes + 3) / 4; }
};

struct ConvLayer {
  ad::Value kernels;  // c_out x (c_in * 3)
  ad::Value bias;     // c_out x 1
};

struct StyleMap {
  ad::Value scale_weight;  // latent x channels
  ad::Value scale_bias;    // 1 x channels
  ad::Value shift_weight;  // latent x channels
  ad::Value shift_bias;    // 1 x channels
};

struct GeneratorParams {
  GeneratorShape shape;
  std::vector<ConvLayer> enc_convs;
  ad::Value enc_proj_weight;  // (channels * enc_len) x latent
  ad::Value enc_proj_bias;    // 1 x latent
  ad::Value dec_in_weight;    // (latent + noise) x (channels * dec_len)
  ad::Value dec_in_bias;      // 1 x (channels * dec_len)
  std::vector<ConvLayer> dec_convs;
  std::vector<StyleMap> styles;
  ad::Value out_weight;  // 1 x channels
  ad::Value out_bias;    // 1 x 1

  static GeneratorParams init(const GeneratorShape& shape, Rng& rng) {
    if (shape.num_nodes < 2) throw ParameterError("generator: need at least 2 nodes");
    GeneratorParams p;
    p.shape = shape;
    const auto c = static_cast<Eigen::Index>(shape.channels);
    const auto dz = static_cast<Eigen::Index>(shape.latent_dim);
    const auto dn = static_cast<Eigen::Index>(shape.noise_dim);
    auto conv = [&](Eigen::Index c_in) {
      const double fan_in = static_cast<double>(c_in * 3);
      const double fan_out = static_cast<double>(c * 3);
      return ConvLayer{ad::Value::parameter(glorot_uniform(c, c_in * 3, fan_in, fan_out, rng)),
                       ad::Value::parameter(ad::Matrix::Zero(c, 1))};
    };
    p.enc_convs.push_back(conv(1));
    for (int i = 1; i < GeneratorShape::kStages; ++i) p.enc_convs.push_back(conv(c));
    const auto flat = c * static_cast<Eigen::Index>(shape.encoder_out_length());
    p.enc_proj_weight = dense_weight(flat, dz, rng);
    p.enc_proj_bias = zero_row(dz);
    const auto dec_flat = c * static_cast<Eigen::Index>(shape.decoder_in_length());
    p.dec_in_weight = dense_weight(dz + dn, dec_flat, rng);
    p.dec_in_bias = zero_row(dec_flat);
    // softplus(log(e - 1)) = 1, so styles start as the identity scale.
    const double unit_softplus = std::log(std::exp(1.0) - 1.0);
    for (int i = 0; i < GeneratorShape::kStages; ++i) {
      p.dec_convs.push_back(conv(c));
      StyleMap s;
      s.scale_weight = dense_weight(dz, c, rng);
      s.scale_bias = ad::Value::parameter(ad::Matrix::Constant(1, c, unit_softplus));
      s.shift_weight = dense_weight(dz, c, rng);
      s.shift_bias = zero_row(c);
      p.styles.push_back(std::move(s));
    }
    p.out_weight = dense_weight(1, c, rng);
    p.out_bias = ad::Value::parameter(ad::Matrix::Zero(1, 1));
    return p;
  }

  ParameterList parameters() const {
    ParameterList out;
    for (std::size_t i = 0; i < enc_convs.size(); ++i) {
      out.push_back({"generator.enc.conv" + std::to_string(i) + ".kernels", enc_convs[i].kernels});
      out.push_back({"generator.enc.conv" + std::to_string(i) + ".bias", enc_convs[i].bias});
    }
    out.push_back({"generator.enc.proj_weight", enc_proj_weight});
    out.push_back({"generator.enc.proj_bias", enc_proj_bias});
    out.push_back({"generator.dec.in_weight", dec_in_weight});
    out.push_back({"generator.dec.in_bias", dec_in_bias});
    for (std::size_t i = 0; i < dec_convs.size(); ++i) {
      const std::string prefix = "generator.dec.stage" + std::to_string(i) + ".";
      out.push_back({prefix + "kernels", dec_convs[i].kernels});
      out.push_back({prefix + "bias", dec_convs[i].bias});
      out.push_back({prefix + "style_scale_weight", styles[i].scale_weight});
      out.push_back({prefix + "style_scale_bias", styles[i].scale_bias});
      out.push_back({prefix + "style_shift_weight", styles[i].shift_weight});
      out.push_back({prefix + "style_shift_bias", styles[i].shift_bias});
    }
    out.push_back({"generator.dec.out_weight", out_weight});
    out.push_back({"generator.dec.out_bias", out_bias});
    return out;
  }

  /// Zeroes every weight through which q reaches the decoder: the AdaIN style
  /// weights and the q rows of the input projection. Afterwards the decoder
  /// output no longer depends on q.
  void zero_conditioning() {
    for (auto& s : styles) {
      s.scale_weight.mutable_data().setZero();
      s.shift_weight.mutable_data().setZero();
    }
    dec_in_weight.mutable_data().topRows(static_cast<Eigen::Index>(shape.latent_dim)).setZero();
  }
};

inline ad::Matrix one_hot(const NodeSet& members, std::size_t num_nodes) {
  ad::Matrix v = ad::Matrix::Zero(1, static_cast<Eigen::Index>(num_nodes));
  for (const auto i : members) v(0, static_cast<Eigen::Index>(i)) = 1.0;
  return v;
}

/// Latent of a positive hyperedge given as a 1 x |V| 0/1 row.
inline ad::Value encode_positive(const ad::Matrix& membership, const GeneratorParams& params) {
  if (membership.rows() != 1 || static_cast<std::size_t>(membership.cols()) != params.shape.num_nodes) {
    throw ShapeError("encode_positive: membership must be 1 x " + std::to_string(params.shape.num_nodes));
  }
  if ((membership.array() != 0.0).count() == 0) throw DomainError("encode_positive: empty hyperedge");
  ad::Value x = ad::Value::constant(membership);
  for (const auto& conv : params.enc_convs) {
    x = ad::leaky_relu(ad::avgpool1d(ad::conv1d(x, conv.kernels, conv.bias), 2));
  }
  x = ad::reshape(x, 1, x.rows() * x.cols());
  return ad::add_row_bias(ad::matmul(x, params.enc_proj_weight), params.enc_proj_bias);
}

inline ad::Value encode_positive(const NodeSet& members, const GeneratorParams& params) {
  if (members.size() < 2) throw DomainError("encode_positive: hyperedge needs at least 2 nodes");
  return encode_positive(one_hot(members, params.shape.num_nodes), params);
}

/// Membership probabilities c (1 x |V|) for latent q and noise z (1 x noise_dim).
inline ad::Value decode_membership(const ad::Value& latent, const ad::Value& noise, const GeneratorParams& params) {
  const auto& shape = params.shape;
  const auto c = static_cast<Eigen::Index>(shape.channels);
  const auto len0 = static_cast<Eigen::Index>(shape.decoder_in_length());
  ad::Value x = ad::add_row_bias(ad::matmul(ad::concat_cols(latent, noise), params.dec_in_weight), params.dec_in_bias);
  x = ad::reshape(x, c, len0);
  for (std::size_t i = 0; i < params.dec_convs.size(); ++i) {
    const auto& style = params.styles[i];
    ad::Value scale = ad::transpose(
        ad::softplus(ad::add_row_bias(ad::matmul(latent, style.scale_weight), style.scale_bias)));
    ad::Value shift = ad::transpose(ad::add_row_bias(ad::matmul(latent, style.shift_weight), style.shift_bias));
    x = ad::conv1d(x, params.dec_convs[i].kernels, params.dec_convs[i].bias);
    x = ad::leaky_relu(ad::adain(x, scale, shift, 1e-5));
    if (i + 1 < params.dec_convs.size()) x = ad::upsample_nearest(x, 2);
  }
  ad::Value logits = ad::add_col_bias(ad::matmul(params.out_weight, x), params.out_bias);
  logits = ad::slice_cols(logits, 0, static_cast<Eigen::Index>(shape.num_nodes));
  return ad::sigmoid(logits);
}

inline ad::Matrix gaussian_noise(std::size_t width, Rng& rng) {
  ad::Matrix z(1, static_cast<Eigen::Index>(width));
  for (Eigen::Index j = 0; j < z.cols(); ++j) z(0, j) = standard_normal(rng);
  return z;
}

/// Indices of the n largest entries of the 1 x m row c, lowest index first
/// among ties. Returned in increasing index order.
inline NodeSet select_topn(const ad::Matrix& c, std::size_t n) {
  const auto m = static_cast<std::size_t>(c.size());
  if (n == 0 || n > m) {
    throw ParameterError("select_topn: n = " + std::to_string(n) + " with " + std::to_string(m) + " candidates");
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return c(static_cast<Eigen::Index>(a)) > c(static_cast<Eigen::Index>(b));
  });
  order.resize(n);
  return make_node_set(std::move(order));
}

struct GeneratedNegative {
  NodeSet nodes;
  ad::Value membership;  // 1 x |V|
};

/// Encodes the guiding positive, decodes with fresh noise, and keeps the
/// top-n nodes where n is drawn from `sizes`. When `positive_guided` is false
/// the decoder sees a zero latent.
inline GeneratedNegative generate(const NodeSet& positive, const GeneratorParams& params, const SizeDistribution& sizes,
                                  Rng& noise_rng, Rng& size_rng, bool positive_guided = true) {
  const std::size_t n = std::min(sample_size(sizes, size_rng), params.shape.num_nodes);
  ad::Value latent = encode_positive(positive, params);
  if (!positive_guided) latent = ad::Value::constant(ad::Matrix::Zero(1, latent.cols()));
  ad::Value noise = ad::Value::constant(gaussian_noise(params.shape.noise_dim, noise_rng));
  ad::Value c = decode_membership(latent, noise, params);
  return {select_topn(c.data(), n), c};
}

}  // namespace hygen
