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

// Two-stage hypergraph encoder. Each layer aggregates node rows into
// hyperedges and hyperedge rows back into nodes:
//
//   Q(l) = act(mean_e(P(l-1)) W_E(l) + b_E(l))
//   P(l) = act(mean_v(Q(l))   W_V(l) + b_V(l))
//
// with P(0) = X. mean_e averages the members of each hyperedge, mean_v the
// hyperedges incident to each node (isolated nodes aggregate to zero).

#include <memory>
#include <string>
#include <vector>

#include "hygen/autodiff.hpp"
#include "hygen/hypergraph.hpp"
#include "hygen/parameters.hpp"

namespace hygen {

enum class Activation { kLeakyRelu, kIdentity };

inline ad::Value activate(const ad::Value& x, Activation act) {
  return act == Activation::kLeakyRelu ? ad::leaky_relu(x, 0.01) : x;
}

struct EncoderLayer {
  ad::Value edge_weight;  // d_{l-1} x d_l
  ad::Value edge_bias;    // 1 x d_l
  ad::Value node_weight;  // d_l x d_l
  ad::Value node_bias;    // 1 x d_l
};

struct EncoderParams {
  std::vector<EncoderLayer> layers;
  Activation activation = Activation::kLeakyRelu;

  static EncoderParams init(std::size_t input_dim, std::size_t hidden_dim, std::size_t num_layers, Rng& rng) {
    EncoderParams p;
    auto in = static_cast<Eigen::Index>(input_dim);
    const auto d = static_cast<Eigen::Index>(hidden_dim);
    for (std::size_t l = 0; l < num_layers; ++l) {
      EncoderLayer layer;
      layer.edge_weight = dense_weight(in, d, rng);
      layer.edge_bias = zero_row(d);
      layer.node_weight = dense_weight(d, d, rng);
      layer.node_bias = zero_row(d);
      p.layers.push_back(std::move(layer));
      in = d;
    }
    return p;
  }

  ParameterList parameters() const {
    ParameterList out;
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const std::string prefix = "encoder.layer" + std::to_string(l) + ".";
      out.push_back({prefix + "edge_weight", layers[l].edge_weight});
      out.push_back({prefix + "edge_bias", layers[l].edge_bias});
      out.push_back({prefix + "node_weight", layers[l].node_weight});
      out.push_back({prefix + "node_bias", layers[l].node_bias});
    }
    return out;
  }
};

/// Mean-aggregation operators for one incidence structure, built once and
/// reused across forward passes.
struct EncoderOperators {
  std::shared_ptr<const ad::SparseMatrix> node_to_edge;
  std::shared_ptr<const ad::SparseMatrix> edge_to_node;

  static EncoderOperators from(const Hypergraph& h) { return {h.node_to_edge_mean(), h.edge_to_node_mean()}; }
};

struct Encoding {
  ad::Value nodes;  // |V| x d
  ad::Value edges;  // |E| x d
};

inline Encoding encode(const ad::Value& features, const EncoderOperators& ops, const EncoderParams& params) {
  ad::Value nodes = features;
  if (params.layers.empty()) return {nodes, ad::spmm(ops.node_to_edge, nodes)};
  ad::Value edges;
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const auto& layer = params.layers[l];
    if (layer.edge_weight.rows() != nodes.cols() || layer.node_weight.rows() != layer.edge_weight.cols()) {
      throw ShapeError("encoder: layer " + std::to_string(l) + " does not chain (input width " +
                       std::to_string(nodes.cols()) + ", weight " + std::to_string(layer.edge_weight.rows()) + "x" +
                       std::to_string(layer.edge_weight.cols()) + ")");
    }
    edges = activate(
        ad::add_row_bias(ad::matmul(ad::spmm(ops.node_to_edge, nodes), layer.edge_weight), layer.edge_bias),
        params.activation);
    nodes = activate(
        ad::add_row_bias(ad::matmul(ad::spmm(ops.edge_to_node, edges), layer.node_weight), layer.node_bias),
        params.activation);
  }
  return {nodes, edges};
}

inline Encoding encode(const Hypergraph& h, const EncoderParams& params) {
  return encode(ad::Value::constant(h.features()), EncoderOperators::from(h), params);
}

}  // namespace hygen
