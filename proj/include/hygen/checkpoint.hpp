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

// Text checkpoint format, version 1:
//
//   hygen-checkpoint 1
//   num_nodes <N>
//   feature_dim <F>
//   epoch <E>
//   best_valid_auroc <hexfloat | none>
//   rng <engine states>
//   config <key>=<value>          (one line per key)
//   param <name> <rows> <cols>    (followed by <rows> lines of hexfloats)
//   end
//
// Hexadecimal floats make the round trip exact.

#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "hygen/errors.hpp"
#include "hygen/training.hpp"

namespace hygen {

inline void write_checkpoint(std::ostream& out, const Checkpoint& c) {
  out << "hygen-checkpoint " << Checkpoint::kVersion << '\n';
  out << "num_nodes " << c.num_nodes << '\n';
  out << "feature_dim " << c.feature_dim << '\n';
  out << "epoch " << c.epoch << '\n';
  out << "best_valid_auroc ";
  if (c.best_valid_auroc) {
    out << std::hexfloat << *c.best_valid_auroc << std::defaultfloat;
  } else {
    out << "none";
  }
  out << '\n';
  out << "rng " << c.rng_state << '\n';
  for (const auto& [key, value] : c.config.to_key_values()) out << "config " << key << '=' << value << '\n';
  out << std::hexfloat;
  for (std::size_t i = 0; i < c.parameters.size(); ++i) {
    const auto& m = c.parameters[i];
    out << "param " << c.parameter_names[i] << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index col = 0; col < m.cols(); ++col) out << (col ? " " : "") << m(r, col);
      out << '\n';
    }
  }
  out << std::defaultfloat << "end\n";
}

namespace detail {

inline double parse_hexfloat(const std::string& token) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (token.empty() || end != token.c_str() + token.size()) {
    throw VersionError("checkpoint: bad number '" + token + "'");
  }
  return v;
}

}  // namespace detail

/// Any structural problem is reported as a VersionError.
inline Checkpoint read_checkpoint(std::istream& in) {
  Checkpoint c;
  std::string line;
  auto next_line = [&]() -> std::string {
    if (!std::getline(in, line)) throw VersionError("checkpoint: truncated file");
    return line;
  };
  auto expect_field = [&](const std::string& name) {
    std::istringstream fields(next_line());
    std::string key;
    std::string value;
    fields >> key;
    std::getline(fields >> std::ws, value);
    if (key != name) throw VersionError("checkpoint: expected '" + name + "', found '" + key + "'");
    return value;
  };
  auto to_size = [](const std::string& s) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(s, &used);
      if (used == s.size()) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    throw VersionError("checkpoint: bad integer '" + s + "'");
  };

  if (!std::getline(in, line)) throw VersionError("checkpoint: empty file");
  if (line != "hygen-checkpoint " + std::to_string(Checkpoint::kVersion)) {
    throw VersionError("checkpoint: unsupported header '" + line.substr(0, 40) + "'");
  }
  c.num_nodes = to_size(expect_field("num_nodes"));
  c.feature_dim = to_size(expect_field("feature_dim"));
  c.epoch = to_size(expect_field("epoch"));
  const auto best = expect_field("best_valid_auroc");
  if (best != "none") c.best_valid_auroc = detail::parse_hexfloat(best);
  c.rng_state = expect_field("rng");

  KeyValues kv;
  while (true) {
    next_line();
    if (line.rfind("config ", 0) != 0) break;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw VersionError("checkpoint: bad config line");
    kv[line.substr(7, eq - 7)] = line.substr(eq + 1);
  }
  try {
    c.config.apply(kv);
    c.config.validate();
  } catch (const Error& e) {
    throw VersionError(std::string("checkpoint: invalid config: ") + e.what());
  }

  while (line != "end") {
    std::istringstream header(line);
    std::string tag;
    std::string name;
    long rows = -1;
    long cols = -1;
    header >> tag >> name >> rows >> cols;
    if (tag != "param" || rows < 0 || cols < 0) throw VersionError("checkpoint: bad parameter header '" + line + "'");
    ad::Matrix m(rows, cols);
    for (long r = 0; r < rows; ++r) {
      std::istringstream values(next_line());
      std::string token;
      for (long col = 0; col < cols; ++col) {
        if (!(values >> token)) throw VersionError("checkpoint: short row in '" + name + "'");
        m(r, col) = detail::parse_hexfloat(token);
      }
      if (values >> token) throw VersionError("checkpoint: long row in '" + name + "'");
    }
    c.parameter_names.push_back(name);
    c.parameters.push_back(std::move(m));
    next_line();
  }
  return c;
}

}  // namespace hygen
