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

// hygen: command-line driver for training, evaluation, sampling and
// diagnostics. Every run writes manifest-<command>.json into --out.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hygen/hygen.hpp"

namespace fs = std::filesystem;

namespace hygen::cli {
namespace {

struct GlobalOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  std::size_t workers = 1;
};

struct DataOptions {
  std::string edges;
  std::string features;
  std::string synthetic;
  std::string split;
};

std::string fnv1a_file(const std::string& path) {
  auto in = io::open_input(path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 14];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

fs::path output_path(const GlobalOptions& g, const std::string& name) {
  std::error_code ec;
  fs::create_directories(g.out, ec);
  if (ec) throw IoError("cannot create output directory '" + g.out + "': " + ec.message());
  return fs::path(g.out) / name;
}

class Manifest {
 public:
  Manifest(std::string command, const GlobalOptions& g)
      : command_(std::move(command)), options_(g), start_(std::chrono::steady_clock::now()) {
    doc_["command"] = command_;
    doc_["workers"] = g.workers;
    doc_["inputs"] = nlohmann::json::array();
    doc_["artifacts"] = nlohmann::json::array();
  }

  void input(const std::string& role, const std::string& path) {
    doc_["inputs"].push_back({{"role", role}, {"path", path}, {"fnv1a64", fnv1a_file(path)}});
  }
  void artifact(const fs::path& path) { doc_["artifacts"].push_back(path.string()); }
  nlohmann::json& operator[](const std::string& key) { return doc_[key]; }

  void write() {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    doc_["wall_clock_seconds"] = secs;
    const fs::path path = output_path(options_, "manifest-" + command_ + ".json");
    auto out = io::open_output(path.string());
    out << doc_.dump(2) << '\n';
  }

 private:
  std::string command_;
  GlobalOptions options_;
  std::chrono::steady_clock::time_point start_;
  nlohmann::json doc_;
};

KeyValues read_key_value_file(const std::string& path) {
  auto in = io::open_input(path);
  return read_key_values(in);
}

KeyValues parse_overrides(const std::vector<std::string>& sets) {
  KeyValues kv;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects KEY=VALUE, got '" + s + "'");
    kv[s.substr(0, eq)] = s.substr(eq + 1);
  }
  return kv;
}

TrainConfig resolve_config(const GlobalOptions& g, const std::vector<std::string>& sets, Manifest& m) {
  TrainConfig config;
  if (!g.config.empty()) {
    config.apply(read_key_value_file(g.config));
    m.input("config", g.config);
  }
  config.apply(parse_overrides(sets));
  if (g.seed) config.seed = *g.seed;
  return config;
}

nlohmann::json config_json(const TrainConfig& c) {
  nlohmann::json j;
  for (const auto& [k, v] : c.to_key_values()) j[k] = v;
  return j;
}

Hypergraph load_graph(const DataOptions& d, Manifest& m) {
  if (!d.synthetic.empty()) {
    if (!d.edges.empty() || !d.features.empty()) throw UsageError("--synthetic excludes --edges/--features");
    SyntheticSpec spec;
    spec.apply(read_key_value_file(d.synthetic));
    m.input("synthetic_spec", d.synthetic);
    m["synthetic_seed"] = spec.seed;
    return generate_synthetic(spec).graph;
  }
  if (d.edges.empty() || d.features.empty()) throw UsageError("need --edges and --features, or --synthetic");
  Hypergraph h = io::parse_hypergraph(d.edges, d.features);
  m.input("edges", d.edges);
  m.input("features", d.features);
  if (h.dropped_duplicates() > 0) {
    std::cerr << "warning: dropped " << h.dropped_duplicates() << " duplicate hyperedges\n";
  }
  return h;
}

SplitSet load_split(const DataOptions& d, const Hypergraph& h, std::uint64_t seed, Manifest& m) {
  if (d.split.empty()) return split_dataset(h, seed);
  auto in = io::open_input(d.split);
  m.input("split", d.split);
  return io::read_split(in, h.num_edges());
}

Checkpoint load_checkpoint(const std::string& path, const Hypergraph& h, Manifest& m) {
  auto in = io::open_input(path);
  Checkpoint c = read_checkpoint(in);
  m.input("checkpoint", path);
  if (c.num_nodes != h.num_nodes() || c.feature_dim != h.feature_dim()) {
    throw VersionError("checkpoint was trained on " + std::to_string(c.num_nodes) + " nodes x " +
                       std::to_string(c.feature_dim) + " features, dataset has " + std::to_string(h.num_nodes()) +
                       " x " + std::to_string(h.feature_dim()));
  }
  return c;
}

void add_data_options(CLI::App* sub, DataOptions& d, bool with_split = true) {
  sub->add_option("--edges", d.edges, "Edge file (one comma-separated hyperedge per line)");
  sub->add_option("--features", d.features, "Feature file (one space-separated row per node)");
  sub->add_option("--synthetic", d.synthetic, "Synthetic spec file used instead of --edges/--features");
  if (with_split) sub->add_option("--split", d.split, "Split file; drawn from the seed when omitted");
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_train(const GlobalOptions& g, const DataOptions& d, const std::vector<std::string>& sets) {
  Manifest m("train", g);
  const TrainConfig config = resolve_config(g, sets, m);
  config.validate();
  const Hypergraph h = load_graph(d, m);
  const SplitSet split = load_split(d, h, config.seed, m);
  m["config"] = config_json(config);
  m["seed"] = config.seed;

  const auto split_path = output_path(g, "split.txt");
  {
    auto out = io::open_output(split_path.string());
    io::write_split(out, split);
  }
  m.artifact(split_path);

  const auto metrics_path = output_path(g, "metrics.csv");
  auto metrics = io::open_output(metrics_path.string());
  metrics << "epoch,loss_d,loss_g,loss_reg,mean_theta,valid_avg_auroc\n";
  const auto result = train(h, split, config, [&](const EpochLog& log) {
    metrics << log.epoch << ',' << format_double(log.stats.loss_d) << ',' << format_double(log.stats.loss_g) << ','
            << format_double(log.stats.loss_reg) << ',' << format_double(log.stats.mean_theta) << ',';
    if (log.valid_avg_auroc) metrics << format_double(*log.valid_avg_auroc);
    metrics << '\n';
    if (log.valid_avg_auroc) {
      std::cerr << "epoch " << log.epoch << "  L_D=" << log.stats.loss_d << "  L_G=" << log.stats.loss_g
                << "  valid_avg_auroc=" << *log.valid_avg_auroc << '\n';
    }
  });
  metrics.close();
  if (!metrics) throw IoError("failed writing '" + metrics_path.string() + "'");
  m.artifact(metrics_path);

  const auto ckpt_path = output_path(g, "checkpoint.txt");
  {
    auto out = io::open_output(ckpt_path.string());
    write_checkpoint(out, result.checkpoint);
    if (!out) throw IoError("failed writing '" + ckpt_path.string() + "'");
  }
  m.artifact(ckpt_path);
  m["best_epoch"] = result.checkpoint.epoch;
  if (result.checkpoint.best_valid_auroc) m["best_valid_avg_auroc"] = *result.checkpoint.best_valid_auroc;
  m.write();
  std::cout << "best epoch " << result.checkpoint.epoch;
  if (result.checkpoint.best_valid_auroc) std::cout << "  valid_avg_auroc " << *result.checkpoint.best_valid_auroc;
  std::cout << "\ncheckpoint " << ckpt_path.string() << '\n';
  return 0;
}

int cmd_evaluate(const GlobalOptions& g, const DataOptions& d, const std::string& ckpt_path, const std::string& part) {
  Manifest m("evaluate", g);
  const Hypergraph h = load_graph(d, m);
  const Checkpoint ckpt = load_checkpoint(ckpt_path, h, m);
  const std::uint64_t seed = g.seed.value_or(ckpt.config.seed);
  const SplitSet split = load_split(d, h, ckpt.config.seed, m);
  const SplitPart which = part == "valid" ? SplitPart::kValid : SplitPart::kTest;

  const DatasetView view(h, split);
  const EvalSet set = build_eval_set(view, which, seed);
  for (const auto& w : set.warnings) std::cerr << "warning: " << w << '\n';
  EvalReport report = evaluate_model(ckpt.to_model(), view, set);
  report.epoch = static_cast<std::int64_t>(ckpt.epoch);
  report.seed = seed;

  const auto json_path = output_path(g, "eval.json");
  const auto csv_path = output_path(g, "eval.csv");
  {
    auto out = io::open_output(json_path.string());
    out << report.to_json().dump(2) << '\n';
    auto csv = io::open_output(csv_path.string());
    csv << EvalReport::csv_header() << '\n' << report.csv_row() << '\n';
  }
  m.artifact(json_path);
  m.artifact(csv_path);
  m["seed"] = seed;
  m["part"] = part;
  m["config"] = config_json(ckpt.config);
  m.write();
  std::cout << report.to_json().dump() << '\n' << report.csv_row() << '\n';
  return 0;
}

int cmd_sample(const GlobalOptions& g, const DataOptions& d, const std::string& method_name, std::size_t count,
               bool dedup) {
  Manifest m("sample-negatives", g);
  const NegativeMethod method = parse_negative_method(method_name);
  const Hypergraph h = load_graph(d, m);
  const std::uint64_t seed = g.seed.value_or(0);
  const auto sizes = h.edge_sizes();
  const SizeDistribution dist(sizes);
  const CliqueExpansion expansion(h);
  SamplerOptions options;
  options.dedup_positives = dedup;
  Rng rng = make_stream(seed, Stream::kSampler);
  const auto negatives = sample_negatives(method, h, expansion, dist, count, rng, options);

  const auto path = output_path(g, "negatives-" + method_name + ".txt");
  {
    auto out = io::open_output(path.string());
    io::write_edges(out, negatives);
  }
  m.artifact(path);
  m["seed"] = seed;
  m["method"] = method_name;
  m["count"] = count;
  m.write();
  io::write_edges(std::cout, negatives);
  return 0;
}

int cmd_generate(const GlobalOptions& g, const DataOptions& d, const std::string& ckpt_path, std::size_t count) {
  Manifest m("generate", g);
  const Hypergraph h = load_graph(d, m);
  const Checkpoint ckpt = load_checkpoint(ckpt_path, h, m);
  const std::uint64_t seed = g.seed.value_or(ckpt.config.seed);
  const SplitSet split = load_split(d, h, ckpt.config.seed, m);
  const DatasetView view(h, split);
  const Model model = ckpt.to_model();

  Rng guide_rng = make_stream(seed, Stream::kSampler, 1);
  Rng size_rng = make_stream(seed, Stream::kSampler);
  Rng noise_rng = make_stream(seed, Stream::kNoise);
  std::vector<NodeSet> nodes;
  std::vector<std::size_t> guides;
  std::vector<ad::Matrix> memberships;
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t guide = 0;
    do {
      guide = split.train[uniform_index(guide_rng, split.train.size())];
    } while (h.edge(guide).size() < 2);
    auto gen = generate(h.edge(guide), model.generator, view.train_sizes, noise_rng, size_rng,
                        ckpt.config.positive_guided);
    guides.push_back(guide);
    nodes.push_back(std::move(gen.nodes));
    memberships.push_back(gen.membership.data());
  }

  const auto edges_path = output_path(g, "generated.txt");
  const auto csv_path = output_path(g, "memberships.csv");
  {
    auto out = io::open_output(edges_path.string());
    io::write_edges(out, nodes);
    auto csv = io::open_output(csv_path.string());
    csv << "guide";
    for (std::size_t v = 0; v < h.num_nodes(); ++v) csv << ",c" << v;
    csv << '\n' << std::setprecision(17);
    for (std::size_t i = 0; i < count; ++i) {
      csv << guides[i];
      for (Eigen::Index v = 0; v < memberships[i].cols(); ++v) csv << ',' << memberships[i](0, v);
      csv << '\n';
    }
  }
  m.artifact(edges_path);
  m.artifact(csv_path);
  m["seed"] = seed;
  m["count"] = count;
  m.write();
  io::write_edges(std::cout, nodes);
  return 0;
}

int cmd_score(const GlobalOptions& g, const DataOptions& d, const std::string& ckpt_path,
              const std::string& candidates_path) {
  Manifest m("score", g);
  const Hypergraph h = load_graph(d, m);
  const Checkpoint ckpt = load_checkpoint(ckpt_path, h, m);
  const SplitSet split = load_split(d, h, ckpt.config.seed, m);
  auto in = io::open_input(candidates_path);
  std::vector<NodeSet> candidates = io::read_edges(in);
  m.input("candidates", candidates_path);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    candidates[i] = make_node_set(std::move(candidates[i]));
    if (!candidates[i].empty() && candidates[i].back() >= h.num_nodes()) {
      throw ReferentialError("candidate " + std::to_string(i + 1) + " references node " +
                             std::to_string(candidates[i].back()));
    }
  }
  const DatasetView view(h, split);
  const Model model = ckpt.to_model();
  const auto scores = score_all(candidates, node_embeddings(model, view), model.discriminator);

  const auto path = output_path(g, "scores.txt");
  {
    auto out = io::open_output(path.string());
    for (const double s : scores) out << format_double(s) << '\n';
  }
  m.artifact(path);
  m.write();
  for (const double s : scores) std::cout << format_double(s) << '\n';
  return 0;
}

int cmd_synth(const GlobalOptions& g, const std::string& spec_path) {
  Manifest m("synth", g);
  SyntheticSpec spec;
  if (!spec_path.empty()) {
    spec.apply(read_key_value_file(spec_path));
    m.input("spec", spec_path);
  }
  if (g.seed) spec.seed = *g.seed;
  const auto data = generate_synthetic(spec);

  const auto edges_path = output_path(g, "edges.txt");
  const auto features_path = output_path(g, "features.txt");
  const auto labels_path = output_path(g, "labels.txt");
  {
    auto edges = io::open_output(edges_path.string());
    io::write_edges(edges, data.graph.edges());
    auto features = io::open_output(features_path.string());
    io::write_features(features, data.graph.features());
    auto labels = io::open_output(labels_path.string());
    for (const auto c : data.labels) labels << c << '\n';
  }
  for (const auto& p : {edges_path, features_path, labels_path}) m.artifact(p);
  m["seed"] = spec.seed;
  m["num_nodes"] = data.graph.num_nodes();
  m["num_edges"] = data.graph.num_edges();
  m.write();
  std::cout << data.graph.num_nodes() << " nodes, " << data.graph.num_edges() << " hyperedges written to " << g.out
            << '\n';
  return 0;
}

std::vector<double> parse_grid(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw UsageError(std::string(flag) + ": '" + token + "' is not a number");
    }
  }
  if (out.empty()) throw UsageError(std::string(flag) + ": empty grid");
  return out;
}

struct SweepCell {
  double k = 0.0;
  double p = 0.0;
  std::optional<EvalReport> report;
  std::string error;
};

int cmd_sweep(const GlobalOptions& g, const DataOptions& d, const std::vector<std::string>& sets,
              const std::string& k_text, const std::string& p_text) {
  Manifest m("sweep", g);
  const TrainConfig base = resolve_config(g, sets, m);
  const Hypergraph h = load_graph(d, m);
  const SplitSet split = load_split(d, h, base.seed, m);
  const auto ks = parse_grid(k_text, "--k-values");
  const auto ps = parse_grid(p_text, "--p-values");

  std::vector<SweepCell> cells;
  for (const double k : ks) {
    for (const double p : ps) cells.push_back({k, p, std::nullopt, {}});
  }
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      auto& cell = cells[i];
      try {
        TrainConfig config = base;
        config.k = cell.k;
        config.p = cell.p;
        const auto result = train(h, split, config);
        const DatasetView view(h, split);
        const EvalSet set = build_eval_set(view, SplitPart::kTest, config.seed);
        cell.report = evaluate_model(result.checkpoint.to_model(), view, set);
      } catch (const Error& e) {
        cell.error = e.what();
      }
      std::lock_guard<std::mutex> lock(log_mutex);
      std::cerr << "cell k=" << cell.k << " p=" << cell.p << ": "
                << (cell.report ? "avg_auroc " + format_double(cell.report->avg_auroc) : "failed: " + cell.error)
                << '\n';
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(g.workers, cells.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  const auto path = output_path(g, "sweep.csv");
  double hi_sum = 0.0, lo_sum = 0.0;
  std::size_t hi_n = 0, lo_n = 0, failed = 0;
  {
    auto out = io::open_output(path.string());
    out << "k,p,avg_auroc,avg_ap,status\n";
    for (const auto& c : cells) {
      out << format_double(c.k) << ',' << format_double(c.p) << ',';
      if (c.report) {
        out << format_double(c.report->avg_auroc) << ',' << format_double(c.report->avg_ap) << ",ok\n";
        (c.k >= 0.4 ? hi_sum : lo_sum) += c.report->avg_auroc;
        ++(c.k >= 0.4 ? hi_n : lo_n);
      } else {
        std::string reason = c.error;
        for (auto& ch : reason) {
          if (ch == ',' || ch == '\n') ch = ';';
        }
        out << ",,failed: " << reason << '\n';
        ++failed;
      }
    }
  }
  m.artifact(path);
  m["config"] = config_json(base);
  m["cells"] = cells.size();
  m["failed_cells"] = failed;
  m.write();
  std::cout << cells.size() << " cells, " << failed << " failed\n";
  if (hi_n) std::cout << "mean avg_auroc k>=0.4: " << hi_sum / static_cast<double>(hi_n) << '\n';
  if (lo_n) std::cout << "mean avg_auroc k<0.4:  " << lo_sum / static_cast<double>(lo_n) << '\n';
  return 0;
}

int cmd_gradcheck(const GlobalOptions& g, const std::string& ops_text, bool broken_fixture) {
  Manifest m("gradcheck", g);
  auto cases = default_gradcheck_cases();
  if (broken_fixture) cases.push_back(broken_gradient_case());
  std::vector<std::string> only;
  std::stringstream ss(ops_text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (!token.empty()) only.push_back(token);
  }
  const std::uint64_t seed = g.seed.value_or(0);
  const auto outcomes = run_gradcheck(cases, only, seed, std::cout);
  bool ok = true;
  nlohmann::json results = nlohmann::json::object();
  for (const auto& o : outcomes) {
    results[o.name] = o.max_relative_error;
    ok = ok && o.passed;
  }
  m["seed"] = seed;
  m["max_relative_errors"] = results;
  m["passed"] = ok;
  m.write();
  std::cout << (ok ? "gradcheck passed" : "gradcheck FAILED") << '\n';
  return ok ? 0 : static_cast<int>(ExitCode::kThreshold);
}

int run(int argc, char** argv) {
  CLI::App app{"HyGEN hyperedge prediction"};
  app.set_version_flag("--version", "hygen 0.1.0");
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config, "Training config (key=value lines)");
  app.add_option("--seed", g.seed, "Seed for every random stream; overrides the config");
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--workers", g.workers, "Worker threads (sweep cells)")->check(CLI::PositiveNumber)->capture_default_str();

  DataOptions d;
  std::vector<std::string> sets;
  std::string checkpoint, part = "test", method, candidates, spec, k_values, p_values, ops;
  std::size_t count = 0;
  bool dedup = false;
  bool broken_fixture = false;

  auto* train_cmd = app.add_subcommand("train", "Train a model and write checkpoint, metrics and split");
  add_data_options(train_cmd, d);
  train_cmd->add_option("--set", sets, "Config override KEY=VALUE (repeatable)");

  auto* eval_cmd = app.add_subcommand("evaluate", "Evaluate a checkpoint on the SNS/MNS/CNS test sets");
  add_data_options(eval_cmd, d);
  eval_cmd->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  eval_cmd->add_option("--part", part, "Split part")->check(CLI::IsMember({"valid", "test"}))->capture_default_str();

  auto* sample_cmd = app.add_subcommand("sample-negatives", "Draw heuristic negative hyperedges");
  add_data_options(sample_cmd, d, false);
  sample_cmd->add_option("--method", method, "sns, mns or cns")->required()->check(CLI::IsMember({"sns", "mns", "cns"}));
  sample_cmd->add_option("--count", count, "Number of negatives")->required();
  sample_cmd->add_flag("--dedup", dedup, "Reject draws that are known hyperedges");

  auto* gen_cmd = app.add_subcommand("generate", "Generate negatives with a trained generator");
  add_data_options(gen_cmd, d);
  gen_cmd->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  gen_cmd->add_option("--count", count, "Number of negatives")->required();

  auto* score_cmd = app.add_subcommand("score", "Score candidate hyperedges with a trained discriminator");
  add_data_options(score_cmd, d);
  score_cmd->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  score_cmd->add_option("--candidates", candidates, "Candidate file in edge format")->required();

  auto* synth_cmd = app.add_subcommand("synth", "Write a planted-community hypergraph");
  synth_cmd->add_option("--spec", spec, "Synthetic spec file (key=value lines)");

  auto* sweep_cmd = app.add_subcommand("sweep", "Train and evaluate over a (k, p) grid");
  add_data_options(sweep_cmd, d);
  sweep_cmd->add_option("--set", sets, "Config override KEY=VALUE (repeatable)");
  k_values = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1";
  p_values = "1,2,3,4,5";
  sweep_cmd->add_option("--k-values", k_values, "Comma-separated k grid")->capture_default_str();
  sweep_cmd->add_option("--p-values", p_values, "Comma-separated p grid")->capture_default_str();

  auto* grad_cmd = app.add_subcommand("gradcheck", "Finite-difference check of every op and the full objective");
  grad_cmd->add_option("--ops", ops, "Comma-separated case names (default: all)");
  grad_cmd->add_flag("--broken-fixture", broken_fixture, "Add a case with a wrong backward pass")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::kUsage);
  }

  if (*train_cmd) return cmd_train(g, d, sets);
  if (*eval_cmd) return cmd_evaluate(g, d, checkpoint, part);
  if (*sample_cmd) return cmd_sample(g, d, method, count, dedup);
  if (*gen_cmd) return cmd_generate(g, d, checkpoint, count);
  if (*score_cmd) return cmd_score(g, d, checkpoint, candidates);
  if (*synth_cmd) return cmd_synth(g, spec);
  if (*sweep_cmd) return cmd_sweep(g, d, sets, k_values, p_values);
  if (*grad_cmd) return cmd_gradcheck(g, ops, broken_fixture);
  return static_cast<int>(ExitCode::kUsage);
}

}  // namespace
}  // namespace hygen::cli

int main(int argc, char** argv) {
  try {
    return hygen::cli::run(argc, argv);
  } catch (const hygen::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.exit_code());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(hygen::ExitCode::kIo);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(hygen::ExitCode::kUsage);
  }
}
