#include "corestab/cli.hpp"

#include <glob.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>

#include "CLI11.hpp"

#include "corestab/embedding.hpp"
#include "corestab/error.hpp"
#include "corestab/eval.hpp"
#include "corestab/graph.hpp"
#include "corestab/io.hpp"
#include "corestab/kcore.hpp"
#include "corestab/regress.hpp"
#include "corestab/rng.hpp"
#include "corestab/share.hpp"
#include "corestab/stable.hpp"
#include "corestab/synth.hpp"

namespace fs = std::filesystem;

namespace corestab {

std::string file_hash(const fs::path& path) {
  const std::string bytes = read_file(path);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

nlohmann::json to_json(const RunManifest& m) {
  nlohmann::json inputs = nlohmann::json::object();
  for (const auto& p : m.inputs) inputs[p.string()] = fs::is_regular_file(p) ? file_hash(p) : "directory";
  return {{"schema_version", 1},
          {"command", m.command},
          {"config", m.config},
          {"seed", m.seed},
          {"inputs", inputs},
          {"tool_version", kToolVersion},
          {"wall_time_seconds", m.wall_time_seconds}};
}

void write_manifest(const fs::path& dir, const RunManifest& m) {
  write_file_atomic(dir / "manifest.json", to_json(m).dump(2) + "\n");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void write_json(const fs::path& path, const nlohmann::json& j) { write_file_atomic(path, j.dump(2) + "\n"); }

nlohmann::json read_json(const fs::path& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

Graph load_graph(const fs::path& path, std::ostream& err) {
  EdgeListLoad load = load_edge_list(path);
  if (load.self_loops_dropped)
    err << "warning: dropped " << load.self_loops_dropped << " self-loop(s) from " << path.string() << "\n";
  if (load.duplicates_collapsed)
    err << "warning: collapsed " << load.duplicates_collapsed << " duplicate edge(s) in " << path.string() << "\n";
  return std::move(load.graph);
}

std::string sorted_doubles_csv(const char* header, std::span<const double> xs) {
  std::string out = header;
  out += '\n';
  out.reserve(out.size() + xs.size() * 20);
  for (double x : xs) {
    out += format_double(x);
    out += '\n';
  }
  return out;
}

EmbedSpec embed_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("embedder config must be a JSON object");
  EmbedSpec spec;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "algorithm") spec.algorithm = parse_algorithm(value.get<std::string>());
      else if (key == "dim") spec.dim = value.get<int>();
      else if (key == "batches") spec.batches = value.get<int>();
      else if (key == "negatives") spec.negatives = value.get<int>();
      else if (key == "learning_rate") spec.learning_rate = value.get<double>();
      else if (key == "seed") spec.seed = value.get<std::uint64_t>();
      else throw std::invalid_argument("unknown embedder config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad embedder config value: ") + e.what());
  }
  spec.validate();
  return spec;
}

nlohmann::json to_json(const EmbedSpec& spec) {
  nlohmann::json j = {{"algorithm", to_string(spec.algorithm)}, {"dim", spec.dim}, {"seed", spec.seed}};
  if (spec.algorithm == Algorithm::line1) {
    j["batches"] = spec.batches;
    j["negatives"] = spec.negatives;
    j["learning_rate"] = spec.learning_rate;
  }
  return j;
}

/// Embedder options shared by embed, share and linkpred.
struct EmbedderFlags {
  std::string embedder;
  int dim = 0;
  std::string config;

  void add(CLI::App* cmd) {
    cmd->add_option("--embedder", embedder, "Built-in embedder: le | line");
    cmd->add_option("--dim", dim, "Embedding dimension");
    cmd->add_option("--config", config, "Embedder config JSON file")->check(CLI::ExistingFile);
  }

  bool given() const { return !embedder.empty() || !config.empty(); }

  EmbedSpec resolve(std::uint64_t seed, int default_line_dim, int default_le_dim) const {
    EmbedSpec spec;
    bool dim_from_config = false;
    if (!config.empty()) {
      const nlohmann::json j = read_json(config);
      spec = embed_spec_from_json(j);
      dim_from_config = j.contains("dim");
    }
    if (!embedder.empty()) spec.algorithm = parse_algorithm(embedder);
    if (dim > 0) {
      spec.dim = dim;
    } else if (!dim_from_config) {
      spec.dim = spec.algorithm == Algorithm::line1 ? default_line_dim : default_le_dim;
    }
    spec.seed = seed;
    spec.validate();
    return spec;
  }
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  int status = kExitOk;
};

// --- kcore ------------------------------------------------------------------

struct KcoreArgs {
  std::string graph, out;
};

void cmd_kcore(const KcoreArgs& a, Context& ctx) {
  const auto t0 = Clock::now();
  const Graph g = load_graph(a.graph, ctx.err);
  const CorenessMap cm = core_decomposition(g);
  const fs::path dir = a.out;

  std::string coreness = "node_id,coreness\n";
  for (NodeId v = 0; v < g.node_count(); ++v)
    coreness += std::to_string(g.label(v)) + ',' + std::to_string(cm.coreness[v]) + '\n';
  write_file_atomic(dir / "coreness.csv", coreness);
  write_file_atomic(dir / "degeneracy.txt", std::to_string(cm.degeneracy) + "\n");

  std::vector<NodeLabel> core_labels;
  for (NodeId v : cm.degenerate_core) core_labels.push_back(g.label(v));
  std::sort(core_labels.begin(), core_labels.end());
  std::string core;
  for (NodeLabel l : core_labels) core += std::to_string(l) + '\n';
  write_file_atomic(dir / "degenerate_core.txt", core);

  std::string features = "k,nodes,edges,size,density,clustering,transitivity\n";
  for (int k = 0; k <= cm.degeneracy; ++k) {
    const Subgraph sub = k_core_subgraph(g, cm, k);
    const SubgraphFeatures f = subgraph_features(sub.graph);
    features += std::to_string(k) + ',' + std::to_string(sub.graph.node_count()) + ',' +
                std::to_string(sub.graph.edge_count()) + ',' + format_double(f.size) + ',' +
                format_double(f.edge_density) + ',' + format_double(f.avg_clustering) + ',' +
                format_double(f.transitivity) + '\n';
  }
  write_file_atomic(dir / "kcore_features.csv", features);

  nlohmann::json summary = {{"schema_version", 1},
                            {"nodes", g.node_count()},
                            {"edges", g.edge_count()},
                            {"degeneracy", cm.degeneracy},
                            {"core_size", cm.degenerate_core.size()}};
  summary["completeness"] = cm.degenerate_core.size() >= 2 ? nlohmann::json(core_completeness(g, cm)) : nullptr;
  write_json(dir / "summary.json", summary);

  ctx.out << "degeneracy " << cm.degeneracy << ", core size " << cm.degenerate_core.size() << "\n";
  write_manifest(dir, {"kcore", {{"graph", a.graph}}, 0, {a.graph}, seconds_since(t0)});
}

// --- generate ---------------------------------------------------------------

struct GenerateArgs {
  std::string config, model, out;
  std::size_t n = 0, m = 0;
  double p = -1.0;
  std::optional<std::uint64_t> seed;
};

void cmd_generate(const GenerateArgs& a, Context& ctx) {
  const auto t0 = Clock::now();
  nlohmann::json j = a.config.empty() ? nlohmann::json::object() : read_json(a.config);
  if (!a.model.empty()) j["model"] = a.model;
  if (a.n) j["n"] = a.n;
  if (a.p >= 0.0) j["p"] = a.p;
  if (a.m) j["m"] = a.m;
  if (a.seed) j["seed"] = *a.seed;
  const GenSpec spec = gen_spec_from_json(j);
  const Graph g = generate(spec);
  const fs::path dir = a.out;
  write_file_atomic(dir / "graph.txt", format_edge_list(g));
  const CorenessMap cm = core_decomposition(g);
  write_json(dir / "provenance.json", {{"schema_version", 1},
                                       {"spec", to_json(spec)},
                                       {"seed", spec.seed},
                                       {"nodes", g.node_count()},
                                       {"edges", g.edge_count()},
                                       {"degeneracy", cm.degeneracy},
                                       {"tool_version", kToolVersion}});
  ctx.out << g.node_count() << " nodes, " << g.edge_count() << " edges\n";
  RunManifest m{"generate", to_json(spec), spec.seed, {}, seconds_since(t0)};
  if (!a.config.empty()) m.inputs.push_back(a.config);
  write_manifest(dir, m);
}

// --- embed ------------------------------------------------------------------

struct EmbedArgs {
  std::string graph, out;
  std::uint64_t seed = 0;
  EmbedderFlags embedder;
};

void cmd_embed(const EmbedArgs& a, Context& ctx) {
  const auto t0 = Clock::now();
  const Graph g = load_graph(a.graph, ctx.err);
  const EmbedSpec spec = a.embedder.resolve(a.seed, 10, 10);
  const fs::path dir = a.out;
  EmbeddingMatrix y;
  if (spec.algorithm == Algorithm::laplacian_eigenmaps) {
    SpectralEmbedding se = laplacian_eigenmaps(g, spec.dim, spec.seed);
    std::string vals = "eigenvalue\n";
    for (double v : se.eigenvalues) vals += format_double(v) + '\n';
    write_file_atomic(dir / "eigenvalues.csv", vals);
    y = std::move(se.embedding);
  } else {
    y = line1_embed(g, spec);
  }
  write_file_atomic(dir / "embedding.csv", format_embedding_csv(y, g.labels()));
  write_file_atomic(dir / "embedding.bin", format_embedding_binary(y));
  write_manifest(dir, {"embed", to_json(spec), a.seed, {a.graph}, seconds_since(t0)});
}

// --- share ------------------------------------------------------------------

struct ShareArgs {
  std::string graph, out, external, metric = "euclidean", dataset;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool no_distributions = false;
  EmbedderFlags embedder;
};

void cmd_share(const ShareArgs& a, Context& ctx) {
  const auto t0 = Clock::now();
  const Graph g = load_graph(a.graph, ctx.err);
  const fs::path dir = a.out;
  ShareOptions opt;
  opt.metric = parse_metric(a.metric);
  opt.dataset = a.dataset.empty() ? fs::path(a.graph).stem().string() : a.dataset;
  opt.threads = a.threads;
  if (!a.no_distributions) {
    opt.on_distribution = [&](const PairwiseDistribution& d) {
      write_file_atomic(dir / "distributions" / ("k" + std::to_string(d.k) + ".csv"),
                        sorted_doubles_csv("distance", d.distances));
    };
  }

  ShareReport report;
  nlohmann::json config = {{"metric", a.metric}, {"dataset", opt.dataset}};
  RunManifest manifest{"share", {}, a.seed, {a.graph}, 0.0};
  if (!a.external.empty()) {
    if (a.embedder.given()) throw std::invalid_argument("--external-embeddings excludes --embedder/--config");
    const fs::path ext = a.external;
    if (!fs::is_directory(ext)) throw ParseError("external embeddings directory not found: " + ext.string());
    const KCoreEmbedFn load = [&](int k, const Graph& kcore, std::uint64_t) {
      const fs::path file = ext / ("k" + std::to_string(k) + ".csv");
      if (!fs::exists(file)) throw ParseError("missing external embedding " + file.string());
      return align_embedding(load_embedding_csv(file), kcore);
    };
    report = run_share(g, load, a.seed, opt);
    report.embedder = "external";
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(ext))
      if (entry.path().extension() == ".csv") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    manifest.inputs.insert(manifest.inputs.end(), files.begin(), files.end());
    if (fs::exists(ext / "k0.csv")) report.dim = static_cast<int>(load_embedding_csv(ext / "k0.csv").embedding.dims());
    config["external_embeddings"] = a.external;
  } else {
    const EmbedSpec spec = a.embedder.resolve(a.seed, 10, 10);
    report = run_share(g, spec, a.seed, opt);
    config["embedder"] = to_json(spec);
  }

  write_json(dir / "share_report.json", to_json(report));
  write_file_atomic(dir / "share_report.csv", format_share_csv(report));
  if (report.records.size() >= 2) ctx.out << "max instability at k = " << max_instability_shell(report) << "\n";
  if (report.partial()) {
    ctx.err << "error: embedding failed at k = " << *report.failed_k << ": " << report.failure
            << " (partial report written)\n";
    ctx.status = kExitPartial;
  }
  manifest.config = config;
  manifest.wall_time_seconds = seconds_since(t0);
  write_manifest(dir, manifest);
}

// --- stable -----------------------------------------------------------------

struct StableArgs {
  std::string graph, out, config, base;
  std::optional<std::uint64_t> seed;
  int dim = 0, batches = 0;
  std::optional<double> alpha;
};

StableConfig resolve_stable_config(const std::string& path, const std::string& base, std::optional<std::uint64_t> seed,
                                   int dim, int batches, std::optional<double> alpha) {
  nlohmann::json j = path.empty() ? nlohmann::json::object() : read_json(path);
  if (!base.empty()) j["base"] = to_string(parse_algorithm(base));
  if (seed) j["seed"] = *seed;
  if (dim > 0) j["dim"] = dim;
  if (batches > 0) j["batches"] = batches;
  if (alpha) j["alpha"] = *alpha;
  return stable_config_from_json(j);
}

void cmd_stable(const StableArgs& a, Context& ctx) {
  const auto t0 = Clock::now();
  const Graph g = load_graph(a.graph, ctx.err);
  const StableConfig cfg = resolve_stable_config(a.config, a.base, a.seed, a.dim, a.batches, a.alpha);
  if (cfg.alpha == 0.0) ctx.err << "warning: alpha = 0, the instability penalty is disabled\n";
  const StableResult r = stable_train(g, cfg);
  const fs::path dir = a.out;

  std::vector<NodeLabel> core_labels;
  for (NodeId v : r.core) core_labels.push_back(g.label(v));
  write_file_atomic(dir / "embedding.csv", format_embedding_csv(r.embedding, g.labels()));
  write_file_atomic(dir / "embedding.bin", format_embedding_binary(r.embedding));
  write_file_atomic(dir / "initial.csv", format_embedding_csv(r.initial, g.labels()));
  write_file_atomic(dir / "isolated.csv", format_embedding_csv(r.isolated, core_labels));
  write_file_atomic(dir / "loss_trace.csv", format_loss_trace_csv(r.trace));

  const auto stable_err = stability_error_distribution(r.embedding, r.isolated, r.core);
  const auto base_err = stability_error_distribution(r.initial, r.isolated, r.core);
  std::string errors = "stable,base\n";
  for (std::size_t i = 0; i < stable_err.size(); ++i)
    errors += format_double(stable_err[i]) + ',' + format_double(base_err[i]) + '\n';
  write_file_atomic(dir / "stability_errors.csv", errors);

  write_json(dir / "config.json", to_json(cfg));
  const double ms = median(stable_err), mb = median(base_err);
  write_json(dir / "summary.json", {{"schema_version", 1},
                                    {"core_size", r.core.size()},
                                    {"augmented_edges", r.augmented_edges},
                                    {"median_stability_error", ms},
                                    {"median_base_stability_error", mb},
                                    {"final_base_loss", r.trace.back().base},
                                    {"final_stability_loss", r.trace.back().stability}});
  ctx.out << "median stability error " << ms << " (base " << mb << ")\n";
  RunManifest m{"stable", to_json(cfg), cfg.seed, {a.graph}, seconds_since(t0)};
  if (!a.config.empty()) m.inputs.push_back(a.config);
  write_manifest(dir, m);
}

// --- linkpred ---------------------------------------------------------------

struct LinkpredArgs {
  std::string graph, out, embeddings, stable, dataset, results;
  double fraction = 0.1;
  std::uint64_t seed = 0;
  EmbedderFlags embedder;
};

void cmd_linkpred(const LinkpredArgs& a, Context& ctx) {
  const auto t0 = Clock::now();
  const Graph g = load_graph(a.graph, ctx.err);
  const int sources = !a.embeddings.empty() + a.embedder.given() + !a.stable.empty();
  if (sources != 1) throw std::invalid_argument("give exactly one of --embeddings, --embedder/--config, --stable");
  const LinkPredSplit split = make_split(g, a.fraction, derive_seed(a.seed, "split"));
  const fs::path dir = a.out;

  write_file_atomic(dir / "train.txt", format_edge_list(split.train));
  std::string pairs = "u,v,label\n";
  for (const auto& [u, v] : split.positives) pairs += std::to_string(g.label(u)) + ',' + std::to_string(g.label(v)) + ",1\n";
  for (const auto& [u, v] : split.negatives) pairs += std::to_string(g.label(u)) + ',' + std::to_string(g.label(v)) + ",0\n";
  write_file_atomic(dir / "test_pairs.csv", pairs);

  nlohmann::json config = {{"fraction", a.fraction}};
  RunManifest manifest{"linkpred", {}, a.seed, {a.graph}, 0.0};
  ResultRow row;
  row.graph = a.dataset.empty() ? fs::path(a.graph).stem().string() : a.dataset;
  row.variant = "original";
  EmbeddingMatrix y;
  if (!a.embeddings.empty()) {
    y = align_embedding(load_embedding_csv(a.embeddings), g);
    row.algorithm = "external";
    manifest.inputs.push_back(a.embeddings);
    config["embeddings"] = a.embeddings;
  } else if (!a.stable.empty()) {
    const StableConfig cfg =
        resolve_stable_config(a.stable, "", derive_seed(a.seed, "embed"), a.embedder.dim, 0, std::nullopt);
    y = stable_train(split.train, cfg).embedding;
    row.algorithm = to_string(cfg.base);
    row.variant = "stable";
    manifest.inputs.push_back(a.stable);
    config["stable"] = to_json(cfg);
  } else {
    const EmbedSpec spec = a.embedder.resolve(derive_seed(a.seed, "embed"), 128, 20);
    y = base_embed(split.train, spec);
    row.algorithm = to_string(spec.algorithm);
    config["embedder"] = to_json(spec);
  }
  row.scores = evaluate(y, split);

  nlohmann::json scores = to_json(row.scores);
  scores["graph"] = row.graph;
  scores["algorithm"] = row.algorithm;
  scores["variant"] = row.variant;
  write_json(dir / "scores.json", scores);
  write_file_atomic(dir / "result_row.csv", std::string(kResultsHeader) + "\n" + format_result_row(row));
  if (!a.results.empty()) {
    const bool fresh = !fs::exists(a.results) || fs::file_size(a.results) == 0;
    if (fs::path(a.results).has_parent_path()) fs::create_directories(fs::path(a.results).parent_path());
    std::ofstream res(a.results, std::ios::app);
    if (!res) throw std::runtime_error("cannot append to " + a.results);
    if (fresh) res << kResultsHeader << "\n";
    res << format_result_row(row);
  }
  ctx.out << "F1 " << row.scores.f1 << ", AUC " << row.scores.auc << "\n";
  manifest.config = config;
  manifest.wall_time_seconds = seconds_since(t0);
  write_manifest(dir, manifest);
}

// --- regress ----------------------------------------------------------------

struct RegressArgs {
  std::vector<std::string> reports;
  std::string out;
};

std::vector<fs::path> expand_report_paths(const std::vector<std::string>& specs) {
  std::set<fs::path> found;
  auto add_dir = [&](const fs::path& d) {
    for (const auto& entry : fs::recursive_directory_iterator(d))
      if (entry.is_regular_file() && entry.path().filename() == "share_report.json") found.insert(entry.path());
  };
  for (const auto& s : specs) {
    if (s.find_first_of("*?[") != std::string::npos) {
      glob_t gl{};
      if (::glob(s.c_str(), 0, nullptr, &gl) == 0) {
        for (std::size_t i = 0; i < gl.gl_pathc; ++i) {
          const fs::path p = gl.gl_pathv[i];
          if (fs::is_directory(p)) add_dir(p);
          else found.insert(p);
        }
      }
      globfree(&gl);
    } else if (fs::is_directory(s)) {
      add_dir(s);
    } else if (fs::exists(s)) {
      found.insert(s);
    } else {
      throw ParseError("report path not found: " + s);
    }
  }
  return {found.begin(), found.end()};
}

void cmd_regress(const RegressArgs& a, Context& ctx) {
  const auto t0 = Clock::now();
  const auto paths = expand_report_paths(a.reports);
  if (paths.empty()) throw ParseError("no SHARE reports found");
  std::vector<ShareReport> reports;
  for (const auto& p : paths) {
    try {
      reports.push_back(share_report_from_json(read_json(p)));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(p.string() + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw ParseError(p.string() + ": " + e.what());
    }
  }
  const fs::path dir = a.out;
  const auto samples = collect_samples(reports);
  write_file_atomic(dir / "samples.csv", format_samples_csv(samples));

  std::map<std::pair<std::string, int>, std::vector<RegressionSample>> groups;
  for (const auto& s : samples) groups[{s.algorithm, s.dim}].push_back(s);

  nlohmann::json fits = nlohmann::json::array();
  std::string summary = "algorithm,dim,samples,coefficient,estimate,std_error,ci_low,ci_high\n";
  bool failed = false;
  for (const auto& [key, group] : groups) {
    nlohmann::json entry = {{"algorithm", key.first}, {"dim", key.second}, {"samples", group.size()}};
    try {
      const RegressionFit fit = ols_fit(group);
      entry["fit"] = to_json(fit);
      const std::string stem = "fit_" + key.first + "_d" + std::to_string(key.second);
      write_file_atomic(dir / (stem + ".csv"), format_fit_csv(fit));
      write_json(dir / (stem + ".json"), entry);
      for (std::size_t j = 0; j < kRegressionParams; ++j) {
        summary += key.first + ',' + std::to_string(key.second) + ',' + std::to_string(group.size()) + ',' +
                   kCoefficientNames[j] + ',' + format_double(fit.beta[j]) + ',' + format_double(fit.std_error[j]) +
                   ',' + format_double(fit.ci_low[j]) + ',' + format_double(fit.ci_high[j]) + '\n';
      }
    } catch (const std::invalid_argument& e) {
      entry["error"] = e.what();
      ctx.err << "error: " << key.first << " d=" << key.second << ": " << e.what() << "\n";
      failed = true;
    }
    fits.push_back(entry);
  }
  if (groups.empty()) {
    ctx.err << "error: reports contain no adjacent shell pairs\n";
    failed = true;
  }
  write_json(dir / "fits.json", {{"schema_version", 1}, {"reports", paths.size()}, {"combinations", fits}});
  write_file_atomic(dir / "fits.csv", summary);
  ctx.out << samples.size() << " samples from " << reports.size() << " report(s)\n";
  if (failed) ctx.status = kExitPartial;

  nlohmann::json cfg = nlohmann::json::array();
  for (const auto& p : paths) cfg.push_back(p.string());
  write_manifest(dir, {"regress", {{"reports", cfg}}, 0, paths, seconds_since(t0)});
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"k-core embedding stability toolkit", "corestab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  Context ctx{out, err};
  std::function<void()> action;

  KcoreArgs kcore;
  auto* c_kcore = app.add_subcommand("kcore", "Core decomposition, degenerate core and per-k features");
  c_kcore->add_option("--graph", kcore.graph, "Edge list")->required()->check(CLI::ExistingFile);
  c_kcore->add_option("--out", kcore.out, "Output directory")->required();
  c_kcore->callback([&] { action = [&] { cmd_kcore(kcore, ctx); }; });

  GenerateArgs gen;
  auto* c_gen = app.add_subcommand("generate", "Seeded Erdos-Renyi or Barabasi-Albert graph");
  c_gen->add_option("--config", gen.config, "Generator spec JSON {model, n, p|m, seed}")->check(CLI::ExistingFile);
  c_gen->add_option("--model", gen.model, "er | ba");
  c_gen->add_option("--n", gen.n, "Node count");
  c_gen->add_option("--p", gen.p, "ER edge probability");
  c_gen->add_option("--m", gen.m, "BA edges per arriving node");
  c_gen->add_option("--seed", gen.seed, "Seed");
  c_gen->add_option("--out", gen.out, "Output directory")->required();
  c_gen->callback([&] { action = [&] { cmd_generate(gen, ctx); }; });

  EmbedArgs emb;
  auto* c_emb = app.add_subcommand("embed", "Embed a graph with a built-in algorithm");
  c_emb->add_option("--graph", emb.graph, "Edge list")->required()->check(CLI::ExistingFile);
  c_emb->add_option("--out", emb.out, "Output directory")->required();
  c_emb->add_option("--seed", emb.seed, "Seed");
  emb.embedder.add(c_emb);
  c_emb->callback([&] { action = [&] { cmd_embed(emb, ctx); }; });

  ShareArgs share;
  auto* c_share = app.add_subcommand("share", "Shave k-shells, re-embed, and measure core drift");
  c_share->add_option("--graph", share.graph, "Edge list")->required()->check(CLI::ExistingFile);
  c_share->add_option("--out", share.out, "Output directory")->required();
  c_share->add_option("--seed", share.seed, "Seed");
  share.embedder.add(c_share);
  c_share->add_option("--external-embeddings", share.external, "Directory with k<k>.csv per processed shell");
  c_share->add_option("--metric", share.metric, "euclidean | cosine");
  c_share->add_option("--dataset", share.dataset, "Dataset id for the report (default: graph file stem)");
  c_share->add_option("--threads", share.threads, "Worker threads (default: COREstab_THREADS or hardware)");
  c_share->add_flag("--no-distributions", share.no_distributions, "Skip the raw per-k distance CSVs");
  c_share->callback([&] { action = [&] { cmd_share(share, ctx); }; });

  StableArgs st;
  auto* c_st = app.add_subcommand("stable", "Train core-stable embeddings");
  c_st->add_option("--graph", st.graph, "Edge list")->required()->check(CLI::ExistingFile);
  c_st->add_option("--out", st.out, "Output directory")->required();
  c_st->add_option("--config", st.config, "STABLE config JSON")->check(CLI::ExistingFile);
  c_st->add_option("--embedder", st.base, "Base algorithm when no config is given: le | line");
  c_st->add_option("--seed", st.seed, "Seed (overrides the config)");
  c_st->add_option("--dim", st.dim, "Embedding dimension (overrides the config)");
  c_st->add_option("--batches", st.batches, "Batch count n_b (overrides the config)");
  c_st->add_option("--alpha", st.alpha, "Penalty weight (overrides the config)");
  c_st->callback([&] { action = [&] { cmd_stable(st, ctx); }; });

  LinkpredArgs lp;
  auto* c_lp = app.add_subcommand("linkpred", "Link prediction on a held-out edge split");
  c_lp->add_option("--graph", lp.graph, "Edge list")->required()->check(CLI::ExistingFile);
  c_lp->add_option("--out", lp.out, "Output directory")->required();
  c_lp->add_option("--seed", lp.seed, "Seed");
  c_lp->add_option("--fraction", lp.fraction, "Fraction of edges withheld");
  c_lp->add_option("--embeddings", lp.embeddings, "Precomputed embedding CSV")->check(CLI::ExistingFile);
  c_lp->add_option("--stable", lp.stable, "Train STABLE on the split with this config JSON")->check(CLI::ExistingFile);
  lp.embedder.add(c_lp);
  c_lp->add_option("--dataset", lp.dataset, "Graph name for the results table");
  c_lp->add_option("--results", lp.results, "Cumulative results CSV to append to");
  c_lp->callback([&] { action = [&] { cmd_linkpred(lp, ctx); }; });

  RegressArgs rg;
  auto* c_rg = app.add_subcommand("regress", "Regress EMD changes on subgraph-feature changes");
  c_rg->add_option("--reports", rg.reports, "SHARE report files, directories or globs")->required();
  c_rg->add_option("--out", rg.out, "Output directory")->required();
  c_rg->callback([&] { action = [&] { cmd_regress(rg, ctx); }; });

  std::vector<std::string> argv_store{"corestab"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (action) action();
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return ctx.status;
}

}  // namespace corestab
