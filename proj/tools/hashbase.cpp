// Copyright 2026 The hashbase Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: fit, encode, query, eval, synth, ablate.
//
// Diagnostics go to stderr as a single "hashbase: error: <code>: <message>"
// line. Exit status is 0 on success, 1 on data or I/O errors, 2 on usage
// errors. Machine-readable reports are JSON lines with the fields metric,
// mode, bits, seed, value, dataset in that order.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hashbase/error.hpp"
#include "hashbase/io.hpp"
#include "hashbase/protocol.hpp"
#include "hashbase/synth.hpp"

namespace fs = std::filesystem;
using hashbase::ErrorCode;
using json = nlohmann::ordered_json;

namespace {

constexpr std::size_t kMaxBits = 4096;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void warn(const std::string& msg) { std::cerr << "hashbase: warning: " << msg << "\n"; }

// Accepts "3", "0,4,7" and inclusive ranges such as "0-9", mixed freely.
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string token;
  auto number = [&](const std::string& s) -> std::uint64_t {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (s.empty() || used != s.size() || s[0] == '-') throw UsageError("bad seed '" + s + "' in --seeds");
    return v;
  };
  while (std::getline(ss, token, ',')) {
    const auto dash = token.find('-');
    if (dash == std::string::npos) {
      seeds.push_back(number(token));
      continue;
    }
    const std::uint64_t lo = number(token.substr(0, dash));
    const std::uint64_t hi = number(token.substr(dash + 1));
    if (hi < lo || hi - lo >= 100000) throw UsageError("bad seed range '" + token + "'");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  if (seeds.empty()) throw UsageError("--seeds is empty");
  return seeds;
}

std::vector<std::size_t> parse_bits(const std::string& text) {
  std::vector<std::size_t> bits;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (token.empty() || used != token.size() || v < 1 || v > kMaxBits) {
      throw UsageError("bit length '" + token + "' outside [1, 4096]");
    }
    bits.push_back(v);
  }
  if (bits.empty()) throw UsageError("--bits is empty");
  return bits;
}

void require_input(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw hashbase::Error(ErrorCode::kIo, "input " + path.string() + " is not a readable file");
  }
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw hashbase::Error(ErrorCode::kIo, "cannot open " + path.string());
}

void require_output(const fs::path& path) {
  std::error_code ec;
  const fs::path parent = path.parent_path().empty() ? fs::path(".") : path.parent_path();
  if (!fs::is_directory(parent, ec)) {
    throw hashbase::Error(ErrorCode::kIo, "output directory " + parent.string() + " does not exist");
  }
  if (fs::is_directory(path, ec)) {
    throw hashbase::Error(ErrorCode::kIo, "output " + path.string() + " is a directory");
  }
}

std::string magic_of(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  char buf[4] = {};
  in.read(buf, 4);
  return std::string(buf, static_cast<std::size_t>(in.gcount()));
}

hashbase::ScoreMode parse_mode(const std::string& mode) {
  if (mode == "asym") return hashbase::ScoreMode::kAsymmetric;
  if (mode == "sym") return hashbase::ScoreMode::kSymmetric;
  return hashbase::ScoreMode::kFloatCosine;
}

hashbase::ApConvention parse_ap(const std::string& ap) {
  return ap == "min-r" ? hashbase::ApConvention::kMinRelevantCutoff
                       : hashbase::ApConvention::kRetrieved;
}

std::string percent(double mean, double std) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f±%.1f", 100.0 * mean, 100.0 * std);
  return buf;
}

// k_eval = 0 means the whole database; larger values clamp with a warning.
std::size_t resolve_k_eval(std::size_t requested, std::size_t n) {
  if (requested == 0) return n;
  if (requested > n) {
    warn("--k-eval " + std::to_string(requested) + " exceeds database size " +
         std::to_string(n) + "; using " + std::to_string(n));
    return n;
  }
  return requested;
}

json record(const std::string& metric, const std::string& mode, std::size_t bits,
            std::optional<std::uint64_t> seed, double value, const std::string& dataset) {
  json r;
  r["metric"] = metric;
  r["mode"] = mode;
  r["bits"] = bits;
  r["seed"] = seed ? json(*seed) : json(nullptr);
  r["value"] = value;
  r["dataset"] = dataset;
  return r;
}

// Per-seed mAP records followed by mean and std.
void append_report(std::string& out, const hashbase::MetricReport& report, const std::string& mode,
                   std::size_t bits, const std::string& dataset) {
  const std::string metric = "map@" + std::to_string(report.k_eval);
  if (report.seed_maps.empty()) {
    out += record(metric, mode, bits, std::nullopt, report.map, dataset).dump() + "\n";
  } else {
    for (std::size_t i = 0; i < report.seed_maps.size(); ++i) {
      out += record(metric, mode, bits, report.seeds[i], report.seed_maps[i], dataset).dump() + "\n";
    }
  }
  out += record(metric + ":mean", mode, bits, std::nullopt, report.mean, dataset).dump() + "\n";
  out += record(metric + ":std", mode, bits, std::nullopt, report.std, dataset).dump() + "\n";
}

void write_text(const fs::path& path, const std::string& text) {
  hashbase::write_file_atomic(
      path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

// ---------------------------------------------------------------------------

struct FitArgs {
  std::string train, out;
  std::size_t bits = 64;
  std::uint64_t seed = 0;
  bool no_l2 = false, no_center = false;
};

void cmd_fit(const FitArgs& a) {
  require_input(a.train);
  require_output(a.out);
  const auto train = hashbase::read_hbem(a.train);
  const std::size_t limit = std::min(train.rows(), train.dim());
  if (a.bits > limit) {
    throw UsageError("--bits " + std::to_string(a.bits) + " exceeds min(n, d) = " +
                     std::to_string(limit));
  }
  const hashbase::HashFlags flags{!a.no_l2, !a.no_center};
  const auto pca = hashbase::fit_pca(train, a.bits, flags);
  const auto model = hashbase::model_from_pca(pca, a.bits, a.seed);
  hashbase::write_hbmd(model, a.out);
  std::printf("fit: n=%zu d=%zu bits=%zu seed=%llu explained-variance=%.4f\n", train.rows(),
              train.dim(), a.bits, static_cast<unsigned long long>(a.seed),
              pca.explained_variance(a.bits));
}

struct EncodeArgs {
  std::string model, data, out;
};

void cmd_encode(const EncodeArgs& a) {
  require_input(a.model);
  require_input(a.data);
  require_output(a.out);
  const auto model = hashbase::read_hbmd(a.model);
  const auto data = hashbase::read_hbem(a.data);
  const auto codes = hashbase::encode_batch(model, data);
  hashbase::write_hbcd(codes, a.out);
  std::printf("encode: n=%zu bits=%zu\n", codes.size(), codes.bits());
}

// Database given either as codes (.hbcd) or as embeddings encoded on the fly.
hashbase::CodeDatabase load_database_codes(const hashbase::HashModel& model, const fs::path& path) {
  if (magic_of(path) == "HBCD") {
    auto codes = hashbase::read_hbcd(path);
    if (codes.bits() != model.bits()) {
      throw hashbase::Error(ErrorCode::kDimensionMismatch,
                            "database codes have " + std::to_string(codes.bits()) +
                                " bits, model has " + std::to_string(model.bits()));
    }
    return codes;
  }
  return hashbase::encode_batch(model, hashbase::read_hbem(path));
}

struct QueryArgs {
  std::string model, db, queries, out, mode = "asym";
  std::size_t topk = 10;
};

void cmd_query(const QueryArgs& a) {
  require_input(a.model);
  require_input(a.db);
  require_input(a.queries);
  if (!a.out.empty()) require_output(a.out);
  const auto model = hashbase::read_hbmd(a.model);
  const auto codes = load_database_codes(model, a.db);
  const auto probs = hashbase::project_batch(model, hashbase::read_hbem(a.queries));
  std::string text;
  for (std::size_t q = 0; q < probs.size(); ++q) {
    const auto result = a.mode == "sym"
                            ? hashbase::search_symmetric(codes, hashbase::binarize(probs[q]), a.topk)
                            : hashbase::search_asymmetric(codes, probs[q], a.topk);
    for (std::size_t r = 0; r < result.size(); ++r) {
      json line;
      line["query"] = q;
      line["rank"] = r + 1;
      line["id"] = result.ids[r];
      line["score"] = result.scores[r];
      text += line.dump() + "\n";
    }
  }
  if (a.out.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    write_text(a.out, text);
  }
}

struct EvalArgs {
  std::string model, db, db_labels, queries, query_labels, report, dataset = "unnamed";
  std::string mode = "asym", ap = "retrieved", seeds;
  std::size_t k_eval = 0, threads = 0;
};

void cmd_eval(const EvalArgs& a) {
  for (const auto& p : {a.model, a.db, a.db_labels, a.queries, a.query_labels}) require_input(p);
  if (!a.report.empty()) require_output(a.report);
  const auto seeds = a.seeds.empty() ? std::vector<std::uint64_t>{} : parse_seeds(a.seeds);
  const bool codes_given = magic_of(a.db) == "HBCD";
  const auto mode = parse_mode(a.mode);
  if (codes_given && mode == hashbase::ScoreMode::kFloatCosine) {
    throw UsageError("--mode float needs database embeddings, not codes");
  }
  if (codes_given && !seeds.empty()) {
    throw UsageError("--seeds redraws R and needs database embeddings, not codes");
  }

  const auto model = hashbase::read_hbmd(a.model);
  const auto db_labels = hashbase::read_hblb(a.db_labels);
  const auto queries = hashbase::read_hbem(a.queries);
  const auto query_labels = hashbase::read_hblb(a.query_labels);
  hashbase::EvalOptions opts;
  opts.convention = parse_ap(a.ap);
  opts.threads = a.threads;
  opts.k_eval = resolve_k_eval(a.k_eval, db_labels.size());
  if (mode == hashbase::ScoreMode::kFloatCosine && !seeds.empty()) {
    warn("--mode float has no randomness; --seeds ignored");
  }

  hashbase::MetricReport report;
  if (codes_given) {
    const auto codes = load_database_codes(model, a.db);
    const auto probs = hashbase::project_batch(model, queries);
    report = hashbase::mean_ap(codes, probs, query_labels, db_labels, mode, opts);
    report.seeds = {model.seed()};
    report.seed_maps = {report.map};
  } else {
    const auto db = hashbase::read_hbem(a.db);
    const hashbase::EvalData data{db, db_labels, queries, query_labels};
    if (mode == hashbase::ScoreMode::kFloatCosine) {
      report = hashbase::evaluate_model(model, data, mode, opts);
    } else {
      const std::vector<std::uint64_t> run = seeds.empty() ? std::vector{model.seed()} : seeds;
      report = hashbase::evaluate_seeds(model, data, mode, run, opts);
    }
  }

  const std::size_t runs = std::max<std::size_t>(1, report.seed_maps.size());
  std::printf("%-12s %-6s %5s %7s %6s %12s\n", "dataset", "mode", "bits", "k_eval", "runs", "mAP(%)");
  std::printf("%-12s %-6s %5zu %7zu %6zu %12s\n", a.dataset.c_str(), a.mode.c_str(), model.bits(),
              report.k_eval, runs, percent(report.mean, report.std).c_str());
  if (!a.report.empty()) {
    std::string text;
    append_report(text, report, a.mode, model.bits(), a.dataset);
    write_text(a.report, text);
  }
}

struct SynthArgs {
  hashbase::ClusterSpec spec;
  double query_fraction = 0.2;
  std::uint64_t split_seed = 0;
  std::string out_dir;
};

void cmd_synth(const SynthArgs& a) {
  std::error_code ec;
  if (!fs::is_directory(a.out_dir, ec)) {
    throw hashbase::Error(ErrorCode::kIo, "output directory " + a.out_dir + " does not exist");
  }
  const auto data = hashbase::generate(a.spec);
  const auto parts = hashbase::split(data.embeddings, data.labels, a.query_fraction, a.split_seed);
  const fs::path dir(a.out_dir);
  hashbase::write_hbem(parts.database, dir / "db.hbem");
  hashbase::write_hblb(parts.database_labels, dir / "db.hblb");
  hashbase::write_hbem(parts.queries, dir / "queries.hbem");
  hashbase::write_hblb(parts.query_labels, dir / "queries.hblb");
  std::printf("synth: database=%zu queries=%zu d=%zu classes=%zu -> %s\n", parts.database.rows(),
              parts.queries.rows(), a.spec.d, a.spec.n_classes, dir.string().c_str());
}

struct AblateArgs {
  std::string train, global_train, db, db_labels, queries, query_labels, report;
  std::string dataset = "unnamed", mode = "asym", ap = "retrieved";
  std::string bits = "16,32,64", seeds = "0-9", variants = "full,no-rotation,no-pca";
  std::size_t k_eval = 0, threads = 0;
  bool no_l2 = false, no_center = false;
};

void cmd_ablate(const AblateArgs& a) {
  for (const auto& p : {a.db, a.db_labels, a.queries, a.query_labels}) require_input(p);
  if (!a.train.empty()) require_input(a.train);
  if (!a.global_train.empty()) require_input(a.global_train);
  if (!a.report.empty()) require_output(a.report);

  hashbase::AblationConfig config;
  config.bits = parse_bits(a.bits);
  config.seeds = parse_seeds(a.seeds);
  config.variants.clear();
  std::stringstream ss(a.variants);
  std::string name;
  while (std::getline(ss, name, ',')) {
    const auto v = hashbase::parse_variant(name);
    if (!v) throw UsageError("unknown variant '" + name + "'");
    config.variants.push_back(*v);
  }
  if (config.variants.empty()) throw UsageError("--variants is empty");
  const bool wants_global = std::find(config.variants.begin(), config.variants.end(),
                                      hashbase::Variant::kGlobalPca) != config.variants.end();
  if (wants_global && a.global_train.empty()) throw UsageError("global-pca needs --global-train");
  config.mode = parse_mode(a.mode);
  config.flags = hashbase::HashFlags{!a.no_l2, !a.no_center};

  const auto db = hashbase::read_hbem(a.db);
  const auto db_labels = hashbase::read_hblb(a.db_labels);
  const auto queries = hashbase::read_hbem(a.queries);
  const auto query_labels = hashbase::read_hblb(a.query_labels);
  const auto train = a.train.empty() ? db : hashbase::read_hbem(a.train);
  std::optional<hashbase::EmbeddingMatrix> global;
  if (wants_global) global = hashbase::read_hbem(a.global_train);
  config.eval.convention = parse_ap(a.ap);
  config.eval.threads = a.threads;
  config.eval.k_eval = resolve_k_eval(a.k_eval, db_labels.size());

  const hashbase::EvalData data{db, db_labels, queries, query_labels};
  const auto rows = hashbase::run_ablation(train, data, global ? &*global : nullptr, config);

  std::printf("%-12s", "variant");
  for (std::size_t k : config.bits) std::printf(" %12s", (std::to_string(k) + " bits").c_str());
  std::printf("\n");
  std::string text;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (i % config.bits.size() == 0) std::printf("%-12s", std::string(to_string(row.variant)).c_str());
    std::printf(" %12s", percent(row.report.mean, row.report.std).c_str());
    if (i % config.bits.size() + 1 == config.bits.size()) std::printf("\n");
    append_report(text, row.report, a.mode + ":" + std::string(to_string(row.variant)), row.bits,
                  a.dataset);
  }
  if (!a.report.empty()) write_text(a.report, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hashbase: training-free binary hashing of embeddings"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "hashbase 0.1.0");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit PCA basis and rotation; write a model");
  fit_cmd->add_option("--train", fit.train, "Training embeddings (.hbem)")->required();
  fit_cmd->add_option("--bits,-k", fit.bits, "Code length")->check(CLI::Range(std::size_t{1}, kMaxBits));
  fit_cmd->add_option("--seed", fit.seed, "Rotation seed");
  fit_cmd->add_flag("--no-l2", fit.no_l2, "Skip L2 normalization");
  fit_cmd->add_flag("--no-center", fit.no_center, "Skip mean centering");
  fit_cmd->add_option("--out,-o", fit.out, "Model output (.hbmd)")->required();

  EncodeArgs enc;
  auto* enc_cmd = app.add_subcommand("encode", "Encode embeddings into packed codes");
  enc_cmd->add_option("--model", enc.model, "Model (.hbmd)")->required();
  enc_cmd->add_option("--data", enc.data, "Embeddings (.hbem)")->required();
  enc_cmd->add_option("--out,-o", enc.out, "Codes output (.hbcd)")->required();

  QueryArgs q;
  auto* q_cmd = app.add_subcommand("query", "Top-k search; one JSON line per hit");
  q_cmd->add_option("--model", q.model, "Model (.hbmd)")->required();
  q_cmd->add_option("--db", q.db, "Database codes (.hbcd) or embeddings (.hbem)")->required();
  q_cmd->add_option("--queries", q.queries, "Query embeddings (.hbem)")->required();
  q_cmd->add_option("--topk", q.topk, "Results per query")->check(CLI::PositiveNumber);
  q_cmd->add_option("--mode", q.mode, "Scoring")->check(CLI::IsMember({"asym", "sym"}));
  q_cmd->add_option("--out,-o", q.out, "Output file (default stdout)");

  EvalArgs ev;
  auto* ev_cmd = app.add_subcommand("eval", "mAP of a model over a database/query split");
  ev_cmd->add_option("--model", ev.model, "Model (.hbmd)")->required();
  ev_cmd->add_option("--db", ev.db, "Database embeddings (.hbem) or codes (.hbcd)")->required();
  ev_cmd->add_option("--db-labels", ev.db_labels, "Database labels (.hblb)")->required();
  ev_cmd->add_option("--queries", ev.queries, "Query embeddings (.hbem)")->required();
  ev_cmd->add_option("--query-labels", ev.query_labels, "Query labels (.hblb)")->required();
  ev_cmd->add_option("--k-eval", ev.k_eval, "mAP cutoff (0 = whole database)");
  ev_cmd->add_option("--mode", ev.mode, "Scoring")->check(CLI::IsMember({"asym", "sym", "float"}));
  ev_cmd->add_option("--seeds", ev.seeds, "Rotation seeds, e.g. 0-9 or 1,5,7 (default: model seed)");
  ev_cmd->add_option("--ap", ev.ap, "AP denominator")->check(CLI::IsMember({"retrieved", "min-r"}));
  ev_cmd->add_option("--report", ev.report, "JSON-lines report output");
  ev_cmd->add_option("--dataset", ev.dataset, "Dataset name recorded in the report");
  ev_cmd->add_option("--threads", ev.threads, "Worker threads (0 = HASHBASE_THREADS or all cores)");

  SynthArgs syn;
  auto* syn_cmd = app.add_subcommand("synth", "Write a synthetic clustered split");
  syn_cmd->add_option("--classes", syn.spec.n_classes, "Number of classes")->capture_default_str()->check(CLI::PositiveNumber);
  syn_cmd->add_option("--per-class", syn.spec.per_class, "Items per class")->capture_default_str()->check(CLI::PositiveNumber);
  syn_cmd->add_option("--dim,-d", syn.spec.d, "Embedding dimension")->capture_default_str()->check(CLI::PositiveNumber);
  syn_cmd->add_option("--intrinsic-dim", syn.spec.intrinsic_dim, "Rank of the within-class noise")->capture_default_str()->check(CLI::PositiveNumber);
  syn_cmd->add_option("--intra-spread", syn.spec.intra_spread, "Expected norm of the within-class noise")->capture_default_str();
  syn_cmd->add_option("--inter-scale", syn.spec.inter_scale, "Centroid norm")->capture_default_str();
  syn_cmd->add_option("--residue", syn.spec.residue, "Per-coordinate std of the isotropic residue")->capture_default_str();
  syn_cmd->add_option("--seed", syn.spec.seed, "Generator seed")->capture_default_str();
  syn_cmd->add_flag("--multi-label", syn.spec.multi_label, "Give items 1-3 labels");
  syn_cmd->add_option("--query-fraction", syn.query_fraction, "Per-class share held out as queries")->capture_default_str();
  syn_cmd->add_option("--split-seed", syn.split_seed, "Split seed")->capture_default_str();
  syn_cmd->add_option("--out-dir", syn.out_dir, "Directory for db/queries .hbem/.hblb")->required();

  AblateArgs ab;
  auto* ab_cmd = app.add_subcommand("ablate", "Variant x bit-length table over seeds");
  ab_cmd->add_option("--train", ab.train, "Training embeddings (default: --db)");
  ab_cmd->add_option("--global-train", ab.global_train, "Corpus for the global-pca variant");
  ab_cmd->add_option("--db", ab.db, "Database embeddings (.hbem)")->required();
  ab_cmd->add_option("--db-labels", ab.db_labels, "Database labels (.hblb)")->required();
  ab_cmd->add_option("--queries", ab.queries, "Query embeddings (.hbem)")->required();
  ab_cmd->add_option("--query-labels", ab.query_labels, "Query labels (.hblb)")->required();
  ab_cmd->add_option("--bits", ab.bits, "Comma-separated code lengths");
  ab_cmd->add_option("--seeds", ab.seeds, "Rotation seeds, e.g. 0-9");
  ab_cmd->add_option("--variants", ab.variants, "full,no-rotation,no-pca,global-pca");
  ab_cmd->add_option("--mode", ab.mode, "Scoring")->check(CLI::IsMember({"asym", "sym"}));
  ab_cmd->add_option("--ap", ab.ap, "AP denominator")->check(CLI::IsMember({"retrieved", "min-r"}));
  ab_cmd->add_option("--k-eval", ab.k_eval, "mAP cutoff (0 = whole database)");
  ab_cmd->add_flag("--no-l2", ab.no_l2, "Skip L2 normalization");
  ab_cmd->add_flag("--no-center", ab.no_center, "Skip mean centering");
  ab_cmd->add_option("--report", ab.report, "JSON-lines report output");
  ab_cmd->add_option("--dataset", ab.dataset, "Dataset name recorded in the report");
  ab_cmd->add_option("--threads", ab.threads, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::cerr << "hashbase: error: usage: " << msg << "\n";
    return 2;
  }

  try {
    if (*fit_cmd) cmd_fit(fit);
    if (*enc_cmd) cmd_encode(enc);
    if (*q_cmd) cmd_query(q);
    if (*ev_cmd) cmd_eval(ev);
    if (*syn_cmd) cmd_synth(syn);
    if (*ab_cmd) cmd_ablate(ab);
  } catch (const UsageError& e) {
    std::cerr << "hashbase: error: usage: " << e.what() << "\n";
    return 2;
  } catch (const hashbase::Error& e) {
    std::cerr << "hashbase: error: " << hashbase::to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "hashbase: error: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
