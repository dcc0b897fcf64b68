// wiser: conversion, scoring and corpus reporting front end.
//
// Exit status: 0 success, 1 data failure, 2 usage error.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "wiser/convert.h"
#include "wiser/corpus.h"
#include "wiser/frames.h"
#include "wiser/manifest.h"
#include "wiser/metrics.h"
#include "wiser/roles.h"

namespace {

constexpr int kOk = 0;
constexpr int kDataFailure = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<wiser::Document> load_corpus_or_fail(const std::string& path) {
  wiser::Corpus corpus = wiser::read_corpus(path);
  if (!corpus.ok()) {
    for (const auto& e : corpus.errors) std::cerr << path << ": " << e.to_string() << '\n';
    throw DataError(std::to_string(corpus.errors.size()) + " unparsed document(s) in " + path);
  }
  return std::move(corpus.documents);
}

void emit_manifest(const wiser::RunManifest& m, const std::string& path) {
  if (!path.empty()) {
    wiser::write_manifest(path, m);
  } else {
    nlohmann::json j = nlohmann::json::parse(m.to_json());
    std::cerr << "manifest: " << j.dump() << '\n';
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << text;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::istringstream in(wiser::read_text_file(path));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    size_t b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] == '#') continue;
    lines.push_back(line.substr(b, line.find_last_not_of(" \t") - b + 1));
  }
  return lines;
}

std::string format_matrix(const wiser::CountMatrix& m, bool tsv) {
  std::vector<std::vector<std::string>> table;
  std::vector<std::string> header = {""};
  for (size_t c = 0; c < wiser::kArgColumns; ++c) header.push_back("ARG" + std::to_string(c));
  header.push_back("total");
  table.push_back(header);
  for (size_t r = 0; r < m.rows.size(); ++r) {
    std::vector<std::string> row = {m.rows[r]};
    for (size_t c : m.cells[r]) row.push_back(std::to_string(c));
    row.push_back(std::to_string(m.row_total(r)));
    table.push_back(row);
  }
  std::vector<std::string> totals = {"total"};
  for (size_t c = 0; c < wiser::kArgColumns; ++c) {
    totals.push_back(std::to_string(m.column_total(c)));
  }
  totals.push_back(std::to_string(m.total()));
  table.push_back(totals);

  std::ostringstream out;
  std::vector<size_t> width(header.size(), 0);
  for (const auto& row : table) {
    for (size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  for (const auto& row : table) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (tsv) {
        out << (c ? "\t" : "") << row[c];
      } else if (c == 0) {
        out << std::left << std::setw(static_cast<int>(width[c])) << row[c];
      } else {
        out << "  " << std::right << std::setw(static_cast<int>(width[c])) << row[c];
      }
    }
    out << '\n';
  }
  return out.str();
}

wiser::OverrideTable effective_overrides(const std::string& path) {
  wiser::OverrideTable table = wiser::builtin_overrides();
  if (!path.empty()) table.merge(wiser::load_overrides(path));
  return table;
}

std::vector<wiser::MappingRule> effective_rules(const std::string& path) {
  return path.empty() ? wiser::builtin_rules() : wiser::load_rules(path);
}

// ---------------------------------------------------------------- convert

struct ConvertArgs {
  std::string input, output, catalog, mode = "wiser", overrides, rules, exclude;
  std::string on_unmapped = "flag", report, log, manifest;
  bool keep_adhoc = false;
  int jobs = 0;
  int indent = 6;
};

int run_convert(const ConvertArgs& a) {
  auto mode = wiser::parse_mode(a.mode);
  if (!mode) throw UsageError("unknown mode " + a.mode);
  if (wiser::mode_relabels(*mode) && a.catalog.empty()) {
    throw UsageError("--catalog (or WISER_CATALOG) is required for mode " + a.mode);
  }
  wiser::RunManifest manifest;
  manifest.command = "convert";

  wiser::ConversionConfig config;
  config.mode = *mode;
  config.drop_adhoc = !a.keep_adhoc;
  config.on_unmapped = a.on_unmapped == "drop" ? wiser::UnmappedPolicy::kDropSentence
                                               : wiser::UnmappedPolicy::kKeepAndFlag;
  if (!a.exclude.empty()) {
    auto lines = read_lines(a.exclude);
    config.excluded_senses = {lines.begin(), lines.end()};
    manifest.add_input(a.exclude);
  }

  wiser::Catalog catalog;
  wiser::CatalogMapping mapping;
  wiser::OverrideTable overrides = effective_overrides(a.overrides);
  if (!a.catalog.empty()) {
    catalog = wiser::load_catalog(a.catalog);
    manifest.add_input(a.catalog);
    config.catalog = &catalog;
    mapping = wiser::map_catalog(catalog, effective_rules(a.rules), overrides, a.jobs);
    config.mapping = &mapping.table;
    config.overrides = &overrides;
  } else {
    std::cerr << "note: no catalog given; ad-hoc sense trimming skipped\n";
  }
  if (!a.overrides.empty()) manifest.add_input(a.overrides);
  if (!a.rules.empty()) manifest.add_input(a.rules);

  auto documents = load_corpus_or_fail(a.input);
  manifest.add_input(a.input);
  auto result = wiser::convert_corpus(documents, config, a.jobs);

  wiser::write_corpus_file(a.output, result.documents, a.indent);
  std::string report = wiser::format_report(result.report);
  if (!a.report.empty()) {
    write_text(a.report, report);
  } else {
    std::cerr << report;
  }
  if (!a.log.empty()) write_text(a.log, wiser::format_incidents(result.incidents));

  manifest.config = {{"mode", a.mode},
                     {"on_unmapped", a.on_unmapped},
                     {"drop_adhoc", a.keep_adhoc ? "false" : "true"},
                     {"indent", std::to_string(a.indent)},
                     {"output", a.output}};
  emit_manifest(manifest, a.manifest.empty() ? a.output + ".manifest.json" : a.manifest);
  return kOk;
}

// ------------------------------------------------------------------ score

struct ScoreArgs {
  std::string gold, pred, metrics, scheme = "wiser", manifest, output;
  int restarts = 5;
  uint64_t seed = 0;
  bool exact = false, per_doc = false;
  size_t oracle_bound = wiser::kDefaultOracleBound;
  int jobs = 0;
};

int run_score(const ScoreArgs& a) {
  std::vector<wiser::Metric> metrics;
  if (a.metrics.empty() || a.metrics == "all") {
    metrics = wiser::default_metrics();
  } else {
    std::stringstream ss(a.metrics);
    std::string name;
    while (std::getline(ss, name, ',')) {
      auto m = wiser::parse_metric(name);
      if (!m) throw UsageError("unknown metric " + name);
      metrics.push_back(*m);
    }
  }
  auto scheme = wiser::parse_scheme(a.scheme);
  if (!scheme) throw UsageError("unknown scheme " + a.scheme);
  if (a.restarts < 1) throw UsageError("--restarts must be at least 1");

  wiser::MetricOptions options;
  options.scheme = *scheme;
  options.smatch.restarts = a.restarts;
  options.smatch.seed = a.seed;
  options.exact = a.exact;
  options.oracle_bound = a.oracle_bound;

  auto gold = load_corpus_or_fail(a.gold);
  auto pred = load_corpus_or_fail(a.pred);
  wiser::CorpusScores scores;
  try {
    scores = wiser::score_corpus(pred, gold, metrics, options, a.jobs);
  } catch (const wiser::ScoreError& e) {
    throw DataError(e.what());
  }
  write_text(a.output, wiser::format_scores(scores, a.per_doc));

  wiser::RunManifest manifest;
  manifest.command = "score";
  manifest.add_input(a.gold);
  manifest.add_input(a.pred);
  manifest.seed = a.seed;
  std::string names;
  for (auto m : metrics) names += (names.empty() ? "" : ",") + std::string(wiser::metric_name(m));
  manifest.config = {{"metrics", names},
                     {"scheme", a.scheme},
                     {"restarts", std::to_string(a.restarts)},
                     {"exact", a.exact ? "true" : "false"},
                     {"per_doc", a.per_doc ? "true" : "false"}};
  emit_manifest(manifest, a.manifest);
  return kOk;
}

// ------------------------------------------------------------------ stats

struct StatsArgs {
  std::string corpus, by_source = "source", manifest;
  bool tsv = false;
  int jobs = 0;
};

int run_stats(const StatsArgs& a) {
  auto documents = load_corpus_or_fail(a.corpus);
  auto stats = wiser::corpus_stats(documents, a.by_source, a.jobs);
  for (const auto& id : stats.missing_snt) {
    std::cerr << "warning: " << id << " has no ::snt; tokens not counted\n";
  }
  std::cout << wiser::format_stats(stats, a.tsv);
  wiser::RunManifest manifest;
  manifest.command = "stats";
  manifest.add_input(a.corpus);
  manifest.config = {{"by_source", a.by_source}};
  emit_manifest(manifest, a.manifest);
  return kOk;
}

// -------------------------------------------------------------------- iaa

struct IaaArgs {
  std::string batches, manifest;
  int places = 2;
  int restarts = 5;
  uint64_t seed = 0;
  int jobs = 0;
};

// Batch file: {"groups": [{"name": ..., "batches": [0.72, {"a": path, "b": path}, ...]}]}
// Relative corpus paths resolve against the batch file's directory.
int run_iaa(const IaaArgs& a) {
  nlohmann::json batch_doc;
  try {
    batch_doc = nlohmann::json::parse(wiser::read_text_file(a.batches));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(a.batches + ": " + e.what());
  }
  wiser::RunManifest manifest;
  manifest.command = "iaa";
  manifest.seed = a.seed;
  manifest.add_input(a.batches);
  wiser::MetricOptions options;
  options.smatch.restarts = a.restarts;
  options.smatch.seed = a.seed;
  std::filesystem::path base = std::filesystem::path(a.batches).parent_path();

  std::vector<wiser::IaaGroup> groups;
  if (!batch_doc.contains("groups") || !batch_doc["groups"].is_array()) {
    throw DataError(a.batches + ": expected a \"groups\" array");
  }
  for (const auto& g : batch_doc["groups"]) {
    wiser::IaaGroup group;
    group.name = g.value("name", "group");
    for (const auto& b : g.at("batches")) {
      if (b.is_number()) {
        group.batch_scores.push_back(b.get<double>());
        continue;
      }
      auto pa = base / b.at("a").get<std::string>();
      auto pb = base / b.at("b").get<std::string>();
      manifest.add_input(pa);
      manifest.add_input(pb);
      try {
        group.batch_scores.push_back(wiser::batch_agreement(
            load_corpus_or_fail(pa.string()), load_corpus_or_fail(pb.string()), options,
            a.jobs));
      } catch (const wiser::ScoreError& e) {
        throw DataError(group.name + ": " + e.what());
      }
    }
    groups.push_back(std::move(group));
  }
  std::vector<wiser::IaaRow> rows;
  try {
    rows = wiser::iaa_report(groups);
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  std::cout << wiser::format_iaa(rows, a.places);
  manifest.config = {{"places", std::to_string(a.places)},
                     {"restarts", std::to_string(a.restarts)}};
  emit_manifest(manifest, a.manifest);
  return kOk;
}

// ----------------------------------------------------------------- frames

struct FramesArgs {
  std::string report = "totals", catalog, rules, overrides, manifest;
  bool tsv = false;
  int jobs = 0;
};

int run_frames(const FramesArgs& a) {
  if (a.catalog.empty()) throw UsageError("--catalog (or WISER_CATALOG) is required");
  wiser::Catalog catalog = wiser::load_catalog(a.catalog);
  wiser::RunManifest manifest;
  manifest.command = "frames";
  manifest.add_input(a.catalog);
  manifest.config = {{"report", a.report}};

  if (a.report == "totals") {
    auto c = wiser::catalog_stats(catalog);
    std::cout << "predicates\t" << c.predicates << "\nsenses\t" << c.senses
              << "\narguments\t" << c.arguments << '\n';
  } else if (a.report == "ftag") {
    std::cout << format_matrix(wiser::ftag_by_arg(catalog), a.tsv);
  } else if (a.report == "vnrole") {
    auto dist = wiser::vnrole_by_arg(catalog);
    std::cout << format_matrix(dist.matrix, a.tsv);
    std::cout << "coverage\t" << dist.mapped_arguments << '/' << dist.total_arguments << '\t'
              << std::fixed << std::setprecision(4) << dist.coverage() << '\n';
  } else if (a.report == "coverage") {
    auto overrides = effective_overrides(a.overrides);
    auto mapping = wiser::map_catalog(catalog, effective_rules(a.rules), overrides, a.jobs);
    std::cout << wiser::format_coverage(catalog, mapping);
    if (!a.rules.empty()) manifest.add_input(a.rules);
    if (!a.overrides.empty()) manifest.add_input(a.overrides);
  } else {
    throw UsageError("unknown report " + a.report);
  }
  emit_manifest(manifest, a.manifest);
  return kOk;
}

// ------------------------------------------------------------------ split

struct SplitArgs {
  std::string corpus, out_dir = ".", manifest;
  std::vector<std::string> splits;  // NAME=IDFILE
};

int run_split(const SplitArgs& a) {
  std::map<std::string, std::vector<std::string>> id_lists;
  wiser::RunManifest manifest;
  manifest.command = "split";
  for (const auto& s : a.splits) {
    size_t eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--split expects NAME=IDFILE");
    std::string name = s.substr(0, eq), file = s.substr(eq + 1);
    if (id_lists.count(name)) throw UsageError("split " + name + " given twice");
    id_lists[name] = read_lines(file);
    manifest.add_input(file);
  }
  auto documents = load_corpus_or_fail(a.corpus);
  manifest.add_input(a.corpus);
  std::map<std::string, std::vector<wiser::Document>> parts;
  try {
    parts = wiser::split_corpus(documents, id_lists);
  } catch (const wiser::SplitError& e) {
    throw DataError(e.what());
  }
  std::filesystem::create_directories(a.out_dir);
  for (const auto& [name, docs] : parts) {
    wiser::write_corpus_file(std::filesystem::path(a.out_dir) / (name + ".txt"), docs);
    std::cout << name << '\t' << docs.size() << '\n';
  }
  manifest.config = {{"out_dir", a.out_dir}};
  emit_manifest(manifest, a.manifest);
  return kOk;
}

// ----------------------------------------------------------------- recall

struct RecallArgs {
  std::string gold, pred, train, cross, manifest;
};

int run_recall(const RecallArgs& a) {
  auto gold = load_corpus_or_fail(a.gold);
  auto pred = load_corpus_or_fail(a.pred);
  auto vocab = wiser::predicate_vocabulary(load_corpus_or_fail(a.train));
  wiser::RunManifest manifest;
  manifest.command = "recall";
  manifest.add_input(a.gold);
  manifest.add_input(a.pred);
  manifest.add_input(a.train);
  std::set<std::string> cross;
  if (!a.cross.empty()) {
    cross = wiser::predicate_vocabulary(load_corpus_or_fail(a.cross));
    manifest.add_input(a.cross);
  }
  wiser::RecallResult r;
  try {
    r = wiser::novel_predicate_recall(gold, pred, vocab, a.cross.empty() ? nullptr : &cross);
  } catch (const wiser::ScoreError& e) {
    throw DataError(e.what());
  }
  std::cout << "novel\t" << r.total << "\nfound\t" << r.found << "\nrecall\t";
  if (auto v = r.recall()) {
    std::cout << std::fixed << std::setprecision(4) << *v << '\n';
  } else {
    std::cout << "N/A\n";
  }
  emit_manifest(manifest, a.manifest);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"WISeR conversion and semantic graph evaluation toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(wiser::kToolVersion));

  ConvertArgs conv;
  auto* c = app.add_subcommand("convert", "Trim and convert a corpus");
  c->add_option("input", conv.input, "Input corpus")->required()->check(CLI::ExistingFile);
  c->add_option("output", conv.output, "Output corpus")->required();
  c->add_option("--catalog", conv.catalog, "Frame catalog (TSV)")->envname("WISER_CATALOG");
  c->add_option("--mode", conv.mode, "wiser | wiser+wsd | numbered | numbered+wsd")
      ->check(CLI::IsMember({"wiser", "wiser+wsd", "numbered", "numbered+wsd"}));
  c->add_option("--overrides", conv.overrides, "Override table (TSV)")->check(CLI::ExistingFile);
  c->add_option("--rules", conv.rules, "Rule file replacing the built-in rules")
      ->check(CLI::ExistingFile);
  c->add_option("--exclude", conv.exclude, "File of excluded senses, one per line")
      ->check(CLI::ExistingFile);
  c->add_flag("--keep-adhoc", conv.keep_adhoc, "Do not drop sentences with ad-hoc senses");
  c->add_option("--on-unmapped", conv.on_unmapped, "drop | flag")
      ->check(CLI::IsMember({"drop", "flag"}));
  c->add_option("--report", conv.report, "Report path (default: stderr)");
  c->add_option("--log", conv.log, "Drop/flag log path");
  c->add_option("--manifest", conv.manifest, "Manifest path (default: OUTPUT.manifest.json)");
  c->add_option("--indent", conv.indent, "Indent width, 0 for one line per graph")
      ->check(CLI::NonNegativeNumber);
  c->add_option("--jobs", conv.jobs, "Worker threads (0 = all)")->check(CLI::NonNegativeNumber);

  ScoreArgs score;
  auto* s = app.add_subcommand("score", "Score predicted graphs against gold");
  s->add_option("--gold", score.gold, "Gold corpus")->required()->check(CLI::ExistingFile);
  s->add_option("--pred", score.pred, "Predicted corpus")->required()->check(CLI::ExistingFile);
  s->add_option("--metrics", score.metrics, "Comma-separated metrics (default: all)");
  s->add_option("--scheme", score.scheme, "xSRL role set: wiser | amr")
      ->check(CLI::IsMember({"wiser", "amr"}));
  s->add_option("--restarts", score.restarts, "Alignment starts per pair");
  s->add_option("--seed", score.seed, "Random seed");
  s->add_flag("--exact", score.exact, "Exhaustive alignment");
  s->add_option("--oracle-bound", score.oracle_bound, "Variable limit for --exact");
  s->add_flag("--per-doc", score.per_doc, "Also print per-document lines");
  s->add_option("--output", score.output, "Output path (default: stdout)");
  s->add_option("--manifest", score.manifest, "Manifest path (default: stderr)");
  s->add_option("--jobs", score.jobs, "Worker threads (0 = all)")->check(CLI::NonNegativeNumber);

  StatsArgs stats;
  auto* st = app.add_subcommand("stats", "Corpus statistics");
  st->add_option("corpus", stats.corpus, "Corpus")->required()->check(CLI::ExistingFile);
  st->add_option("--by-source", stats.by_source, "Metadata key to group by ('' for none)");
  st->add_flag("--tsv", stats.tsv, "Tab-separated output");
  st->add_option("--manifest", stats.manifest, "Manifest path (default: stderr)");
  st->add_option("--jobs", stats.jobs, "Worker threads (0 = all)")->check(CLI::NonNegativeNumber);

  IaaArgs iaa;
  auto* ia = app.add_subcommand("iaa", "Inter-annotator agreement by batch");
  ia->add_option("--batches", iaa.batches, "Batch file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  ia->add_option("--places", iaa.places, "Decimal places")->check(CLI::Range(0, 9));
  ia->add_option("--restarts", iaa.restarts, "Alignment starts per pair");
  ia->add_option("--seed", iaa.seed, "Random seed");
  ia->add_option("--manifest", iaa.manifest, "Manifest path (default: stderr)");
  ia->add_option("--jobs", iaa.jobs, "Worker threads (0 = all)")->check(CLI::NonNegativeNumber);

  FramesArgs frames;
  auto* f = app.add_subcommand("frames", "Frame catalog reports");
  f->add_option("report", frames.report, "totals | ftag | vnrole | coverage")
      ->check(CLI::IsMember({"totals", "ftag", "vnrole", "coverage"}));
  f->add_option("--catalog", frames.catalog, "Frame catalog (TSV)")->envname("WISER_CATALOG");
  f->add_option("--rules", frames.rules, "Rule file")->check(CLI::ExistingFile);
  f->add_option("--overrides", frames.overrides, "Override table")->check(CLI::ExistingFile);
  f->add_flag("--tsv", frames.tsv, "Tab-separated matrices");
  f->add_option("--manifest", frames.manifest, "Manifest path (default: stderr)");
  f->add_option("--jobs", frames.jobs, "Worker threads (0 = all)")->check(CLI::NonNegativeNumber);

  SplitArgs split;
  auto* sp = app.add_subcommand("split", "Partition a corpus by id lists");
  sp->add_option("corpus", split.corpus, "Corpus")->required()->check(CLI::ExistingFile);
  sp->add_option("--split", split.splits, "NAME=IDFILE (repeatable)")->required();
  sp->add_option("--out-dir", split.out_dir, "Directory for NAME.txt outputs");
  sp->add_option("--manifest", split.manifest, "Manifest path (default: stderr)");

  RecallArgs recall;
  auto* r = app.add_subcommand("recall", "Recall on predicates unseen in training");
  r->add_option("--gold", recall.gold, "Gold corpus")->required()->check(CLI::ExistingFile);
  r->add_option("--pred", recall.pred, "Predicted corpus")->required()->check(CLI::ExistingFile);
  r->add_option("--train", recall.train, "Training corpus")->required()->check(CLI::ExistingFile);
  r->add_option("--cross-train", recall.cross, "Training corpus of the other scheme")
      ->check(CLI::ExistingFile);
  r->add_option("--manifest", recall.manifest, "Manifest path (default: stderr)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*c) return run_convert(conv);
    if (*s) return run_score(score);
    if (*st) return run_stats(stats);
    if (*ia) return run_iaa(iaa);
    if (*f) return run_frames(frames);
    if (*sp) return run_split(split);
    if (*r) return run_recall(recall);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataFailure;
  }
  return kUsage;
}
