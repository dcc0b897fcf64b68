#include "wiser/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>
#include <unordered_map>

#include <omp.h>

#include "wiser/concept.h"
#include "wiser/roles.h"

namespace wiser {
namespace {

constexpr Metric kAllMetrics[] = {
    Metric::kSmatch, Metric::kUnlabeled, Metric::kNoWsd, Metric::kConcepts, Metric::kSrl,
    Metric::kXsrl, Metric::kReentrancies, Metric::kNegations, Metric::kNamedEntity,
};

bool is_numbered_label(std::string_view label) {
  return label.size() == 5 && label.starts_with(":ARG") && label[4] >= '0' && label[4] <= '6';
}

std::string fixed(double v, int places) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(places) << v;
  return out.str();
}

}  // namespace

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::kSmatch: return "smatch";
    case Metric::kUnlabeled: return "unlabeled";
    case Metric::kNoWsd: return "no_wsd";
    case Metric::kConcepts: return "concepts";
    case Metric::kSrl: return "srl";
    case Metric::kXsrl: return "xsrl";
    case Metric::kReentrancies: return "reentrancies";
    case Metric::kNegations: return "negations";
    case Metric::kNamedEntity: return "named_entity";
  }
  return "?";
}

std::optional<Metric> parse_metric(std::string_view name) {
  for (Metric m : kAllMetrics) {
    if (metric_name(m) == name) return m;
  }
  return std::nullopt;
}

const std::vector<Metric>& default_metrics() {
  static const std::vector<Metric> metrics(std::begin(kAllMetrics), std::end(kAllMetrics));
  return metrics;
}

std::string_view scheme_name(RoleScheme s) {
  return s == RoleScheme::kWiser ? "wiser" : "amr";
}

std::optional<RoleScheme> parse_scheme(std::string_view name) {
  if (name == "wiser") return RoleScheme::kWiser;
  if (name == "amr") return RoleScheme::kAmr;
  return std::nullopt;
}

const std::set<std::string>& xsrl_role_set(RoleScheme scheme) {
  static const std::set<std::string> wiser = [] {
    std::set<std::string> s;
    for (const auto& role : wiser_role_inventory()) s.insert(":" + role);
    return s;
  }();
  static const std::set<std::string> amr = {
      ":ARG0", ":ARG1", ":ARG2", ":ARG3", ":ARG4", ":ARG5", ":ARG6",
      ":accompanier", ":beneficiary", ":destination", ":instrument",
      ":location", ":purpose", ":source", ":topic",
  };
  return scheme == RoleScheme::kWiser ? wiser : amr;
}

bool is_bag_metric(Metric m) {
  return m == Metric::kConcepts || m == Metric::kNegations || m == Metric::kNamedEntity;
}

std::vector<Triple> metric_view(const std::vector<Triple>& triples, Metric metric,
                                RoleScheme scheme) {
  std::vector<Triple> out;
  switch (metric) {
    case Metric::kSmatch:
      return triples;
    case Metric::kUnlabeled:
      out = triples;
      for (auto& t : out) {
        if (t.kind == TripleKind::kRelation) t.label = std::string(kUnlabeledRole);
      }
      return out;
    case Metric::kNoWsd:
      out = triples;
      for (auto& t : out) {
        if (t.kind == TripleKind::kInstance || t.kind == TripleKind::kTop) {
          t.target = strip_sense(t.target);
        }
      }
      return out;
    case Metric::kSrl:
      for (const auto& t : triples) {
        if (t.kind == TripleKind::kRelation && is_numbered_label(t.label)) out.push_back(t);
      }
      return out;
    case Metric::kXsrl: {
      const auto& roles = xsrl_role_set(scheme);
      for (const auto& t : triples) {
        if (t.kind == TripleKind::kRelation &&
            (roles.count(t.label) || roles.count(invert_role(t.label)))) {
          out.push_back(t);
        }
      }
      return out;
    }
    case Metric::kReentrancies: {
      std::unordered_map<std::string, int> indegree;
      for (const auto& t : triples) {
        if (t.kind == TripleKind::kRelation) ++indegree[t.target];
      }
      std::set<std::string> involved;
      for (const auto& t : triples) {
        if (t.kind == TripleKind::kRelation && indegree[t.target] >= 2) {
          involved.insert(t.source);
          involved.insert(t.target);
        }
      }
      for (const auto& t : triples) {
        bool keep = (t.kind == TripleKind::kRelation && indegree[t.target] >= 2) ||
                    (t.kind == TripleKind::kInstance && involved.count(t.source));
        if (keep) out.push_back(t);
      }
      return out;
    }
    default:
      throw std::invalid_argument(std::string(metric_name(metric)) +
                                  " is not an alignment metric");
  }
}

std::vector<std::string> metric_bag(const std::vector<Triple>& triples, Metric metric) {
  std::vector<std::string> bag;
  std::unordered_map<std::string, std::string> concept_of;
  for (const auto& t : triples) {
    if (t.kind == TripleKind::kInstance) concept_of[t.source] = t.target;
  }
  switch (metric) {
    case Metric::kConcepts:
      for (const auto& t : triples) {
        if (t.kind == TripleKind::kInstance) bag.push_back(t.target);
      }
      break;
    case Metric::kNegations:
      for (const auto& t : triples) {
        if (t.kind == TripleKind::kAttribute && t.label == ":polarity" && t.target == "-") {
          bag.push_back(concept_of[t.source]);
        }
      }
      break;
    case Metric::kNamedEntity: {
      // name variable -> (op index, string)
      std::unordered_map<std::string, std::vector<std::pair<int, std::string>>> ops;
      for (const auto& t : triples) {
        if (t.kind != TripleKind::kAttribute || !t.label.starts_with(":op")) continue;
        std::string_view digits = std::string_view(t.label).substr(3);
        if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) continue;
        ops[t.source].emplace_back(std::stoi(std::string(digits)), t.target);
      }
      for (const auto& t : triples) {
        if (t.kind != TripleKind::kRelation || t.label != ":name") continue;
        auto parts = ops[t.target];
        std::stable_sort(parts.begin(), parts.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        std::string key = concept_of[t.source] + "|";
        for (const auto& [i, s] : parts) key += " " + s;
        bag.push_back(key);
      }
      break;
    }
    default:
      throw std::invalid_argument(std::string(metric_name(metric)) + " is not a bag metric");
  }
  return bag;
}

MatchCounts bag_counts(std::vector<std::string> pred, std::vector<std::string> gold) {
  MatchCounts c{0, pred.size(), gold.size()};
  std::sort(pred.begin(), pred.end());
  std::sort(gold.begin(), gold.end());
  std::vector<std::string> common;
  std::set_intersection(pred.begin(), pred.end(), gold.begin(), gold.end(),
                        std::back_inserter(common));
  c.matched = common.size();
  return c;
}

MatchCounts score_metric(const std::vector<Triple>& pred, const std::vector<Triple>& gold,
                         Metric metric, const MetricOptions& options) {
  if (is_bag_metric(metric)) return bag_counts(metric_bag(pred, metric), metric_bag(gold, metric));
  auto a = metric_view(pred, metric, options.scheme);
  auto b = metric_view(gold, metric, options.scheme);
  if (options.exact) return smatch_exact_triples(a, b, options.oracle_bound);
  return smatch_triples(a, b, options.smatch).counts;
}

MatchCounts score_metric(const SemGraph& pred, const SemGraph& gold, Metric metric,
                         const MetricOptions& options) {
  return score_metric(extract_triples(pred), extract_triples(gold), metric, options);
}

namespace {

std::vector<const SemGraph*> pair_by_id(const std::vector<Document>& pred,
                                        const std::vector<Document>& gold) {
  std::map<std::string, const SemGraph*> by_id;
  for (const auto& d : pred) {
    if (!by_id.emplace(d.id, &d.graph).second) {
      throw ScoreError("duplicate predicted document id " + d.id);
    }
  }
  std::vector<const SemGraph*> paired;
  std::set<std::string> gold_ids;
  for (const auto& d : gold) {
    if (!gold_ids.insert(d.id).second) throw ScoreError("duplicate gold document id " + d.id);
    auto it = by_id.find(d.id);
    if (it == by_id.end()) throw ScoreError("document " + d.id + " missing from predictions");
    paired.push_back(it->second);
  }
  for (const auto& d : pred) {
    if (!gold_ids.count(d.id)) throw ScoreError("document " + d.id + " missing from gold");
  }
  return paired;
}

DocumentScores score_pair(const SemGraph& pred, const Document& gold, size_t index,
                          const std::vector<Metric>& metrics, MetricOptions options) {
  DocumentScores s;
  s.id = gold.id;
  options.smatch.stream = index;
  auto a = extract_triples(pred);
  auto b = extract_triples(gold.graph);
  for (Metric m : metrics) s.counts.push_back(score_metric(a, b, m, options));
  return s;
}

CorpusScores finish(const std::vector<Metric>& metrics, std::vector<DocumentScores> docs) {
  CorpusScores out;
  out.metrics = metrics;
  out.totals.assign(metrics.size(), {});
  for (const auto& d : docs) {
    for (size_t k = 0; k < metrics.size(); ++k) out.totals[k].add(d.counts[k]);
  }
  out.documents = std::move(docs);
  return out;
}

}  // namespace

CorpusScores score_corpus(const std::vector<Document>& pred, const std::vector<Document>& gold,
                          const std::vector<Metric>& metrics, const MetricOptions& options,
                          int jobs) {
  auto paired = pair_by_id(pred, gold);
  std::vector<DocumentScores> docs(gold.size());
  const long n = static_cast<long>(gold.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
  // Exceptions (oracle refusal) cannot cross the parallel region.
  std::vector<std::string> errors(gold.size());
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
  for (long i = 0; i < n; ++i) {
    try {
      docs[i] = score_pair(*paired[i], gold[i], static_cast<size_t>(i), metrics, options);
    } catch (const std::exception& e) {
      errors[i] = gold[i].id + ": " + e.what();
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw ScoreError(e);
  }
  return finish(metrics, std::move(docs));
}

CorpusScores score_corpus_serial(const std::vector<Document>& pred,
                                 const std::vector<Document>& gold,
                                 const std::vector<Metric>& metrics,
                                 const MetricOptions& options) {
  auto paired = pair_by_id(pred, gold);
  std::vector<DocumentScores> docs;
  for (size_t i = 0; i < gold.size(); ++i) {
    try {
      docs.push_back(score_pair(*paired[i], gold[i], i, metrics, options));
    } catch (const std::exception& e) {
      throw ScoreError(gold[i].id + ": " + e.what());
    }
  }
  return finish(metrics, std::move(docs));
}

std::string format_scores(const CorpusScores& scores, bool per_document) {
  std::ostringstream out;
  auto line = [&](std::string_view name, const MatchCounts& c) {
    out << name << '\t' << fixed(c.precision(), 4) << '\t' << fixed(c.recall(), 4) << '\t'
        << fixed(c.f1(), 4) << '\t' << c.matched << '\t' << c.pred_total << '\t'
        << c.gold_total << '\n';
  };
  if (per_document) {
    for (const auto& d : scores.documents) {
      for (size_t k = 0; k < scores.metrics.size(); ++k) {
        out << "doc\t" << d.id << '\t';
        line(metric_name(scores.metrics[k]), d.counts[k]);
      }
    }
  }
  out << "metric\tP\tR\tF1\tmatched\ttotal_pred\ttotal_gold\n";
  for (size_t k = 0; k < scores.metrics.size(); ++k) {
    line(metric_name(scores.metrics[k]), scores.totals[k]);
  }
  return out.str();
}

std::set<std::string> predicate_concepts(const SemGraph& graph) {
  std::set<std::string> out;
  for (const auto& inst : graph.instances) {
    if (has_sense_suffix(inst.concept_label)) out.insert(inst.concept_label);
  }
  SemGraph norm = normalize(graph);
  for (const auto& e : norm.edges) {
    std::string_view role = std::string_view(e.role).substr(1);
    if (is_numbered_label(e.role) || is_rule_target(role)) {
      if (const std::string* c = norm.concept_of(e.source)) out.insert(*c);
    }
  }
  return out;
}

std::set<std::string> predicate_vocabulary(const std::vector<Document>& documents) {
  std::set<std::string> vocab;
  for (const auto& d : documents) {
    auto concepts = predicate_concepts(d.graph);
    vocab.insert(concepts.begin(), concepts.end());
  }
  return vocab;
}

std::optional<double> RecallResult::recall() const {
  if (total == 0) return std::nullopt;
  return static_cast<double>(found) / total;
}

RecallResult novel_predicate_recall(const std::vector<Document>& gold,
                                    const std::vector<Document>& pred,
                                    const std::set<std::string>& training_vocab,
                                    const std::set<std::string>* cross_scheme_vocab) {
  std::set<std::string> cross_stripped;
  if (cross_scheme_vocab) {
    for (const auto& c : *cross_scheme_vocab) cross_stripped.insert(strip_sense(c));
  }
  std::map<std::string, const SemGraph*> by_id;
  for (const auto& d : pred) by_id[d.id] = &d.graph;

  RecallResult r;
  for (const auto& d : gold) {
    auto it = by_id.find(d.id);
    if (it == by_id.end()) throw ScoreError("document " + d.id + " missing from predictions");
    std::set<std::string> predicted;
    for (const auto& inst : it->second->instances) predicted.insert(inst.concept_label);
    for (const auto& c : predicate_concepts(d.graph)) {
      if (training_vocab.count(c)) continue;
      if (cross_scheme_vocab && cross_stripped.count(strip_sense(c))) continue;
      ++r.total;
      if (predicted.count(c)) ++r.found;
    }
  }
  return r;
}

double macro_mean(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("mean of an empty batch list");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

std::vector<IaaRow> iaa_report(const std::vector<IaaGroup>& groups) {
  std::vector<IaaRow> rows;
  for (const auto& g : groups) {
    if (g.batch_scores.empty()) {
      throw std::invalid_argument("group " + g.name + " has no batches");
    }
    rows.push_back({g.name, g.batch_scores, macro_mean(g.batch_scores)});
  }
  return rows;
}

double batch_agreement(const std::vector<Document>& a, const std::vector<Document>& b,
                       const MetricOptions& options, int jobs) {
  if (a.size() != b.size()) {
    throw ScoreError("batch size mismatch: " + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()));
  }
  return score_corpus(a, b, {Metric::kSmatch}, options, jobs).totals[0].f1();
}

double round_display(double value, int places) {
  double scale = std::pow(10.0, places);
  // Nudge so binary representations of exact halves round up.
  return std::floor(value * scale + 0.5 + 1e-9) / scale;
}

std::string format_iaa(const std::vector<IaaRow>& rows, int places) {
  size_t width = 5;
  size_t batches = 0;
  for (const auto& r : rows) {
    width = std::max(width, r.name.size());
    batches = std::max(batches, r.batch_scores.size());
  }
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(width)) << "group";
  for (size_t i = 0; i < batches; ++i) out << "  B" << std::setw(places + 1) << (i + 1);
  out << "  mean\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(static_cast<int>(width)) << r.name;
    for (size_t i = 0; i < batches; ++i) {
      out << "  ";
      if (i < r.batch_scores.size()) {
        out << fixed(round_display(r.batch_scores[i], places), places);
      } else {
        out << std::setw(places + 2) << "-";
      }
    }
    out << "  " << fixed(round_display(r.mean, places), places) << '\n';
  }
  return out.str();
}

void StatsRow::add(const StatsRow& o) {
  sentences += o.sentences;
  tokens += o.tokens;
  concepts += o.concepts;
  relations += o.relations;
  reentrancies += o.reentrancies;
  negations += o.negations;
  named_entities += o.named_entities;
}

StatsRow graph_stats(const SemGraph& graph) {
  StatsRow row;
  row.sentences = 1;
  if (auto snt = graph.metadata_value("snt")) {
    std::istringstream in(*snt);
    std::string tok;
    while (in >> tok) ++row.tokens;
  }
  SemGraph norm = normalize(graph);
  row.concepts = norm.instances.size();
  row.relations = norm.edges.size() + norm.attributes.size();
  row.reentrancies = static_cast<size_t>(reentrancy_count(norm));
  for (const auto& a : norm.attributes) {
    if (a.role == ":polarity" && a.value == "-") ++row.negations;
  }
  for (const auto& e : norm.edges) {
    if (e.role == ":name") ++row.named_entities;
  }
  return row;
}

CorpusStats corpus_stats(const std::vector<Document>& documents,
                         const std::string& source_key, int jobs) {
  std::vector<StatsRow> rows(documents.size());
  const long n = static_cast<long>(documents.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(threads)
  for (long i = 0; i < n; ++i) rows[i] = graph_stats(documents[i].graph);

  CorpusStats stats;
  for (size_t i = 0; i < documents.size(); ++i) {
    const auto& doc = documents[i];
    if (!doc.graph.metadata_value("snt")) stats.missing_snt.push_back(doc.id);
    stats.total.add(rows[i]);
    if (!source_key.empty()) {
      stats.by_source[doc.graph.metadata_value(source_key).value_or("-")].add(rows[i]);
    }
  }
  return stats;
}

std::string format_stats(const CorpusStats& stats, bool tsv) {
  static const char* kHeader[] = {"source", "sentences", "tokens", "concepts", "relations",
                                  "reentrancies", "negations", "named_entities"};
  std::vector<std::vector<std::string>> table;
  table.emplace_back(std::begin(kHeader), std::end(kHeader));
  auto add = [&](const std::string& name, const StatsRow& r) {
    table.push_back({name, std::to_string(r.sentences), std::to_string(r.tokens),
                     std::to_string(r.concepts), std::to_string(r.relations),
                     std::to_string(r.reentrancies), std::to_string(r.negations),
                     std::to_string(r.named_entities)});
  };
  for (const auto& [name, row] : stats.by_source) add(name, row);
  add("total", stats.total);

  std::ostringstream out;
  if (tsv) {
    for (const auto& row : table) {
      for (size_t c = 0; c < row.size(); ++c) out << (c ? "\t" : "") << row[c];
      out << '\n';
    }
    return out.str();
  }
  std::vector<size_t> width(table[0].size(), 0);
  for (const auto& row : table) {
    for (size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  for (const auto& row : table) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c == 0) {
        out << std::left << std::setw(static_cast<int>(width[c])) << row[c];
      } else {
        out << "  " << std::right << std::setw(static_cast<int>(width[c])) << row[c];
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace wiser
