#include "wiser/convert.h"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <omp.h>

namespace wiser {
namespace {

struct NumberedRole {
  int number;
  bool inverse;
};

// ":ARG2" -> {2, false}; ":ARG0-of" -> {0, true}.
std::optional<NumberedRole> parse_numbered(std::string_view role) {
  if (!role.starts_with(":ARG")) return std::nullopt;
  std::string_view rest = role.substr(4);
  bool inverse = false;
  if (rest.ends_with("-of")) {
    inverse = true;
    rest.remove_suffix(3);
  }
  if (rest.empty() || rest.size() > 2 ||
      !std::all_of(rest.begin(), rest.end(),
                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    return std::nullopt;
  }
  return NumberedRole{std::stoi(std::string(rest)), inverse};
}

struct Relabeler {
  const FrameBindings& bindings;
  const ConversionConfig& config;
  GraphConversion& out;
  const std::string& doc_id;

  // Returns the new label; records the outcome in the report.
  std::string relabel(const std::string& role, const std::string& source,
                      const std::string& target) {
    auto numbered = parse_numbered(role);
    if (!numbered) {
      std::string mapped = noncore_relabel(role);
      if (mapped != role) ++out.report.noncore_relabeled;
      return mapped;
    }
    const std::string& owner = numbered->inverse ? target : source;
    auto bound = bindings.find(owner);
    std::optional<std::string> thematic;
    if (bound != bindings.end() && numbered->number <= kMaxArgNumber) {
      thematic = resolve_role(config, bound->second, numbered->number);
    }
    if (!thematic) {
      std::string where = bound == bindings.end() ? owner : bound->second.concept_name();
      ++out.report.flagged_edges;
      out.incidents.push_back({doc_id, "flag", where + " " + role});
      if (config.on_unmapped == UnmappedPolicy::kDropSentence) out.dropped = true;
      return role;
    }
    ++out.report.relabeled_edges;
    ++out.report.role_distribution[*thematic][numbered->number];
    std::string label = ":" + *thematic;
    return numbered->inverse ? invert_role(label) : label;
  }
};

}  // namespace

std::string_view mode_name(ConversionMode mode) {
  switch (mode) {
    case ConversionMode::kWiser: return "wiser";
    case ConversionMode::kWiserWithWsd: return "wiser+wsd";
    case ConversionMode::kNumberedNoWsd: return "numbered";
    case ConversionMode::kNumberedWithWsd: return "numbered+wsd";
  }
  return "?";
}

std::optional<ConversionMode> parse_mode(std::string_view name) {
  for (auto mode : {ConversionMode::kWiser, ConversionMode::kWiserWithWsd,
                    ConversionMode::kNumberedNoWsd, ConversionMode::kNumberedWithWsd}) {
    if (mode_name(mode) == name) return mode;
  }
  return std::nullopt;
}

bool mode_relabels(ConversionMode mode) {
  return mode == ConversionMode::kWiser || mode == ConversionMode::kWiserWithWsd;
}

bool mode_strips(ConversionMode mode) {
  return mode == ConversionMode::kWiser || mode == ConversionMode::kNumberedNoWsd;
}

const std::set<std::string>& default_excluded_senses() {
  static const std::set<std::string> senses = {
      "byline-91", "street-address-91", "course-91",
      "distribution-range-91", "publication-91", "statistical-test-91",
  };
  return senses;
}

void ConversionReport::merge(const ConversionReport& o) {
  sentences_in += o.sentences_in;
  sentences_out += o.sentences_out;
  dropped_adhoc += o.dropped_adhoc;
  dropped_excluded += o.dropped_excluded;
  dropped_unmapped += o.dropped_unmapped;
  relabeled_edges += o.relabeled_edges;
  noncore_relabeled += o.noncore_relabeled;
  flagged_edges += o.flagged_edges;
  stripped_concepts += o.stripped_concepts;
  malformed_senses += o.malformed_senses;
  for (const auto& [role, counts] : o.role_distribution) {
    auto& mine = role_distribution[role];
    for (size_t i = 0; i < kArgColumns; ++i) mine[i] += counts[i];
  }
}

size_t ConversionReport::distribution_total() const {
  size_t total = 0;
  for (const auto& [role, counts] : role_distribution) {
    for (size_t c : counts) total += c;
  }
  return total;
}

std::string format_report(const ConversionReport& r) {
  std::ostringstream out;
  out << "sentences_in\t" << r.sentences_in << '\n'
      << "sentences_out\t" << r.sentences_out << '\n'
      << "dropped_adhoc\t" << r.dropped_adhoc << '\n'
      << "dropped_excluded\t" << r.dropped_excluded << '\n'
      << "dropped_unmapped\t" << r.dropped_unmapped << '\n'
      << "relabeled_edges\t" << r.relabeled_edges << '\n'
      << "noncore_relabeled\t" << r.noncore_relabeled << '\n'
      << "flagged_edges\t" << r.flagged_edges << '\n'
      << "stripped_concepts\t" << r.stripped_concepts << '\n'
      << "malformed_senses\t" << r.malformed_senses << '\n';

  using Row = std::pair<std::string, std::array<size_t, kArgColumns>>;
  std::vector<Row> rows(r.role_distribution.begin(), r.role_distribution.end());
  auto sum = [](const std::array<size_t, kArgColumns>& a) {
    size_t s = 0;
    for (size_t c : a) s += c;
    return s;
  };
  std::stable_sort(rows.begin(), rows.end(),
                   [&](const Row& a, const Row& b) { return sum(a.second) > sum(b.second); });
  out << "role_distribution\trole";
  for (size_t i = 0; i < kArgColumns; ++i) out << "\tARG" << i;
  out << "\ttotal\n";
  std::array<size_t, kArgColumns> columns{};
  for (const auto& [role, counts] : rows) {
    out << "role_distribution\t" << role;
    for (size_t i = 0; i < kArgColumns; ++i) {
      out << '\t' << counts[i];
      columns[i] += counts[i];
    }
    out << '\t' << sum(counts) << '\n';
  }
  out << "role_distribution\ttotal";
  for (size_t c : columns) out << '\t' << c;
  out << '\t' << sum(columns) << '\n';
  return out.str();
}

std::string format_incidents(const std::vector<Incident>& incidents) {
  std::ostringstream out;
  for (const auto& i : incidents) out << i.doc_id << '\t' << i.kind << '\t' << i.detail << '\n';
  return out.str();
}

FrameBindings bind_frames(const SemGraph& graph) {
  FrameBindings bindings;
  for (const auto& inst : graph.instances) {
    if (auto key = split_sense(inst.concept_label)) bindings.emplace(inst.variable, *key);
  }
  return bindings;
}

std::optional<std::string> resolve_role(const ConversionConfig& config,
                                        const SenseKey& sense, int arg_number) {
  if (config.mapping) {
    if (const MappingResult* r = config.mapping->find(sense, arg_number); r && r->mapped()) {
      return r->role;
    }
  }
  if (config.overrides) {
    if (const std::string* role = config.overrides->find({sense, arg_number})) return *role;
  }
  return std::nullopt;
}

TrimDecision trim_check(const SemGraph& graph, const ConversionConfig& config) {
  for (const auto& inst : graph.instances) {
    if (config.excluded_senses.count(inst.concept_label)) {
      return {TrimDecision::kExcluded, inst.concept_label};
    }
  }
  if (config.drop_adhoc && config.catalog) {
    for (const auto& inst : graph.instances) {
      auto key = split_sense(inst.concept_label);
      if (key && !config.catalog->has_sense(*key)) {
        return {TrimDecision::kAdhoc, inst.concept_label};
      }
    }
  }
  return {};
}

TrimResult trim_corpus(const std::vector<Document>& documents,
                       const ConversionConfig& config) {
  TrimResult result;
  for (const auto& doc : documents) {
    TrimDecision d = trim_check(doc.graph, config);
    if (d.kind == TrimDecision::kKeep) {
      result.documents.push_back(doc);
    } else {
      result.incidents.push_back(
          {doc.id, d.kind == TrimDecision::kExcluded ? "excluded" : "adhoc", d.concept_label});
    }
  }
  return result;
}

GraphConversion relabel_graph(const SemGraph& graph, const FrameBindings& bindings,
                              const ConversionConfig& config, const std::string& doc_id) {
  if (!config.mapping && !config.overrides) {
    throw std::invalid_argument("relabeling needs a mapping table or overrides");
  }
  GraphConversion out;
  out.graph = graph;
  Relabeler relabeler{bindings, config, out, doc_id};
  for (auto& e : out.graph.edges) e.role = relabeler.relabel(e.role, e.source, e.target);
  for (auto& a : out.graph.attributes) a.role = relabeler.relabel(a.role, a.source, a.value);
  return out;
}

GraphConversion strip_graph(const SemGraph& graph, const std::string& doc_id) {
  GraphConversion out;
  out.graph = graph;
  for (auto& inst : out.graph.instances) {
    if (has_sense_suffix(inst.concept_label)) {
      inst.concept_label = strip_sense(inst.concept_label);
      ++out.report.stripped_concepts;
    } else if (has_malformed_sense(inst.concept_label)) {
      ++out.report.malformed_senses;
      out.incidents.push_back({doc_id, "malformed", inst.concept_label});
    }
  }
  return out;
}

GraphConversion convert_graph(const SemGraph& graph, const ConversionConfig& config,
                              const std::string& doc_id) {
  GraphConversion out;
  out.graph = graph;
  if (mode_relabels(config.mode)) out = relabel_graph(graph, bind_frames(graph), config, doc_id);
  if (mode_strips(config.mode)) {
    GraphConversion stripped = strip_graph(out.graph, doc_id);
    out.graph = std::move(stripped.graph);
    out.report.merge(stripped.report);
    out.incidents.insert(out.incidents.end(), stripped.incidents.begin(),
                         stripped.incidents.end());
  }
  return out;
}

namespace {

// Per-document outcome, merged in input order.
struct DocOutcome {
  std::optional<SemGraph> graph;
  ConversionReport report;
  std::vector<Incident> incidents;
};

DocOutcome convert_one(const Document& doc, const ConversionConfig& config) {
  DocOutcome o;
  o.report.sentences_in = 1;
  TrimDecision d = trim_check(doc.graph, config);
  if (d.kind != TrimDecision::kKeep) {
    bool excluded = d.kind == TrimDecision::kExcluded;
    (excluded ? o.report.dropped_excluded : o.report.dropped_adhoc) = 1;
    o.incidents.push_back({doc.id, excluded ? "excluded" : "adhoc", d.concept_label});
    return o;
  }
  GraphConversion c = convert_graph(doc.graph, config, doc.id);
  o.incidents = std::move(c.incidents);
  if (c.dropped) {
    // Counters of the discarded graph are not kept; only the drop is.
    o.report.dropped_unmapped = 1;
    for (auto& inc : o.incidents) {
      if (inc.kind == "flag") inc.kind = "unmapped";
    }
    return o;
  }
  o.report.merge(c.report);
  o.report.sentences_out = 1;
  o.graph = std::move(c.graph);
  return o;
}

CorpusConversion assemble(const std::vector<Document>& documents,
                          std::vector<DocOutcome> outcomes) {
  CorpusConversion result;
  for (size_t i = 0; i < outcomes.size(); ++i) {
    auto& o = outcomes[i];
    result.report.merge(o.report);
    result.incidents.insert(result.incidents.end(), o.incidents.begin(), o.incidents.end());
    if (o.graph) result.documents.push_back({documents[i].id, std::move(*o.graph)});
  }
  return result;
}

}  // namespace

CorpusConversion convert_corpus(const std::vector<Document>& documents,
                                const ConversionConfig& config, int jobs) {
  if (mode_relabels(config.mode) && !config.mapping && !config.overrides) {
    throw std::invalid_argument("relabeling needs a mapping table or overrides");
  }
  std::vector<DocOutcome> outcomes(documents.size());
  const long n = static_cast<long>(documents.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
  for (long i = 0; i < n; ++i) outcomes[i] = convert_one(documents[i], config);
  return assemble(documents, std::move(outcomes));
}

CorpusConversion convert_corpus_serial(const std::vector<Document>& documents,
                                       const ConversionConfig& config) {
  if (mode_relabels(config.mode) && !config.mapping && !config.overrides) {
    throw std::invalid_argument("relabeling needs a mapping table or overrides");
  }
  std::vector<DocOutcome> outcomes;
  outcomes.reserve(documents.size());
  for (const auto& doc : documents) outcomes.push_back(convert_one(doc, config));
  return assemble(documents, std::move(outcomes));
}

std::map<std::string, std::vector<Document>> split_corpus(
    const std::vector<Document>& documents,
    const std::map<std::string, std::vector<std::string>>& id_lists) {
  std::map<std::string, std::string> assignment;  // id -> split
  for (const auto& [split, ids] : id_lists) {
    for (const auto& id : ids) {
      auto [it, inserted] = assignment.emplace(id, split);
      if (!inserted) {
        throw SplitError("document " + id + " assigned twice (" + it->second + ", " +
                         split + ")");
      }
    }
  }
  std::map<std::string, std::vector<Document>> splits;
  for (const auto& [split, ids] : id_lists) splits[split];
  std::set<std::string> seen;
  for (const auto& doc : documents) {
    auto it = assignment.find(doc.id);
    if (it == assignment.end()) {
      throw SplitError("document " + doc.id + " is not assigned to any split");
    }
    seen.insert(doc.id);
    splits[it->second].push_back(doc);
  }
  for (const auto& [id, split] : assignment) {
    if (!seen.count(id)) {
      throw SplitError("document " + id + " listed in " + split + " is not in the corpus");
    }
  }
  return splits;
}

}  // namespace wiser
