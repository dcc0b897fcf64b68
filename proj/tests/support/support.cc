#include "support.h"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace wiser::testing {
namespace {

const std::vector<std::string> kConcepts = {
    "want-01", "go-02", "see-01", "eat-01", "boy", "girl", "city", "thing", "person", "dog",
};
const std::vector<std::string> kRoles = {
    ":ARG0", ":ARG1", ":ARG2", ":actor", ":theme", ":mod", ":time", ":location", ":consist-of",
};

template <typename T>
const T& pick(const std::vector<T>& items, std::mt19937_64& rng) {
  return items[std::uniform_int_distribution<size_t>(0, items.size() - 1)(rng)];
}

bool chance(double p, std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

std::string var_name(int i) { return "v" + std::to_string(i); }

bool is_variable_slot(const Triple& t, bool source) {
  return source || t.kind == TripleKind::kRelation;
}

}  // namespace

std::string data_path(const std::string& relative) {
  return std::string(WISER_DATA_DIR) + "/" + relative;
}

FixtureFrames::FixtureFrames()
    : catalog(load_catalog(data_path("fixtures/catalog.tsv"))),
      overrides(builtin_overrides()) {
  overrides.merge(load_overrides(data_path("fixtures/overrides.tsv")));
  mapping = map_catalog_serial(catalog, builtin_rules(), overrides);
}

ConversionConfig FixtureFrames::config(ConversionMode mode) const {
  ConversionConfig c;
  c.mode = mode;
  c.catalog = &catalog;
  c.mapping = &mapping.table;
  c.overrides = &overrides;
  return c;
}

std::vector<Document> load_fixture_corpus(const std::string& name) {
  Corpus c = read_corpus(data_path("fixtures/" + name));
  if (!c.ok()) throw std::runtime_error(name + ": " + c.errors.front().to_string());
  return std::move(c.documents);
}

std::vector<RuleCase> load_rule_cases() {
  std::ifstream in(data_path("fixtures/rule_cases.tsv"));
  if (!in) throw std::runtime_error("cannot open rule_cases.tsv");
  std::vector<RuleCase> cases;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    size_t cut = 0;
    for (int i = 0; i < 3; ++i) cut = line.find('\t', cut) + 1;
    std::istringstream head(line.substr(0, cut));
    RuleCase c;
    head >> c.provenance >> c.row >> c.role;
    std::istringstream record(line.substr(cut));
    Catalog one = parse_catalog(record, "rule_cases");
    if (one.arguments().size() != 1) throw std::runtime_error("bad rule case: " + line);
    c.arg = one.arguments().front();
    cases.push_back(std::move(c));
  }
  return cases;
}

SemGraph random_graph(std::mt19937_64& rng, const GraphShape& shape) {
  int n = std::uniform_int_distribution<int>(shape.min_vars, shape.max_vars)(rng);
  SemGraph g;
  g.root = var_name(0);
  for (int i = 0; i < n; ++i) g.instances.push_back({var_name(i), pick(kConcepts, rng)});

  std::set<std::tuple<int, std::string, int>> used;
  auto add_edge = [&](int from, int to) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      std::string role = pick(kRoles, rng);
      if (!used.insert({from, role, to}).second) continue;
      if (chance(shape.inverse_rate, rng)) {
        g.edges.push_back({var_name(to), invert_role(role), var_name(from)});
      } else {
        g.edges.push_back({var_name(from), role, var_name(to)});
      }
      return;
    }
  };
  for (int i = 1; i < n; ++i) {
    add_edge(std::uniform_int_distribution<int>(0, i - 1)(rng), i);
    if (i >= 2 && chance(shape.extra_edge_rate, rng)) {
      add_edge(std::uniform_int_distribution<int>(0, i - 1)(rng), i);
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!chance(shape.attribute_rate, rng)) continue;
    switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
      case 0: g.attributes.push_back({var_name(i), ":polarity", "-"}); break;
      case 1:
        g.attributes.push_back(
            {var_name(i), ":quant", std::to_string(std::uniform_int_distribution<int>(1, 3)(rng))});
        break;
      default: g.attributes.push_back({var_name(i), ":op1", "\"Kim\""}); break;
    }
  }
  validate(g);
  return g;
}

SemGraph perturb(const SemGraph& graph, std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    SemGraph g = graph;
    switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
      case 0: {
        auto& inst = g.instances[std::uniform_int_distribution<size_t>(0, g.instances.size() - 1)(rng)];
        inst.concept_label = pick(kConcepts, rng);
        break;
      }
      case 1:
        if (g.edges.empty()) continue;
        g.edges[std::uniform_int_distribution<size_t>(0, g.edges.size() - 1)(rng)].role =
            pick(kRoles, rng);
        break;
      case 2:
        if (g.attributes.empty()) {
          g.attributes.push_back({g.root, ":polarity", "-"});
        } else {
          g.attributes.erase(g.attributes.begin() + std::uniform_int_distribution<size_t>(
                                                         0, g.attributes.size() - 1)(rng));
        }
        break;
      default: {
        if (g.instances.size() < 2) continue;
        // Only forward by index order in the variable names keeps it acyclic.
        size_t a = std::uniform_int_distribution<size_t>(0, g.instances.size() - 2)(rng);
        size_t b = std::uniform_int_distribution<size_t>(a + 1, g.instances.size() - 1)(rng);
        g.edges.push_back({var_name(static_cast<int>(a)), pick(kRoles, rng),
                           var_name(static_cast<int>(b))});
        break;
      }
    }
    try {
      validate(g);
      return g;
    } catch (const GraphError&) {
    }
  }
  return graph;
}

size_t brute_force_matches(const std::vector<Triple>& pred, const std::vector<Triple>& gold) {
  auto variables = [](const std::vector<Triple>& ts) {
    std::vector<std::string> vars;
    for (const auto& t : ts) {
      for (bool source : {true, false}) {
        if (!is_variable_slot(t, source)) continue;
        const std::string& v = source ? t.source : t.target;
        if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
      }
    }
    return vars;
  };
  std::vector<std::string> pv = variables(pred);
  std::vector<std::string> gv = variables(gold);

  std::multiset<Triple> gold_set(gold.begin(), gold.end());
  auto score = [&](const std::map<std::string, std::string>& m) {
    std::multiset<Triple> remaining = gold_set;
    size_t hits = 0;
    for (Triple t : pred) {
      auto it_s = m.find(t.source);
      t.source = it_s == m.end() ? "\x01unmapped" : it_s->second;
      if (t.kind == TripleKind::kRelation) {
        auto it_t = m.find(t.target);
        t.target = it_t == m.end() ? "\x01unmapped" : it_t->second;
      }
      auto hit = remaining.find(t);
      if (hit != remaining.end()) {
        remaining.erase(hit);
        ++hits;
      }
    }
    return hits;
  };

  size_t best = 0;
  std::map<std::string, std::string> mapping;
  std::vector<bool> taken(gv.size(), false);
  std::function<void(size_t)> search = [&](size_t i) {
    if (i == pv.size()) {
      best = std::max(best, score(mapping));
      return;
    }
    search(i + 1);
    for (size_t j = 0; j < gv.size(); ++j) {
      if (taken[j]) continue;
      taken[j] = true;
      mapping[pv[i]] = gv[j];
      search(i + 1);
      mapping.erase(pv[i]);
      taken[j] = false;
    }
  };
  search(0);
  return best;
}

StatsRow tally(const std::vector<Document>& documents) {
  StatsRow row;
  for (const auto& doc : documents) {
    ++row.sentences;
    if (auto snt = doc.graph.metadata_value("snt")) {
      std::istringstream words(*snt);
      std::string w;
      while (words >> w) ++row.tokens;
    }
    std::map<std::string, size_t> incoming;
    for (const auto& t : extract_triples(doc.graph)) {
      switch (t.kind) {
        case TripleKind::kInstance: ++row.concepts; break;
        case TripleKind::kTop: break;
        case TripleKind::kRelation:
          ++row.relations;
          ++incoming[t.target];
          if (t.label == ":name") ++row.named_entities;
          break;
        case TripleKind::kAttribute:
          ++row.relations;
          if (t.label == ":polarity" && t.target == "-") ++row.negations;
          break;
      }
    }
    for (const auto& [var, n] : incoming) row.reentrancies += n - 1;
  }
  return row;
}

std::vector<Triple> sorted_triples(const SemGraph& graph) {
  std::vector<Triple> ts = extract_triples(graph);
  std::sort(ts.begin(), ts.end());
  return ts;
}

std::vector<Triple> restrict_triples(const std::vector<Triple>& triples, Metric metric,
                                     RoleScheme scheme) {
  std::vector<Triple> out;
  if (metric == Metric::kSrl) {
    static const std::set<std::string> numbered = {":ARG0", ":ARG1", ":ARG2", ":ARG3",
                                                   ":ARG4", ":ARG5", ":ARG6"};
    for (const auto& t : triples) {
      if (t.kind == TripleKind::kRelation && numbered.count(t.label)) out.push_back(t);
    }
  } else if (metric == Metric::kXsrl) {
    const auto& roles = xsrl_role_set(scheme);
    for (const auto& t : triples) {
      if (t.kind != TripleKind::kRelation) continue;
      std::string base = t.label;
      if (roles.count(base) || roles.count(base + "-of") ||
          (base.size() > 3 && base.ends_with("-of") && roles.count(base.substr(0, base.size() - 3)))) {
        out.push_back(t);
      }
    }
  } else if (metric == Metric::kReentrancies) {
    std::map<std::string, int> incoming;
    for (const auto& t : triples) {
      if (t.kind == TripleKind::kRelation) ++incoming[t.target];
    }
    std::set<std::string> ends;
    for (const auto& t : triples) {
      if (t.kind == TripleKind::kRelation && incoming[t.target] > 1) {
        out.push_back(t);
        ends.insert(t.source);
        ends.insert(t.target);
      }
    }
    for (const auto& t : triples) {
      if (t.kind == TripleKind::kInstance && ends.count(t.source)) out.push_back(t);
    }
  } else {
    throw std::invalid_argument("not a restricted metric");
  }
  return out;
}

}  // namespace wiser::testing
