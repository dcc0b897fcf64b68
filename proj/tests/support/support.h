#ifndef WISER_TESTS_SUPPORT_H_
#define WISER_TESTS_SUPPORT_H_

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "wiser/convert.h"
#include "wiser/corpus.h"
#include "wiser/graph.h"
#include "wiser/metrics.h"

namespace wiser::testing {

std::string data_path(const std::string& relative);

// Fixture catalog, built-in plus fixture overrides, and the mapping table.
struct FixtureFrames {
  Catalog catalog;
  OverrideTable overrides;
  CatalogMapping mapping;

  FixtureFrames();
  ConversionConfig config(ConversionMode mode) const;
};

std::vector<Document> load_fixture_corpus(const std::string& name);

// One line of the rule-case fixture: expected outcome and the record.
struct RuleCase {
  std::string provenance;  // rule | override | unmapped
  int row = 0;
  std::string role;
  FrameArgument arg;
};

std::vector<RuleCase> load_rule_cases();

struct GraphShape {
  int min_vars = 1;
  int max_vars = 6;
  double extra_edge_rate = 0.25;  // chance per variable of one more incoming edge
  double inverse_rate = 0.0;      // chance an edge is stored as its "-of" form
  double attribute_rate = 0.3;
};

// Valid random graph. Normalized edges run from lower to higher variable
// index, so the result is acyclic by construction.
SemGraph random_graph(std::mt19937_64& rng, const GraphShape& shape = {});

// Copy with one random edit (concept, relation label, attribute or extra
// edge). Always returns a valid graph.
SemGraph perturb(const SemGraph& graph, std::mt19937_64& rng);

// Best matched-triple count over every injective partial variable mapping,
// computed by plain enumeration and multiset intersection.
size_t brute_force_matches(const std::vector<Triple>& pred,
                           const std::vector<Triple>& gold);

// Direct tally over triples and metadata, used to check corpus statistics.
StatsRow tally(const std::vector<Document>& documents);

std::vector<Triple> sorted_triples(const SemGraph& graph);

// Triples a restricted metric looks at, selected without the library's
// metric views: srl, xsrl or reentrancies.
std::vector<Triple> restrict_triples(const std::vector<Triple>& triples, Metric metric,
                                     RoleScheme scheme = RoleScheme::kWiser);

}  // namespace wiser::testing

#endif  // WISER_TESTS_SUPPORT_H_
