#ifndef WISER_CONVERT_H_
#define WISER_CONVERT_H_

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "wiser/corpus.h"
#include "wiser/frames.h"
#include "wiser/graph.h"
#include "wiser/roles.h"

namespace wiser {

enum class ConversionMode { kWiser, kWiserWithWsd, kNumberedNoWsd, kNumberedWithWsd };

// CLI spellings: "wiser", "wiser+wsd", "numbered", "numbered+wsd".
std::string_view mode_name(ConversionMode mode);
std::optional<ConversionMode> parse_mode(std::string_view name);
bool mode_relabels(ConversionMode mode);
bool mode_strips(ConversionMode mode);

enum class UnmappedPolicy { kDropSentence, kKeepAndFlag };

// byline-91, street-address-91, course-91, distribution-range-91,
// publication-91, statistical-test-91.
const std::set<std::string>& default_excluded_senses();

struct ConversionConfig {
  ConversionMode mode = ConversionMode::kWiser;
  std::set<std::string> excluded_senses = default_excluded_senses();
  // Ad-hoc trimming needs `catalog`; it is skipped when catalog is null.
  bool drop_adhoc = true;
  UnmappedPolicy on_unmapped = UnmappedPolicy::kKeepAndFlag;
  const Catalog* catalog = nullptr;
  // Relabeling looks up `mapping` first and falls back to `overrides` for
  // arguments the catalog does not list. At least one is required when the
  // mode relabels.
  const MappingTable* mapping = nullptr;
  const OverrideTable* overrides = nullptr;
};

struct Incident {
  std::string doc_id;
  std::string kind;  // excluded | adhoc | unmapped | flag | malformed
  std::string detail;
};

struct ConversionReport {
  size_t sentences_in = 0;
  size_t sentences_out = 0;
  size_t dropped_adhoc = 0;
  size_t dropped_excluded = 0;
  size_t dropped_unmapped = 0;
  size_t relabeled_edges = 0;     // numbered arguments given a thematic role
  size_t noncore_relabeled = 0;
  size_t flagged_edges = 0;       // numbered arguments left as-is
  size_t stripped_concepts = 0;
  size_t malformed_senses = 0;
  // role -> counts by original argument number
  std::map<std::string, std::array<size_t, kArgColumns>> role_distribution;

  void merge(const ConversionReport& other);
  size_t distribution_total() const;
  bool operator==(const ConversionReport&) const = default;
};

// Stable "key\tvalue" lines followed by the role distribution table.
std::string format_report(const ConversionReport& report);
// One "doc_id\tkind\tdetail" line per incident.
std::string format_incidents(const std::vector<Incident>& incidents);

// Variable -> predicate sense, for every instance whose concept has a sense.
using FrameBindings = std::map<std::string, SenseKey>;
FrameBindings bind_frames(const SemGraph& graph);

// Role for argument n of `sense`, or nullopt when neither the mapping table
// nor the override table supplies one.
std::optional<std::string> resolve_role(const ConversionConfig& config,
                                        const SenseKey& sense, int arg_number);

struct TrimDecision {
  enum Kind { kKeep, kExcluded, kAdhoc } kind = kKeep;
  std::string concept_label;  // the concept that triggered the drop
};

TrimDecision trim_check(const SemGraph& graph, const ConversionConfig& config);

struct TrimResult {
  std::vector<Document> documents;
  std::vector<Incident> incidents;
};

TrimResult trim_corpus(const std::vector<Document>& documents,
                       const ConversionConfig& config);

struct GraphConversion {
  SemGraph graph;
  bool dropped = false;  // an unmapped argument under kDropSentence
  ConversionReport report;
  std::vector<Incident> incidents;
};

// Relabels numbered arguments (resolved through `bindings`) and non-core
// roles. Structure, variables and concepts are left untouched.
GraphConversion relabel_graph(const SemGraph& graph, const FrameBindings& bindings,
                              const ConversionConfig& config,
                              const std::string& doc_id = {});

// Removes sense suffixes from all concepts.
GraphConversion strip_graph(const SemGraph& graph, const std::string& doc_id = {});

// Runs the passes selected by config.mode with frame bindings taken from the
// input graph. Does not trim.
GraphConversion convert_graph(const SemGraph& graph, const ConversionConfig& config,
                              const std::string& doc_id = {});

struct CorpusConversion {
  std::vector<Document> documents;
  ConversionReport report;
  std::vector<Incident> incidents;
};

// Trim, then convert each kept document. Documents are processed with `jobs`
// OpenMP threads (0 = runtime default); output is independent of `jobs`.
CorpusConversion convert_corpus(const std::vector<Document>& documents,
                                const ConversionConfig& config, int jobs = 0);
CorpusConversion convert_corpus_serial(const std::vector<Document>& documents,
                                       const ConversionConfig& config);

class SplitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Assigns every document to exactly one named split. Throws SplitError for
// ids listed but absent, ids listed twice, or documents not listed.
std::map<std::string, std::vector<Document>> split_corpus(
    const std::vector<Document>& documents,
    const std::map<std::string, std::vector<std::string>>& id_lists);

}  // namespace wiser

#endif  // WISER_CONVERT_H_
