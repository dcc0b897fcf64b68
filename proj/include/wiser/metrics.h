#ifndef WISER_METRICS_H_
#define WISER_METRICS_H_

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wiser/corpus.h"
#include "wiser/graph.h"
#include "wiser/smatch.h"

namespace wiser {

enum class Metric {
  kSmatch, kUnlabeled, kNoWsd, kConcepts, kSrl, kXsrl, kReentrancies, kNegations,
  kNamedEntity,
};

std::string_view metric_name(Metric m);
std::optional<Metric> parse_metric(std::string_view name);
// smatch, unlabeled, no_wsd, concepts, srl, xsrl, reentrancies, negations,
// named_entity.
const std::vector<Metric>& default_metrics();

enum class RoleScheme { kWiser, kAmr };
std::string_view scheme_name(RoleScheme s);
std::optional<RoleScheme> parse_scheme(std::string_view name);

// Role labels with their leading ':'. wiser: 35 thematic and other roles;
// amr: :ARG0..:ARG6 plus eight non-core roles.
const std::set<std::string>& xsrl_role_set(RoleScheme scheme);

// Label used for every relation under the unlabeled metric.
inline constexpr std::string_view kUnlabeledRole = ":rel";

// The triples a metric aligns over, derived from a normalized triple list.
// smatch: unchanged. unlabeled: relation labels replaced by kUnlabeledRole.
// no_wsd: sense suffixes removed from instance and top concepts.
// srl: relations labeled :ARG0..:ARG6. xsrl: relations whose label, or its
// inverse, is in the scheme's role set. reentrancies: relations into a
// variable with in-degree >= 2 within the list, plus the instance triples
// of their endpoints. Restrictions keep input order and are idempotent.
// Throws std::invalid_argument for the bag metrics.
std::vector<Triple> metric_view(const std::vector<Triple>& triples, Metric metric,
                                RoleScheme scheme = RoleScheme::kWiser);

bool is_bag_metric(Metric m);

// Multisets compared without alignment.
// concepts: instance concepts. negations: concept of each variable carrying
// :polarity -. named_entity: entity concept plus its name's :opN strings in
// op order (":wiki" ignored).
std::vector<std::string> metric_bag(const std::vector<Triple>& triples, Metric metric);
MatchCounts bag_counts(std::vector<std::string> pred, std::vector<std::string> gold);

struct MetricOptions {
  RoleScheme scheme = RoleScheme::kWiser;
  SmatchOptions smatch;
  bool exact = false;
  size_t oracle_bound = kDefaultOracleBound;
};

MatchCounts score_metric(const std::vector<Triple>& pred, const std::vector<Triple>& gold,
                         Metric metric, const MetricOptions& options = {});
MatchCounts score_metric(const SemGraph& pred, const SemGraph& gold, Metric metric,
                         const MetricOptions& options = {});

class ScoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DocumentScores {
  std::string id;
  std::vector<MatchCounts> counts;  // parallel to CorpusScores::metrics
};

struct CorpusScores {
  std::vector<Metric> metrics;
  std::vector<MatchCounts> totals;  // micro-averaged: summed counts
  std::vector<DocumentScores> documents;  // in gold order
};

// Pairs documents by id (gold order); the pair at gold index i uses
// smatch stream i. Throws ScoreError when the id sets differ.
CorpusScores score_corpus(const std::vector<Document>& pred,
                          const std::vector<Document>& gold,
                          const std::vector<Metric>& metrics,
                          const MetricOptions& options = {}, int jobs = 0);
CorpusScores score_corpus_serial(const std::vector<Document>& pred,
                                 const std::vector<Document>& gold,
                                 const std::vector<Metric>& metrics,
                                 const MetricOptions& options = {});

// "metric\tP\tR\tF1\tmatched\ttotal_pred\ttotal_gold" per metric, preceded
// by per-document lines when requested.
std::string format_scores(const CorpusScores& scores, bool per_document);

// Concepts with a sense suffix, and concepts of variables that are the
// source of a numbered or thematic argument edge.
std::set<std::string> predicate_concepts(const SemGraph& graph);
std::set<std::string> predicate_vocabulary(const std::vector<Document>& documents);

struct RecallResult {
  size_t found = 0;
  size_t total = 0;  // (document, novel concept) pairs
  std::optional<double> recall() const;
};

// Novel concepts are gold predicate concepts outside `training_vocab`. With a
// cross-scheme vocabulary, a concept is also dropped when its sense-less form
// matches the sense-less form of any entry there.
RecallResult novel_predicate_recall(const std::vector<Document>& gold,
                                    const std::vector<Document>& pred,
                                    const std::set<std::string>& training_vocab,
                                    const std::set<std::string>* cross_scheme_vocab = nullptr);

struct IaaGroup {
  std::string name;
  std::vector<double> batch_scores;
};

struct IaaRow {
  std::string name;
  std::vector<double> batch_scores;
  double mean = 0.0;
};

// Unweighted mean over batches per group. Throws std::invalid_argument for a
// group without batches.
std::vector<IaaRow> iaa_report(const std::vector<IaaGroup>& groups);
double macro_mean(const std::vector<double>& values);

// Corpus-level Smatch F1 between two annotators of one batch. Throws
// ScoreError when the batches differ in size or ids.
double batch_agreement(const std::vector<Document>& a, const std::vector<Document>& b,
                       const MetricOptions& options = {}, int jobs = 0);

// Half-up rounding used for display (0.755 -> 0.76 at two places).
double round_display(double value, int places);
std::string format_iaa(const std::vector<IaaRow>& rows, int places = 2);

struct StatsRow {
  size_t sentences = 0;
  size_t tokens = 0;
  size_t concepts = 0;
  size_t relations = 0;
  size_t reentrancies = 0;
  size_t negations = 0;
  size_t named_entities = 0;

  void add(const StatsRow& other);
  bool operator==(const StatsRow&) const = default;
};

// Counts for one graph; tokens come from `snt` (whitespace-separated).
StatsRow graph_stats(const SemGraph& graph);

struct CorpusStats {
  std::map<std::string, StatsRow> by_source;
  StatsRow total;
  std::vector<std::string> missing_snt;  // ids without ::snt
};

// Groups by the metadata key `source_key` (documents without it go under
// "-"); an empty key puts everything in the total only.
CorpusStats corpus_stats(const std::vector<Document>& documents,
                         const std::string& source_key = "source", int jobs = 0);

// Aligned table, or tab-separated when `tsv` is set.
std::string format_stats(const CorpusStats& stats, bool tsv = false);

}  // namespace wiser

#endif  // WISER_METRICS_H_
