#ifndef WISER_GRAPH_H_
#define WISER_GRAPH_H_

#include <compare>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wiser {

// Raised when a graph violates a structural invariant.
class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by the PENMAN reader. Line and column are 1-based.
class ParseError : public GraphError {
 public:
  ParseError(const std::string& message, int line, int column);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  int line_;
  int column_;
};

struct Instance {
  std::string variable;
  std::string concept_label;

  auto operator<=>(const Instance&) const = default;
};

// A relation between two variables. Role labels keep their leading ':' and
// are stored in the orientation they were written in (":ARG0-of" stays).
struct Edge {
  std::string source;
  std::string role;
  std::string target;

  auto operator<=>(const Edge&) const = default;
};

// A relation from a variable to a constant (number, string, '-', '+', ...).
struct Attribute {
  std::string source;
  std::string role;
  std::string value;

  auto operator<=>(const Attribute&) const = default;
};

using Metadata = std::vector<std::pair<std::string, std::string>>;

// Rooted, connected, acyclic labeled graph for one sentence.
struct SemGraph {
  std::string root;
  std::vector<Instance> instances;
  std::vector<Edge> edges;
  std::vector<Attribute> attributes;
  Metadata metadata;

  const std::string* concept_of(std::string_view variable) const;
  std::optional<std::string> metadata_value(std::string_view key) const;
  void set_metadata(const std::string& key, const std::string& value);
};

enum class TripleKind { kInstance, kRelation, kAttribute, kTop };

// Atomic matching unit. Instance and top triples carry the concept in
// `target`; their `label` is "instance" and "top" respectively.
struct Triple {
  TripleKind kind;
  std::string source;
  std::string label;
  std::string target;

  auto operator<=>(const Triple&) const = default;
};

const char* triple_kind_name(TripleKind kind);

// Parses one PENMAN graph, optionally preceded by "# ::key value" lines.
// `first_line` offsets reported line numbers when the text is a slice of a
// larger file.
SemGraph parse_graph(std::string_view text, int first_line = 1);

// Depth-first rendering from the root. indent == 0 renders one line;
// otherwise each role starts a new line indented by depth * indent spaces.
// Metadata is not rendered here (see write_corpus).
std::string serialize_graph(const SemGraph& graph, int indent = 6);

// Throws GraphError describing the first invariant violation found.
void validate(const SemGraph& graph);

bool is_inverse_role(std::string_view role);
// ":ARG0" <-> ":ARG0-of"; ":consist-of" has no base form, so its inverse
// is ":consist-of-of".
std::string invert_role(std::string_view role);

// Flips inverse edges to their canonical direction and sorts all entries.
SemGraph normalize(const SemGraph& graph);

// Instances, relations, attributes, then the single top triple, all taken
// from the normalized graph.
std::vector<Triple> extract_triples(const SemGraph& graph);

// In-degree of every variable over normalized relation edges.
std::map<std::string, int> in_degrees(const SemGraph& graph);

// Σ max(0, in-degree - 1) over variables.
int reentrancy_count(const SemGraph& graph);

}  // namespace wiser

#endif  // WISER_GRAPH_H_
