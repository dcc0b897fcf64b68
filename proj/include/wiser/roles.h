#ifndef WISER_ROLES_H_
#define WISER_ROLES_H_

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wiser/frames.h"

namespace wiser {

// Thematic roles produced by the conversion rules (lowercase).
const std::vector<std::string>& rule_target_roles();

// The 35 roles observed on converted numbered arguments; overrides may use
// any of these.
const std::vector<std::string>& wiser_role_inventory();

bool is_rule_target(std::string_view role);
bool is_inventory_role(std::string_view role);

struct ArgCondition {
  bool negated = false;  // "-ARGn": arg_number != n
  int number = 0;
};

// "+(a|b)" holds when any alternative is present; "-(a|b)" when none is.
struct AlternationCondition {
  bool negated = false;
  std::vector<std::string> alternatives;
};

struct MappingRule {
  int row = 0;  // identifier cited in provenance
  std::optional<ArgCondition> arg;
  std::optional<FunctionTag> function_tag;
  std::vector<AlternationCondition> verbnet;
  // Alternatives are phrases matched on word boundaries, case-insensitively.
  std::vector<AlternationCondition> description;
  std::string target;  // lowercase role name

  bool matches(const FrameArgument& arg) const;
  std::string to_string() const;
};

class RuleError : public std::runtime_error {
 public:
  RuleError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

// One rule per line, evaluated in file order:
//   [ROW:] ATOM [&] ATOM ... -> Role
// Atoms: +ARGn / -ARGn, +TAG (a function tag), +role / -role / +(r1|r2)
// (VerbNet roles), +desc(p1|p2) / -desc(p) (description phrases).
// '#' starts a comment line. Without a ROW prefix the row is the rule's
// 1-based position.
std::vector<MappingRule> compile_rules(std::string_view text);
std::vector<MappingRule> load_rules(const std::filesystem::path& path);

// The conversion table transcribed as 28 rules.
std::string_view builtin_rule_text();
const std::vector<MappingRule>& builtin_rules();

using ArgumentKey = std::pair<SenseKey, int>;

class OverrideTable {
 public:
  // Returns false when the key already had an entry (the entry is replaced).
  bool set(const ArgumentKey& key, std::string role);
  const std::string* find(const ArgumentKey& key) const;
  size_t size() const { return entries_.size(); }
  // Entries from `other` replace entries with the same key.
  void merge(const OverrideTable& other);

  const std::map<ArgumentKey, std::string>& entries() const { return entries_; }

 private:
  std::map<ArgumentKey, std::string> entries_;
};

// Tab-separated: predicate, sense, arg_number, role. Duplicate keys and roles
// outside the inventory are errors.
OverrideTable parse_overrides(std::istream& in, const std::string& source_name);
OverrideTable load_overrides(const std::filesystem::path& path);

// Entries for the reified predicates (have-rel-role-91, have-org-role-91,
// have-degree-91) whose argument lists come from the annotation guidelines.
const OverrideTable& builtin_overrides();

enum class Provenance { kRule, kOverride, kUnmapped };
const char* provenance_name(Provenance p);

struct MappingResult {
  std::string role;  // empty when unmapped
  Provenance provenance = Provenance::kUnmapped;
  int rule_row = 0;  // valid for kRule

  bool mapped() const { return provenance != Provenance::kUnmapped; }
};

// First matching rule wins; otherwise the override table; otherwise unmapped.
MappingResult map_argument(const FrameArgument& arg,
                           const std::vector<MappingRule>& rules,
                           const OverrideTable& overrides);

class MappingTable {
 public:
  void insert(const ArgumentKey& key, MappingResult result);
  const MappingResult* find(const SenseKey& sense, int arg_number) const;
  size_t size() const { return entries_.size(); }
  const std::map<ArgumentKey, MappingResult>& entries() const { return entries_; }

 private:
  std::map<ArgumentKey, MappingResult> entries_;
};

struct CoverageReport {
  size_t rule_mapped = 0;
  size_t override_mapped = 0;
  size_t unmapped = 0;
  std::map<int, size_t> by_rule_row;
  std::vector<ArgumentKey> unmapped_keys;

  size_t total() const { return rule_mapped + override_mapped + unmapped; }
};

struct CatalogMapping {
  MappingTable table;
  CoverageReport coverage;
};

// Records are mapped in parallel with `jobs` OpenMP threads (0 = runtime
// default). The result does not depend on `jobs`.
CatalogMapping map_catalog(const Catalog& catalog,
                           const std::vector<MappingRule>& rules,
                           const OverrideTable& overrides, int jobs = 0);
CatalogMapping map_catalog_serial(const Catalog& catalog,
                                  const std::vector<MappingRule>& rules,
                                  const OverrideTable& overrides);

// Machine-readable lines "predicate-sense\tARGn\tprovenance\trole" followed
// by a "# ..." summary block.
std::string format_coverage(const Catalog& catalog, const CatalogMapping& mapping);

// :source -> :start, :destination -> :end, :beneficiary -> :benefactive,
// :medium -> :manner, including the "-of" forms. Other labels pass through.
std::string noncore_relabel(std::string_view role);

}  // namespace wiser

#endif  // WISER_ROLES_H_
