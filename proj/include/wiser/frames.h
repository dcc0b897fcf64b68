#ifndef WISER_FRAMES_H_
#define WISER_FRAMES_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wiser/concept.h"

namespace wiser {

// PropBank function tags, in the row order of the ftag-by-argument table.
enum class FunctionTag {
  kPPT, kPAG, kGOL, kPRD, kMNR, kDIR, kVSP, kLOC,
  kEXT, kCAU, kCOM, kPRP, kTMP, kADJ, kADV, kREC,
};

inline constexpr size_t kFunctionTagCount = 16;
inline constexpr int kMaxArgNumber = 6;
inline constexpr size_t kArgColumns = kMaxArgNumber + 1;

std::string_view function_tag_name(FunctionTag tag);
std::optional<FunctionTag> parse_function_tag(std::string_view name);
const std::array<FunctionTag, kFunctionTagCount>& all_function_tags();

struct FrameArgument {
  std::string predicate;
  std::string sense;
  int arg_number = 0;
  FunctionTag function_tag = FunctionTag::kPPT;
  std::vector<std::string> verbnet_roles;  // lowercase, sorted, unique
  std::string description;

  SenseKey sense_key() const { return {predicate, sense}; }
  bool has_verbnet_role(std::string_view role) const;
};

class CatalogError : public std::runtime_error {
 public:
  CatalogError(const std::string& source, int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

// Immutable set of frame arguments, kept sorted by (predicate, sense, arg)
// so every derived view is independent of input order.
class Catalog {
 public:
  Catalog() = default;
  // Throws CatalogError (line 0) on a duplicate (predicate, sense, arg).
  explicit Catalog(std::vector<FrameArgument> arguments);

  const std::vector<FrameArgument>& arguments() const { return arguments_; }
  bool empty() const { return arguments_.empty(); }

  bool has_sense(const SenseKey& key) const;
  const FrameArgument* find(const SenseKey& key, int arg_number) const;

  size_t predicate_count() const;
  size_t sense_count() const;

 private:
  std::vector<FrameArgument> arguments_;
  std::map<std::pair<SenseKey, int>, size_t> index_;
};

// Record format, one per line, six tab-separated fields:
//   predicate  sense  arg_number  function_tag  verbnet_roles  description
// verbnet_roles is comma-separated and may be empty. '#' lines are comments.
Catalog parse_catalog(std::istream& in, const std::string& source_name = "<catalog>");
Catalog load_catalog(const std::filesystem::path& path);

struct CountsReport {
  size_t predicates = 0;
  size_t senses = 0;
  size_t arguments = 0;
};

CountsReport catalog_stats(const Catalog& catalog);

// Dense count table with named rows and ARG0..ARG6 columns.
struct CountMatrix {
  std::vector<std::string> rows;
  std::vector<std::array<size_t, kArgColumns>> cells;

  size_t row_total(size_t row) const;
  size_t column_total(size_t column) const;
  size_t total() const;
  // Count for a named row and column; 0 when the row is absent.
  size_t at(std::string_view row, size_t column) const;
};

// 16 rows in function-tag order.
CountMatrix ftag_by_arg(const Catalog& catalog);

struct VerbNetDistribution {
  CountMatrix matrix;          // rows sorted by descending total, then name
  size_t mapped_arguments = 0; // arguments with at least one VerbNet role
  size_t total_arguments = 0;

  double coverage() const {
    return total_arguments == 0
               ? 0.0
               : static_cast<double>(mapped_arguments) / total_arguments;
  }
};

VerbNetDistribution vnrole_by_arg(const Catalog& catalog);

}  // namespace wiser

#endif  // WISER_FRAMES_H_
