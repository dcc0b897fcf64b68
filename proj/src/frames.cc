#include "wiser/frames.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>

namespace wiser {
namespace {

constexpr std::array<std::string_view, kFunctionTagCount> kTagNames = {
    "PPT", "PAG", "GOL", "PRD", "MNR", "DIR", "VSP", "LOC",
    "EXT", "CAU", "COM", "PRP", "TMP", "ADJ", "ADV", "REC",
};

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::string trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c));
  });
}

}  // namespace

std::string_view function_tag_name(FunctionTag tag) {
  return kTagNames[static_cast<size_t>(tag)];
}

std::optional<FunctionTag> parse_function_tag(std::string_view name) {
  for (size_t i = 0; i < kTagNames.size(); ++i) {
    if (kTagNames[i] == name) return static_cast<FunctionTag>(i);
  }
  return std::nullopt;
}

const std::array<FunctionTag, kFunctionTagCount>& all_function_tags() {
  static const auto tags = [] {
    std::array<FunctionTag, kFunctionTagCount> t{};
    for (size_t i = 0; i < t.size(); ++i) t[i] = static_cast<FunctionTag>(i);
    return t;
  }();
  return tags;
}

bool FrameArgument::has_verbnet_role(std::string_view role) const {
  return std::binary_search(verbnet_roles.begin(), verbnet_roles.end(), role);
}

CatalogError::CatalogError(const std::string& source, int line,
                           const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + message),
      line_(line) {}

Catalog::Catalog(std::vector<FrameArgument> arguments)
    : arguments_(std::move(arguments)) {
  std::sort(arguments_.begin(), arguments_.end(),
            [](const FrameArgument& a, const FrameArgument& b) {
              return std::tie(a.predicate, a.sense, a.arg_number) <
                     std::tie(b.predicate, b.sense, b.arg_number);
            });
  for (size_t i = 0; i < arguments_.size(); ++i) {
    const auto& arg = arguments_[i];
    if (!index_.emplace(std::make_pair(arg.sense_key(), arg.arg_number), i).second) {
      throw CatalogError("<catalog>", 0,
                         "duplicate argument " + arg.predicate + "-" + arg.sense +
                             " ARG" + std::to_string(arg.arg_number));
    }
  }
}

bool Catalog::has_sense(const SenseKey& key) const {
  auto it = index_.lower_bound({key, -1});
  return it != index_.end() && it->first.first == key;
}

const FrameArgument* Catalog::find(const SenseKey& key, int arg_number) const {
  auto it = index_.find({key, arg_number});
  return it == index_.end() ? nullptr : &arguments_[it->second];
}

size_t Catalog::predicate_count() const {
  size_t n = 0;
  for (size_t i = 0; i < arguments_.size(); ++i) {
    if (i == 0 || arguments_[i].predicate != arguments_[i - 1].predicate) ++n;
  }
  return n;
}

size_t Catalog::sense_count() const {
  size_t n = 0;
  for (size_t i = 0; i < arguments_.size(); ++i) {
    if (i == 0 || arguments_[i].sense_key() != arguments_[i - 1].sense_key()) ++n;
  }
  return n;
}

Catalog parse_catalog(std::istream& in, const std::string& source_name) {
  std::vector<FrameArgument> arguments;
  std::map<std::pair<SenseKey, int>, int> first_seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view view = line;
    size_t first = view.find_first_not_of(" \t");
    if (first == std::string_view::npos || view[first] == '#') continue;

    auto fields = split_tabs(view);
    if (fields.size() != 6) {
      throw CatalogError(source_name, line_no,
                         "expected 6 tab-separated fields, got " +
                             std::to_string(fields.size()));
    }
    FrameArgument arg;
    arg.predicate = trim(fields[0]);
    arg.sense = trim(fields[1]);
    if (arg.predicate.empty()) {
      throw CatalogError(source_name, line_no, "empty predicate");
    }
    if (!all_digits(arg.sense) || arg.sense.size() < 2 || arg.sense.size() > 3) {
      throw CatalogError(source_name, line_no,
                         "sense id '" + arg.sense + "' must be 2 or 3 digits");
    }
    std::string number = trim(fields[2]);
    if (number.size() > 3 && (number.rfind("ARG", 0) == 0)) number = number.substr(3);
    int n = -1;
    auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), n);
    if (ec != std::errc() || ptr != number.data() + number.size() || n < 0 ||
        n > kMaxArgNumber) {
      throw CatalogError(source_name, line_no,
                         "argument number '" + trim(fields[2]) + "' outside 0..6");
    }
    arg.arg_number = n;
    std::string tag = trim(fields[3]);
    auto parsed = parse_function_tag(tag);
    if (!parsed) {
      throw CatalogError(source_name, line_no, "unknown function tag '" + tag + "'");
    }
    arg.function_tag = *parsed;

    std::set<std::string> roles;
    std::string_view role_field = fields[4];
    size_t start = 0;
    while (start <= role_field.size()) {
      size_t comma = role_field.find(',', start);
      std::string role = lower(trim(role_field.substr(
          start, comma == std::string_view::npos ? std::string_view::npos
                                                 : comma - start)));
      if (!role.empty()) roles.insert(role);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    arg.verbnet_roles.assign(roles.begin(), roles.end());
    arg.description = trim(fields[5]);

    auto key = std::make_pair(arg.sense_key(), arg.arg_number);
    if (auto [it, inserted] = first_seen.emplace(key, line_no); !inserted) {
      throw CatalogError(source_name, line_no,
                         "duplicate argument " + arg.predicate + "-" + arg.sense +
                             " ARG" + std::to_string(n) + " (first on line " +
                             std::to_string(it->second) + ")");
    }
    arguments.push_back(std::move(arg));
  }
  return Catalog(std::move(arguments));
}

Catalog load_catalog(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CatalogError(path.string(), 0, "cannot open catalog");
  return parse_catalog(in, path.string());
}

CountsReport catalog_stats(const Catalog& catalog) {
  return {catalog.predicate_count(), catalog.sense_count(),
          catalog.arguments().size()};
}

size_t CountMatrix::row_total(size_t row) const {
  size_t sum = 0;
  for (size_t c : cells[row]) sum += c;
  return sum;
}

size_t CountMatrix::column_total(size_t column) const {
  size_t sum = 0;
  for (const auto& row : cells) sum += row[column];
  return sum;
}

size_t CountMatrix::total() const {
  size_t sum = 0;
  for (size_t r = 0; r < cells.size(); ++r) sum += row_total(r);
  return sum;
}

size_t CountMatrix::at(std::string_view row, size_t column) const {
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] == row) return cells[r][column];
  }
  return 0;
}

CountMatrix ftag_by_arg(const Catalog& catalog) {
  CountMatrix m;
  for (FunctionTag tag : all_function_tags()) {
    m.rows.emplace_back(function_tag_name(tag));
  }
  m.cells.assign(kFunctionTagCount, {});
  for (const auto& arg : catalog.arguments()) {
    ++m.cells[static_cast<size_t>(arg.function_tag)][arg.arg_number];
  }
  return m;
}

VerbNetDistribution vnrole_by_arg(const Catalog& catalog) {
  std::map<std::string, std::array<size_t, kArgColumns>> counts;
  VerbNetDistribution dist;
  dist.total_arguments = catalog.arguments().size();
  for (const auto& arg : catalog.arguments()) {
    if (!arg.verbnet_roles.empty()) ++dist.mapped_arguments;
    for (const auto& role : arg.verbnet_roles) ++counts[role][arg.arg_number];
  }
  std::vector<std::pair<std::string, std::array<size_t, kArgColumns>>> rows(
      counts.begin(), counts.end());
  auto total = [](const std::array<size_t, kArgColumns>& r) {
    size_t s = 0;
    for (size_t c : r) s += c;
    return s;
  };
  std::stable_sort(rows.begin(), rows.end(), [&](const auto& a, const auto& b) {
    return total(a.second) > total(b.second);
  });
  for (auto& [name, cells] : rows) {
    dist.matrix.rows.push_back(name);
    dist.matrix.cells.push_back(cells);
  }
  return dist;
}

}  // namespace wiser
