#include "wiser/roles.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <omp.h>

namespace wiser {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> words(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

bool contains_phrase(const std::vector<std::string>& haystack,
                     const std::vector<std::string>& phrase) {
  if (phrase.empty() || phrase.size() > haystack.size()) return false;
  return std::search(haystack.begin(), haystack.end(), phrase.begin(),
                     phrase.end()) != haystack.end();
}

std::string capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

// Splits the left-hand side of a rule into atoms at parenthesis depth 0.
std::vector<std::string> split_atoms(std::string_view lhs, int line) {
  std::vector<std::string> atoms;
  std::string current;
  int depth = 0;
  for (char c : lhs) {
    if (c == '(') ++depth;
    if (c == ')') {
      if (--depth < 0) throw RuleError(line, "unbalanced ')' in rule");
    }
    if (depth == 0 && (std::isspace(static_cast<unsigned char>(c)) || c == '&')) {
      if (!current.empty()) atoms.push_back(std::move(current));
      current.clear();
      continue;
    }
    current.push_back(c);
  }
  if (depth != 0) throw RuleError(line, "unbalanced '(' in rule");
  if (!current.empty()) atoms.push_back(std::move(current));
  return atoms;
}

std::vector<std::string> parse_alternatives(std::string_view body, int line) {
  // body is "(a|b|c)" or a bare name.
  std::string_view inner = body;
  if (!inner.empty() && inner.front() == '(') {
    if (inner.back() != ')') throw RuleError(line, "malformed pattern '" + std::string(body) + "'");
    inner = inner.substr(1, inner.size() - 2);
  }
  std::vector<std::string> alternatives;
  size_t start = 0;
  while (true) {
    size_t bar = inner.find('|', start);
    std::string alt = lower(trim(inner.substr(
        start, bar == std::string_view::npos ? std::string_view::npos : bar - start)));
    if (alt.empty() || alt.find_first_of("()") != std::string::npos) {
      throw RuleError(line, "malformed pattern '" + std::string(body) + "'");
    }
    alternatives.push_back(std::move(alt));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  return alternatives;
}

void parse_atom(const std::string& atom, MappingRule* rule, int line) {
  if (atom.size() < 2 || (atom[0] != '+' && atom[0] != '-')) {
    throw RuleError(line, "condition '" + atom + "' must start with '+' or '-'");
  }
  bool negated = atom[0] == '-';
  std::string_view body = std::string_view(atom).substr(1);

  if (body.starts_with("ARG")) {
    int n = -1;
    auto digits = body.substr(3);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || n < 0 ||
        n > kMaxArgNumber) {
      throw RuleError(line, "malformed argument condition '" + atom + "'");
    }
    if (rule->arg) throw RuleError(line, "more than one argument condition");
    rule->arg = ArgCondition{negated, n};
    return;
  }
  if (body.starts_with("desc(")) {
    rule->description.push_back({negated, parse_alternatives(body.substr(4), line)});
    return;
  }
  bool upper = std::all_of(body.begin(), body.end(), [](char c) {
    return std::isupper(static_cast<unsigned char>(c));
  });
  if (upper) {
    auto tag = parse_function_tag(body);
    if (!tag) throw RuleError(line, "unknown function tag '" + std::string(body) + "'");
    if (negated) throw RuleError(line, "function tag conditions cannot be negated");
    if (rule->function_tag) throw RuleError(line, "more than one function tag condition");
    rule->function_tag = *tag;
    return;
  }
  rule->verbnet.push_back({negated, parse_alternatives(body, line)});
}

MappingRule parse_rule_line(std::string_view line_text, int line, int position) {
  size_t arrow = line_text.find("->");
  if (arrow == std::string_view::npos) throw RuleError(line, "missing '->'");
  std::string_view lhs = line_text.substr(0, arrow);
  std::string target = lower(trim(line_text.substr(arrow + 2)));

  MappingRule rule;
  rule.row = position;
  std::string lhs_trimmed = trim(lhs);
  size_t colon = lhs_trimmed.find(':');
  if (colon != std::string::npos &&
      std::all_of(lhs_trimmed.begin(), lhs_trimmed.begin() + colon,
                  [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) &&
      colon > 0) {
    rule.row = std::stoi(lhs_trimmed.substr(0, colon));
    lhs_trimmed = lhs_trimmed.substr(colon + 1);
  }
  for (const auto& atom : split_atoms(lhs_trimmed, line)) parse_atom(atom, &rule, line);

  if (!is_rule_target(target)) {
    throw RuleError(line, "unknown target role '" + trim(line_text.substr(arrow + 2)) + "'");
  }
  rule.target = target;
  if (!rule.arg && !rule.function_tag && rule.verbnet.empty() && rule.description.empty()) {
    throw RuleError(line, "rule has no conditions");
  }
  return rule;
}

constexpr std::string_view kBuiltinRules = R"(# ARGx, function tag, VerbNet role and description conditions -> role.
# Row 14 (+LOC & -destination) is evaluated after rows 15 and 16; in
# plain top-down order it would shadow both description rows.
1: +ARG0 & +PAG -> Actor
2: +ARG0 & +CAU -> Actor
3: +ARG1 & +PPT -> Theme
4: +ARG1 & +PAG & +desc(entity|thing) -> Theme
5: +MNR & +instrument -> Instrument
6: +MNR & -instrument -> Manner
7: +GOL & +destination -> End
8: +GOL & +desc(end point|ending point|state|destination|attach|attached|target) -> End
9: +GOL & +(beneficiary|recipient|experiencer) -> Benefactive
10: +GOL & +desc(benefactive|beneficiary|recipient|listener|hearer|perceiver|to whom|pay|paid) -> Benefactive
11: +LOC & +destination -> End
12: +LOC & +initial_location -> Start
13: +LOC & +source -> Start
15: +LOC & +desc(end point|ending point|state|destination|attach|target|end) -> End
16: +LOC & +desc(start|source|from|starting) -> Start
14: +LOC & -destination -> Location
17: +DIR & +initial_location -> Start
18: +DIR & +source -> Start
19: +DIR & +desc(start|source|from|starting) -> Start
20: +COM & -recipient & -beneficiary -> Accompanier
21: +COM & +(recipient|beneficiary) -> Benefactive
22: +ARG1 & +VSP & +asset -> Theme
23: +VSP & +desc(price|money|rent|amount|gratuity) -> Asset
24: +PRP & +desc(purpose|for) -> Purpose
25: -ARG1 & +CAU & -recipient & +desc(why|reason|source|cause|crime|because) -> Cause
26: +VSP & +(material|source) -> Start
27: +VSP & +desc(start|material|source) -> Start
28: +VSP & +desc(aspect|domain) & -desc(specific) -> Domain
)";

}  // namespace

const std::vector<std::string>& rule_target_roles() {
  static const std::vector<std::string> roles = {
      "actor", "theme", "instrument", "manner", "end", "benefactive", "location",
      "start", "accompanier", "asset", "purpose", "cause", "domain",
  };
  return roles;
}

const std::vector<std::string>& wiser_role_inventory() {
  static const std::vector<std::string> roles = {
      "theme", "actor", "benefactive", "end", "start", "instrument", "attribute",
      "location", "cause", "purpose", "topic", "accompanier", "extent",
      "comparison", "asset", "domain", "mod", "manner", "direction", "path",
      "cause-of", "degree", "subevent", "quantity", "value", "time", "part-of",
      "duration", "theme-of", "range", "poss", "example", "consist-of",
      "concession", "frequency",
  };
  return roles;
}

bool is_rule_target(std::string_view role) {
  const auto& roles = rule_target_roles();
  return std::find(roles.begin(), roles.end(), lower(role)) != roles.end();
}

bool is_inventory_role(std::string_view role) {
  const auto& roles = wiser_role_inventory();
  return std::find(roles.begin(), roles.end(), lower(role)) != roles.end();
}

bool MappingRule::matches(const FrameArgument& a) const {
  if (arg && ((a.arg_number == arg->number) == arg->negated)) return false;
  if (function_tag && a.function_tag != *function_tag) return false;
  for (const auto& cond : verbnet) {
    bool any = std::any_of(cond.alternatives.begin(), cond.alternatives.end(),
                           [&](const std::string& r) { return a.has_verbnet_role(r); });
    if (any == cond.negated) return false;
  }
  if (!description.empty()) {
    auto desc = words(a.description);
    for (const auto& cond : description) {
      bool any = std::any_of(cond.alternatives.begin(), cond.alternatives.end(),
                             [&](const std::string& p) {
                               return contains_phrase(desc, words(p));
                             });
      if (any == cond.negated) return false;
    }
  }
  return true;
}

std::string MappingRule::to_string() const {
  std::ostringstream out;
  out << row << ":";
  auto alternation = [&](const AlternationCondition& c, bool desc) {
    out << " & " << (c.negated ? '-' : '+') << (desc ? "desc" : "");
    if (c.alternatives.size() == 1 && !desc) {
      out << c.alternatives[0];
      return;
    }
    out << '(';
    for (size_t i = 0; i < c.alternatives.size(); ++i) {
      out << (i ? "|" : "") << c.alternatives[i];
    }
    out << ')';
  };
  if (arg) out << " & " << (arg->negated ? '-' : '+') << "ARG" << arg->number;
  if (function_tag) out << " & +" << function_tag_name(*function_tag);
  for (const auto& c : verbnet) alternation(c, false);
  for (const auto& c : description) alternation(c, true);
  std::string text = out.str();
  // Drop the separator in front of the first condition.
  size_t first = text.find(" & ");
  if (first != std::string::npos) text.replace(first, 3, " ");
  return text + " -> " + capitalize(target);
}

RuleError::RuleError(int line, const std::string& message)
    : std::runtime_error("rule line " + std::to_string(line) + ": " + message),
      line_(line) {}

std::vector<MappingRule> compile_rules(std::string_view text) {
  std::vector<MappingRule> rules;
  std::set<int> rows;
  size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string line = trim(text.substr(pos, eol - pos));
    ++line_no;
    pos = eol + 1;
    if (line.empty() || line[0] == '#') continue;
    MappingRule rule = parse_rule_line(line, line_no, static_cast<int>(rules.size()) + 1);
    if (!rows.insert(rule.row).second) {
      throw RuleError(line_no, "duplicate rule row " + std::to_string(rule.row));
    }
    rules.push_back(std::move(rule));
  }
  return rules;
}

std::vector<MappingRule> load_rules(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw RuleError(0, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return compile_rules(buffer.str());
}

std::string_view builtin_rule_text() { return kBuiltinRules; }

const std::vector<MappingRule>& builtin_rules() {
  static const std::vector<MappingRule> rules = compile_rules(kBuiltinRules);
  return rules;
}

bool OverrideTable::set(const ArgumentKey& key, std::string role) {
  auto [it, inserted] = entries_.insert_or_assign(key, std::move(role));
  return inserted;
}

const std::string* OverrideTable::find(const ArgumentKey& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

void OverrideTable::merge(const OverrideTable& other) {
  for (const auto& [key, role] : other.entries_) entries_.insert_or_assign(key, role);
}

OverrideTable parse_overrides(std::istream& in, const std::string& source_name) {
  OverrideTable table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) fields.push_back(trim(field));
    if (fields.size() != 4) {
      throw CatalogError(source_name, line_no, "expected 4 tab-separated fields");
    }
    int n = -1;
    auto [ptr, ec] = std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(), n);
    if (ec != std::errc() || ptr != fields[2].data() + fields[2].size() || n < 0 ||
        n > kMaxArgNumber) {
      throw CatalogError(source_name, line_no, "argument number outside 0..6");
    }
    std::string role = lower(fields[3]);
    if (!role.empty() && role[0] == ':') role.erase(0, 1);
    if (!is_inventory_role(role)) {
      throw CatalogError(source_name, line_no, "unknown role '" + fields[3] + "'");
    }
    if (!table.set({SenseKey{fields[0], fields[1]}, n}, role)) {
      throw CatalogError(source_name, line_no,
                         "duplicate override for " + fields[0] + "-" + fields[1] +
                             " ARG" + fields[2]);
    }
  }
  return table;
}

OverrideTable load_overrides(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CatalogError(path.string(), 0, "cannot open override table");
  return parse_overrides(in, path.string());
}

const OverrideTable& builtin_overrides() {
  static const OverrideTable table = [] {
    OverrideTable t;
    for (const char* pred : {"have-rel-role", "have-org-role"}) {
      t.set({{pred, "91"}, 0}, "actor");
      t.set({{pred, "91"}, 1}, "theme");
      t.set({{pred, "91"}, 2}, "attribute");
    }
    t.set({{"have-degree", "91"}, 1}, "theme");
    t.set({{"have-degree", "91"}, 2}, "attribute");
    t.set({{"have-degree", "91"}, 3}, "degree");
    t.set({{"have-degree", "91"}, 4}, "comparison");
    t.set({{"have-degree", "91"}, 5}, "comparison");
    t.set({{"have-degree", "91"}, 6}, "comparison");
    return t;
  }();
  return table;
}

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kRule: return "rule";
    case Provenance::kOverride: return "override";
    case Provenance::kUnmapped: return "unmapped";
  }
  return "?";
}

MappingResult map_argument(const FrameArgument& arg,
                           const std::vector<MappingRule>& rules,
                           const OverrideTable& overrides) {
  for (const auto& rule : rules) {
    if (rule.matches(arg)) return {rule.target, Provenance::kRule, rule.row};
  }
  if (const std::string* role = overrides.find({arg.sense_key(), arg.arg_number})) {
    return {*role, Provenance::kOverride, 0};
  }
  return {};
}

void MappingTable::insert(const ArgumentKey& key, MappingResult result) {
  entries_.insert_or_assign(key, std::move(result));
}

const MappingResult* MappingTable::find(const SenseKey& sense, int arg_number) const {
  auto it = entries_.find({sense, arg_number});
  return it == entries_.end() ? nullptr : &it->second;
}

namespace {

CatalogMapping assemble(const Catalog& catalog, std::vector<MappingResult> results) {
  CatalogMapping out;
  const auto& args = catalog.arguments();
  for (size_t i = 0; i < args.size(); ++i) {
    ArgumentKey key{args[i].sense_key(), args[i].arg_number};
    switch (results[i].provenance) {
      case Provenance::kRule:
        ++out.coverage.rule_mapped;
        ++out.coverage.by_rule_row[results[i].rule_row];
        break;
      case Provenance::kOverride:
        ++out.coverage.override_mapped;
        break;
      case Provenance::kUnmapped:
        ++out.coverage.unmapped;
        out.coverage.unmapped_keys.push_back(key);
        break;
    }
    out.table.insert(key, std::move(results[i]));
  }
  return out;
}

}  // namespace

CatalogMapping map_catalog(const Catalog& catalog,
                           const std::vector<MappingRule>& rules,
                           const OverrideTable& overrides, int jobs) {
  const auto& args = catalog.arguments();
  std::vector<MappingResult> results(args.size());
  const long n = static_cast<long>(args.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(threads)
  for (long i = 0; i < n; ++i) {
    results[i] = map_argument(args[i], rules, overrides);
  }
  return assemble(catalog, std::move(results));
}

CatalogMapping map_catalog_serial(const Catalog& catalog,
                                  const std::vector<MappingRule>& rules,
                                  const OverrideTable& overrides) {
  std::vector<MappingResult> results;
  results.reserve(catalog.arguments().size());
  for (const auto& arg : catalog.arguments()) {
    results.push_back(map_argument(arg, rules, overrides));
  }
  return assemble(catalog, std::move(results));
}

std::string format_coverage(const Catalog& catalog, const CatalogMapping& mapping) {
  std::ostringstream out;
  for (const auto& arg : catalog.arguments()) {
    const MappingResult* r = mapping.table.find(arg.sense_key(), arg.arg_number);
    out << arg.sense_key().concept_name() << "\tARG" << arg.arg_number << '\t'
        << provenance_name(r->provenance);
    if (r->provenance == Provenance::kRule) out << ':' << r->rule_row;
    out << '\t' << (r->mapped() ? r->role : "-") << '\n';
  }
  const auto& c = mapping.coverage;
  out << "# total\t" << c.total() << '\n'
      << "# rule_mapped\t" << c.rule_mapped << '\n'
      << "# override_mapped\t" << c.override_mapped << '\n'
      << "# unmapped\t" << c.unmapped << '\n';
  for (const auto& key : c.unmapped_keys) {
    const FrameArgument* arg = catalog.find(key.first, key.second);
    out << "# triage\t" << key.first.concept_name() << "\tARG" << key.second << '\t'
        << function_tag_name(arg->function_tag) << '\t';
    for (size_t i = 0; i < arg->verbnet_roles.size(); ++i) {
      out << (i ? "," : "") << arg->verbnet_roles[i];
    }
    out << '\t' << arg->description << '\n';
  }
  return out.str();
}

std::string noncore_relabel(std::string_view role) {
  static const std::pair<std::string_view, std::string_view> kMap[] = {
      {":source", ":start"},
      {":destination", ":end"},
      {":beneficiary", ":benefactive"},
      {":medium", ":manner"},
  };
  for (const auto& [from, to] : kMap) {
    if (role == from) return std::string(to);
    if (role.size() == from.size() + 3 && role.starts_with(from) && role.ends_with("-of")) {
      return std::string(to) + "-of";
    }
  }
  return std::string(role);
}

}  // namespace wiser
