#include "wiser/graph.h"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace wiser {
namespace {

constexpr std::string_view kNoBaseFormRoles[] = {":consist-of"};

bool is_mode_marker(std::string_view token) {
  return token == "interrogative" || token == "imperative" ||
         token == "expressive";
}

bool is_numeric(std::string_view token) {
  if (token.empty()) return false;
  char c = token.front();
  if (!std::isdigit(static_cast<unsigned char>(c)) && c != '-' && c != '+' &&
      c != '.') {
    return false;
  }
  std::string copy(token);
  char* end = nullptr;
  std::strtod(copy.c_str(), &end);
  return end == copy.c_str() + copy.size();
}

bool is_constant_token(std::string_view token) {
  return token == "-" || token == "+" || is_numeric(token) ||
         is_mode_marker(token);
}

// ---------------------------------------------------------------------------
// Lexer

enum class TokenKind { kOpen, kClose, kSlash, kSymbol, kString, kEnd };

struct Token {
  TokenKind kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  Lexer(std::string_view text, int first_line)
      : text_(text), line_(first_line) {}

  // Consumes leading '#' lines. "# ::key value ::key2 value2" lines fill
  // `metadata`; other comment lines are skipped.
  void read_header(Metadata* metadata) {
    while (true) {
      skip_blank();
      if (pos_ >= text_.size() || text_[pos_] != '#') return;
      size_t eol = text_.find('\n', pos_);
      if (eol == std::string_view::npos) eol = text_.size();
      std::string_view line = text_.substr(pos_, eol - pos_);
      parse_metadata_line(line, metadata);
      pos_ = eol;
    }
  }

  Token next() {
    skip_blank();
    if (pos_ >= text_.size()) return {TokenKind::kEnd, "", line_, column_};
    int line = line_;
    int column = column_;
    char c = text_[pos_];
    if (c == '(') {
      advance();
      return {TokenKind::kOpen, "(", line, column};
    }
    if (c == ')') {
      advance();
      return {TokenKind::kClose, ")", line, column};
    }
    if (c == '/') {
      advance();
      return {TokenKind::kSlash, "/", line, column};
    }
    if (c == '"') {
      size_t start = pos_;
      advance();
      while (pos_ < text_.size() && text_[pos_] != '"') advance();
      if (pos_ >= text_.size()) {
        throw ParseError("unterminated string", line, column);
      }
      advance();
      return {TokenKind::kString, std::string(text_.substr(start, pos_ - start)),
              line, column};
    }
    size_t start = pos_;
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' ||
          d == '"' || d == '/') {
        break;
      }
      advance();
    }
    return {TokenKind::kSymbol, std::string(text_.substr(start, pos_ - start)),
            line, column};
  }

 private:
  static void parse_metadata_line(std::string_view line, Metadata* metadata) {
    size_t at = line.find("::");
    if (at == std::string_view::npos) return;
    if (line.substr(0, at).find_first_not_of("# \t") != std::string_view::npos) {
      return;
    }
    while (at != std::string_view::npos) {
      size_t next = line.find(" ::", at + 2);
      std::string_view field = line.substr(
          at + 2, next == std::string_view::npos ? std::string_view::npos
                                                 : next - at - 2);
      size_t space = field.find_first_of(" \t");
      std::string key(field.substr(0, space));
      std::string value;
      if (space != std::string_view::npos) {
        std::string_view rest = field.substr(space + 1);
        size_t end = rest.find_last_not_of(" \t\r");
        value = std::string(rest.substr(0, end == std::string_view::npos ? 0 : end + 1));
      }
      if (!key.empty()) metadata->emplace_back(std::move(key), std::move(value));
      at = next == std::string_view::npos ? next : next + 1;
    }
  }

  void skip_blank() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      advance();
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_;
  int column_ = 1;
};

// ---------------------------------------------------------------------------
// Parser

struct PendingTarget {
  std::string source;
  std::string role;
  Token token;
};

class Parser {
 public:
  Parser(std::string_view text, int first_line) : lexer_(text, first_line) {}

  SemGraph parse() {
    lexer_.read_header(&graph_.metadata);
    Token first = take();
    if (first.kind == TokenKind::kEnd) {
      throw ParseError("empty graph", first.line, first.column);
    }
    if (first.kind != TokenKind::kOpen) {
      throw ParseError("expected '(' at start of graph", first.line,
                       first.column);
    }
    graph_.root = parse_node(first);
    Token trailing = take();
    if (trailing.kind == TokenKind::kClose) {
      throw ParseError("unbalanced parentheses: unexpected ')'", trailing.line,
                       trailing.column);
    }
    if (trailing.kind != TokenKind::kEnd) {
      throw ParseError("unexpected content after graph: '" + trailing.text + "'",
                       trailing.line, trailing.column);
    }
    resolve_pending();
    try {
      validate(graph_);
    } catch (const ParseError&) {
      throw;
    } catch (const GraphError& e) {
      throw ParseError(e.what(), first.line, first.column);
    }
    return std::move(graph_);
  }

 private:
  Token take() {
    if (peeked_) {
      Token t = std::move(*peeked_);
      peeked_.reset();
      return t;
    }
    return lexer_.next();
  }

  const Token& peek() {
    if (!peeked_) peeked_ = lexer_.next();
    return *peeked_;
  }

  // `open` is the already consumed '(' token.
  std::string parse_node(const Token& open) {
    Token var = take();
    if (var.kind != TokenKind::kSymbol) {
      fail_unbalanced_or(var, open, "expected variable after '('");
    }
    Token slash = take();
    if (slash.kind != TokenKind::kSlash) {
      fail_unbalanced_or(slash, open, "expected '/' after variable '" + var.text + "'");
    }
    Token concept_token = take();
    if (concept_token.kind != TokenKind::kSymbol) {
      fail_unbalanced_or(concept_token, open, "expected concept after '/'");
    }
    define(var, concept_token.text);

    while (true) {
      Token t = take();
      if (t.kind == TokenKind::kClose) return var.text;
      if (t.kind == TokenKind::kEnd) {
        throw ParseError("unbalanced parentheses: '(' is never closed",
                         open.line, open.column);
      }
      if (t.kind != TokenKind::kSymbol || t.text.front() != ':') {
        throw ParseError("role must start with ':', got '" + t.text + "'",
                         t.line, t.column);
      }
      if (t.text.size() < 2) {
        throw ParseError("empty role label", t.line, t.column);
      }
      Token target = take();
      switch (target.kind) {
        case TokenKind::kOpen: {
          // Reserve the slot first so relations keep their written order.
          size_t slot = pending_.size();
          pending_.push_back({var.text, t.text, target});
          pending_[slot].token.text = parse_node(target);
          break;
        }
        case TokenKind::kSymbol:
          if (target.text.front() == ':') {
            throw ParseError("role '" + t.text + "' has no target", target.line,
                             target.column);
          }
          pending_.push_back({var.text, t.text, target});
          break;
        case TokenKind::kString:
          pending_.push_back({var.text, t.text, target});
          break;
        case TokenKind::kEnd:
          throw ParseError("unbalanced parentheses: '(' is never closed",
                           open.line, open.column);
        default:
          throw ParseError("role '" + t.text + "' has no target", target.line,
                           target.column);
      }
    }
  }

  [[noreturn]] void fail_unbalanced_or(const Token& got, const Token& open,
                                       const std::string& message) {
    if (got.kind == TokenKind::kEnd) {
      throw ParseError("unbalanced parentheses: '(' is never closed", open.line,
                       open.column);
    }
    throw ParseError(message, got.line, got.column);
  }

  void define(const Token& var, const std::string& concept_label) {
    auto [it, inserted] = concepts_.emplace(var.text, concept_label);
    if (inserted) {
      graph_.instances.push_back({var.text, concept_label});
      return;
    }
    if (it->second != concept_label) {
      throw ParseError("variable '" + var.text + "' redefined with concept '" +
                           concept_label + "' (was '" + it->second + "')",
                       var.line, var.column);
    }
  }

  void resolve_pending() {
    for (auto& p : pending_) {
      const Token& t = p.token;
      if (t.kind == TokenKind::kOpen ||
          (t.kind == TokenKind::kSymbol && concepts_.count(t.text))) {
        graph_.edges.push_back({p.source, p.role, t.text});
      } else if (t.kind == TokenKind::kString || is_constant_token(t.text)) {
        graph_.attributes.push_back({p.source, p.role, t.text});
      } else {
        throw ParseError("reference to undefined variable '" + t.text + "'",
                         t.line, t.column);
      }
    }
  }

  Lexer lexer_;
  std::optional<Token> peeked_;
  SemGraph graph_;
  std::unordered_map<std::string, std::string> concepts_;
  std::vector<PendingTarget> pending_;
};

std::string base_role(std::string_view role) {
  return std::string(role.substr(0, role.size() - 3));
}

}  // namespace

// ---------------------------------------------------------------------------

ParseError::ParseError(const std::string& message, int line, int column)
    : GraphError("line " + std::to_string(line) + ", column " +
                 std::to_string(column) + ": " + message),
      message_(message),
      line_(line),
      column_(column) {}

const std::string* SemGraph::concept_of(std::string_view variable) const {
  for (const auto& inst : instances) {
    if (inst.variable == variable) return &inst.concept_label;
  }
  return nullptr;
}

std::optional<std::string> SemGraph::metadata_value(std::string_view key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  return std::nullopt;
}

void SemGraph::set_metadata(const std::string& key, const std::string& value) {
  for (auto& [k, v] : metadata) {
    if (k == key) {
      v = value;
      return;
    }
  }
  metadata.emplace_back(key, value);
}

const char* triple_kind_name(TripleKind kind) {
  switch (kind) {
    case TripleKind::kInstance: return "instance";
    case TripleKind::kRelation: return "relation";
    case TripleKind::kAttribute: return "attribute";
    case TripleKind::kTop: return "top";
  }
  return "?";
}

SemGraph parse_graph(std::string_view text, int first_line) {
  return Parser(text, first_line).parse();
}

bool is_inverse_role(std::string_view role) {
  if (role.size() <= 4 || !role.ends_with("-of")) return false;
  for (auto keep : kNoBaseFormRoles) {
    if (role == keep) return false;
  }
  return true;
}

std::string invert_role(std::string_view role) {
  if (is_inverse_role(role)) return base_role(role);
  return std::string(role) + "-of";
}

void validate(const SemGraph& graph) {
  std::unordered_set<std::string> vars;
  for (const auto& inst : graph.instances) {
    if (inst.variable.empty()) throw GraphError("empty variable name");
    if (inst.concept_label.empty()) {
      throw GraphError("variable '" + inst.variable + "' has no concept");
    }
    if (!vars.insert(inst.variable).second) {
      throw GraphError("variable '" + inst.variable + "' has more than one instance");
    }
  }
  if (graph.root.empty() || !vars.count(graph.root)) {
    throw GraphError("root '" + graph.root + "' has no instance");
  }
  auto check_role = [](const std::string& role) {
    if (role.size() < 2 || role.front() != ':') {
      throw GraphError("role label '" + role + "' must start with ':'");
    }
  };
  for (const auto& e : graph.edges) {
    check_role(e.role);
    if (!vars.count(e.source) || !vars.count(e.target)) {
      throw GraphError("edge " + e.source + " " + e.role + " " + e.target +
                       " references an undefined variable");
    }
  }
  for (const auto& a : graph.attributes) {
    check_role(a.role);
    if (!vars.count(a.source)) {
      throw GraphError("attribute on undefined variable '" + a.source + "'");
    }
    if (a.value.empty()) throw GraphError("attribute " + a.role + " has no value");
  }

  SemGraph norm = normalize(graph);
  for (size_t i = 1; i < norm.edges.size(); ++i) {
    if (norm.edges[i] == norm.edges[i - 1]) {
      const auto& e = norm.edges[i];
      throw GraphError("duplicate triple (" + e.source + ", " + e.role + ", " +
                       e.target + ")");
    }
  }
  for (size_t i = 1; i < norm.attributes.size(); ++i) {
    if (norm.attributes[i] == norm.attributes[i - 1]) {
      const auto& a = norm.attributes[i];
      throw GraphError("duplicate triple (" + a.source + ", " + a.role + ", " +
                       a.value + ")");
    }
  }

  // Connectivity ignoring direction, and acyclicity over normalized edges.
  std::unordered_map<std::string, std::vector<std::string>> undirected, out;
  for (const auto& e : norm.edges) {
    undirected[e.source].push_back(e.target);
    undirected[e.target].push_back(e.source);
    out[e.source].push_back(e.target);
  }
  std::unordered_set<std::string> seen{graph.root};
  std::vector<std::string> stack{graph.root};
  while (!stack.empty()) {
    std::string v = std::move(stack.back());
    stack.pop_back();
    for (const auto& w : undirected[v]) {
      if (seen.insert(w).second) stack.push_back(w);
    }
  }
  if (seen.size() != vars.size()) {
    for (const auto& inst : graph.instances) {
      if (!seen.count(inst.variable)) {
        throw GraphError("variable '" + inst.variable +
                         "' is not connected to the root");
      }
    }
  }

  enum Color { kWhite, kGray, kBlack };
  std::unordered_map<std::string, Color> color;
  std::function<void(const std::string&)> visit = [&](const std::string& v) {
    color[v] = kGray;
    for (const auto& w : out[v]) {
      Color c = color[w];
      if (c == kGray) {
        throw GraphError("directed cycle through '" + w + "'");
      }
      if (c == kWhite) visit(w);
    }
    color[v] = kBlack;
  };
  for (const auto& inst : norm.instances) {
    if (color[inst.variable] == kWhite) visit(inst.variable);
  }
}

SemGraph normalize(const SemGraph& graph) {
  SemGraph out = graph;
  for (auto& e : out.edges) {
    if (is_inverse_role(e.role)) {
      std::swap(e.source, e.target);
      e.role = base_role(e.role);
    }
  }
  std::sort(out.instances.begin(), out.instances.end());
  std::sort(out.edges.begin(), out.edges.end());
  std::sort(out.attributes.begin(), out.attributes.end());
  return out;
}

std::vector<Triple> extract_triples(const SemGraph& graph) {
  SemGraph norm = normalize(graph);
  std::vector<Triple> triples;
  triples.reserve(norm.instances.size() + norm.edges.size() +
                  norm.attributes.size() + 1);
  for (const auto& i : norm.instances) {
    triples.push_back({TripleKind::kInstance, i.variable, "instance", i.concept_label});
  }
  for (const auto& e : norm.edges) {
    triples.push_back({TripleKind::kRelation, e.source, e.role, e.target});
  }
  for (const auto& a : norm.attributes) {
    triples.push_back({TripleKind::kAttribute, a.source, a.role, a.value});
  }
  const std::string* root_concept = norm.concept_of(norm.root);
  triples.push_back({TripleKind::kTop, norm.root, "top",
                     root_concept ? *root_concept : std::string()});
  return triples;
}

std::map<std::string, int> in_degrees(const SemGraph& graph) {
  std::map<std::string, int> degree;
  for (const auto& i : graph.instances) degree[i.variable] = 0;
  for (const auto& e : graph.edges) {
    const std::string& target = is_inverse_role(e.role) ? e.source : e.target;
    ++degree[target];
  }
  return degree;
}

int reentrancy_count(const SemGraph& graph) {
  int total = 0;
  for (const auto& [var, d] : in_degrees(graph)) total += std::max(0, d - 1);
  return total;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

class Writer {
 public:
  Writer(const SemGraph& g, int indent) : g_(g), indent_(indent) {
    for (size_t i = 0; i < g.edges.size(); ++i) {
      incident_[g.edges[i].source].push_back(i);
      if (g.edges[i].target != g.edges[i].source) {
        incident_[g.edges[i].target].push_back(i);
      }
    }
    for (size_t i = 0; i < g.attributes.size(); ++i) {
      attributes_[g.attributes[i].source].push_back(i);
    }
    rendered_.assign(g.edges.size(), false);
    // Variables reachable along edges as stored keep their written nesting;
    // only the rest are introduced through inverted edges.
    std::vector<std::string> stack = {g.root};
    forward_.insert(g.root);
    while (!stack.empty()) {
      std::string v = std::move(stack.back());
      stack.pop_back();
      for (size_t idx : incident_[v]) {
        const Edge& e = g.edges[idx];
        if (e.source == v && forward_.insert(e.target).second) stack.push_back(e.target);
      }
    }
  }

  std::string run() {
    visited_.insert(g_.root);
    render(g_.root, 0);
    return out_.str();
  }

 private:
  void role_prefix(int depth, const std::string& role) {
    if (indent_ > 0) {
      out_ << '\n' << std::string(static_cast<size_t>(depth + 1) * indent_, ' ');
    } else {
      out_ << ' ';
    }
    out_ << role << ' ';
  }

  void render_target(const std::string& var, int depth) {
    if (visited_.insert(var).second) {
      render(var, depth + 1);
    } else {
      out_ << var;
    }
  }

  void render(const std::string& var, int depth) {
    out_ << '(' << var << " / " << *g_.concept_of(var);
    for (size_t idx : incident_[var]) {
      if (rendered_[idx]) continue;
      const Edge& e = g_.edges[idx];
      if (e.source == var) {
        rendered_[idx] = true;
        role_prefix(depth, e.role);
        render_target(e.target, depth);
      } else if (!visited_.count(e.source) && !forward_.count(e.source)) {
        rendered_[idx] = true;
        role_prefix(depth, invert_role(e.role));
        render_target(e.source, depth);
      }
    }
    for (size_t idx : attributes_[var]) {
      role_prefix(depth, g_.attributes[idx].role);
      out_ << g_.attributes[idx].value;
    }
    out_ << ')';
  }

  const SemGraph& g_;
  int indent_;
  std::unordered_map<std::string, std::vector<size_t>> incident_;
  std::unordered_map<std::string, std::vector<size_t>> attributes_;
  std::vector<bool> rendered_;
  std::unordered_set<std::string> visited_;
  std::unordered_set<std::string> forward_;
  std::ostringstream out_;
};

}  // namespace

std::string serialize_graph(const SemGraph& graph, int indent) {
  validate(graph);
  return Writer(graph, indent).run();
}

}  // namespace wiser
