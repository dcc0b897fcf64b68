#include "wiser/smatch.h"

#include <algorithm>
#include <random>
#include <tuple>
#include <unordered_map>

namespace wiser {

double MatchCounts::precision() const {
  return pred_total == 0 ? 0.0 : static_cast<double>(matched) / pred_total;
}

double MatchCounts::recall() const {
  return gold_total == 0 ? 0.0 : static_cast<double>(matched) / gold_total;
}

double MatchCounts::f1() const {
  double p = precision(), r = recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

void MatchCounts::add(const MatchCounts& o) {
  matched += o.matched;
  pred_total += o.pred_total;
  gold_total += o.gold_total;
}

uint64_t pair_seed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + stream + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

OracleBoundError::OracleBoundError(size_t variables, size_t bound)
    : std::runtime_error("exact search refused: smaller graph has " +
                         std::to_string(variables) + " variables, bound is " +
                         std::to_string(bound)),
      variables_(variables),
      bound_(bound) {}

namespace {

struct Side {
  std::vector<std::string> variables;
  std::unordered_map<std::string, int> index;

  int intern(const std::string& v) {
    auto [it, inserted] = index.emplace(v, static_cast<int>(variables.size()));
    if (inserted) variables.push_back(v);
    return it->second;
  }
};

Side collect_variables(const std::vector<Triple>& triples) {
  Side side;
  for (const auto& t : triples) {
    side.intern(t.source);
    if (t.kind == TripleKind::kRelation) side.intern(t.target);
  }
  return side;
}

// Scoring model shared by the hill climber and the exact search:
// score(mapping) = sum of unary weights + sum over relation groups of
// min(count in pred, count of the mapped key in gold).
class Problem {
 public:
  Problem(const std::vector<Triple>& pred, const std::vector<Triple>& gold)
      : a_(collect_variables(pred)), b_(collect_variables(gold)) {
    n_ = a_.variables.size();
    m_ = b_.variables.size();
    build_unary(pred, gold);
    build_relations(pred, gold);
  }

  size_t n() const { return n_; }
  size_t m() const { return m_; }
  const Side& a() const { return a_; }
  const Side& b() const { return b_; }
  int unary(size_t i, int j) const { return j < 0 ? 0 : unary_[i * m_ + j]; }

  int group_score(size_t g, const std::vector<int>& map) const {
    const Group& grp = groups_[g];
    int j1 = map[grp.s], j2 = map[grp.t];
    if (j1 < 0 || j2 < 0) return 0;
    auto it = gold_rel_.find(key(j1, j2, grp.label));
    return it == gold_rel_.end() ? 0 : std::min(grp.count, it->second);
  }

  int score(const std::vector<int>& map) const {
    int total = 0;
    for (size_t i = 0; i < n_; ++i) total += unary(i, map[i]);
    for (size_t g = 0; g < groups_.size(); ++g) total += group_score(g, map);
    return total;
  }

  // Score change when the variables in `changed` take the values in `map`
  // instead of their previous values `old_values`.
  int delta(std::vector<int>& map, const int* changed, const int* new_values,
            size_t k) const {
    int d = 0;
    int old_values[2];
    for (size_t c = 0; c < k; ++c) old_values[c] = map[changed[c]];
    auto affected = [&](auto&& fn) {
      for (size_t c = 0; c < k; ++c) {
        for (int g : incident_[changed[c]]) {
          const Group& grp = groups_[g];
          int other = grp.s == changed[c] ? grp.t : grp.s;
          bool seen = false;
          for (size_t e = 0; e < c; ++e) seen |= other == changed[e];
          if (!seen) fn(g);
        }
      }
    };
    for (size_t c = 0; c < k; ++c) d -= unary(changed[c], old_values[c]);
    affected([&](int g) { d -= group_score(g, map); });
    for (size_t c = 0; c < k; ++c) map[changed[c]] = new_values[c];
    for (size_t c = 0; c < k; ++c) d += unary(changed[c], new_values[c]);
    affected([&](int g) { d += group_score(g, map); });
    for (size_t c = 0; c < k; ++c) map[changed[c]] = old_values[c];
    return d;
  }

  struct Group {
    int s, t, label, count;
  };
  const std::vector<Group>& groups() const { return groups_; }

  int max_unary(size_t i) const {
    int best = 0;
    for (size_t j = 0; j < m_; ++j) best = std::max(best, unary_[i * m_ + j]);
    return best;
  }

  // Concept of each variable from its instance triple (empty when absent).
  std::vector<std::string> concepts_a, concepts_b;
  // Gold relations as (source, target, label) in input order.
  std::vector<std::tuple<int, int, int>> gold_edges;

 private:
  uint64_t key(int j1, int j2, int label) const {
    return (static_cast<uint64_t>(j1) * m_ + static_cast<uint64_t>(j2)) * labels_.size() +
           static_cast<uint64_t>(label);
  }

  void build_unary(const std::vector<Triple>& pred, const std::vector<Triple>& gold) {
    using Key = std::tuple<TripleKind, std::string, std::string>;
    std::map<Key, int> ids;
    auto tally = [&](const std::vector<Triple>& triples, const Side& side,
                     std::vector<std::map<int, int>>* bags, std::vector<std::string>* concepts) {
      bags->assign(side.variables.size(), {});
      concepts->assign(side.variables.size(), {});
      for (const auto& t : triples) {
        if (t.kind == TripleKind::kRelation) continue;
        int v = side.index.at(t.source);
        auto [it, inserted] = ids.emplace(Key{t.kind, t.label, t.target},
                                          static_cast<int>(ids.size()));
        ++(*bags)[v][it->second];
        if (t.kind == TripleKind::kInstance) (*concepts)[v] = t.target;
      }
    };
    std::vector<std::map<int, int>> bag_a, bag_b;
    tally(pred, a_, &bag_a, &concepts_a);
    tally(gold, b_, &bag_b, &concepts_b);
    unary_.assign(n_ * m_, 0);
    for (size_t i = 0; i < n_; ++i) {
      if (bag_a[i].empty()) continue;
      for (size_t j = 0; j < m_; ++j) {
        int w = 0;
        for (const auto& [k, c] : bag_a[i]) {
          auto it = bag_b[j].find(k);
          if (it != bag_b[j].end()) w += std::min(c, it->second);
        }
        unary_[i * m_ + j] = w;
      }
    }
  }

  void build_relations(const std::vector<Triple>& pred, const std::vector<Triple>& gold) {
    for (const auto& t : gold) {
      if (t.kind == TripleKind::kRelation) labels_.emplace(t.label, static_cast<int>(labels_.size()));
    }
    for (const auto& t : gold) {
      if (t.kind != TripleKind::kRelation) continue;
      int j1 = b_.index.at(t.source), j2 = b_.index.at(t.target), label = labels_.at(t.label);
      if (gold_rel_[key(j1, j2, label)]++ == 0) gold_edges.emplace_back(j1, j2, label);
    }
    std::map<std::tuple<int, int, int>, int> grouped;
    std::vector<std::tuple<int, int, int>> order;
    for (const auto& t : pred) {
      if (t.kind != TripleKind::kRelation) continue;
      auto label = labels_.find(t.label);
      if (label == labels_.end()) continue;  // cannot match anything
      std::tuple<int, int, int> k{a_.index.at(t.source), a_.index.at(t.target), label->second};
      if (grouped[k]++ == 0) order.push_back(k);
    }
    incident_.assign(n_, {});
    for (const auto& k : order) {
      auto [s, t, label] = k;
      int g = static_cast<int>(groups_.size());
      groups_.push_back({s, t, label, grouped[k]});
      incident_[s].push_back(g);
      if (t != s) incident_[t].push_back(g);
    }
  }

  Side a_, b_;
  size_t n_ = 0, m_ = 0;
  std::vector<int> unary_;
  std::unordered_map<std::string, int> labels_;
  std::unordered_map<uint64_t, int> gold_rel_;
  std::vector<Group> groups_;
  std::vector<std::vector<int>> incident_;
};

void climb(const Problem& p, std::vector<int>& map) {
  const size_t n = p.n(), m = p.m();
  std::vector<char> used(m, 0);
  for (int j : map) {
    if (j >= 0) used[j] = 1;
  }
  while (true) {
    int best_gain = 0;
    int best_kind = -1, best_i = 0, best_x = 0;
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < m; ++j) {
        if (used[j]) continue;
        int changed[1] = {static_cast<int>(i)};
        int values[1] = {static_cast<int>(j)};
        int gain = p.delta(map, changed, values, 1);
        if (gain > best_gain) {
          best_gain = gain;
          best_kind = 0, best_i = static_cast<int>(i), best_x = static_cast<int>(j);
        }
      }
    }
    for (size_t i = 0; i < n; ++i) {
      for (size_t k = i + 1; k < n; ++k) {
        if (map[i] == map[k]) continue;  // both unmapped
        int changed[2] = {static_cast<int>(i), static_cast<int>(k)};
        int values[2] = {map[k], map[i]};
        int gain = p.delta(map, changed, values, 2);
        if (gain > best_gain) {
          best_gain = gain;
          best_kind = 1, best_i = static_cast<int>(i), best_x = static_cast<int>(k);
        }
      }
    }
    if (best_gain <= 0) return;
    if (best_kind == 0) {
      if (map[best_i] >= 0) used[map[best_i]] = 0;
      map[best_i] = best_x;
      used[best_x] = 1;
    } else {
      std::swap(map[best_i], map[best_x]);
    }
  }
}

std::vector<int> greedy_start(const Problem& p) {
  std::vector<int> map(p.n(), -1);
  std::vector<char> used(p.m(), 0);
  for (size_t i = 0; i < p.n(); ++i) {
    if (p.concepts_a[i].empty()) continue;
    for (size_t j = 0; j < p.m(); ++j) {
      if (!used[j] && p.concepts_b[j] == p.concepts_a[i]) {
        map[i] = static_cast<int>(j);
        used[j] = 1;
        break;
      }
    }
  }
  // Views without instance triples leave variables unplaced; seed those from
  // relations with equal labels whose ends are still free or already agree.
  auto fits = [&](int i, int j) { return map[i] == j || (map[i] < 0 && !used[j]); };
  for (const auto& grp : p.groups()) {
    if (map[grp.s] >= 0 && map[grp.t] >= 0) continue;
    for (const auto& [j1, j2, label] : p.gold_edges) {
      if (label != grp.label || (grp.s == grp.t) != (j1 == j2)) continue;
      if (!fits(grp.s, j1) || !fits(grp.t, j2)) continue;
      map[grp.s] = j1;
      map[grp.t] = j2;
      used[j1] = used[j2] = 1;
      break;
    }
  }
  return map;
}

std::vector<int> random_start(const Problem& p, std::mt19937_64& rng) {
  std::vector<int> slots(std::max(p.n(), p.m()), -1);
  for (size_t j = 0; j < p.m(); ++j) slots[j] = static_cast<int>(j);
  for (size_t i = slots.size(); i > 1; --i) {
    size_t r = static_cast<size_t>(rng() % i);
    std::swap(slots[i - 1], slots[r]);
  }
  slots.resize(p.n());
  return slots;
}

MatchCounts totals(const std::vector<Triple>& pred, const std::vector<Triple>& gold) {
  return {0, pred.size(), gold.size()};
}

}  // namespace

SmatchResult smatch_triples(const std::vector<Triple>& pred, const std::vector<Triple>& gold,
                            const SmatchOptions& options) {
  Problem p(pred, gold);
  SmatchResult result;
  result.counts = totals(pred, gold);
  if (p.n() == 0 || p.m() == 0) return result;

  std::mt19937_64 rng(pair_seed(options.seed, options.stream));
  int best_score = -1;
  std::vector<int> best_map;
  const int starts = std::max(1, options.restarts);
  for (int s = 0; s < starts; ++s) {
    std::vector<int> map = s == 0 ? greedy_start(p) : random_start(p, rng);
    climb(p, map);
    int score = p.score(map);
    if (score > best_score) {
      best_score = score;
      best_map = std::move(map);
      result.best_start = s;
    }
  }
  result.counts.matched = static_cast<size_t>(best_score);
  for (size_t i = 0; i < p.n(); ++i) {
    if (best_map[i] >= 0) result.mapping[p.a().variables[i]] = p.b().variables[best_map[i]];
  }
  return result;
}

SmatchResult smatch(const SemGraph& pred, const SemGraph& gold, const SmatchOptions& options) {
  return smatch_triples(extract_triples(pred), extract_triples(gold), options);
}

namespace {

class ExactSearch {
 public:
  explicit ExactSearch(const Problem& p) : p_(p), map_(p.n(), -1), used_(p.m(), 0) {
    const size_t n = p.n();
    // Groups become fully assigned once their later endpoint is placed.
    closing_.assign(n, {});
    remaining_rel_.assign(n + 1, 0);
    for (size_t g = 0; g < p.groups().size(); ++g) {
      const auto& grp = p.groups()[g];
      size_t last = static_cast<size_t>(std::max(grp.s, grp.t));
      closing_[last].push_back(static_cast<int>(g));
      for (size_t k = 0; k <= last; ++k) remaining_rel_[k] += grp.count;
    }
    remaining_unary_.assign(n + 1, 0);
    for (size_t i = n; i-- > 0;) remaining_unary_[i] = remaining_unary_[i + 1] + p.max_unary(i);
  }

  int run() {
    dfs(0, 0);
    return best_;
  }

 private:
  void dfs(size_t i, int current) {
    if (current > best_) best_ = current;
    if (i == p_.n()) return;
    if (current + remaining_unary_[i] + remaining_rel_[i] <= best_) return;
    auto place = [&](int j) {
      map_[i] = j;
      int gain = p_.unary(i, j);
      for (int g : closing_[i]) gain += p_.group_score(g, map_);
      dfs(i + 1, current + gain);
      map_[i] = -1;
    };
    for (size_t j = 0; j < p_.m(); ++j) {
      if (used_[j]) continue;
      used_[j] = 1;
      place(static_cast<int>(j));
      used_[j] = 0;
    }
    place(-1);
  }

  const Problem& p_;
  std::vector<int> map_;
  std::vector<char> used_;
  std::vector<std::vector<int>> closing_;
  std::vector<int> remaining_rel_;
  std::vector<int> remaining_unary_;
  int best_ = 0;
};

}  // namespace

MatchCounts smatch_exact_triples(const std::vector<Triple>& pred,
                                 const std::vector<Triple>& gold, size_t bound) {
  MatchCounts counts = totals(pred, gold);
  // The matched count is symmetric, so search over the smaller side.
  bool swap = collect_variables(pred).variables.size() >
              collect_variables(gold).variables.size();
  Problem p = swap ? Problem(gold, pred) : Problem(pred, gold);
  if (p.n() > bound) throw OracleBoundError(p.n(), bound);
  if (p.n() == 0 || p.m() == 0) return counts;
  counts.matched = static_cast<size_t>(ExactSearch(p).run());
  return counts;
}

MatchCounts smatch_exact(const SemGraph& pred, const SemGraph& gold, size_t bound) {
  return smatch_exact_triples(extract_triples(pred), extract_triples(gold), bound);
}

size_t count_matches(const std::vector<Triple>& pred, const std::vector<Triple>& gold,
                     const std::map<std::string, std::string>& mapping) {
  Problem p(pred, gold);
  std::vector<int> map(p.n(), -1);
  for (size_t i = 0; i < p.n(); ++i) {
    auto it = mapping.find(p.a().variables[i]);
    if (it == mapping.end()) continue;
    auto j = p.b().index.find(it->second);
    if (j != p.b().index.end()) map[i] = j->second;
  }
  return static_cast<size_t>(p.score(map));
}

}  // namespace wiser
