#ifndef WISER_SMATCH_H_
#define WISER_SMATCH_H_

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "wiser/graph.h"

namespace wiser {

struct MatchCounts {
  size_t matched = 0;
  size_t pred_total = 0;
  size_t gold_total = 0;

  double precision() const;
  double recall() const;
  double f1() const;
  void add(const MatchCounts& other);
  bool operator==(const MatchCounts&) const = default;
};

struct SmatchOptions {
  int restarts = 5;  // total starts: one greedy start plus restarts-1 random
  uint64_t seed = 0;
  uint64_t stream = 0;  // distinguishes pairs sharing one seed (document index)
};

struct SmatchResult {
  MatchCounts counts;
  std::map<std::string, std::string> mapping;  // predicted variable -> gold variable
  int best_start = 0;
};

// SplitMix64 finalizer applied to seed + stream.
uint64_t pair_seed(uint64_t seed, uint64_t stream);

// Hill-climbing alignment between two triple lists. Variables are the sources
// of all triples and the targets of relation triples, in order of first
// appearance. Instance, top and attribute triples match on equal label and
// target string; relation triples on equal label with both ends aligned.
// Duplicate triples are matched as multisets.
SmatchResult smatch_triples(const std::vector<Triple>& pred,
                            const std::vector<Triple>& gold,
                            const SmatchOptions& options = {});
SmatchResult smatch(const SemGraph& pred, const SemGraph& gold,
                    const SmatchOptions& options = {});

class OracleBoundError : public std::runtime_error {
 public:
  OracleBoundError(size_t variables, size_t bound);
  size_t variables() const { return variables_; }
  size_t bound() const { return bound_; }

 private:
  size_t variables_;
  size_t bound_;
};

inline constexpr size_t kDefaultOracleBound = 8;

// Branch-and-bound search over all injective partial mappings. Throws
// OracleBoundError when the smaller side has more than `bound` variables.
MatchCounts smatch_exact_triples(const std::vector<Triple>& pred,
                                 const std::vector<Triple>& gold,
                                 size_t bound = kDefaultOracleBound);
MatchCounts smatch_exact(const SemGraph& pred, const SemGraph& gold,
                         size_t bound = kDefaultOracleBound);

// Matched triple count for a given predicted -> gold variable mapping.
size_t count_matches(const std::vector<Triple>& pred, const std::vector<Triple>& gold,
                     const std::map<std::string, std::string>& mapping);

}  // namespace wiser

#endif  // WISER_SMATCH_H_
