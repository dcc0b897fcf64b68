#ifndef WISER_CONCEPT_H_
#define WISER_CONCEPT_H_

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace wiser {

// A predicate sense such as ("step-down", "04") for the concept step-down-04.
struct SenseKey {
  std::string predicate;
  std::string sense;

  std::string concept_name() const { return predicate + "-" + sense; }

  auto operator<=>(const SenseKey&) const = default;
  bool operator==(const SenseKey&) const = default;
};

// Splits a trailing sense suffix: a hyphen followed by exactly two or three
// digits at the end of the concept, with a non-empty lemma in front.
std::optional<SenseKey> split_sense(std::string_view concept_label);

bool has_sense_suffix(std::string_view concept_label);

// "tell-01" -> "tell"; concepts without a suffix are returned unchanged.
std::string strip_sense(std::string_view concept_label);

// True for a trailing "-<digits>" whose digit count is not 2 or 3
// (e.g. "tell-1"), which looks like a sense id but is not a valid one.
bool has_malformed_sense(std::string_view concept_label);

}  // namespace wiser

#endif  // WISER_CONCEPT_H_
