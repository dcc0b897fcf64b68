#include "wiser/concept.h"

#include <cctype>

namespace wiser {
namespace {

// Number of trailing digits after the last hyphen, or -1 when the label does
// not end in "-<digits>" with something in front of the hyphen.
int trailing_digit_run(std::string_view label) {
  size_t pos = label.size();
  while (pos > 0 && std::isdigit(static_cast<unsigned char>(label[pos - 1]))) {
    --pos;
  }
  int digits = static_cast<int>(label.size() - pos);
  if (digits == 0 || pos < 2 || label[pos - 1] != '-') return -1;
  return digits;
}

}  // namespace

std::optional<SenseKey> split_sense(std::string_view concept_label) {
  int digits = trailing_digit_run(concept_label);
  if (digits != 2 && digits != 3) return std::nullopt;
  size_t hyphen = concept_label.size() - digits - 1;
  return SenseKey{std::string(concept_label.substr(0, hyphen)),
                  std::string(concept_label.substr(hyphen + 1))};
}

bool has_sense_suffix(std::string_view concept_label) {
  return split_sense(concept_label).has_value();
}

std::string strip_sense(std::string_view concept_label) {
  if (auto key = split_sense(concept_label)) return key->predicate;
  return std::string(concept_label);
}

bool has_malformed_sense(std::string_view concept_label) {
  int digits = trailing_digit_run(concept_label);
  return digits > 0 && digits != 2 && digits != 3;
}

}  // namespace wiser
