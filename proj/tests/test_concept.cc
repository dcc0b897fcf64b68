#include "doctest.h"
#include "wiser/concept.h"

using namespace wiser;

TEST_CASE("split_sense accepts two or three digit suffixes") {
  auto key = split_sense("step-down-04");
  REQUIRE(key);
  CHECK(key->predicate == "step-down");
  CHECK(key->sense == "04");
  CHECK(key->concept_name() == "step-down-04");
  CHECK(split_sense("have-rel-role-91")->sense == "91");
  CHECK(split_sense("run-102")->sense == "102");
}

TEST_CASE("split_sense rejects other shapes") {
  CHECK_FALSE(split_sense("boy"));
  CHECK_FALSE(split_sense("tell-1"));
  CHECK_FALSE(split_sense("tell-1234"));
  CHECK_FALSE(split_sense("-01"));
  CHECK_FALSE(split_sense("tell-0a"));
}

TEST_CASE("strip_sense") {
  CHECK(strip_sense("tell-01") == "tell");
  CHECK(strip_sense("boy") == "boy");
  CHECK(strip_sense("tell-1") == "tell-1");
  CHECK(strip_sense("strip_sense") == "strip_sense");
}

TEST_CASE("malformed senses") {
  CHECK(has_malformed_sense("tell-1"));
  CHECK(has_malformed_sense("tell-0001"));
  CHECK_FALSE(has_malformed_sense("tell-01"));
  CHECK_FALSE(has_malformed_sense("boy"));
  CHECK(has_sense_suffix("go-02"));
  CHECK_FALSE(has_sense_suffix("go"));
}
