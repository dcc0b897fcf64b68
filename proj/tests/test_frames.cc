#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "support.h"
#include "wiser/frames.h"

using namespace wiser;

namespace {

Catalog from_text(const std::string& text) {
  std::istringstream in(text);
  return parse_catalog(in, "test");
}

struct RawRecord {
  std::string predicate, sense, tag, roles;
  int arg;
};

// Reads the fixture catalog field by field, without the library parser.
std::vector<RawRecord> raw_fixture() {
  std::ifstream in(wiser::testing::data_path("fixtures/catalog.tsv"));
  std::vector<RawRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, '\t')) f.push_back(cell);
    f.resize(6);
    out.push_back({f[0], f[1], f[3], f[4], std::stoi(f[2])});
  }
  return out;
}

}  // namespace

TEST_CASE("parse records") {
  Catalog c = from_text(
      "# comment\n"
      "give\t01\t0\tPAG\tagent\tgiver\n"
      "give\t01\t1\tPPT\ttheme\tthing given\n"
      "give\t01\t2\tGOL\tRecipient, beneficiary\tentity given to\n"
      "give\t02\tARG0\tPAG\t\tperson yielding\n");
  CHECK(c.arguments().size() == 4);
  CHECK(c.predicate_count() == 1);
  CHECK(c.sense_count() == 2);
  const FrameArgument* a = c.find({"give", "01"}, 2);
  REQUIRE(a);
  CHECK(a->function_tag == FunctionTag::kGOL);
  CHECK(a->verbnet_roles == std::vector<std::string>{"beneficiary", "recipient"});
  CHECK(a->has_verbnet_role("recipient"));
  CHECK(c.has_sense({"give", "02"}));
  CHECK_FALSE(c.has_sense({"give", "03"}));
  CHECK(c.find({"give", "02"}, 0)->verbnet_roles.empty());
}

TEST_CASE("malformed records report their line") {
  auto line_of = [](const std::string& text) {
    try {
      from_text(text);
    } catch (const CatalogError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("give\t01\t0\tPAG\tagent\n") == 1);
  CHECK(line_of("#\ngive\t1\t0\tPAG\tagent\tx\n") == 2);
  CHECK(line_of("give\t01\t7\tPAG\tagent\tx\n") == 1);
  CHECK(line_of("give\t01\t0\tXYZ\tagent\tx\n") == 1);
  CHECK(line_of("give\t01\t0\tPAG\t\tx\ngive\t01\t0\tPPT\t\ty\n") == 2);
  CHECK(line_of("\t01\t0\tPAG\t\tx\n") == 1);
}

TEST_CASE("function tag names round trip") {
  CHECK(all_function_tags().size() == kFunctionTagCount);
  for (FunctionTag t : all_function_tags()) CHECK(parse_function_tag(function_tag_name(t)) == t);
  CHECK_FALSE(parse_function_tag("XYZ"));
}

TEST_CASE("fixture catalog counts match a direct tally") {
  Catalog c = load_catalog(wiser::testing::data_path("fixtures/catalog.tsv"));
  auto raw = raw_fixture();
  std::set<std::string> predicates, senses;
  std::map<std::string, std::array<size_t, kArgColumns>> by_tag;
  size_t with_roles = 0;
  for (const auto& r : raw) {
    predicates.insert(r.predicate);
    senses.insert(r.predicate + "-" + r.sense);
    ++by_tag[r.tag][r.arg];
    with_roles += !r.roles.empty();
  }
  CountsReport s = catalog_stats(c);
  CHECK(s.predicates == predicates.size());
  CHECK(s.senses == senses.size());
  CHECK(s.arguments == raw.size());

  CountMatrix m = ftag_by_arg(c);
  CHECK(m.rows.size() == kFunctionTagCount);
  CHECK(m.total() == raw.size());
  for (const auto& [tag, cells] : by_tag) {
    for (size_t col = 0; col < kArgColumns; ++col) CHECK(m.at(tag, col) == cells[col]);
  }

  VerbNetDistribution v = vnrole_by_arg(c);
  CHECK(v.total_arguments == raw.size());
  CHECK(v.mapped_arguments == with_roles);
  for (size_t i = 1; i < v.matrix.rows.size(); ++i) {
    CHECK(v.matrix.row_total(i - 1) >= v.matrix.row_total(i));
  }
}

TEST_CASE("derived views ignore input order") {
  std::string a = "b\t01\t0\tPAG\tagent\tx\na\t01\t1\tPPT\ttheme\ty\n";
  std::string b = "a\t01\t1\tPPT\ttheme\ty\nb\t01\t0\tPAG\tagent\tx\n";
  Catalog ca = from_text(a), cb = from_text(b);
  CHECK(ca.arguments().front().predicate == cb.arguments().front().predicate);
  CHECK(ftag_by_arg(ca).cells == ftag_by_arg(cb).cells);
  CHECK(vnrole_by_arg(ca).matrix.rows == vnrole_by_arg(cb).matrix.rows);
}

TEST_CASE("empty catalog") {
  Catalog c;
  CHECK(catalog_stats(c).arguments == 0);
  CHECK(ftag_by_arg(c).total() == 0);
  CHECK(vnrole_by_arg(c).coverage() == 0.0);
  CHECK(ftag_by_arg(c).at("NOPE", 0) == 0);
}
