#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "nlfi/document.hpp"
#include "nlfi/report.hpp"
#include "support.hpp"

using namespace nlfi;
using namespace nlfi::test;

namespace {

std::string error_path(const std::string& text) {
  try {
    parse_document_text(text);
  } catch (const DocumentError& e) {
    return e.path();
  }
  return "<no error>";
}

const char* kBase = R"j({"schema_version": 1, "domain": [0, 1], "codomain": "scalar",
  "maps": [{"h": "x/2"}, {"h": "(x + 1)/2"}],
  "fields": [{"q": "x", "s": 0.5}, {"q": "1 - x", "s": 0.5}]})j";

}  // namespace

TEST_CASE("registry") {
  const auto& all = builtin_examples();
  REQUIRE(all.size() == 7);
  const char* names[] = {"ex2_1", "ex3_2", "ex3_4", "ex3_5", "ex5_1", "takagi", "zero"};
  for (std::size_t k = 0; k < 7; ++k) {
    CHECK(all[k].name == names[k]);
    CHECK_NOTHROW(builtin_doc(names[k]).instantiate());
  }
  CHECK_THROWS_AS(builtin_example("ex9_9"), std::out_of_range);
  CHECK(builtin_doc("ex3_5").eps_domain.has_value());
  CHECK(builtin_doc("ex3_4").grid == std::size_t{4096});
}

TEST_CASE("minimal document") {
  const auto d = parse_document_text(kBase);
  CHECK(d.schema_version == 1);
  CHECK(d.spec.maps.size() == 2);
  CHECK_FALSE(d.grid.has_value());
  CHECK(d.instantiate().size() == 2);
  CHECK_THROWS_AS(d.family(), DocumentError);
}

TEST_CASE("errors point at the offending field") {
  std::string t = kBase;
  CHECK(error_path(R"j({"schema_version": 2})j") == "$.schema_version");
  CHECK(error_path("{not json") == "$");
  auto with = [&](const std::string& from, const std::string& to) {
    std::string s = t;
    s.replace(s.find(from), from.size(), to);
    return s;
  };
  CHECK(error_path(with(R"j("h": "x/2")j", R"j("h": "x/")j")) == "$.maps[0].h");
  CHECK(error_path(with(R"j("h": "(x + 1)/2")j", R"j("h": "bogus(x)")j")) == "$.maps[1].h");
  CHECK(error_path(with(R"j("codomain": "scalar")j", R"j("codomain": "scalar", "colour": 1)j")) == "$.colour");
  CHECK(error_path(with(R"j("q": "1 - x", "s": 0.5)j", R"j("q": "1 - x", "s": 0.5, "r": 1)j")) == "$.fields[1].r");
  CHECK(error_path(with(R"j("s": 0.5}, {)j", R"j("s": [[1, 0], [0, 1]]}, {)j")) == "$.fields[0].s");
  CHECK(error_path(with(R"j("domain": [0, 1])j", R"j("domain": [0, 1], "grid": 1)j")) == "$.grid");
  CHECK(error_path(with(R"j("domain": [0, 1])j", R"j("domain": [0, 1], "tol": -1)j")) == "$.tol");
  CHECK(error_path(with(R"j("domain": [0, 1])j", R"j("domain": [0, 1], "eps": 0.7, "eps_domain": [-0.5, 0.5])j")) ==
        "$.eps");
  CHECK(error_path(with(R"j("domain": [0, 1])j", R"j("domain": [0, 1], "contraction_c": 0.5)j")) ==
        "$.contraction_c");
}

TEST_CASE("invalid problems fail on instantiation") {
  std::string s = kBase;
  s.replace(s.find("(x + 1)/2"), 9, "(x + 2)/3");
  const auto d = parse_document_text(s);
  CHECK_THROWS_AS(d.instantiate(), ValidationError);
}

TEST_CASE("matrix and vector codomains") {
  const auto m = parse_document_text(R"j({"schema_version": 1, "domain": [0, 1], "codomain": "matrix:2",
    "maps": [{"h": "x/2"}, {"h": "(x + 1)/2"}],
    "fields": [{"q": [["x", 0], [0, "x"]], "s": [[0.5, 0], [0, 0.5]]},
               {"q": [["1 - x", 0], [0, "1 - x"]], "s": 0.5}]})j");
  const auto pm = m.instantiate();
  CHECK(pm.s_is_matrix(0));
  CHECK_FALSE(pm.s_is_matrix(1));
  const auto v = parse_document_text(R"j({"schema_version": 1, "domain": [0, 1], "codomain": "vector:2",
    "maps": [{"h": "x/2"}, {"h": "(x + 1)/2"}],
    "fields": [{"q": ["x", "x^2"], "s": 0.5}, {"q": ["1 - x", "0"], "s": 0.25}]})j");
  CHECK(v.instantiate().codomain() == Codomain::vector(2));
}

TEST_CASE("general variant") {
  const auto d = parse_document_text(R"j({"schema_version": 1, "domain": [0, 1], "codomain": "scalar",
    "variant": "general", "maps": [{"h": "x/2"}, {"h": "(x + 1)/2"}],
    "v": ["x + 0.4*sin(y)", "1 - x + 0.4*sin(y)"], "contraction_c": 0.45})j");
  const auto pr = d.instantiate();
  CHECK(pr.variant() == Variant::general);
  CHECK(pr.sampled_contraction() <= 0.45);
  CHECK(pr.v_zero_bound() == doctest::Approx(1.0));
  CHECK(default_certificate(pr).constant == 0.45);

  std::string low = d.source.dump();
  low.replace(low.find("0.45"), 4, "0.2");
  CHECK_THROWS_AS(parse_document_text(low).instantiate(), ValidationError);
}

TEST_CASE("json numbers") {
  CHECK(json_number(1.5) == json(1.5));
  CHECK(json_number(std::nan("")).is_null());
  CHECK(json_number(1.0 / 0.0).is_null());
}
