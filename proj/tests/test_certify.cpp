#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "nlfi/certify.hpp"
#include "sigma_oracle.hpp"
#include "support.hpp"

using namespace nlfi;
using namespace nlfi::test;
using doctest::Approx;

namespace {

FractalProblem matrix_problem(const std::string& s1) {
  return problem_from(R"({"schema_version": 1, "domain": [0, 1], "codomain": "matrix:2",
    "maps": [{"h": "x/2", "h_inv": "2*x"}, {"h": "(x + 1)/2", "h_inv": "2*x - 1"}],
    "fields": [{"q": [["x", 0], [0, "x"]], "s": )" + s1 + R"(},
               {"q": [["1 - x", 0], [0, "1 - x"]], "s": [[0.5, 0], [0, 0.5]]}]})");
}

}  // namespace

TEST_CASE("sup certificate") {
  const auto c = certify_sup(builtin_problem("ex3_2"));
  CHECK(std::abs(c.constant - 2.0 / 3.0) <= 1e-9);
  CHECK(c.contractive());
  REQUIRE_FALSE(c.witnesses.empty());
  const auto top = std::max_element(c.witnesses.begin(), c.witnesses.end(),
                                    [](const Witness& a, const Witness& b) { return a.value < b.value; });
  CHECK(top->piece == 1);
  CHECK(top->x == Approx(0.0));
  CHECK(c.refinement.size() == 3);
  CHECK(c.refinement.back().first == 16385);

  const auto zero = certify_sup(problem_from(takagi_like("x", "0", "1 - x", "0")));
  CHECK(zero.constant == 0.0);
  CHECK(zero.contractive());

  const auto big = certify_sup(problem_from(takagi_like("x", "1.5", "1 - x", "0.5")));
  CHECK(big.constant == Approx(1.5));
  CHECK_FALSE(big.contractive());
}

TEST_CASE("Banach-algebra certificate") {
  CHECK(std::abs(certify_banach_algebra(matrix_problem("[[0.5, 0], [0, 0.5]]")).constant - 0.5) <= 1e-9);
  CHECK(certify_banach_algebra(matrix_problem("[[0, 0.9], [0, 0]]")).constant == Approx(0.9).epsilon(1e-8));
  const auto c = certify_banach_algebra(matrix_problem("[[0.8, 0.3], [0.3, 0.8]]"));
  CHECK(c.constant == Approx(1.1).epsilon(1e-8));
  CHECK_FALSE(c.contractive());
  CHECK_THROWS_AS(certify_banach_algebra(builtin_problem("takagi")), CertificationError);
  CHECK(default_certificate(matrix_problem("[[0.5, 0], [0, 0.5]]")).space == Space::banach_algebra);
}

TEST_CASE("L^p certificate") {
  const auto t = certify_lp(builtin_problem("takagi"), 1.0);
  CHECK(std::abs(t.constant - 0.5) <= 1e-9);
  CHECK(t.contractive());
  const double expected = 1.0 / 3.0 + std::sqrt(2.0) * std::numbers::pi / 16.0;
  CHECK(std::abs(certify_lp(builtin_problem("ex3_4"), 1.0).constant - expected) <= 1e-6);
  for (double p : {1.0, 2.0, 7.0, std::numeric_limits<double>::infinity()}) {
    CHECK(certify_lp(problem_from(takagi_like("x", "0", "1 - x", "0")), p).constant == 0.0);
  }
  // p = infinity has no measure factor
  CHECK(certify_lp(builtin_problem("takagi"), std::numeric_limits<double>::infinity()).constant ==
        Approx(0.5).epsilon(1e-8));
  CHECK_THROWS_AS(certify_lp(builtin_problem("takagi"), 0.5), CertificationError);
}

TEST_CASE("sigma tables") {
  const auto s1 = sigma_table(1);
  CHECK(s1.entries.size() == 1);
  CHECK(s1.at({1}) == 1);
  const auto s2 = sigma_table(2);
  CHECK(s2.entries.size() == 2);
  CHECK(s2.at({1, 1}) == 1);
  CHECK(s2.at({2}) == 1);
  const auto s3 = sigma_table(3);
  CHECK(s3.at({1, 1, 1}) == 1);
  CHECK(s3.at({1, 2}) + s3.at({2, 1}) == 3);
  CHECK(s3.at({3}) == 1);
  for (int q = 1; q <= 4; ++q) CHECK(sigma_matches_printed_recursion(sigma_table(q)));
  // g = identity: D^q (f o g) = f^(q)
  for (int q = 1; q <= 4; ++q) {
    std::vector<double> f(q + 1, 0.0), g(q + 1, 0.0);
    f[q] = 1.0;
    g[1] = 1.0;
    CHECK(sigma_table(q).expand(f, g) == 1.0);
  }
}

TEST_CASE("sigma oracle on random polynomials") {
  const auto r = sigma_oracle(4, 20, 10, 2024);
  CHECK(r.comparisons == 800);
  CHECK(r.max_rel_error <= 1e-10);
}

TEST_CASE("C^alpha certificate") {
  const auto c = certify_calpha(builtin_problem("ex5_1"), 1);
  CHECK(std::abs(c.constant - 0.8) <= 1e-9);
  CHECK(c.contractive());
  REQUIRE(c.strict_constant.has_value());
  CHECK(*c.strict_constant >= c.constant);

  const auto ex = builtin_problem("ex5_1");
  CHECK(certify_calpha(ex, 0).constant == certify_sup(ex).constant);

  const auto t = certify_calpha(builtin_problem("takagi"), 1);
  CHECK(t.constant == Approx(1.0).epsilon(1e-8));
  CHECK_FALSE(t.contractive());

  CHECK_THROWS_AS(certify_calpha(builtin_problem("ex3_2"), 1), CertificationError);
}

TEST_CASE("breakdown reproduces the C^alpha constant") {
  const auto c = certify_calpha(builtin_problem("ex5_1"), 2);
  std::map<std::pair<int, std::size_t>, double> sums;
  for (const auto& t : c.breakdown) {
    if (t.strict_only) continue;
    CHECK(t.contribution == Approx(t.binom * t.sigma * t.gamma_s * t.gamma_h));
    sums[{t.k, t.piece}] += t.contribution;
  }
  double mx = 0.0;
  for (const auto& [key, v] : sums) mx = std::max(mx, v);
  CHECK(c.raw_constant == Approx(mx).epsilon(1e-12));
  CHECK(c.constant == Approx(c.raw_constant * c.safety_factor));
}
