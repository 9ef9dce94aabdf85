#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "nlfi/rb.hpp"
#include "support.hpp"

using namespace nlfi;
using namespace nlfi::test;
using doctest::Approx;

namespace {

const UniformGrid kGrid({0, 1}, 4096);

SolveResult solve(const FractalProblem& pr, double tol = 1e-9, bool history = false) {
  const auto cert = default_certificate(pr);
  SolveOptions opt;
  opt.tol = tol;
  opt.keep_history = history;
  return solve_fixed_point(pr, SampledFunction::zero(kGrid, pr.codomain()), &cert, opt);
}

}  // namespace

TEST_CASE("operator on zero fields") {
  const auto pr = problem_from(takagi_like("0", "0", "0", "0"));
  const auto f = random_piecewise_linear(kGrid, Codomain::scalar(), 8, 3);
  CHECK(sup_norm(apply_rb(pr, f)) == 0.0);
}

TEST_CASE("one application from zero") {
  const auto pr = builtin_problem("ex3_4");
  const auto t = apply_rb(pr, SampledFunction::zero(kGrid, Codomain::scalar()));
  const RbOperator op(pr, kGrid);
  for (std::size_t j : {0u, 700u, 2047u, 2048u, 3000u, 4096u}) {
    const double x = kGrid.point(j);
    const double expected = x < 0.5 ? -1.0 + std::sqrt(6.0 * x + 1.0)
                                    : 1.0 - 4.0 / std::numbers::pi * std::asin((2.0 * x - 1.0) / std::sqrt(2.0));
    CHECK(t.scalar_at(j) == Approx(expected).epsilon(1e-12));
  }
  // left limit at 1/2 is -1 + sqrt(4) = 1, matching the right value 1 - 0
  CHECK(t.scalar_at(2047) == Approx(1.0).epsilon(1e-3));
  CHECK(op.piece(2047) == 0);
  CHECK(op.piece(2048) == 1);

  const auto tak = apply_rb(builtin_problem("takagi"), SampledFunction::zero(kGrid, Codomain::scalar()));
  for (std::size_t j : {0u, 100u, 1024u, 2047u}) CHECK(tak.scalar_at(j) == Approx(2.0 * kGrid.point(j)));
}

TEST_CASE("fixed point of the continuous example") {
  const auto r = solve(builtin_problem("ex3_4"));
  CHECK(r.certified);
  CHECK(std::abs(r.psi.scalar_at(0)) <= 1e-6);
  CHECK(std::abs(r.psi.scalar_at(4096)) <= 1e-6);
  CHECK(std::abs(r.psi.scalar_at(2048) - 1.0) <= 1e-6);
  CHECK(r.residual <= 1e-9);
  CHECK(r.s_used == Approx(0.5).epsilon(1e-8));
}

TEST_CASE("zero fields give the zero function") {
  const auto r = solve(builtin_problem("zero"));
  CHECK(sup_norm(r.psi) == 0.0);
}

TEST_CASE("bounded example converges with s = 2/3") {
  const auto r = solve(builtin_problem("ex3_2"));
  CHECK(r.certified);
  CHECK(std::abs(r.s_used - 2.0 / 3.0) <= 1e-9);
  CHECK(r.residual <= 1e-9);
}

TEST_CASE("certificate is required") {
  const auto pr = problem_from(takagi_like("x", "1.5", "1", "1.5"));
  const auto cert = default_certificate(pr);
  const auto f0 = SampledFunction::zero(kGrid, Codomain::scalar());
  CHECK_THROWS_AS(solve_fixed_point(pr, f0, &cert, {}), CertificateRequiredError);
  CHECK_THROWS_AS(solve_fixed_point(pr, f0, nullptr, {}), CertificateRequiredError);
  SolveOptions opt;
  opt.override_factor = 0.9;
  opt.max_iter = 20;
  CHECK_THROWS_AS(solve_fixed_point(pr, f0, nullptr, opt), ConvergenceError);

  SolveOptions forced;
  forced.override_factor = 0.5;
  const auto r = solve_fixed_point(builtin_problem("takagi"), f0, nullptr, forced);
  CHECK_FALSE(r.certified);
}

TEST_CASE("a-priori envelope") {
  for (const char* name : {"ex3_4", "takagi"}) {
    const auto pr = builtin_problem(name);
    std::vector<SampledFunction> it{SampledFunction::zero(kGrid, Codomain::scalar())};
    for (int k = 1; k <= 200; ++k) it.push_back(apply_rb(pr, it.back()));
    const double d1 = sup_distance(it[1], it[0]);
    for (int k = 1; k <= 20; ++k) {
      CHECK(sup_distance(it[k], it[200]) <= std::pow(0.5, k) / 0.5 * d1 + 1e-5);
    }
  }
}

TEST_CASE("contraction on random pairs") {
  for (const char* name : {"ex3_4", "takagi", "ex3_2", "ex5_1", "zero"}) {
    const auto pr = builtin_problem(name);
    const double s = default_certificate(pr).constant;
    const RbOperator op(pr, kGrid);
    for (std::uint64_t k = 0; k < 10; ++k) {
      const auto f = random_piecewise_linear(kGrid, Codomain::scalar(), 16, 2 * k + 1);
      const auto g = random_piecewise_linear(kGrid, Codomain::scalar(), 16, 2 * k + 2);
      CHECK(sup_distance(op.apply(f), op.apply(g)) <= s * sup_distance(f, g) + 10.0 / (4096.0 * 4096.0));
    }
  }
}

TEST_CASE("grid and pointwise evaluation agree") {
  for (const char* name : {"ex3_4", "takagi"}) {
    CHECK(std::abs(evaluate_pointwise(builtin_problem(name), 0.5, 40).value[0] - 1.0) <= 1e-10);
  }
  CHECK(evaluate_pointwise(builtin_problem("zero"), 0.3, 5).value[0] == 0.0);
  CHECK_THROWS(evaluate_pointwise(builtin_problem("zero"), 0.3, 0));

  auto max_gap = [](const char* name, std::size_t n) {
    const auto pr = builtin_problem(name);
    const UniformGrid g({0, 1}, n);
    const auto cert = default_certificate(pr);
    SolveOptions opt;
    opt.tol = 1e-12;
    const auto r = solve_fixed_point(pr, SampledFunction::zero(g, Codomain::scalar()), &cert, opt);
    double m = 0.0;
    for (std::size_t j = 0; j < g.size(); j += 5) {
      m = std::max(m, std::abs(evaluate_pointwise(pr, g.point(j), 50).value[0] - r.psi.scalar_at(j)));
    }
    return m;
  };
  // dyadic preimages stay on the grid
  CHECK(max_gap("takagi", 4096) <= 1e-12);
  // smooth solution: interpolation error O(N^-2)
  CHECK(max_gap("ex5_1", 4096) <= 1e-6);
  // rough solution: the gap shrinks under refinement
  const double coarse = max_gap("ex3_4", 1024);
  const double fine = max_gap("ex3_4", 4096);
  CHECK(fine <= 5e-3);
  CHECK(fine < 0.5 * coarse);
}

TEST_CASE("matrix variant with s = 0.5 I matches the scalar solution") {
  const auto mp = problem_from(R"json({"schema_version": 1, "domain": [0, 1], "codomain": "matrix:2",
    "maps": [{"h": "(2*x + x^2)/6", "h_inv": "-1 + sqrt(6*x + 1)"},
             {"h": "(1 + sqrt(2)*sin(pi*x/4))/2", "h_inv": "(4/pi)*arcsin((2*x - 1)/sqrt(2))"}],
    "fields": [{"q": [["x", 0], [0, "x"]], "s": [[0.5, 0], [0, 0.5]]},
               {"q": [["1 - x", 0], [0, "1 - x"]], "s": [[0.5, 0], [0, 0.5]]}]})json");
  const auto m = solve(mp);
  const auto s = solve(builtin_problem("ex3_4"));
  CHECK(m.residual <= 1e-9);
  CHECK(std::abs(default_certificate(mp).constant - 0.5) <= 1e-9);
  double diag = 0.0, off = 0.0;
  for (std::size_t j = 0; j < kGrid.size(); ++j) {
    const auto v = m.psi.at(j);
    diag = std::max({diag, std::abs(v[0] - s.psi.scalar_at(j)), std::abs(v[3] - s.psi.scalar_at(j))});
    off = std::max({off, std::abs(v[1]), std::abs(v[2])});
  }
  CHECK(diag <= 1e-9);
  CHECK(off == 0.0);
}

TEST_CASE("join-up") {
  const auto pr = builtin_problem("ex3_4");
  const auto r = solve(pr);
  const auto j = check_joinup(pr, r.psi, 1e-7);
  CHECK_FALSE(j.skipped);
  CHECK(j.passed);
  REQUIRE(j.entries.size() == 1);
  CHECK(j.entries[0].contact.point == Approx(0.5));
  CHECK(j.max_mismatch <= 1e-7);

  auto doc = builtin_doc("ex3_4");
  // q_2 raised by 0.5 at the contact point only (a constant shift moves psi(1) too)
  doc.spec.fields[1].q[0] = Expression::parse("1.5*(1 - x)");
  const FractalProblem shifted(doc.spec);
  const auto rs = solve(shifted);
  const auto js = check_joinup(shifted, rs.psi, 1e-7);
  CHECK_FALSE(js.passed);
  CHECK(js.max_mismatch == Approx(0.5).epsilon(1e-6));

  const auto one = problem_from(R"({"schema_version": 1, "domain": [0, 1], "codomain": "scalar",
    "maps": [{"h": "x"}], "fields": [{"q": "0", "s": "0.5"}]})");
  const auto j1 = check_joinup(one, solve(one).psi, 1e-7);
  CHECK(j1.passed);
  CHECK(j1.entries.empty());

  CHECK(check_joinup(builtin_problem("ex3_2"), solve(builtin_problem("ex3_2")).psi, 1e-7).skipped);
}
