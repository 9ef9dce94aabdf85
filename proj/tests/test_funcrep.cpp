#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nlfi/funcrep.hpp"

using namespace nlfi;
using doctest::Approx;

namespace {
const UniformGrid kGrid({0, 1}, 4096);
}

TEST_CASE("codomain parsing") {
  CHECK(Codomain::parse("scalar") == Codomain::scalar());
  CHECK(Codomain::parse("vector:3") == Codomain::vector(3));
  CHECK(Codomain::parse("matrix:2").components() == 4);
  CHECK(Codomain::parse("matrix:2").to_string() == "matrix:2");
  CHECK_THROWS_AS(Codomain::parse("tensor"), std::invalid_argument);
}

TEST_CASE("grid") {
  CHECK(kGrid.size() == 4097);
  CHECK(kGrid.point(0) == 0.0);
  CHECK(kGrid.point(4096) == 1.0);
  CHECK(kGrid.point(2048) == 0.5);
  CHECK_THROWS(UniformGrid({0, 1}, 0));
}

TEST_CASE("interpolation") {
  const auto z = SampledFunction::zero(kGrid, Codomain::scalar());
  CHECK(z.evaluate_scalar(0.123) == 0.0);
  const auto sq = SampledFunction::from_scalar(kGrid, [](double x) { return x * x; });
  CHECK(sq.evaluate_scalar(0.3) == Approx(0.09).epsilon(1e-7));
  CHECK(std::abs(sq.evaluate_scalar(0.3) - 0.09) <= 1e-7);
  CHECK(sq.evaluate_scalar(kGrid.point(1234)) == sq.scalar_at(1234));
  CHECK_THROWS_AS(sq.evaluate_scalar(1.5), std::out_of_range);
}

TEST_CASE("non-finite samples are rejected") {
  std::vector<double> v(kGrid.size(), 0.0);
  v[17] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(SampledFunction(kGrid, Codomain::scalar(), v), std::invalid_argument);
}

TEST_CASE("sup distance") {
  const auto one = SampledFunction::from_scalar(kGrid, [](double) { return 1.0; });
  const auto z = SampledFunction::zero(kGrid, Codomain::scalar());
  CHECK(sup_distance(one, one) == 0.0);
  CHECK(sup_distance(one, z) == 1.0);
  const UniformGrid g10({0, 1}, 1024);
  const auto sn = SampledFunction::from_scalar(g10, [](double x) { return std::sin(std::numbers::pi * x); });
  CHECK(std::abs(sup_distance(sn, SampledFunction::zero(g10, Codomain::scalar())) - 1.0) <= 1e-6);
  CHECK_THROWS_AS(sup_distance(sn, z), GridMismatchError);
}

TEST_CASE("vector and matrix values use the Euclidean norm") {
  const double v[] = {3.0, 4.0};
  const auto f = SampledFunction::constant(kGrid, Codomain::vector(2), v);
  CHECK(sup_norm(f) == Approx(5.0));
  const double m[] = {0.0, 0.9, 0.0, 0.0};
  CHECK(spectral_norm(m, 2) == Approx(0.9).epsilon(1e-9));
  const double s[] = {0.8, 0.3, 0.3, 0.8};
  CHECK(spectral_norm(s, 2) == Approx(1.1).epsilon(1e-9));
  double out[4];
  matmul(s, s, out, 2);
  CHECK(out[0] == Approx(0.73));
  CHECK(out[1] == Approx(0.48));
}

TEST_CASE("lp norm") {
  const auto c = SampledFunction::from_scalar(kGrid, [](double) { return 2.5; });
  for (double p : {1.0, 2.0, 3.5}) CHECK(lp_norm(c, p) == Approx(2.5).epsilon(1e-12));
  const auto id = SampledFunction::from_scalar(kGrid, [](double x) { return x; });
  CHECK(std::abs(lp_norm(id, 2.0) - 1.0 / std::sqrt(3.0)) <= 1e-6);
  const auto sq = SampledFunction::from_scalar(kGrid, [](double x) { return 1.0 - 3.0 * x * x; });
  CHECK(lp_norm(sq, std::numeric_limits<double>::infinity()) ==
        sup_distance(sq, SampledFunction::zero(kGrid, Codomain::scalar())));
  CHECK_THROWS_AS(lp_norm(sq, 0.5), std::invalid_argument);
}

TEST_CASE("finite differences") {
  const auto c = SampledFunction::from_scalar(kGrid, [](double) { return 4.0; });
  CHECK(sup_norm(finite_diff_derivative(c, 1)) == 0.0);
  const auto sq = SampledFunction::from_scalar(kGrid, [](double x) { return x * x; });
  CHECK(std::abs(finite_diff_derivative(sq, 1).evaluate_scalar(0.5) - 1.0) <= 1e-4);
  const auto d2 = finite_diff_derivative(sq, 2);
  CHECK(std::abs(d2.evaluate_scalar(0.5) - 2.0) <= 1e-3);
  CHECK(std::abs(d2.scalar_at(0) - 2.0) <= 1e-3);
}

TEST_CASE("csv output") {
  const UniformGrid g({0, 1}, 2);
  const auto f = SampledFunction::from_scalar(g, [](double x) { return x / 3.0; });
  std::ostringstream os;
  f.write_csv(os);
  CHECK(os.str() == "x,v1\n0,0\n0.5,0.16666666666666666\n1,0.33333333333333331\n");
}

TEST_CASE("random piecewise-linear functions") {
  const auto a = random_piecewise_linear(kGrid, Codomain::scalar(), 4, 11, 0.5);
  const auto b = random_piecewise_linear(kGrid, Codomain::scalar(), 4, 11, 0.5);
  const auto c = random_piecewise_linear(kGrid, Codomain::scalar(), 4, 12, 0.5);
  CHECK(a.values() == b.values());
  CHECK(a.values() != c.values());
  CHECK(sup_norm(a) <= 0.5);
  // linear between knots
  CHECK(a.scalar_at(512) == Approx((a.scalar_at(0) + a.scalar_at(1024)) / 2.0).epsilon(1e-12));
}
