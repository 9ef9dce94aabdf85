#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "nlfi/partition.hpp"

using namespace nlfi;
using doctest::Approx;

namespace {

PartitionMap map(const char* h, const char* inv = nullptr, double eps = 0.0, std::size_t i = 0) {
  std::optional<Expression> hi;
  if (inv) hi = Expression::parse(inv);
  return PartitionMap(Expression::parse(h), hi, {0, 1}, eps, i);
}

std::vector<PartitionMap> ex21() {
  return {map("(2*x + x^2)/6", "-1 + sqrt(6*x + 1)", 0.0, 0),
          map("(1 + sqrt(2)*sin(pi*x/4))/2", "(4/pi)*arcsin((2*x - 1)/sqrt(2))", 0.0, 1)};
}

const char* kH1eps = "(0.5 - eps)*x + eps*x^2";
const char* kH1epsInv = "(-1 + 2*eps + sqrt(1 + 4*(4*x - 1)*eps + 4*eps^2))/(4*eps)";

}  // namespace

TEST_CASE("images") {
  const auto m = ex21();
  CHECK(m[0].image().lo == 0.0);
  CHECK(m[0].image().hi == Approx(0.5).epsilon(1e-15));
  CHECK(image(map("x")) == Interval{0, 1});
  const auto h2 = image(map("(2 + x + x^2)/4"));
  CHECK(h2.lo == 0.5);
  CHECK(h2.hi == 1.0);
  const auto dec = image(map("1 - x/2"));
  CHECK(dec.lo == 0.5);
  CHECK(dec.hi == 1.0);
}

TEST_CASE("nonlinear partition with a contact point") {
  const auto m = ex21();
  const auto r = validate_partition(m);
  CHECK(r.verdict == PartitionVerdict::contact_partition);
  CHECK(r.covers);
  REQUIRE(r.contact_points.size() == 1);
  const auto& c = r.contact_points[0];
  CHECK(c.point == Approx(0.5).epsilon(1e-12));
  CHECK(c.x1 == Approx(1.0));
  CHECK(c.x2 == Approx(0.0));
  CHECK(r.lipschitz[0] == Approx(4.0 / 6.0).epsilon(1e-5));
}

TEST_CASE("trivial and affine partitions") {
  const std::vector<PartitionMap> one{map("x")};
  CHECK(validate_partition(one).verdict == PartitionVerdict::strict_partition);

  const std::vector<PartitionMap> tak{map("x/2"), map("(x + 1)/2", nullptr, 0.0, 1)};
  const auto r = validate_partition(tak);
  CHECK(r.verdict == PartitionVerdict::contact_partition);
  REQUIRE(r.contact_points.size() == 1);
  CHECK(r.contact_points[0].point == 0.5);
  CHECK(r.lipschitz[0] == Approx(0.5).epsilon(1e-5));
  CHECK(r.lipschitz[1] == Approx(0.5).epsilon(1e-5));
}

TEST_CASE("invalid families are reported, not thrown") {
  const std::vector<PartitionMap> gap{map("x/3"), map("(x + 2)/3", nullptr, 0.0, 1)};
  const auto r = validate_partition(gap);
  CHECK(r.verdict == PartitionVerdict::invalid);
  CHECK_FALSE(r.covers);
  CHECK_FALSE(r.issues.empty());

  const std::vector<PartitionMap> overlap{map("0.6*x"), map("0.4 + 0.6*x", nullptr, 0.0, 1)};
  const auto o = validate_partition(overlap);
  CHECK(o.verdict == PartitionVerdict::invalid);
  CHECK(o.overlap_measure == Approx(0.2).epsilon(1e-9));
}

TEST_CASE("inverse evaluation") {
  const auto m = ex21();
  CHECK(m[0].inverse(0.25) == Approx(-1.0 + std::sqrt(2.5)).epsilon(1e-14));
  CHECK(inverse_eval(m[0], m[0].forward(0.3)) == Approx(0.3).epsilon(1e-12));
  CHECK(m[1].inverse(m[1].forward(0.0)) == Approx(0.0).epsilon(1e-12));
  CHECK(m[1].inverse(1.0) == Approx(1.0).epsilon(1e-12));
  // without a closed form
  const auto n = map("(2*x + x^2)/6");
  CHECK(n.inverse(0.25) == Approx(-1.0 + std::sqrt(2.5)).epsilon(1e-11));
}

TEST_CASE("perturbed inverse through the contact point") {
  for (double eps : {-0.5, -0.3, -0.1, 0.05, 0.2, 0.5}) {
    const auto m = map(kH1eps, kH1epsInv, eps);
    CHECK(m.inverse_verified());
    CHECK(m.inverse(0.5) == Approx(1.0).epsilon(1e-12));
    CHECK(m.has_closed_inverse());
  }
  const auto half = map(kH1eps, kH1epsInv, 0.5);
  CHECK(half.forward(0.6) == Approx(0.18).epsilon(1e-15));
  CHECK(half.increasing());
}

TEST_CASE("wrong closed-form inverse is caught") {
  const auto m = map("x/2", "3*x");
  CHECK_FALSE(m.inverse_verified());
  CHECK(m.inverse(0.25) == Approx(0.5).epsilon(1e-12));
}

TEST_CASE("lipschitz estimates") {
  CHECK(lipschitz_estimate(map("x/2")) == Approx(0.5).epsilon(1e-5));
  CHECK(lipschitz_estimate(map("x*(x + 1)/4")) == Approx(0.75).epsilon(1e-5));
  CHECK(lipschitz_estimate(map("(2*x + x^2)/6")) == Approx(4.0 / 6.0).epsilon(1e-5));
}

TEST_CASE("piece locator is half open") {
  const auto m = ex21();
  const PieceLocator loc(m);
  CHECK(loc.locate(0.0) == 0);
  CHECK(loc.locate(0.4999999) == 0);
  CHECK(loc.locate(0.5) == 1);
  CHECK(loc.locate(1.0) == 1);
}
