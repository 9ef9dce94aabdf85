#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlfi/expr.hpp"
#include "nlfi/sampling.hpp"

namespace nlfi {

/// One partition map h_i : X -> X_i with its inverse and derivative.
/// Expressions are bound at the parameter value `eps` on construction.
class PartitionMap {
 public:
  PartitionMap(Expression forward, std::optional<Expression> inverse, Interval domain,
               double eps = 0.0, std::size_t index = 0);

  double forward(double x) const { return forward_.eval(x, eps_); }
  double derivative(double x) const;
  double second_derivative(double x) const;

  /// h_i^{-1}(y) clamped to X. Uses the closed form when supplied and verified,
  /// otherwise monotone inversion.
  double inverse(double y, double tol = 1e-12) const;

  Interval domain() const { return domain_; }
  Interval image() const;
  std::size_t index() const { return index_; }
  double eps() const { return eps_; }
  Monotonicity monotonicity() const { return monotonicity_; }
  bool increasing() const { return monotonicity_ == Monotonicity::increasing; }
  bool differentiable() const { return first_.has_value(); }

  const Expression& forward_expr() const { return forward_; }
  const std::optional<Expression>& inverse_expr() const { return inverse_; }
  const std::optional<Expression>& derivative_expr() const { return first_; }

  bool has_closed_inverse() const { return inverse_.has_value(); }
  /// max |h^{-1}(h(x)) - x| over the 257-node check grid (0 without closed form).
  double inverse_check_error() const { return inverse_error_; }
  bool inverse_verified() const { return !inverse_ || inverse_error_ <= 1e-9; }

 private:
  Expression forward_;
  std::optional<Expression> inverse_;
  std::optional<Expression> first_;
  std::optional<Expression> second_;
  Interval domain_;
  double eps_;
  std::size_t index_;
  Monotonicity monotonicity_;
  double inverse_error_ = 0.0;
};

Interval image(const PartitionMap& m);
double inverse_eval(const PartitionMap& m, double y, double tol = 1e-12);

/// max |h'| over `samples` Chebyshev nodes times (1 + 1e-6). A sampled
/// estimate, not a rigorous bound.
double lipschitz_estimate(const PartitionMap& m, std::size_t samples = 257);

struct ContactPoint {
  double point;     // common image value
  std::size_t i1;   // map indices (0-based)
  double x1;
  std::size_t i2;
  double x2;
};

enum class PartitionVerdict { strict_partition, contact_partition, invalid };
std::string to_string(PartitionVerdict v);

struct PartitionReport {
  bool covers = false;
  double overlap_measure = 0.0;
  std::vector<ContactPoint> contact_points;
  std::vector<double> lipschitz;  // NaN for non-differentiable maps
  std::vector<Interval> images;
  PartitionVerdict verdict = PartitionVerdict::invalid;
  std::vector<std::string> issues;
};

/// Classifies a family of maps over a common compact X. Never throws for
/// invalid families; problems are listed in `issues`.
PartitionReport validate_partition(std::span<const PartitionMap> maps, double tol = 1e-9);

/// Attributes each point of X to exactly one map: images sorted by left end,
/// half-open [left, right) except the last, which is closed.
class PieceLocator {
 public:
  PieceLocator() = default;
  explicit PieceLocator(std::span<const PartitionMap> maps);
  std::size_t locate(double x) const;

 private:
  std::vector<double> lefts_;
  std::vector<std::size_t> order_;
};

}  // namespace nlfi
