#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlfi/sampling.hpp"

namespace nlfi {

/// Codomain of a fractal function: R, R^d, or the algebra of d x d matrices.
/// Elements are stored flat; matrices row-major.
struct Codomain {
  enum class Kind { scalar, vector, matrix };
  Kind kind = Kind::scalar;
  int dim = 1;

  static Codomain scalar() { return {Kind::scalar, 1}; }
  static Codomain vector(int d) { return {Kind::vector, d}; }
  static Codomain matrix(int d) { return {Kind::matrix, d}; }
  static Codomain parse(const std::string& text);  // "scalar", "vector:d", "matrix:d"

  std::size_t components() const {
    return kind == Kind::matrix ? static_cast<std::size_t>(dim * dim) : static_cast<std::size_t>(dim);
  }
  std::string to_string() const;
  bool operator==(const Codomain&) const = default;
};

using Value = std::vector<double>;

/// Euclidean norm of a flat element (Frobenius for matrices).
double element_norm(std::span<const double> v);

/// Largest singular value of a row-major d x d matrix by power iteration on A^T A.
double spectral_norm(std::span<const double> m, int d, double tol = 1e-10);

/// out = a * b for row-major d x d matrices.
void matmul(std::span<const double> a, std::span<const double> b, std::span<double> out, int d);

class GridMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// N+1 uniform points on [lo, hi].
class UniformGrid {
 public:
  UniformGrid(Interval domain, std::size_t intervals);

  std::size_t size() const { return intervals_ + 1; }
  std::size_t intervals() const { return intervals_; }
  double spacing() const { return spacing_; }
  Interval domain() const { return domain_; }
  double point(std::size_t i) const;
  std::vector<double> points() const;

  bool operator==(const UniformGrid& o) const {
    return domain_ == o.domain_ && intervals_ == o.intervals_;
  }

 private:
  Interval domain_;
  std::size_t intervals_;
  double spacing_;
};

/// Grid samples of a function X -> codomain with piecewise-linear interpolation.
class SampledFunction {
 public:
  SampledFunction(UniformGrid grid, Codomain codomain, std::vector<double> values);

  static SampledFunction constant(UniformGrid grid, Codomain codomain, std::span<const double> value);
  static SampledFunction zero(UniformGrid grid, Codomain codomain);
  static SampledFunction from_scalar(UniformGrid grid, const std::function<double(double)>& fn);
  static SampledFunction from_function(UniformGrid grid, Codomain codomain,
                                       const std::function<void(double, std::span<double>)>& fn);

  const UniformGrid& grid() const { return grid_; }
  const Codomain& codomain() const { return codomain_; }
  std::size_t components() const { return codomain_.components(); }
  std::span<const double> at(std::size_t i) const;
  double scalar_at(std::size_t i) const { return values_[i * components()]; }
  const std::vector<double>& values() const { return values_; }

  /// Piecewise-linear value at x; exact at grid points. Throws std::out_of_range outside X.
  void evaluate(double x, std::span<double> out) const;
  Value evaluate(double x) const;
  double evaluate_scalar(double x) const;

  void write_csv(std::ostream& os) const;

 private:
  UniformGrid grid_;
  Codomain codomain_;
  std::vector<double> values_;
};

double sup_distance(const SampledFunction& f, const SampledFunction& g);
double sup_norm(const SampledFunction& f);

/// Composite trapezoid L^p norm; p = infinity gives the sup norm. p < 1 is rejected.
double lp_norm(const SampledFunction& f, double p);

/// k-fold finite-difference derivative (k <= 2): central inside, one-sided
/// second-order stencils at the endpoints.
SampledFunction finite_diff_derivative(const SampledFunction& f, int k);

/// Piecewise-linear function through `knots` + 1 equally spaced knots with
/// values uniform in [-amplitude, amplitude] per component (seeded mt19937_64).
SampledFunction random_piecewise_linear(UniformGrid grid, Codomain codomain, std::size_t knots,
                                        std::uint64_t seed, double amplitude = 1.0);

}  // namespace nlfi
