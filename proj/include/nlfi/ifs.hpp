#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "nlfi/funcrep.hpp"
#include "nlfi/problem.hpp"

namespace nlfi {

/// Finite sample of a compact subset of X x R^d. Points are stored flat as
/// (x, y_1, ..., y_d).
class PointSet {
 public:
  explicit PointSet(std::size_t dim = 1) : dim_(dim) {}
  PointSet(std::size_t dim, std::vector<double> flat);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return data_.size() / (dim_ + 1); }
  bool empty() const { return data_.empty(); }
  double x(std::size_t i) const { return data_[i * (dim_ + 1)]; }
  std::span<const double> y(std::size_t i) const { return {data_.data() + i * (dim_ + 1) + 1, dim_}; }
  std::span<const double> point(std::size_t i) const { return {data_.data() + i * (dim_ + 1), dim_ + 1}; }
  const std::vector<double>& flat() const { return data_; }

  void push(double x, std::span<const double> y);
  void reserve(std::size_t n) { data_.reserve(n * (dim_ + 1)); }

  /// Header `x,y1[,y2,...]`, 17 significant digits.
  void write_csv(std::ostream& os) const;

 private:
  std::size_t dim_;
  std::vector<double> data_;
};

/// |dx| + theta * |dy| (Euclidean in y).
double theta_distance(std::span<const double> p, std::span<const double> q, double theta);

/// Hausdorff-Pompeiu distance under |dx| + theta |dy|. Exact; the inner
/// minimisation scans B in x order and stops once |dx| alone exceeds the
/// best candidate.
double hausdorff_distance(const PointSet& a, const PointSet& b, double theta = 1.0);
double directed_hausdorff(const PointSet& a, const PointSet& b, double theta = 1.0);

/// Piecewise-linear curve: each branch is a PointSet whose consecutive
/// points are joined by segments. Branches must be sorted by x.
using Curve = std::vector<PointSet>;

/// Distance in the theta-norm from p to the nearest point of the curve.
double point_curve_distance(std::span<const double> p, const Curve& c, double theta);

/// Hausdorff distance between two sampled curves, measured from the vertices
/// of each curve to the segments of the other.
double curve_distance(const Curve& a, const Curve& b, double theta = 1.0);

/// Graph IFS w_i(x, y) = (h_i(x), v_i(x, y)) of a problem, with
/// v_i = q_i + s_i y in the affine variant.
class GraphIfs {
 public:
  /// Keeps a pointer to `pr`, which must outlive the IFS.
  explicit GraphIfs(const FractalProblem& pr);
  explicit GraphIfs(FractalProblem&&) = delete;

  std::size_t size() const { return problem_->size(); }
  std::size_t dim() const { return problem_->codomain().components(); }
  const FractalProblem& problem() const { return *problem_; }

  double lip_h() const { return lip_h_; }
  double lambda() const { return lambda_; }
  double theta() const { return theta_; }
  /// Largest |v_i(x, y1) - v_i(x, y2)| / |y1 - y2| over the sampled pairs.
  double y_contraction() const { return y_contraction_; }
  /// max((1 + Lip(h)) / 2, y-contraction): contraction factor of every w_i in the theta-norm.
  double contraction_factor() const;

  /// w_i applied to one point; out has dim() + 1 entries.
  void apply_map(std::size_t i, std::span<const double> p, std::span<double> out) const;
  /// Union of w_i(S).
  PointSet apply(const PointSet& s) const;

 private:
  const FractalProblem* problem_;
  double lip_h_ = 0.0;
  double lambda_ = 0.0;
  double theta_ = 1.0;
  double y_contraction_ = 0.0;
};

/// Greedy farthest-point subsample of `cap` points in the theta-norm, seeded
/// with the first point.
PointSet farthest_point_thinning(const PointSet& s, std::size_t cap, double theta);

/// S_k = union of w_i(S_{k-1}), thinned to `cap` points whenever it grows beyond.
PointSet deterministic_iterate(const GraphIfs& g, const PointSet& s0, std::size_t iters, std::size_t cap);

/// Random orbit with uniform map choice; the first burn_in points are discarded,
/// so n - burn_in points are returned.
PointSet chaos_game(const GraphIfs& g, std::span<const double> start, std::size_t n, std::size_t burn_in,
                    std::uint64_t seed);

/// Graph of a sampled function, one point per grid node. With max_gap > 0 the
/// piecewise-linear interpolant is sampled so that consecutive points are at
/// most max_gap apart in the theta-norm.
PointSet graph_of(const SampledFunction& f, double max_gap = 0.0, double theta = 1.0);

/// One branch per map: w_i applied to the grid samples of f, sorted by x.
Curve ifs_image_curve(const FractalProblem& pr, const SampledFunction& f);

/// Graph of Tf as one branch per piece: the grid nodes of the closed image
/// h_i(X) plus its endpoints, each evaluated with piece i's formula. Keeps both
/// one-sided values where Tf jumps at a contact point.
Curve rb_graph_curve(const FractalProblem& pr, const SampledFunction& f);

/// curve_distance(G(Tf), union_i w_i(G(f))) with theta = 1, using
/// rb_graph_curve on the left and one branch per map through the images of
/// f's grid samples on the right.
double graph_transform_check(const FractalProblem& pr, const SampledFunction& f);

}  // namespace nlfi
