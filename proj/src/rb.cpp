#include "nlfi/rb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nlfi {

RbOperator::RbOperator(const FractalProblem& pr, UniformGrid grid, double inverse_tol)
    : problem_(&pr), grid_(grid) {
  if (!(grid.domain() == pr.domain())) throw GridMismatchError("grid domain differs from the problem domain");
  const std::size_t n = grid_.size();
  const std::size_t m = pr.codomain().components();
  piece_.resize(n);
  preimage_.resize(n);
  const bool affine = pr.variant() == Variant::affine;
  if (affine) {
    s_stride_ = pr.s_is_matrix(0) ? m : 1;
    for (std::size_t i = 1; i < pr.size(); ++i) {
      if ((pr.s_is_matrix(i) ? m : 1) != s_stride_) s_stride_ = m;
    }
    q_.resize(n * m);
    s_.assign(n * s_stride_, 0.0);
  }
  std::vector<double> sv(m);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = grid_.point(j);
    const std::size_t i = pr.locate(x);
    piece_[j] = i;
    preimage_[j] = pr.map(i).inverse(x, inverse_tol);
    if (!affine) continue;
    pr.q(i, preimage_[j], std::span<double>(q_.data() + j * m, m));
    const std::size_t own = pr.s_is_matrix(i) ? m : 1;
    pr.s(i, preimage_[j], std::span<double>(sv.data(), own));
    if (own == s_stride_) {
      std::copy(sv.begin(), sv.begin() + own, s_.begin() + j * s_stride_);
    } else {
      // scalar s promoted to s * Identity when other pieces carry matrices
      const int d = pr.codomain().dim;
      for (int r = 0; r < d; ++r) s_[j * s_stride_ + r * d + r] = sv[0];
    }
  }
}

SampledFunction RbOperator::apply(const SampledFunction& f) const {
  if (!(f.grid() == grid_) || !(f.codomain() == problem_->codomain())) {
    throw GridMismatchError("function grid or codomain differs from the operator's");
  }
  const std::size_t n = grid_.size();
  const std::size_t m = f.components();
  std::vector<double> out(n * m);
  std::vector<double> fy(m), prod(m);
  const bool affine = problem_->variant() == Variant::affine;
  const int d = problem_->codomain().dim;
  for (std::size_t j = 0; j < n; ++j) {
    f.evaluate(preimage_[j], fy);
    double* o = out.data() + j * m;
    if (!affine) {
      problem_->apply_piece(piece_[j], preimage_[j], fy, std::span<double>(o, m));
      continue;
    }
    const double* q = q_.data() + j * m;
    const double* s = s_.data() + j * s_stride_;
    if (s_stride_ == 1) {
      for (std::size_t c = 0; c < m; ++c) o[c] = q[c] + s[0] * fy[c];
    } else {
      matmul(std::span<const double>(s, m), fy, prod, d);
      for (std::size_t c = 0; c < m; ++c) o[c] = q[c] + prod[c];
    }
  }
  return SampledFunction(grid_, f.codomain(), std::move(out));
}

SampledFunction apply_rb(const FractalProblem& pr, const SampledFunction& f) {
  return RbOperator(pr, f.grid()).apply(f);
}

SolveResult solve_fixed_point(const FractalProblem& pr, const SampledFunction& f0,
                              const Certificate* certificate, const SolveOptions& options) {
  double s = 0.0;
  bool certified = false;
  if (options.override_factor) {
    s = *options.override_factor;
    certified = certificate && certificate->contractive();
  } else if (certificate) {
    if (!certificate->contractive()) {
      throw CertificateRequiredError("certificate constant " + format_double(certificate->constant) +
                                     " is not < 1; pass an explicit override to iterate anyway");
    }
    s = certificate->constant;
    certified = true;
  } else {
    throw CertificateRequiredError("solve_fixed_point needs a contraction certificate or an override");
  }
  if (!(s >= 0.0)) throw CertificateRequiredError("contraction factor must be non-negative");

  const bool contraction = s < 1.0;
  // step threshold converting the step size into a true-error bound
  const double threshold = !contraction ? options.tol
                           : s == 0.0   ? std::numeric_limits<double>::infinity()
                                        : options.tol * (1.0 - s) / s;

  const RbOperator op(pr, f0.grid());
  SolveResult result{f0, 0, 0.0, 0.0, s, 0.0, certified, {}};
  if (options.keep_history) result.history.push_back(f0);
  SampledFunction current = f0;
  bool done = false;
  for (std::size_t k = 1; k <= options.max_iter; ++k) {
    SampledFunction next = op.apply(current);
    const double step = sup_distance(next, current);
    if (k == 1) result.first_step = step;
    current = std::move(next);
    result.iterations = k;
    if (options.keep_history) result.history.push_back(current);
    if (step <= threshold) {
      done = true;
      break;
    }
  }
  if (!done) {
    throw ConvergenceError("no convergence within " + std::to_string(options.max_iter) + " iterations");
  }
  result.residual = sup_distance(op.apply(current), current);
  result.apriori_bound = contraction ? std::pow(s, static_cast<double>(result.iterations)) /
                                           (1.0 - s) * result.first_step
                                     : std::numeric_limits<double>::infinity();
  result.psi = std::move(current);
  return result;
}

PointwiseValue evaluate_pointwise(const FractalProblem& pr, double x, int depth) {
  if (pr.variant() != Variant::affine) throw std::invalid_argument("pointwise evaluation needs the affine variant");
  if (depth < 1 || depth > 64) throw std::invalid_argument("depth must lie in [1, 64]");
  if (!pr.domain().contains(x)) throw std::out_of_range("point outside the domain");

  const std::size_t m = pr.codomain().components();
  const int d = pr.codomain().dim;
  // address sequence: (piece, preimage) for each level
  std::vector<std::pair<std::size_t, double>> path;
  path.reserve(depth);
  double cur = x;
  for (int level = 0; level < depth; ++level) {
    const std::size_t i = pr.locate(cur);
    const double y = pr.map(i).inverse(cur);
    path.emplace_back(i, y);
    cur = y;
  }
  // psi_hat := 0 at the bottom, then fold upwards
  std::vector<double> value(m, 0.0), next(m), qv(m), sv(m), prod(m);
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    const auto [i, y] = *it;
    pr.q(i, y, qv);
    if (pr.s_is_matrix(i)) {
      pr.s(i, y, sv);
      matmul(sv, value, prod, d);
      for (std::size_t c = 0; c < m; ++c) next[c] = qv[c] + prod[c];
    } else {
      const double s = pr.field(i).s[0].eval(y, pr.eps());
      for (std::size_t c = 0; c < m; ++c) next[c] = qv[c] + s * value[c];
    }
    value.swap(next);
  }

  double s_max = 0.0;
  double q_max = 0.0;
  std::vector<double> qs(m);
  for (std::size_t i = 0; i < pr.size(); ++i) {
    for (double t : chebyshev_nodes(pr.domain(), 1025)) {
      s_max = std::max(s_max, pr.s_norm(i, t));
      pr.q(i, t, qs);
      q_max = std::max(q_max, element_norm(qs));
    }
  }
  PointwiseValue out;
  out.value = std::move(value);
  out.error_bound = s_max < 1.0 ? std::pow(s_max, depth) * q_max / (1.0 - s_max)
                                : std::numeric_limits<double>::infinity();
  return out;
}

JoinupReport check_joinup(const FractalProblem& pr, const SampledFunction& psi, double tol, int order) {
  JoinupReport report;
  report.order = order;
  report.tol = tol;
  if (pr.has_discontinuous_fields()) {
    report.skipped = true;
    report.reason = "discontinuous fields (floor): bounded-space solution, join-up not required";
    return report;
  }
  if (pr.variant() != Variant::affine) {
    report.skipped = true;
    report.reason = "general variant: join-up check applies to affine fields only";
    return report;
  }
  const std::size_t m = pr.codomain().components();
  std::vector<double> left(m), right(m), fy(m);
  const double h = psi.grid().spacing();
  const Interval dom = pr.domain();
  for (const auto& cp : pr.partition().contact_points) {
    JoinupEntry e{cp};
    psi.evaluate(cp.x1, fy);
    pr.apply_piece(cp.i1, cp.x1, fy, left);
    psi.evaluate(cp.x2, fy);
    pr.apply_piece(cp.i2, cp.x2, fy, right);
    for (std::size_t c = 0; c < m; ++c) left[c] -= right[c];
    e.mismatch = element_norm(left);
    double worst = e.mismatch;
    if (order >= 1 && cp.point - h >= dom.lo && cp.point + h <= dom.hi) {
      const Value a = psi.evaluate(cp.point - h);
      const Value b = psi.evaluate(cp.point);
      const Value c = psi.evaluate(cp.point + h);
      std::vector<double> diff(m);
      for (std::size_t k = 0; k < m; ++k) diff[k] = ((c[k] - b[k]) - (b[k] - a[k])) / h;
      e.derivative_mismatch = element_norm(diff);
      worst = std::max(worst, e.derivative_mismatch);
    }
    report.max_mismatch = std::max(report.max_mismatch, worst);
    report.passed = report.passed && worst <= tol;
    report.entries.push_back(e);
  }
  return report;
}

}  // namespace nlfi
