#include "nlfi/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>

#include "nlfi/rb.hpp"

namespace nlfi {

namespace {

// y-range sampled when estimating lambda and the y-contraction factor
constexpr double kYRange = 10.0;
constexpr std::uint64_t kLambdaSeed = 20240918;

double map_lipschitz(const PartitionMap& m) {
  if (m.differentiable()) return lipschitz_estimate(m);
  const auto nodes = chebyshev_nodes(m.domain(), 257);
  double best = 0.0;
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    best = std::max(best, std::abs(m.forward(nodes[k]) - m.forward(nodes[k - 1])) / (nodes[k] - nodes[k - 1]));
  }
  return best * (1.0 + 1e-6);
}

}  // namespace

PointSet::PointSet(std::size_t dim, std::vector<double> flat) : dim_(dim), data_(std::move(flat)) {
  if (data_.size() % (dim_ + 1) != 0) throw std::invalid_argument("flat point data length is not a multiple of dim + 1");
  for (double v : data_) {
    if (!std::isfinite(v)) throw std::invalid_argument("point set contains a non-finite coordinate");
  }
}

void PointSet::push(double x, std::span<const double> y) {
  if (y.size() != dim_) throw std::invalid_argument("point dimension mismatch");
  data_.push_back(x);
  data_.insert(data_.end(), y.begin(), y.end());
}

void PointSet::write_csv(std::ostream& os) const {
  os << "x";
  for (std::size_t c = 1; c <= dim_; ++c) os << ",y" << c;
  os << '\n';
  for (std::size_t i = 0; i < size(); ++i) {
    const auto p = point(i);
    for (std::size_t c = 0; c < p.size(); ++c) os << (c ? "," : "") << format_double(p[c]);
    os << '\n';
  }
}

double theta_distance(std::span<const double> p, std::span<const double> q, double theta) {
  double dy = 0.0;
  for (std::size_t c = 1; c < p.size(); ++c) dy += (p[c] - q[c]) * (p[c] - q[c]);
  return std::abs(p[0] - q[0]) + theta * std::sqrt(dy);
}

double directed_hausdorff(const PointSet& a, const PointSet& b, double theta) {
  if (a.empty() || b.empty()) throw std::invalid_argument("Hausdorff distance of an empty point set");
  if (a.dim() != b.dim()) throw std::invalid_argument("point sets differ in dimension");
  std::vector<std::size_t> order(b.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return b.x(i) < b.x(j); });
  std::vector<double> xs(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) xs[k] = b.x(order[k]);

  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto p = a.point(i);
    const std::size_t start = static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), p[0]) - xs.begin());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = start; k < xs.size() && xs[k] - p[0] < best; ++k) {
      best = std::min(best, theta_distance(p, b.point(order[k]), theta));
    }
    for (std::size_t k = start; k > 0 && p[0] - xs[k - 1] < best; --k) {
      best = std::min(best, theta_distance(p, b.point(order[k - 1]), theta));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

double hausdorff_distance(const PointSet& a, const PointSet& b, double theta) {
  return std::max(directed_hausdorff(a, b, theta), directed_hausdorff(b, a, theta));
}

GraphIfs::GraphIfs(const FractalProblem& pr) : problem_(&pr) {
  for (const auto& m : pr.maps()) lip_h_ = std::max(lip_h_, map_lipschitz(m));
  if (!(lip_h_ < 1.0)) {
    throw ValidationError("graph IFS needs Lip(h) < 1, estimated " + format_double(lip_h_));
  }

  const std::size_t m = dim();
  const Interval dom = pr.domain();
  std::mt19937_64 rng(kLambdaSeed);
  std::uniform_real_distribution<double> ux(dom.lo, dom.hi);
  std::uniform_real_distribution<double> uy(-kYRange, kYRange);
  std::vector<double> y(m), y2(m), a(m), b(m);
  auto v = [&](std::size_t i, double x, std::span<const double> yy, std::span<double> out) {
    pr.apply_piece(i, x, yy, out);
  };
  double lambda = 0.0;
  for (std::size_t i = 0; i < pr.size(); ++i) {
    for (int t = 0; t < 1000; ++t) {
      const double x1 = ux(rng);
      const double x2 = ux(rng);
      for (auto& c : y) c = uy(rng);
      for (auto& c : y2) c = uy(rng);
      if (x1 != x2) {
        v(i, x1, y, a);
        v(i, x2, y, b);
        for (std::size_t c = 0; c < m; ++c) a[c] -= b[c];
        lambda = std::max(lambda, element_norm(a) / std::abs(x1 - x2));
      }
      v(i, x1, y, a);
      v(i, x1, y2, b);
      for (std::size_t c = 0; c < m; ++c) {
        a[c] -= b[c];
        y2[c] -= y[c];
      }
      const double dy = element_norm(y2);
      if (dy > 0.0) y_contraction_ = std::max(y_contraction_, element_norm(a) / dy);
    }
  }
  // adjacent-node slopes catch steep stretches that random pairs miss
  if (!pr.has_discontinuous_fields()) {
    const auto nodes = chebyshev_nodes(dom, 1025);
    for (std::size_t i = 0; i < pr.size(); ++i) {
      for (double corner : {-kYRange, 0.0, kYRange}) {
        std::fill(y.begin(), y.end(), corner);
        for (std::size_t k = 1; k < nodes.size(); ++k) {
          v(i, nodes[k], y, a);
          v(i, nodes[k - 1], y, b);
          for (std::size_t c = 0; c < m; ++c) a[c] -= b[c];
          lambda = std::max(lambda, element_norm(a) / (nodes[k] - nodes[k - 1]));
        }
      }
    }
  }
  lambda_ = lambda * 1.01;
  // lambda = 0 means v ignores x; any theta makes the maps contractive
  theta_ = lambda_ > 0.0 ? (1.0 - lip_h_) / (2.0 * lambda_) : 1.0;
}

double GraphIfs::contraction_factor() const { return std::max(0.5 * (1.0 + lip_h_), y_contraction_); }

void GraphIfs::apply_map(std::size_t i, std::span<const double> p, std::span<double> out) const {
  const auto& pr = *problem_;
  out[0] = pr.map(i).forward(p[0]);
  pr.apply_piece(i, p[0], p.subspan(1), out.subspan(1));
}

PointSet GraphIfs::apply(const PointSet& s) const {
  const std::size_t m = dim();
  std::vector<double> flat(s.size() * size() * (m + 1));
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t k = 0; k < s.size(); ++k) {
      apply_map(i, s.point(k), std::span<double>(flat.data() + (i * s.size() + k) * (m + 1), m + 1));
    }
  }
  return PointSet(m, std::move(flat));
}

PointSet farthest_point_thinning(const PointSet& s, std::size_t cap, double theta) {
  if (s.size() <= cap) return s;
  if (cap == 0) throw std::invalid_argument("thinning cap must be positive");
  const std::size_t n = s.size();
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> chosen;
  chosen.reserve(cap);
  std::size_t next = 0;
  for (std::size_t c = 0; c < cap; ++c) {
    chosen.push_back(next);
    const auto p = s.point(next);
    double far = -1.0;
    for (std::size_t k = 0; k < n; ++k) {
      nearest[k] = std::min(nearest[k], theta_distance(p, s.point(k), theta));
      if (nearest[k] > far) {
        far = nearest[k];
        next = k;
      }
    }
  }
  std::sort(chosen.begin(), chosen.end());
  PointSet out(s.dim());
  out.reserve(cap);
  for (std::size_t k : chosen) out.push(s.x(k), s.y(k));
  return out;
}

PointSet deterministic_iterate(const GraphIfs& g, const PointSet& s0, std::size_t iters, std::size_t cap) {
  if (iters == 0) throw std::invalid_argument("deterministic_iterate needs iters >= 1");
  PointSet s = s0;
  for (std::size_t k = 0; k < iters; ++k) {
    s = farthest_point_thinning(g.apply(s), cap, g.theta());
  }
  return s;
}

PointSet chaos_game(const GraphIfs& g, std::span<const double> start, std::size_t n, std::size_t burn_in,
                    std::uint64_t seed) {
  if (n <= burn_in) throw std::invalid_argument("chaos game needs n > burn_in");
  const std::size_t m = g.dim();
  if (start.size() != m + 1) throw std::invalid_argument("start point dimension mismatch");
  std::mt19937_64 rng(seed);
  std::vector<double> p(start.begin(), start.end()), q(m + 1);
  std::vector<double> flat;
  flat.reserve((n - burn_in) * (m + 1));
  const std::uint64_t maps = g.size();
  for (std::size_t k = 0; k < n; ++k) {
    // modulo of a 64-bit draw: reproducible across standard libraries
    const std::size_t i = static_cast<std::size_t>(rng() % maps);
    g.apply_map(i, p, q);
    p.swap(q);
    if (k >= burn_in) flat.insert(flat.end(), p.begin(), p.end());
  }
  return PointSet(m, std::move(flat));
}

PointSet graph_of(const SampledFunction& f, double max_gap, double theta) {
  const std::size_t m = f.components();
  PointSet out(m);
  out.reserve(f.grid().size());
  std::vector<double> p(m + 1), q(m + 1), y(m);
  for (std::size_t j = 0; j < f.grid().size(); ++j) {
    if (j > 0 && max_gap > 0.0) {
      p[0] = f.grid().point(j - 1);
      q[0] = f.grid().point(j);
      std::copy(f.at(j - 1).begin(), f.at(j - 1).end(), p.begin() + 1);
      std::copy(f.at(j).begin(), f.at(j).end(), q.begin() + 1);
      const auto pieces = static_cast<std::size_t>(std::ceil(theta_distance(p, q, theta) / max_gap));
      for (std::size_t k = 1; k < pieces; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(pieces);
        for (std::size_t c = 0; c < m; ++c) y[c] = (1.0 - t) * p[c + 1] + t * q[c + 1];
        out.push((1.0 - t) * p[0] + t * q[0], y);
      }
    }
    out.push(f.grid().point(j), f.at(j));
  }
  return out;
}

namespace {

// min over t in [0, 1] of |px - x(t)| + theta |py - y(t)| on the segment a -> b.
double point_segment_distance(std::span<const double> p, std::span<const double> a, std::span<const double> b,
                              double theta) {
  const std::size_t m = p.size() - 1;
  auto at = [&](double t) {
    double dy2 = 0.0;
    for (std::size_t c = 1; c <= m; ++c) {
      const double d = p[c] - (a[c] + t * (b[c] - a[c]));
      dy2 += d * d;
    }
    return std::abs(p[0] - (a[0] + t * (b[0] - a[0]))) + theta * std::sqrt(dy2);
  };
  double best = std::min(at(0.0), at(1.0));
  const double dx = b[0] - a[0];
  if (dx != 0.0 && (p[0] - a[0]) * (p[0] - b[0]) <= 0.0) {
    // x(t) = p_x: only the y-part remains
    const double t = (p[0] - a[0]) / dx;
    double dy2 = 0.0;
    for (std::size_t c = 1; c <= m; ++c) {
      const double d = p[c] - (a[c] + t * (b[c] - a[c]));
      dy2 += d * d;
    }
    best = std::min(best, theta * std::sqrt(dy2));
  }
  if (m == 1) {
    const double dy = b[1] - a[1];
    if (dy != 0.0) {
      const double t = (p[1] - a[1]) / dy;
      if (t > 0.0 && t < 1.0) best = std::min(best, std::abs(p[0] - (a[0] + t * dx)));
    }
  } else {
    // convex in t: golden-section search
    double lo = 0.0, hi = 1.0;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int k = 0; k < 80; ++k) {
      const double t1 = hi - g * (hi - lo), t2 = lo + g * (hi - lo);
      if (at(t1) < at(t2)) hi = t2; else lo = t1;
    }
    best = std::min(best, at(0.5 * (lo + hi)));
  }
  return best;
}

double branch_distance(std::span<const double> p, const PointSet& br, double theta, double best) {
  const std::size_t n = br.size();
  if (n == 0) return best;
  if (n == 1) return std::min(best, theta_distance(p, br.point(0), theta));
  // first vertex with x >= p_x; segments are scanned outward from there
  std::size_t lo = 0, hi = n;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (br.x(mid) < p[0]) lo = mid + 1; else hi = mid;
  }
  const std::size_t start = lo == 0 ? 0 : (lo >= n ? n - 2 : lo - 1);
  for (std::size_t k = start + 1; k-- > 0;) {
    if (p[0] - br.x(k + 1) > best) break;
    best = std::min(best, point_segment_distance(p, br.point(k), br.point(k + 1), theta));
  }
  for (std::size_t k = start + 1; k + 1 < n; ++k) {
    if (br.x(k) - p[0] > best) break;
    best = std::min(best, point_segment_distance(p, br.point(k), br.point(k + 1), theta));
  }
  return best;
}

double directed_curve(const Curve& a, const Curve& b, double theta) {
  double worst = 0.0;
  for (const auto& br : a) {
    for (std::size_t i = 0; i < br.size(); ++i) worst = std::max(worst, point_curve_distance(br.point(i), b, theta));
  }
  return worst;
}

}  // namespace

double point_curve_distance(std::span<const double> p, const Curve& c, double theta) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& br : c) best = branch_distance(p, br, theta, best);
  return best;
}

double curve_distance(const Curve& a, const Curve& b, double theta) {
  return std::max(directed_curve(a, b, theta), directed_curve(b, a, theta));
}

Curve ifs_image_curve(const FractalProblem& pr, const SampledFunction& f) {
  const std::size_t m = f.components();
  Curve out;
  std::vector<double> p(m + 1);
  for (std::size_t i = 0; i < pr.size(); ++i) {
    PointSet br(m);
    br.reserve(f.grid().size());
    const std::size_t n = f.grid().size();
    const bool increasing = pr.map(i).increasing();
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t j = increasing ? k : n - 1 - k;
      const double x = f.grid().point(j);
      p[0] = pr.map(i).forward(x);
      pr.apply_piece(i, x, f.at(j), std::span<double>(p).subspan(1));
      br.push(p[0], std::span<const double>(p).subspan(1));
    }
    out.push_back(std::move(br));
  }
  return out;
}

Curve rb_graph_curve(const FractalProblem& pr, const SampledFunction& f) {
  const std::size_t m = f.components();
  const UniformGrid& grid = f.grid();
  const SampledFunction tf = apply_rb(pr, f);
  Curve out;
  std::vector<double> fy(m), v(m);
  auto piece_value = [&](std::size_t i, double x) {
    const double y = pr.map(i).inverse(x);
    f.evaluate(y, fy);
    pr.apply_piece(i, y, fy, v);
  };
  for (std::size_t i = 0; i < pr.size(); ++i) {
    const Interval img = pr.map(i).image();
    PointSet br(m);
    const auto first = static_cast<std::size_t>(std::ceil((img.lo - grid.domain().lo) / grid.spacing()));
    if (grid.point(std::min(first, grid.size() - 1)) != img.lo) {
      piece_value(i, img.lo);
      br.push(img.lo, v);
    }
    for (std::size_t j = first; j < grid.size() && grid.point(j) <= img.hi; ++j) {
      const double x = grid.point(j);
      if (pr.locate(x) == i) {
        br.push(x, tf.at(j));
      } else {
        piece_value(i, x);
        br.push(x, v);
      }
    }
    if (br.empty() || br.x(br.size() - 1) != img.hi) {
      piece_value(i, img.hi);
      br.push(img.hi, v);
    }
    out.push_back(std::move(br));
  }
  return out;
}

double graph_transform_check(const FractalProblem& pr, const SampledFunction& f) {
  return curve_distance(rb_graph_curve(pr, f), ifs_image_curve(pr, f), 1.0);
}

}  // namespace nlfi
