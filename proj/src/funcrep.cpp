#include "nlfi/funcrep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

namespace nlfi {

Codomain Codomain::parse(const std::string& text) {
  if (text == "scalar") return scalar();
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string kind = text.substr(0, colon);
    int d = 0;
    try {
      d = std::stoi(text.substr(colon + 1));
    } catch (const std::exception&) {
      d = 0;
    }
    if (d >= 1 && d <= 16) {
      if (kind == "vector") return vector(d);
      if (kind == "matrix") return matrix(d);
    }
  }
  throw std::invalid_argument("codomain must be 'scalar', 'vector:d' or 'matrix:d', got '" +
                              text + "'");
}

std::string Codomain::to_string() const {
  switch (kind) {
    case Kind::scalar: return "scalar";
    case Kind::vector: return "vector:" + std::to_string(dim);
    case Kind::matrix: return "matrix:" + std::to_string(dim);
  }
  return "scalar";
}

double element_norm(std::span<const double> v) {
  if (v.size() == 1) return std::abs(v[0]);
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

void matmul(std::span<const double> a, std::span<const double> b, std::span<double> out, int d) {
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      double acc = 0.0;
      for (int k = 0; k < d; ++k) acc += a[r * d + k] * b[k * d + c];
      out[r * d + c] = acc;
    }
  }
}

double spectral_norm(std::span<const double> m, int d, double tol) {
  if (d == 1) return std::abs(m[0]);
  // power iteration on A^T A; the start vector has all components set so it is
  // not orthogonal to the dominant singular vector for generic inputs
  std::vector<double> v(d), w(d), u(d);
  for (int i = 0; i < d; ++i) v[i] = 1.0 + 0.1 * i;
  double lambda = 0.0;
  for (int it = 0; it < 10000; ++it) {
    const double nv = element_norm(v);
    if (nv == 0.0) return 0.0;
    for (double& c : v) c /= nv;
    for (int r = 0; r < d; ++r) {
      double acc = 0.0;
      for (int k = 0; k < d; ++k) acc += m[r * d + k] * v[k];
      u[r] = acc;
    }
    for (int c = 0; c < d; ++c) {
      double acc = 0.0;
      for (int r = 0; r < d; ++r) acc += m[r * d + c] * u[r];
      w[c] = acc;
    }
    const double next = element_norm(w);
    v.swap(w);
    if (std::abs(next - lambda) <= tol * std::max(1.0, next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(lambda);
}

UniformGrid::UniformGrid(Interval domain, std::size_t intervals)
    : domain_(domain), intervals_(intervals) {
  if (intervals == 0) throw std::invalid_argument("grid needs at least one interval");
  if (!(domain.lo < domain.hi)) throw std::invalid_argument("grid domain must satisfy lo < hi");
  spacing_ = domain.length() / static_cast<double>(intervals);
}

double UniformGrid::point(std::size_t i) const {
  if (i == intervals_) return domain_.hi;
  return domain_.lo + static_cast<double>(i) * spacing_;
}

std::vector<double> UniformGrid::points() const {
  std::vector<double> p(size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = point(i);
  return p;
}

SampledFunction::SampledFunction(UniformGrid grid, Codomain codomain, std::vector<double> values)
    : grid_(grid), codomain_(codomain), values_(std::move(values)) {
  if (values_.size() != grid_.size() * codomain_.components()) {
    throw std::invalid_argument("sample count does not match grid and codomain");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("sampled function has a non-finite value");
  }
}

SampledFunction SampledFunction::constant(UniformGrid grid, Codomain codomain,
                                          std::span<const double> value) {
  const std::size_t m = codomain.components();
  if (value.size() != m) throw std::invalid_argument("constant value has the wrong size");
  std::vector<double> v(grid.size() * m);
  for (std::size_t i = 0; i < grid.size(); ++i) std::copy(value.begin(), value.end(), v.begin() + i * m);
  return SampledFunction(grid, codomain, std::move(v));
}

SampledFunction SampledFunction::zero(UniformGrid grid, Codomain codomain) {
  return SampledFunction(grid, codomain, std::vector<double>(grid.size() * codomain.components(), 0.0));
}

SampledFunction SampledFunction::from_scalar(UniformGrid grid,
                                             const std::function<double(double)>& fn) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.point(i));
  return SampledFunction(grid, Codomain::scalar(), std::move(v));
}

SampledFunction SampledFunction::from_function(
    UniformGrid grid, Codomain codomain, const std::function<void(double, std::span<double>)>& fn) {
  const std::size_t m = codomain.components();
  std::vector<double> v(grid.size() * m);
  for (std::size_t i = 0; i < grid.size(); ++i) fn(grid.point(i), std::span<double>(v.data() + i * m, m));
  return SampledFunction(grid, codomain, std::move(v));
}

std::span<const double> SampledFunction::at(std::size_t i) const {
  const std::size_t m = components();
  return {values_.data() + i * m, m};
}

void SampledFunction::evaluate(double x, std::span<double> out) const {
  const Interval d = grid_.domain();
  if (!(x >= d.lo && x <= d.hi)) {
    throw std::out_of_range("evaluation point " + format_double(x) + " outside [" +
                            format_double(d.lo) + ", " + format_double(d.hi) + "]");
  }
  const std::size_t m = components();
  const double t = (x - d.lo) / grid_.spacing();
  std::size_t k = static_cast<std::size_t>(t);
  if (k >= grid_.intervals()) k = grid_.intervals() - 1;
  const double w = t - static_cast<double>(k);
  const double* a = values_.data() + k * m;
  const double* b = a + m;
  if (w == 0.0) {
    std::copy(a, a + m, out.begin());
  } else if (w == 1.0) {
    std::copy(b, b + m, out.begin());
  } else {
    for (std::size_t c = 0; c < m; ++c) out[c] = a[c] + w * (b[c] - a[c]);
  }
}

Value SampledFunction::evaluate(double x) const {
  Value v(components());
  evaluate(x, v);
  return v;
}

double SampledFunction::evaluate_scalar(double x) const {
  double v[1];
  if (components() != 1) throw std::invalid_argument("evaluate_scalar on a non-scalar function");
  evaluate(x, v);
  return v[0];
}

void SampledFunction::write_csv(std::ostream& os) const {
  const std::size_t m = components();
  os << "x";
  for (std::size_t c = 0; c < m; ++c) os << ",v" << (c + 1);
  os << '\n';
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    os << format_double(grid_.point(i));
    for (std::size_t c = 0; c < m; ++c) os << ',' << format_double(values_[i * m + c]);
    os << '\n';
  }
}

namespace {
void require_same_grid(const SampledFunction& f, const SampledFunction& g) {
  if (!(f.grid() == g.grid()) || !(f.codomain() == g.codomain())) {
    throw GridMismatchError("functions live on different grids or codomains");
  }
}
}  // namespace

double sup_distance(const SampledFunction& f, const SampledFunction& g) {
  require_same_grid(f, g);
  const std::size_t m = f.components();
  const auto& a = f.values();
  const auto& b = g.values();
  double best = 0.0;
  std::vector<double> diff(m);
  for (std::size_t i = 0; i < f.grid().size(); ++i) {
    for (std::size_t c = 0; c < m; ++c) diff[c] = a[i * m + c] - b[i * m + c];
    best = std::max(best, element_norm(diff));
  }
  return best;
}

double sup_norm(const SampledFunction& f) {
  double best = 0.0;
  for (std::size_t i = 0; i < f.grid().size(); ++i) best = std::max(best, element_norm(f.at(i)));
  return best;
}

double lp_norm(const SampledFunction& f, double p) {
  if (std::isinf(p) && p > 0) return sup_norm(f);
  if (!(p >= 1.0)) {
    throw std::invalid_argument("lp_norm requires p >= 1 (the 0<p<1 metric is not supported)");
  }
  const std::size_t n = f.grid().size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    acc += w * std::pow(element_norm(f.at(i)), p);
  }
  return std::pow(acc * f.grid().spacing(), 1.0 / p);
}

SampledFunction finite_diff_derivative(const SampledFunction& f, int k) {
  if (k < 0 || k > 2) throw std::invalid_argument("finite_diff_derivative supports k <= 2");
  if (f.grid().intervals() < 64) throw std::invalid_argument("finite_diff_derivative needs N >= 64");
  if (k == 0) return f;
  const std::size_t n = f.grid().size();
  const std::size_t m = f.components();
  const double h = f.grid().spacing();
  const auto& v = f.values();
  std::vector<double> d(v.size());
  for (std::size_t c = 0; c < m; ++c) {
    auto at = [&](std::size_t i) { return v[i * m + c]; };
    d[c] = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
    d[(n - 1) * m + c] = (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i * m + c] = (at(i + 1) - at(i - 1)) / (2.0 * h);
  }
  SampledFunction once(f.grid(), f.codomain(), std::move(d));
  return k == 1 ? once : finite_diff_derivative(once, 1);
}

SampledFunction random_piecewise_linear(UniformGrid grid, Codomain codomain, std::size_t knots,
                                        std::uint64_t seed, double amplitude) {
  if (knots == 0) throw std::invalid_argument("random_piecewise_linear needs at least one interval");
  const std::size_t m = codomain.components();
  std::mt19937_64 rng(seed);
  std::vector<double> kv((knots + 1) * m);
  for (auto& v : kv) v = amplitude * (2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0);
  const Interval dom = grid.domain();
  return SampledFunction::from_function(grid, codomain, [&](double x, std::span<double> out) {
    const double t = (x - dom.lo) / dom.length() * static_cast<double>(knots);
    const std::size_t k = std::min(static_cast<std::size_t>(t), knots - 1);
    const double w = t - static_cast<double>(k);
    for (std::size_t c = 0; c < m; ++c) out[c] = (1.0 - w) * kv[k * m + c] + w * kv[(k + 1) * m + c];
  });
}

}  // namespace nlfi
