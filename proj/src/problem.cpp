#include "nlfi/problem.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace nlfi {

namespace {

// Closed-form inverses that divide by eps are replaced by numeric inversion
// inside this band around eps = 0.
constexpr double kEpsSingularBand = 1e-8;

std::string piece_label(std::size_t i) { return "piece " + std::to_string(i + 1); }

void require_no_y(const Expression& e, const std::string& where) {
  if (e.depends_on(Var::y)) throw ValidationError(where + " may not reference y");
}

}  // namespace

FractalProblem::FractalProblem(const ProblemSpec& spec, double eps)
    : name_(spec.name),
      domain_(spec.domain),
      codomain_(spec.codomain),
      variant_(spec.variant),
      eps_(eps),
      declared_c_(spec.contraction_c) {
  if (spec.maps.empty()) throw ValidationError("problem needs at least one partition map");
  if (!(domain_.lo < domain_.hi)) throw ValidationError("domain must satisfy lo < hi");

  for (std::size_t i = 0; i < spec.maps.size(); ++i) {
    const auto& m = spec.maps[i];
    require_no_y(m.h, piece_label(i) + ": h");
    std::optional<Expression> inv = m.h_inv;
    if (inv && inv->depends_on(Var::eps) && std::abs(eps) < kEpsSingularBand) inv.reset();
    maps_.emplace_back(m.h, inv, domain_, eps, i);
  }
  partition_ = validate_partition(maps_);
  if (partition_.verdict == PartitionVerdict::invalid) {
    std::string msg = "invalid partition";
    for (const auto& issue : partition_.issues) msg += "; " + issue;
    throw ValidationError(msg);
  }
  locator_ = PieceLocator(maps_);

  const std::size_t m = codomain_.components();
  if (variant_ == Variant::affine) {
    if (spec.fields.size() != maps_.size()) {
      throw ValidationError("expected " + std::to_string(maps_.size()) + " field entries, got " +
                            std::to_string(spec.fields.size()));
    }
    for (std::size_t i = 0; i < spec.fields.size(); ++i) {
      const auto& f = spec.fields[i];
      if (f.q.size() != m) {
        throw ValidationError(piece_label(i) + ": q needs " + std::to_string(m) + " components");
      }
      const bool matrix_s = f.s.size() == m && codomain_.kind == Codomain::Kind::matrix && m > 1;
      if (f.s.size() != 1 && !matrix_s) {
        throw ValidationError(piece_label(i) + ": s must be a scalar" +
                              std::string(codomain_.kind == Codomain::Kind::matrix
                                              ? " or a " + std::to_string(codomain_.dim) + "x" +
                                                    std::to_string(codomain_.dim) + " matrix"
                                              : ""));
      }
      FieldSpec bound;
      for (const auto& e : f.q) {
        require_no_y(e, piece_label(i) + ": q");
        bound.q.push_back(e.bind(Var::eps, eps));
      }
      for (const auto& e : f.s) {
        require_no_y(e, piece_label(i) + ": s");
        bound.s.push_back(e.bind(Var::eps, eps));
      }
      fields_.push_back(std::move(bound));
    }
  } else {
    if (codomain_.kind != Codomain::Kind::scalar) {
      throw ValidationError("the general variant supports a scalar codomain only");
    }
    if (spec.v.size() != maps_.size()) {
      throw ValidationError("expected " + std::to_string(maps_.size()) + " v entries");
    }
    if (!declared_c_ || !(*declared_c_ >= 0.0 && *declared_c_ < 1.0)) {
      throw ValidationError("the general variant needs a declared contraction factor c in [0, 1)");
    }
    for (const auto& e : spec.v) v_.push_back(e.bind(Var::eps, eps));

    std::mt19937_64 rng(20240917);
    std::uniform_real_distribution<double> ux(domain_.lo, domain_.hi);
    std::uniform_real_distribution<double> uy(-10.0, 10.0);
    for (std::size_t i = 0; i < v_.size(); ++i) {
      for (int t = 0; t < 1000; ++t) {
        const double x = ux(rng);
        const double y1 = uy(rng);
        const double y2 = uy(rng);
        if (y1 == y2) continue;
        const double r = std::abs(v_[i].eval({x, y1, eps}) - v_[i].eval({x, y2, eps})) / std::abs(y1 - y2);
        sampled_c_ = std::max(sampled_c_, r);
      }
      for (double x : chebyshev_nodes(domain_, 257)) {
        v_zero_bound_ = std::max(v_zero_bound_, std::abs(v_[i].eval({x, 0.0, eps})));
      }
    }
    if (sampled_c_ > *declared_c_ + 1e-12) {
      throw ValidationError("sampled y-contraction factor " + format_double(sampled_c_) +
                            " exceeds the declared c = " + format_double(*declared_c_));
    }
  }
}

void FractalProblem::q(std::size_t i, double y, std::span<double> out) const {
  const auto& f = fields_.at(i);
  for (std::size_t c = 0; c < f.q.size(); ++c) out[c] = f.q[c].eval(y, eps_);
}

void FractalProblem::s(std::size_t i, double y, std::span<double> out) const {
  const auto& f = fields_.at(i);
  for (std::size_t c = 0; c < f.s.size(); ++c) out[c] = f.s[c].eval(y, eps_);
}

double FractalProblem::s_norm(std::size_t i, double y) const {
  const auto& f = fields_.at(i);
  if (f.s.size() == 1) return std::abs(f.s[0].eval(y, eps_));
  std::vector<double> m(f.s.size());
  s(i, y, m);
  return spectral_norm(m, codomain_.dim);
}

void FractalProblem::apply_piece(std::size_t i, double y, std::span<const double> fy,
                                 std::span<double> out) const {
  if (variant_ == Variant::general) {
    out[0] = v_[i].eval({y, fy[0], eps_});
    return;
  }
  const std::size_t m = codomain_.components();
  std::vector<double> qv(m);
  q(i, y, qv);
  if (!s_is_matrix(i)) {
    const double sv = fields_[i].s[0].eval(y, eps_);
    for (std::size_t c = 0; c < m; ++c) out[c] = qv[c] + sv * fy[c];
    return;
  }
  std::vector<double> sm(m), prod(m);
  s(i, y, sm);
  matmul(sm, fy, prod, codomain_.dim);
  for (std::size_t c = 0; c < m; ++c) out[c] = qv[c] + prod[c];
}

bool FractalProblem::has_discontinuous_fields() const {
  auto disc = [](const Expression& e) { return e.contains(Func::floor); };
  for (const auto& f : fields_) {
    if (std::any_of(f.q.begin(), f.q.end(), disc) || std::any_of(f.s.begin(), f.s.end(), disc)) return true;
  }
  return std::any_of(v_.begin(), v_.end(), disc);
}

bool FractalProblem::fields_differentiable() const {
  auto diff = [](const Expression& e) { return e.is_differentiable(); };
  for (const auto& f : fields_) {
    if (!std::all_of(f.q.begin(), f.q.end(), diff) || !std::all_of(f.s.begin(), f.s.end(), diff)) return false;
  }
  return std::all_of(v_.begin(), v_.end(), diff);
}

}  // namespace nlfi
