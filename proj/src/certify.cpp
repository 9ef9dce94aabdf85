#include "nlfi/certify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace nlfi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string piece_term(std::string_view what, std::size_t i) {
  return std::string(what) + "[" + std::to_string(i + 1) + "]";
}

void finish(Certificate& c, double raw, const std::vector<SampledSup>& sups,
            const std::function<double(std::size_t)>& combine_level) {
  c.raw_constant = raw;
  c.constant = raw * c.safety_factor;
  if (sups.empty()) return;
  for (std::size_t lvl = 0; lvl < sups.front().levels.size(); ++lvl) {
    c.refinement.emplace_back(sups.front().levels[lvl].first, combine_level(lvl));
  }
}

void require_affine_scalar_s(const FractalProblem& pr, std::string_view what) {
  if (pr.variant() != Variant::affine) {
    throw CertificationError(std::string(what) + " certificate needs the affine variant");
  }
  for (std::size_t i = 0; i < pr.size(); ++i) {
    if (pr.s_is_matrix(i)) {
      throw CertificationError(std::string(what) +
                               " certificate needs scalar s_i; use the Banach-algebra certificate");
    }
  }
}

}  // namespace

std::string to_string(Space s) {
  switch (s) {
    case Space::bounded: return "bounded";
    case Space::continuous: return "continuous";
    case Space::lp: return "lp";
    case Space::calpha: return "calpha";
    case Space::banach_algebra: return "banach-algebra";
  }
  return "bounded";
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return std::round(r);
}

Certificate certify_sup(const FractalProblem& pr) {
  Certificate c;
  c.space = pr.has_discontinuous_fields() ? Space::bounded : Space::continuous;
  c.combine = "max";
  if (pr.variant() == Variant::general) {
    c.combine = "declared";
    c.raw_constant = *pr.declared_contraction();
    c.constant = c.raw_constant;
    c.safety_factor = 1.0;
    c.witnesses.push_back({"sampled y-contraction", 0, 0.0, pr.sampled_contraction()});
    return c;
  }
  require_affine_scalar_s(pr, "sup-norm");
  std::vector<SampledSup> sups;
  double raw = 0.0;
  for (std::size_t i = 0; i < pr.size(); ++i) {
    const auto& s = pr.field(i).s[0];
    auto sup = sampled_sup([&](double x) { return std::abs(s.eval(x, pr.eps())); }, pr.domain());
    c.witnesses.push_back({piece_term("|s|", i), i, sup.argmax, sup.value});
    BreakdownTerm t;
    t.piece = i;
    t.gamma_s = sup.value;
    t.contribution = sup.value;
    c.breakdown.push_back(t);
    raw = std::max(raw, sup.value);
    sups.push_back(std::move(sup));
  }
  finish(c, raw, sups, [&](std::size_t lvl) {
    double m = 0.0;
    for (const auto& s : sups) m = std::max(m, s.levels[lvl].second);
    return m;
  });
  return c;
}

Certificate certify_banach_algebra(const FractalProblem& pr) {
  if (pr.variant() != Variant::affine || pr.codomain().kind != Codomain::Kind::matrix) {
    throw CertificationError("Banach-algebra certificate needs a matrix codomain");
  }
  Certificate c;
  c.space = Space::banach_algebra;
  c.combine = "max";
  std::vector<SampledSup> sups;
  double raw = 0.0;
  for (std::size_t i = 0; i < pr.size(); ++i) {
    auto sup = sampled_sup([&](double x) { return pr.s_norm(i, x); }, pr.domain());
    c.witnesses.push_back({piece_term("||s||_2", i), i, sup.argmax, sup.value});
    BreakdownTerm t;
    t.piece = i;
    t.gamma_s = sup.value;
    t.contribution = sup.value;
    c.breakdown.push_back(t);
    raw = std::max(raw, sup.value);
    sups.push_back(std::move(sup));
  }
  finish(c, raw, sups, [&](std::size_t lvl) {
    double m = 0.0;
    for (const auto& s : sups) m = std::max(m, s.levels[lvl].second);
    return m;
  });
  return c;
}

Certificate certify_lp(const FractalProblem& pr, double p) {
  if (!(p >= 1.0)) throw CertificationError("L^p certificate needs p >= 1");
  if (pr.variant() != Variant::affine) throw CertificationError("L^p certificate needs the affine variant");
  Certificate c;
  c.space = Space::lp;
  c.p = p;
  std::vector<SampledSup> sups;
  double raw = 0.0;
  const bool infinite = std::isinf(p);
  c.combine = infinite ? "max" : "sum";
  for (std::size_t i = 0; i < pr.size(); ++i) {
    const auto& m = pr.map(i);
    if (!infinite && !m.differentiable()) {
      throw CertificationError("L^p certificate needs differentiable partition maps");
    }
    auto term = [&](double x) {
      const double sn = pr.s_norm(i, x);
      if (infinite) return sn;
      return std::abs(m.derivative(x)) * std::pow(sn, p);
    };
    auto sup = sampled_sup(term, pr.domain());
    c.witnesses.push_back({piece_term(infinite ? "|s|" : "|Dh|*|s|^p", i), i, sup.argmax, sup.value});
    BreakdownTerm t;
    t.piece = i;
    t.gamma_s = sup.value;
    t.contribution = sup.value;
    c.breakdown.push_back(t);
    raw = infinite ? std::max(raw, sup.value) : raw + sup.value;
    sups.push_back(std::move(sup));
  }
  finish(c, raw, sups, [&](std::size_t lvl) {
    double acc = 0.0;
    for (const auto& s : sups) acc = infinite ? std::max(acc, s.levels[lvl].second) : acc + s.levels[lvl].second;
    return acc;
  });
  return c;
}

Certificate certify_calpha(const FractalProblem& pr, int alpha) {
  if (alpha < 0 || alpha > 2) throw CertificationError("C^alpha certificate supports alpha <= 2");
  require_affine_scalar_s(pr, "C^alpha");
  if (!pr.fields_differentiable()) {
    throw CertificationError("C^alpha certificate needs smooth fields: non-differentiable field (floor/abs)");
  }
  for (const auto& m : pr.maps()) {
    if (!m.differentiable()) {
      throw CertificationError("C^alpha certificate needs differentiable partition maps");
    }
  }

  Certificate c;
  c.space = Space::calpha;
  c.alpha = alpha;
  c.combine = "max over (k, piece) of sum";
  const double eps = pr.eps();

  double raw = 0.0;
  double strict = 0.0;
  std::vector<double> raw_levels(3, 0.0);
  for (std::size_t i = 0; i < pr.size(); ++i) {
    const auto& m = pr.map(i);
    const Expression s0 = pr.field(i).s[0];
    const Expression s1 = s0.differentiate(Var::x);
    const Expression s2 = s1.differentiate(Var::x);

    // Derivatives of h^{-1} and s o h^{-1} at y = h(x), expressed through x.
    auto inv_deriv = [&](int order, double x) {
      const double d1 = m.derivative(x);
      if (d1 == 0.0) return kInf;
      if (order == 1) return 1.0 / d1;
      return -m.second_derivative(x) / (d1 * d1 * d1);
    };
    auto s_comp_deriv = [&](int order, double x) {
      if (order == 0) return s0.eval(x, eps);
      const double d1 = m.derivative(x);
      if (d1 == 0.0) return kInf;
      if (order == 1) return s1.eval(x, eps) / d1;
      return s2.eval(x, eps) / (d1 * d1) - s1.eval(x, eps) * m.second_derivative(x) / (d1 * d1 * d1);
    };

    std::vector<SampledSup> gamma_s(alpha + 1);
    for (int order = 0; order <= alpha; ++order) {
      gamma_s[order] = sampled_sup([&](double x) { return std::abs(s_comp_deriv(order, x)); }, pr.domain());
      c.witnesses.push_back({"|D^" + std::to_string(order) + "(s o h^-1)|[" + std::to_string(i + 1) + "]",
                             i, gamma_s[order].argmax, gamma_s[order].value});
    }
    std::map<std::vector<int>, SampledSup> gamma_h;
    for (int q = 1; q <= alpha; ++q) {
      for (const auto& [tuple, sigma] : sigma_table(q).entries) {
        if (gamma_h.count(tuple)) continue;
        auto sup = sampled_sup(
            [&, tup = tuple](double x) {
              double prod = 1.0;
              for (int order : tup) prod *= inv_deriv(order, x);
              return std::abs(prod);
            },
            pr.domain());
        std::string label = "|prod D^j h^-1|(";
        for (std::size_t j = 0; j < tuple.size(); ++j) label += (j ? "," : "") + std::to_string(tuple[j]);
        c.witnesses.push_back({label + ")[" + std::to_string(i + 1) + "]", i, sup.argmax, sup.value});
        gamma_h.emplace(tuple, std::move(sup));
      }
    }

    for (int k = 0; k <= alpha; ++k) {
      double sum = 0.0;
      double strict_sum = 0.0;
      std::vector<double> sum_levels(3, 0.0);
      // q = 0: only the k = 0 base term survives the empty inner r-sum
      {
        BreakdownTerm t;
        t.piece = i;
        t.k = k;
        t.q = 0;
        t.gamma_s = gamma_s[k].value;
        t.contribution = t.gamma_s;
        t.strict_only = k >= 1;
        if (k == 0) {
          sum += t.contribution;
          for (std::size_t l = 0; l < 3; ++l) sum_levels[l] += gamma_s[0].levels[l].second;
        }
        strict_sum += t.contribution;
        c.breakdown.push_back(t);
      }
      for (int q = 1; q <= k; ++q) {
        for (const auto& [tuple, sigma] : sigma_table(q).entries) {
          BreakdownTerm t;
          t.piece = i;
          t.k = k;
          t.q = q;
          t.tuple = tuple;
          t.binom = binomial(k, q);
          t.sigma = static_cast<double>(sigma);
          t.gamma_s = gamma_s[k - q].value;
          t.gamma_h = gamma_h.at(tuple).value;
          t.contribution = t.binom * t.sigma * t.gamma_s * t.gamma_h;
          sum += t.contribution;
          strict_sum += t.contribution;
          for (std::size_t l = 0; l < 3; ++l) {
            sum_levels[l] += t.binom * t.sigma * gamma_s[k - q].levels[l].second *
                             gamma_h.at(tuple).levels[l].second;
          }
          c.breakdown.push_back(t);
        }
      }
      raw = std::max(raw, sum);
      strict = std::max(strict, strict_sum);
      for (std::size_t l = 0; l < 3; ++l) raw_levels[l] = std::max(raw_levels[l], sum_levels[l]);
    }
  }
  c.raw_constant = raw;
  c.constant = raw * c.safety_factor;
  c.strict_constant = strict * c.safety_factor;
  const std::size_t counts[3] = {1025, 4097, 16385};
  for (std::size_t l = 0; l < 3; ++l) c.refinement.emplace_back(counts[l], raw_levels[l]);
  return c;
}

Certificate default_certificate(const FractalProblem& pr) {
  if (pr.variant() == Variant::affine && pr.codomain().kind == Codomain::Kind::matrix) {
    return certify_banach_algebra(pr);
  }
  return certify_sup(pr);
}

long long SigmaTable::at(const std::vector<int>& tuple) const {
  auto it = entries.find(tuple);
  return it == entries.end() ? 0 : it->second;
}

double SigmaTable::expand(std::span<const double> f_derivs, std::span<const double> g_derivs) const {
  double total = 0.0;
  for (const auto& [tuple, sigma] : entries) {
    double term = static_cast<double>(sigma) * f_derivs[tuple.size()];
    for (int j : tuple) term *= g_derivs[j];
    total += term;
  }
  return total;
}

SigmaTable sigma_table(int q) {
  if (q < 1 || q > 4) throw CertificationError("sigma_table supports 1 <= q <= 4");
  SigmaTable table;
  table.q = 1;
  table.entries[{1}] = 1;
  while (table.q < q) {
    SigmaTable next;
    next.q = table.q + 1;
    for (const auto& [tuple, sigma] : table.entries) {
      auto outer = tuple;
      outer.push_back(1);
      next.entries[outer] += sigma;
      for (std::size_t j = 0; j < tuple.size(); ++j) {
        auto inner = tuple;
        ++inner[j];
        next.entries[inner] += sigma;
      }
    }
    table = std::move(next);
  }
  return table;
}

bool sigma_matches_printed_recursion(const SigmaTable& table) {
  // sigma_q(q) = 1
  if (table.at({table.q}) != 1) return false;
  // r = q: sigma_q(1,...,1) = binom(q-1, q-1) * sigma_{q-1}(1,...,1) = 1
  return table.at(std::vector<int>(static_cast<std::size_t>(table.q), 1)) == 1;
}

}  // namespace nlfi
