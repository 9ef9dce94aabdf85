#pragma once

// Symbolic oracle for the higher-order chain rule: D^q (f o g) by
// substitution and repeated exact differentiation, compared against
// SigmaTable::expand on random polynomial pairs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "nlfi/certify.hpp"
#include "nlfi/expr.hpp"

namespace nlfi::test {

inline Expression random_polynomial(std::mt19937_64& rng, int max_degree) {
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const int d = deg(rng);
  const Expression x = Expression::variable(Var::x);
  Expression p = Expression::constant(coef(rng));
  for (int k = 1; k <= d; ++k) p = p + Expression::constant(coef(rng)) * pow(x, Expression::constant(k));
  return p;
}

struct SigmaOracleResult {
  double max_rel_error = 0.0;
  std::size_t comparisons = 0;
};

// Relative error |a - b| / max(1, |b|) over `pairs` polynomial pairs of degree
// <= 5 and `points` points in [-1, 1] for each order 1..max_q.
inline SigmaOracleResult sigma_oracle(int max_q, int pairs, int points, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> xs(-1.0, 1.0);
  SigmaOracleResult out;
  std::vector<SigmaTable> tables;
  for (int q = 1; q <= max_q; ++q) tables.push_back(sigma_table(q));
  for (int n = 0; n < pairs; ++n) {
    const Expression f = random_polynomial(rng, 5);
    const Expression g = random_polynomial(rng, 5);
    std::vector<Expression> fd{f}, gd{g};
    std::vector<Expression> comp{f.substitute(Var::x, g)};
    for (int q = 1; q <= max_q; ++q) {
      fd.push_back(fd.back().differentiate(Var::x));
      gd.push_back(gd.back().differentiate(Var::x));
      comp.push_back(comp.back().differentiate(Var::x));
    }
    for (int k = 0; k < points; ++k) {
      const double x = xs(rng);
      const double gx = g.eval(x);
      std::vector<double> fv, gv;
      for (int r = 0; r <= max_q; ++r) {
        fv.push_back(fd[r].eval(gx));
        gv.push_back(gd[r].eval(x));
      }
      for (int q = 1; q <= max_q; ++q) {
        const double a = tables[q - 1].expand(std::span<const double>(fv.data(), q + 1),
                                              std::span<const double>(gv.data(), q + 1));
        const double b = comp[q].eval(x);
        out.max_rel_error = std::max(out.max_rel_error, std::abs(a - b) / std::max(1.0, std::abs(b)));
        ++out.comparisons;
      }
    }
  }
  return out;
}

}  // namespace nlfi::test
