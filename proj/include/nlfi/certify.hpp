#pragma once

#include <cstddef>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nlfi/problem.hpp"

namespace nlfi {

class CertificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Space { bounded, continuous, lp, calpha, banach_algebra };
std::string to_string(Space s);

/// Where a sampled supremum was attained.
struct Witness {
  std::string term;
  std::size_t piece = 0;
  double x = 0.0;
  double value = 0.0;
};

/// One summand of a certificate. For sup/L^p/algebra certificates only
/// `piece` and `contribution` are meaningful; the C^alpha fields follow the
/// binom(k,q) * sigma * gamma_s(i,k,q) * gamma_h(i,tuple) structure.
struct BreakdownTerm {
  std::size_t piece = 0;
  int k = 0;
  int q = 0;
  std::vector<int> tuple;
  double binom = 1.0;
  double sigma = 1.0;
  double gamma_s = 0.0;
  double gamma_h = 1.0;
  double contribution = 0.0;
  bool strict_only = false;  // q = 0, k >= 1 Leibniz term excluded from the headline constant
};

struct Certificate {
  Space space = Space::bounded;
  double p = 0.0;      // L^p exponent (infinity allowed)
  int alpha = 0;       // C^alpha order
  double constant = 0.0;
  double raw_constant = 0.0;      // before the safety factor
  double safety_factor = 1.0 + 1e-9;
  std::string combine;            // how breakdown reproduces raw_constant
  std::vector<Witness> witnesses;
  std::vector<BreakdownTerm> breakdown;
  std::optional<double> strict_constant;  // C^alpha with the q = 0 terms included
  std::vector<std::pair<std::size_t, double>> refinement;  // (samples, raw constant)

  bool contractive() const { return constant < 1.0; }
};

/// Dense Chebyshev sampling of sup |fn| with refinement levels 1025, 4097, 16385.
struct SampledSup {
  double value = 0.0;
  double argmax = 0.0;
  std::vector<std::pair<std::size_t, double>> levels;
};
template <class Fn>
SampledSup sampled_sup(Fn&& fn, Interval iv);

Certificate certify_sup(const FractalProblem& pr);
Certificate certify_banach_algebra(const FractalProblem& pr);
Certificate certify_lp(const FractalProblem& pr, double p);
Certificate certify_calpha(const FractalProblem& pr, int alpha);

/// The best certificate for driving the fixed-point iteration: the algebra
/// bound for matrix codomains, the declared factor for the general variant,
/// the sup bound otherwise.
Certificate default_certificate(const FractalProblem& pr);

/// Faa di Bruno coefficients over ordered tuples (i_1, ..., i_r), sum = q:
/// D^q (f o g) = sum_r f^(r)(g) sum_tuples sigma(tuple) prod_j g^(i_j).
struct SigmaTable {
  int q = 1;
  std::map<std::vector<int>, long long> entries;

  long long at(const std::vector<int>& tuple) const;
  /// f_derivs[r] = f^(r)(g(x)) for r = 0..q, g_derivs[j] = g^(j)(x) for j = 0..q.
  double expand(std::span<const double> f_derivs, std::span<const double> g_derivs) const;
};

/// Built by differentiating each term of D^{q-1}(f o g): the outer derivative
/// appends a 1 to the tuple, the inner derivative raises one entry by 1.
SigmaTable sigma_table(int q);

/// Checks the entries that the literal recursion sigma_{q+1}(q+1) = 1 and
/// sigma_{q+1}(i_1..i_r, q+1-r) = binom(q,r) sigma_q(i_1..i_r) determines
/// unambiguously (the tuple-sum preserving case r = q and the single-entry tuple).
bool sigma_matches_printed_recursion(const SigmaTable& table);

double binomial(int n, int k);

template <class Fn>
SampledSup sampled_sup(Fn&& fn, Interval iv) {
  SampledSup out;
  out.argmax = iv.lo;
  for (std::size_t n : {std::size_t{1025}, std::size_t{4097}, std::size_t{16385}}) {
    for (double x : chebyshev_nodes(iv, n)) {
      const double v = fn(x);
      if (v > out.value || std::isnan(v)) {
        out.value = v;
        out.argmax = x;
      }
    }
    out.levels.emplace_back(n, out.value);
  }
  return out;
}

}  // namespace nlfi
