#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

#include "nlfi/certify.hpp"
#include "nlfi/problem.hpp"
#include "nlfi/rb.hpp"

namespace nlfi {

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A problem whose expressions reference `eps`, valid for eps in eps_domain.
class ProblemFamily {
 public:
  ProblemFamily(ProblemSpec spec, Interval eps_domain);

  const ProblemSpec& spec() const { return spec_; }
  Interval eps_domain() const { return eps_domain_; }

  /// Binds eps and revalidates the partition. Throws ParameterError outside eps_domain.
  FractalProblem instantiate(double eps) const;

 private:
  ProblemSpec spec_;
  Interval eps_domain_;
};

struct SweepEntry {
  double eps = 0.0;
  Certificate certificate;
  SolveResult result;
};

/// One certified solve per eps on a shared grid, run concurrently; entries
/// come back in input order. Failures are rethrown tagged with eps.
std::vector<SweepEntry> sweep(const ProblemFamily& fam, const std::vector<double>& eps_list,
                              std::size_t grid_intervals, const SolveOptions& options);

/// Header `x,psi_eps=<e1>,psi_eps=<e2>,...`; scalar codomain only.
void write_sweep_csv(std::ostream& os, const std::vector<SweepEntry>& entries);

/// Largest certified constant over the sweep; throws if it is not < 1.
double uniform_contraction(const std::vector<SweepEntry>& entries);

struct ContinuityBound {
  double bound = 0.0;   // sup_distance(T(eps) psi_eps0, psi_eps0) / (1 - L)
  double actual = 0.0;  // sup_distance(psi_eps, psi_eps0)
  double L = 0.0;
  bool holds(double slack) const { return actual <= bound + slack; }
};

/// Perturbation estimate from already solved fixed points.
ContinuityBound continuity_bound(const FractalProblem& pr_eps, const SampledFunction& psi_eps,
                                 const SampledFunction& psi_eps0, double L);

/// Solves at eps and eps0 (tolerance `tol`) and evaluates the estimate with
/// L = max of the two certified constants unless given.
ContinuityBound continuity_bound(const ProblemFamily& fam, double eps, double eps0, double tol,
                                 std::size_t grid_intervals = 4096, std::optional<double> L = std::nullopt);

}  // namespace nlfi
