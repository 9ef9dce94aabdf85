#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlfi/certify.hpp"
#include "nlfi/funcrep.hpp"
#include "nlfi/problem.hpp"

namespace nlfi {

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when the iteration is requested without a usable contraction factor.
class CertificateRequiredError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The RB operator discretised on a grid. Piece attribution, preimages
/// h_i^{-1}(x) and the affine coefficients are computed once per grid point.
/// Holds a reference to the problem, which must outlive it.
class RbOperator {
 public:
  RbOperator(const FractalProblem& pr, UniformGrid grid, double inverse_tol = 1e-12);
  RbOperator(FractalProblem&&, UniformGrid, double = 1e-12) = delete;

  SampledFunction apply(const SampledFunction& f) const;

  const FractalProblem& problem() const { return *problem_; }
  const UniformGrid& grid() const { return grid_; }
  std::size_t piece(std::size_t j) const { return piece_[j]; }
  double preimage(std::size_t j) const { return preimage_[j]; }

 private:
  const FractalProblem* problem_;
  UniformGrid grid_;
  std::vector<std::size_t> piece_;
  std::vector<double> preimage_;
  std::vector<double> q_;  // components per point
  std::vector<double> s_;  // s stride per point
  std::size_t s_stride_ = 1;
};

/// One application of T on f's grid.
SampledFunction apply_rb(const FractalProblem& pr, const SampledFunction& f);

struct SolveOptions {
  double tol = 1e-9;
  std::size_t max_iter = 10000;
  /// Contraction factor used instead of a certificate (explicit user override).
  std::optional<double> override_factor;
  /// Keep every iterate psi_0, psi_1, ... in SolveResult::history.
  bool keep_history = false;
};

struct SolveResult {
  SampledFunction psi;
  std::size_t iterations = 0;
  double residual = 0.0;       // sup_distance(T psi, psi)
  double apriori_bound = 0.0;  // s^k / (1 - s) * sup_distance(psi_1, psi_0)
  double s_used = 0.0;
  double first_step = 0.0;     // sup_distance(psi_1, psi_0)
  bool certified = false;
  std::vector<SampledFunction> history;
};

/// Picard iteration psi_k = T psi_{k-1} from f0. Stops once the step falls to
/// tol * (1 - s) / s, so the Banach estimate bounds the true error by tol.
/// Needs a contractive certificate or SolveOptions::override_factor.
SolveResult solve_fixed_point(const FractalProblem& pr, const SampledFunction& f0,
                              const Certificate* certificate, const SolveOptions& options);

struct PointwiseValue {
  Value value;
  double error_bound = 0.0;  // s^depth * bound on ||psi||_inf
};

/// Unrolls psi(x) = q_i(y) + s_i(y) psi(y), y = h_i^{-1}(x), `depth` times
/// with psi := 0 at the bottom. Affine variant, depth in [1, 64].
PointwiseValue evaluate_pointwise(const FractalProblem& pr, double x, int depth);

struct JoinupEntry {
  ContactPoint contact;
  double mismatch = 0.0;             // |[q + s psi](x1) - [q + s psi](x2)| across the two pieces
  double derivative_mismatch = 0.0;  // one-sided slopes of psi at the contact point (order >= 1)
};

struct JoinupReport {
  bool skipped = false;
  std::string reason;
  int order = 0;
  double tol = 0.0;
  double max_mismatch = 0.0;
  bool passed = true;
  std::vector<JoinupEntry> entries;
};

/// Join-up check at every contact point of the partition. Problems with
/// discontinuous fields are skipped (bounded-space path).
JoinupReport check_joinup(const FractalProblem& pr, const SampledFunction& psi, double tol, int order = 0);

}  // namespace nlfi
