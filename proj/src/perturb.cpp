#include "nlfi/perturb.hpp"

#include <algorithm>
#include <future>
#include <ostream>

namespace nlfi {

ProblemFamily::ProblemFamily(ProblemSpec spec, Interval eps_domain)
    : spec_(std::move(spec)), eps_domain_(eps_domain) {
  if (!(eps_domain_.lo <= eps_domain_.hi)) throw ParameterError("eps domain must satisfy lo <= hi");
}

FractalProblem ProblemFamily::instantiate(double eps) const {
  if (!eps_domain_.contains(eps, 1e-12)) {
    throw ParameterError("eps = " + format_double(eps) + " outside the family's domain [" +
                         format_double(eps_domain_.lo) + ", " + format_double(eps_domain_.hi) + "]");
  }
  return FractalProblem(spec_, eps);
}

std::vector<SweepEntry> sweep(const ProblemFamily& fam, const std::vector<double>& eps_list,
                              std::size_t grid_intervals, const SolveOptions& options) {
  for (double e : eps_list) fam.instantiate(e);  // validates every eps before any work starts
  auto run = [&](double eps) {
    try {
      const FractalProblem pr = fam.instantiate(eps);
      const SampledFunction f0 = SampledFunction::zero(UniformGrid(pr.domain(), grid_intervals), pr.codomain());
      const Certificate cert = default_certificate(pr);
      return SweepEntry{eps, cert, solve_fixed_point(pr, f0, &cert, options)};
    } catch (const std::exception& e) {
      throw std::runtime_error("eps = " + format_shortest(eps) + ": " + e.what());
    }
  };
  std::vector<std::future<SweepEntry>> jobs;
  jobs.reserve(eps_list.size());
  for (double e : eps_list) jobs.push_back(std::async(std::launch::async, run, e));
  std::vector<SweepEntry> out;
  out.reserve(jobs.size());
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepEntry>& entries) {
  if (entries.empty()) throw std::invalid_argument("empty sweep");
  const UniformGrid& grid = entries.front().result.psi.grid();
  for (const auto& e : entries) {
    if (!(e.result.psi.grid() == grid)) throw GridMismatchError("sweep entries use different grids");
    if (e.result.psi.components() != 1) throw std::invalid_argument("sweep CSV supports scalar codomains only");
  }
  os << "x";
  for (const auto& e : entries) os << ",psi_eps=" << format_shortest(e.eps);
  os << '\n';
  for (std::size_t j = 0; j < grid.size(); ++j) {
    os << format_double(grid.point(j));
    for (const auto& e : entries) os << ',' << format_double(e.result.psi.scalar_at(j));
    os << '\n';
  }
}

double uniform_contraction(const std::vector<SweepEntry>& entries) {
  double L = 0.0;
  for (const auto& e : entries) L = std::max(L, e.certificate.constant);
  if (entries.empty() || !(L < 1.0)) {
    throw CertificateRequiredError("no uniform contraction constant < 1 over the sweep");
  }
  return L;
}

ContinuityBound continuity_bound(const FractalProblem& pr_eps, const SampledFunction& psi_eps,
                                 const SampledFunction& psi_eps0, double L) {
  if (!(L >= 0.0 && L < 1.0)) throw CertificateRequiredError("continuity bound needs a uniform L < 1");
  ContinuityBound out;
  out.L = L;
  out.bound = sup_distance(apply_rb(pr_eps, psi_eps0), psi_eps0) / (1.0 - L);
  out.actual = sup_distance(psi_eps, psi_eps0);
  return out;
}

ContinuityBound continuity_bound(const ProblemFamily& fam, double eps, double eps0, double tol,
                                 std::size_t grid_intervals, std::optional<double> L) {
  SolveOptions opt;
  opt.tol = tol;
  const auto entries = sweep(fam, {eps, eps0}, grid_intervals, opt);
  const double l = L ? *L : uniform_contraction(entries);
  const FractalProblem pr = fam.instantiate(eps);
  return continuity_bound(pr, entries[0].result.psi, entries[1].result.psi, l);
}

}  // namespace nlfi
