#include "nlfi/commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "nlfi/certify.hpp"
#include "nlfi/ifs.hpp"
#include "nlfi/perturb.hpp"
#include "nlfi/rb.hpp"
#include "nlfi/report.hpp"

namespace nlfi {

namespace {

constexpr std::size_t kDefaultGrid = 4096;
constexpr double kDefaultTol = 1e-9;
constexpr double kJoinupTol = 1e-7;
constexpr std::size_t kBurnIn = 100;
// random piecewise-linear test function for the G(Tf) check: |f'| <= 4
constexpr std::size_t kRandomKnots = 4;
constexpr double kRandomAmplitude = 0.5;

std::size_t grid_of(const ProblemDocument& doc, const CommandOptions& opt) {
  return opt.grid ? *opt.grid : doc.grid.value_or(kDefaultGrid);
}
double tol_of(const ProblemDocument& doc, const CommandOptions& opt) {
  return opt.tol ? *opt.tol : doc.tol.value_or(kDefaultTol);
}

double parse_real(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw std::invalid_argument("invalid " + what + ": '" + text + "'");
  return v;
}

json header(const std::string& command, const ProblemDocument& doc) {
  json j;
  j["schema_version"] = 1;
  j["command"] = command;
  j["problem"] = doc.spec.name;
  j["eps"] = doc.eps;
  return j;
}

Certificate certificate_for_space(const FractalProblem& pr, const std::string& space) {
  if (space == "sup") return certify_sup(pr);
  if (space == "algebra") return certify_banach_algebra(pr);
  const auto colon = space.find(':');
  if (colon != std::string::npos) {
    const std::string kind = space.substr(0, colon);
    const std::string arg = space.substr(colon + 1);
    if (kind == "lp") {
      const double p = (arg == "inf" || arg == "infinity") ? std::numeric_limits<double>::infinity()
                                                            : parse_real(arg, "L^p exponent");
      return certify_lp(pr, p);
    }
    if (kind == "calpha") {
      const double a = parse_real(arg, "C^alpha order");
      if (a != std::floor(a)) throw std::invalid_argument("C^alpha order must be an integer");
      return certify_calpha(pr, static_cast<int>(a));
    }
  }
  throw std::invalid_argument("unknown space '" + space + "' (expected sup, lp:<p>, calpha:<alpha> or algebra)");
}

struct SolveOutcome {
  int code = exit_error;
  Certificate certificate;
  std::optional<SolveResult> result;
  json report;
};

// Certify, iterate and assemble the solve report (no files written).
SolveOutcome run_solve(const ProblemDocument& doc, const CommandOptions& opt) {
  const FractalProblem pr = doc.instantiate();
  const std::size_t n = grid_of(doc, opt);
  const double tol = tol_of(doc, opt);
  SolveOutcome out;
  out.certificate = default_certificate(pr);
  json& r = out.report = header("solve", doc);
  r["grid"] = n;
  r["tol"] = tol;
  r["max_iter"] = opt.max_iter;
  r["certificate"] = to_json(out.certificate);
  r["partition"] = to_json(pr.partition());
  json notes = json::array();
  if (doc.source.contains("notes")) notes.push_back(doc.source["notes"]);

  const bool certified = out.certificate.contractive();
  if (!certified && !opt.force) {
    r["status"] = "not-certified";
    r["solve"] = nullptr;
    r["joinup"] = nullptr;
    r["notes"] = std::move(notes);
    out.code = exit_not_certified;
    return out;
  }
  SolveOptions so;
  so.tol = tol;
  so.max_iter = opt.max_iter;
  if (!certified) {
    so.override_factor = out.certificate.constant;
    notes.push_back("iterated without a contraction certificate (--force)");
  }
  out.result = solve_fixed_point(pr, SampledFunction::zero(UniformGrid(pr.domain(), n), pr.codomain()),
                                 &out.certificate, so);
  r["status"] = certified ? "certified" : "forced";
  r["solve"] = to_json(*out.result);
  r["joinup"] = to_json(check_joinup(pr, out.result->psi, kJoinupTol));
  r["notes"] = std::move(notes);
  out.code = exit_certified;
  return out;
}

std::string csv_of(const SampledFunction& f) {
  std::ostringstream os;
  f.write_csv(os);
  return os.str();
}

struct SweepOutcome {
  int code = exit_error;
  std::string csv;
  json report;
};

SweepOutcome run_sweep(const ProblemDocument& doc, const std::vector<double>& eps_list, const CommandOptions& opt) {
  const ProblemFamily fam = doc.family();
  const std::size_t n = grid_of(doc, opt);
  SolveOptions so;
  so.tol = tol_of(doc, opt);
  so.max_iter = opt.max_iter;
  const double eps0 = fam.eps_domain().contains(0.0) ? 0.0 : fam.eps_domain().lo;

  std::vector<double> all = eps_list;
  const bool has_eps0 = std::find(all.begin(), all.end(), eps0) != all.end();
  if (!has_eps0) all.push_back(eps0);
  auto entries = sweep(fam, all, n, so);
  std::size_t i0 = entries.size() - 1;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (entries[k].eps == eps0) {
      i0 = k;
      break;
    }
  }
  const SampledFunction ref = entries[i0].result.psi;

  SweepOutcome out;
  json& r = out.report = header("sweep", doc);
  r["grid"] = n;
  r["tol"] = so.tol;
  r["eps0"] = eps0;
  r["eps_domain"] = {fam.eps_domain().lo, fam.eps_domain().hi};
  double L = 0.0;
  for (const auto& e : entries) L = std::max(L, e.certificate.constant);
  r["uniform_L"] = L;
  const bool uniform = L < 1.0;
  if (!has_eps0) entries.pop_back();

  json rows = json::array();
  for (const auto& e : entries) {
    json row;
    row["eps"] = e.eps;
    row["certificate_constant"] = e.certificate.constant;
    row["iterations"] = e.result.iterations;
    row["residual"] = json_number(e.result.residual);
    row["apriori_bound"] = json_number(e.result.apriori_bound);
    if (uniform) {
      const FractalProblem pr = fam.instantiate(e.eps);
      const ContinuityBound cb = continuity_bound(pr, e.result.psi, ref, L);
      row["bound"] = json_number(cb.bound);
      row["actual"] = json_number(cb.actual);
      row["holds"] = cb.holds(10.0 / (static_cast<double>(n) * static_cast<double>(n)));
    } else {
      row["bound"] = nullptr;
      row["actual"] = sup_distance(e.result.psi, ref);
      row["holds"] = nullptr;
    }
    rows.push_back(std::move(row));
  }
  r["entries"] = std::move(rows);
  r["status"] = uniform ? "certified" : "not-certified";
  std::ostringstream os;
  write_sweep_csv(os, entries);
  out.csv = os.str();
  out.code = uniform ? exit_certified : exit_not_certified;
  return out;
}

std::string partition_csv(const FractalProblem& pr, std::size_t n) {
  std::ostringstream os;
  os << "x";
  for (std::size_t i = 0; i < pr.size(); ++i) os << ",h" << i + 1;
  os << '\n';
  const UniformGrid grid(pr.domain(), n);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.point(j);
    os << format_double(x);
    for (std::size_t i = 0; i < pr.size(); ++i) os << ',' << format_double(pr.map(i).forward(x));
    os << '\n';
  }
  return os.str();
}

}  // namespace

std::vector<double> parse_eps_list(const std::string& text) {
  std::vector<double> out;
  if (text.empty()) throw std::invalid_argument("empty eps list");
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw std::invalid_argument("eps range must be lo:hi:step");
    const double lo = parse_real(parts[0], "eps");
    const double hi = parse_real(parts[1], "eps");
    const double step = parse_real(parts[2], "eps step");
    if (!(step > 0.0) || !(hi >= lo)) throw std::invalid_argument("eps range needs lo <= hi and step > 0");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (std::size_t k = 0; k < count; ++k) {
      double v = std::round((lo + static_cast<double>(k) * step) * 1e12) / 1e12;
      out.push_back(v == 0.0 ? 0.0 : v);
    }
    return out;
  }
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) {
    const double v = parse_real(p, "eps");
    out.push_back(v == 0.0 ? 0.0 : v);
  }
  return out;
}

int cmd_solve(const ProblemDocument& doc, const CommandOptions& opt, std::ostream& log) {
  SolveOutcome s = run_solve(doc, opt);
  if (s.result) write_atomic(opt.out / "psi.csv", csv_of(s.result->psi));
  write_json_atomic(opt.out / "report.json", s.report);
  log << "certificate: " << to_string(s.certificate.space) << " constant " << format_double(s.certificate.constant)
      << " (" << (s.certificate.contractive() ? "contractive" : "not-certified") << ")\n";
  if (s.result) {
    log << "iterations: " << s.result->iterations << ", residual " << format_double(s.result->residual)
        << ", a-priori bound " << format_double(s.result->apriori_bound) << "\n";
  } else {
    log << "not solved: no contraction certificate (use --force to iterate anyway)\n";
  }
  return s.code;
}

int cmd_certify(const ProblemDocument& doc, const std::string& space, const CommandOptions& opt, std::ostream& log) {
  const FractalProblem pr = doc.instantiate();
  const Certificate c = certificate_for_space(pr, space);
  json r = header("certify", doc);
  r["requested_space"] = space;
  r["certificate"] = to_json(c);
  write_json_atomic(opt.out / "report.json", r);
  log << to_string(c.space) << " constant " << format_double(c.constant) << " ("
      << (c.contractive() ? "contractive" : "not-certified") << ")\n";
  return c.contractive() ? exit_certified : exit_not_certified;
}

int cmd_sweep(const ProblemDocument& doc, const std::string& eps, const CommandOptions& opt, std::ostream& log) {
  const SweepOutcome s = run_sweep(doc, parse_eps_list(eps), opt);
  write_atomic(opt.out / "sweep.csv", s.csv);
  write_json_atomic(opt.out / "report.json", s.report);
  log << "sweep: " << s.report["entries"].size() << " eps values, uniform L "
      << format_double(s.report["uniform_L"].get<double>()) << "\n";
  return s.code;
}

int cmd_attractor(const ProblemDocument& doc, const std::string& method, std::size_t points,
                  const CommandOptions& opt, std::ostream& log) {
  if (method != "deterministic" && method != "chaos") {
    throw std::invalid_argument("unknown method '" + method + "' (expected deterministic or chaos)");
  }
  if (points == 0) throw std::invalid_argument("--points must be positive");
  const FractalProblem pr = doc.instantiate();
  const GraphIfs g(pr);
  const std::size_t m = pr.codomain().components();
  std::vector<double> start(m + 1, 0.0);
  start[0] = pr.domain().lo;

  PointSet cloud(m);
  std::size_t iterations = 0;
  if (method == "chaos") {
    cloud = chaos_game(g, start, points + kBurnIn, kBurnIn, opt.seed);
  } else {
    const double logn = std::log(static_cast<double>(std::max<std::size_t>(pr.size(), 2)));
    iterations = static_cast<std::size_t>(std::ceil(std::log(static_cast<double>(points)) / logn)) + 8;
    cloud = deterministic_iterate(g, PointSet(m, start), iterations, points);
  }
  write_atomic(opt.out / "attractor.csv", [&] {
    std::ostringstream os;
    cloud.write_csv(os);
    return os.str();
  }());

  SolveOutcome s = run_solve(doc, opt);
  json r = header("attractor", doc);
  r["method"] = method;
  r["points"] = cloud.size();
  if (method == "chaos") {
    r["seed"] = opt.seed;
    r["burn_in"] = kBurnIn;
  } else {
    r["iterations"] = iterations;
  }
  r["lip_h"] = g.lip_h();
  r["lambda"] = g.lambda();
  r["theta"] = g.theta();
  r["contraction_factor"] = g.contraction_factor();
  r["status"] = s.result ? s.report["status"] : json("not-certified");
  const std::size_t n = grid_of(doc, opt);
  r["graph_resolution"] = pr.domain().length() / static_cast<double>(n);
  if (s.result) {
    const PointSet graph = graph_of(s.result->psi, s.result->psi.grid().spacing());
    r["hausdorff_to_graph"] = hausdorff_distance(cloud, graph, 1.0);
    r["residual"] = json_number(s.result->residual);
  } else {
    r["hausdorff_to_graph"] = nullptr;
    r["residual"] = nullptr;
  }
  const SampledFunction f = random_piecewise_linear(UniformGrid(pr.domain(), n), pr.codomain(), kRandomKnots,
                                                    opt.seed, kRandomAmplitude);
  r["graph_transform_check"] = graph_transform_check(pr, f);
  r["random_f"] = {{"intervals", kRandomKnots}, {"amplitude", kRandomAmplitude}, {"seed", opt.seed}};
  r["caveat"] = "finite samples: distances carry an error of the order of the sampling resolution";
  write_json_atomic(opt.out / "check.json", r);
  log << "attractor: " << cloud.size() << " points, theta " << format_double(g.theta());
  if (s.result) log << ", d_H to graph " << format_double(r["hausdorff_to_graph"].get<double>());
  log << "\n";
  return s.code;
}

int cmd_examples_list(std::ostream& log) {
  for (const auto& e : builtin_examples()) log << e.name << "  " << e.description << "\n";
  return exit_certified;
}

int cmd_examples_run(const std::string& name, const CommandOptions& opt, std::ostream& log) {
  const BuiltinExample& ex = builtin_example(name);
  const ProblemDocument doc = parse_document(ex.document);
  CommandOptions local = opt;
  local.out = opt.out / name;
  write_json_atomic(local.out / "problem.json", ex.document);

  SolveOutcome s = run_solve(doc, local);
  if (s.result) write_atomic(local.out / "psi.csv", csv_of(s.result->psi));
  write_json_atomic(local.out / "report.json", s.report);

  const FractalProblem pr = doc.instantiate();
  std::vector<std::string> spaces;
  if (pr.codomain().kind == Codomain::Kind::matrix) {
    spaces = {"algebra"};
  } else {
    spaces = {"sup", "lp:1", "lp:2", "lp:inf", "calpha:0", "calpha:1", "calpha:2"};
  }
  json certs = header("certificates", doc);
  json list = json::array();
  for (const auto& sp : spaces) {
    json item{{"requested_space", sp}};
    try {
      item["certificate"] = to_json(certificate_for_space(pr, sp));
    } catch (const std::exception& e) {
      item["error"] = e.what();
    }
    list.push_back(std::move(item));
  }
  certs["certificates"] = std::move(list);
  write_json_atomic(local.out / "certificates.json", certs);

  if (ex.figure == "partition.csv") {
    write_atomic(local.out / ex.figure, partition_csv(pr, grid_of(doc, local)));
  } else if (doc.eps_domain) {
    // eleven equally spaced parameters across the family's domain
    std::vector<double> eps(11);
    for (std::size_t k = 0; k < eps.size(); ++k) {
      const double v = std::round((doc.eps_domain->lo + doc.eps_domain->length() * static_cast<double>(k) / 10.0) * 1e12) / 1e12;
      eps[k] = v == 0.0 ? 0.0 : v;
    }
    const SweepOutcome sw = run_sweep(doc, eps, local);
    write_atomic(local.out / "sweep.csv", sw.csv);
    write_json_atomic(local.out / "sweep_report.json", sw.report);
    if (!ex.figure.empty()) write_atomic(local.out / ex.figure, sw.csv);
  } else if (!ex.figure.empty() && s.result) {
    write_atomic(local.out / ex.figure, csv_of(s.result->psi));
  }

  log << ex.document.dump(2) << "\n";
  log << name << ": certificate " << to_string(s.certificate.space) << " " << format_double(s.certificate.constant);
  if (s.result) {
    log << ", " << s.result->iterations << " iterations, residual " << format_double(s.result->residual);
  }
  log << "\noutput: " << local.out.string() << "\n";
  return s.code;
}

}  // namespace nlfi
