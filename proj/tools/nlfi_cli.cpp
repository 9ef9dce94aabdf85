#include <iostream>

#include "CLI11.hpp"
#include "nlfi/commands.hpp"

namespace {

void add_common(CLI::App* cmd, nlfi::CommandOptions& opt, std::size_t& grid, double& tol) {
  cmd->add_option("--grid", grid, "grid intervals N (default: document value, else 4096)")->check(CLI::Range(2, 1 << 24));
  cmd->add_option("--tol", tol, "fixed-point tolerance (default: document value, else 1e-9)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", opt.max_iter, "iteration limit")->capture_default_str();
  cmd->add_flag("--force", opt.force, "iterate even without a contraction certificate");
  cmd->add_option("--seed", opt.seed, "random seed")->capture_default_str();
  cmd->add_option("--out", opt.out, "output directory")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed points of Read-Bajraktarevic operators: solve, certify, sweep, attractor"};
  app.require_subcommand(1);

  nlfi::CommandOptions opt;
  std::size_t grid = 0;
  double tol = 0.0;
  std::string problem;
  std::string space = "sup";
  std::string eps;
  std::string method = "chaos";
  std::size_t points = 200000;
  std::string example_action;
  std::string example_name;

  auto* solve = app.add_subcommand("solve", "solve the fixed-point problem; writes psi.csv and report.json");
  solve->add_option("problem", problem, "problem JSON file")->required();
  add_common(solve, opt, grid, tol);

  auto* certify = app.add_subcommand("certify", "contraction certificate; writes report.json");
  certify->add_option("problem", problem, "problem JSON file")->required();
  certify->add_option("--space", space, "sup | lp:<p> | calpha:<alpha> | algebra")->capture_default_str();
  add_common(certify, opt, grid, tol);

  auto* sweep = app.add_subcommand("sweep", "solve across eps; writes sweep.csv and report.json");
  sweep->add_option("problem", problem, "problem JSON file with eps_domain")->required();
  sweep->add_option("--eps", eps, "lo:hi:step or a comma-separated list")->required();
  add_common(sweep, opt, grid, tol);

  auto* attractor = app.add_subcommand("attractor", "graph-IFS attractor; writes attractor.csv and check.json");
  attractor->add_option("problem", problem, "problem JSON file")->required();
  attractor->add_option("--method", method, "deterministic | chaos")->capture_default_str();
  attractor->add_option("--points", points, "number of points (deterministic: thinning cap)")->capture_default_str();
  add_common(attractor, opt, grid, tol);

  auto* examples = app.add_subcommand("examples", "built-in examples: list | run <name>");
  examples->add_option("action", example_action, "list | run")->required()->check(CLI::IsMember({"list", "run"}));
  examples->add_option("name", example_name, "example name for run");
  add_common(examples, opt, grid, tol);

  CLI11_PARSE(app, argc, argv);
  if (grid != 0) opt.grid = grid;
  if (tol != 0.0) opt.tol = tol;

  try {
    if (*solve) return nlfi::cmd_solve(nlfi::load_document(problem), opt, std::cout);
    if (*certify) return nlfi::cmd_certify(nlfi::load_document(problem), space, opt, std::cout);
    if (*sweep) return nlfi::cmd_sweep(nlfi::load_document(problem), eps, opt, std::cout);
    if (*attractor) return nlfi::cmd_attractor(nlfi::load_document(problem), method, points, opt, std::cout);
    if (*examples) {
      if (example_action == "list") return nlfi::cmd_examples_list(std::cout);
      if (example_name.empty()) throw std::invalid_argument("examples run needs a name");
      return nlfi::cmd_examples_run(example_name, opt, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return nlfi::exit_error;
  }
  return nlfi::exit_error;
}
