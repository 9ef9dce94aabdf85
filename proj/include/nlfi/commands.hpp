#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nlfi/document.hpp"

namespace nlfi {

/// Exit codes of every command.
enum ExitCode : int { exit_certified = 0, exit_error = 1, exit_not_certified = 2 };

struct CommandOptions {
  std::optional<std::size_t> grid;  // grid intervals; document value, then 4096
  std::optional<double> tol;        // document value, then 1e-9
  std::size_t max_iter = 10000;
  bool force = false;
  std::uint64_t seed = 7;
  std::filesystem::path out = ".";
};

/// "lo:hi:step" (inclusive, snapped to the step lattice) or a comma list.
std::vector<double> parse_eps_list(const std::string& text);

int cmd_solve(const ProblemDocument& doc, const CommandOptions& opt, std::ostream& log);
/// space: sup | lp:<p> | calpha:<alpha> | algebra
int cmd_certify(const ProblemDocument& doc, const std::string& space, const CommandOptions& opt, std::ostream& log);
int cmd_sweep(const ProblemDocument& doc, const std::string& eps, const CommandOptions& opt, std::ostream& log);
/// method: deterministic | chaos
int cmd_attractor(const ProblemDocument& doc, const std::string& method, std::size_t points,
                  const CommandOptions& opt, std::ostream& log);
int cmd_examples_list(std::ostream& log);
/// Writes everything for one built-in example into opt.out / name.
int cmd_examples_run(const std::string& name, const CommandOptions& opt, std::ostream& log);

}  // namespace nlfi
