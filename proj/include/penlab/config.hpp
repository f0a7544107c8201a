#pragma once

#include <optional>
#include <string>

#include "penlab/exactness.hpp"
#include "penlab/penalty.hpp"
#include "penlab/problem.hpp"
#include "penlab/solver.hpp"

namespace penlab {

/// Everything one CLI invocation needs. Assembled from a config file
/// (sections [problem], [penalty], [solver], [exactness]) and then
/// overridden by command-line flags; flags win.
struct RunConfig {
  std::string command;        // eval|reduce|solve|estimate|verify|bench
  std::string verify_group;   // square|w_bounds|l1_bounds|beta|transforms|nonexactness|all

  std::optional<std::string> registry_problem;  // e.g. "sphere=4"
  std::optional<ProblemSpec> problem_spec;      // inline problem

  PenaltyConfig penalty;
  SolveSettings solve;
  ExactnessSettings exactness;  // exactness.solve is overwritten by `solve` at run time

  std::string family = "smooth";  // smooth|distance|l1 (estimate command)
  double exponent = 1.0;          // distance-family exponent
  std::pair<double, double> bracket{0.0, 1.0};

  Vec x;              // evaluation point for eval/reduce
  bool has_x = false;
  double eps = 1.0;   // evaluation eps for eval

  int oracle_resolution = 0;  // solve: >0 computes the grid-oracle gap (n <= 3)

  std::string json_path, csv_path;
};

/// Parse the line-oriented `key = value` config text. Unknown sections or
/// keys raise config_error naming the offender. `into` accumulates, so a
/// file can be applied on top of defaults (and flags on top of the file).
void apply_config_text(const std::string& text, RunConfig& into);
void apply_config_file(const std::string& path, RunConfig& into);

/// Canonical [problem] section text for a spec; parse(serialize(s)) == s.
std::string serialize_problem_spec(const ProblemSpec& spec);
ProblemSpec parse_problem_spec(const std::string& text);

/// Canonical [penalty] section text; parse(serialize(c)) == c.
std::string serialize_penalty_config(const PenaltyConfig& cfg);

/// "name: p1, p2" form used inside config files.
std::string serialize_expr(const ExprSpec& e);
ExprSpec parse_expr(const std::string& text);

/// Resolve the configured problem (registry beats inline spec).
Problem resolve_problem(const RunConfig& cfg);

}  // namespace penlab
