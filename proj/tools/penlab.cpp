#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "penlab/config.hpp"
#include "penlab/errors.hpp"
#include "penlab/runner.hpp"

namespace {

struct Flags {
  std::string config_path;
  std::string problem;
  std::string phi, beta, x, w;
  double lambda = 0.0, alpha = 0.0, eps = 1.0, eps_max = 0.0, tol = 0.0, exponent = 0.0;
  bool half_factor = false;
  std::string family;
  long long seed = -1;
  int multistart = 0, oracle_resolution = 0;
  std::string json_path, csv_path;
  bool has_lambda = false, has_alpha = false, has_eps = false;
};

void add_common_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_path, "config file (key = value sections)");
  cmd->add_option("--problem", f.problem, "registry problem NAME[=param]");
  cmd->add_option("--lambda", f.lambda, "penalty parameter")->each([&](const std::string&) {
    f.has_lambda = true;
  });
  cmd->add_option("--w", f.w, "shift vector, comma separated");
  cmd->add_option("--alpha", f.alpha, "scaling exponent")->each([&](const std::string&) {
    f.has_alpha = true;
  });
  cmd->add_option("--phi", f.phi, "violation transform NAME[:param]");
  cmd->add_option("--beta", f.beta, "eps transform NAME[:param]");
  cmd->add_flag("--half-factor", f.half_factor, "use the 1/(2 eps) violation factor");
  cmd->add_option("--seed", f.seed, "solver seed");
  cmd->add_option("--multistart", f.multistart, "number of solver starts");
  cmd->add_option("--json", f.json_path, "write JSON report to PATH");
  cmd->add_option("--csv", f.csv_path, "write CSV rows to PATH");
  cmd->add_option("--eps-max", f.eps_max, "top of the eps bracket");
  cmd->add_option("--tol", f.tol, "bisection tolerance (estimate/verify)");
}

void merge_flags(const Flags& f, penlab::RunConfig& cfg) {
  if (!f.config_path.empty()) penlab::apply_config_file(f.config_path, cfg);
  if (!f.problem.empty()) cfg.registry_problem = f.problem;
  if (f.has_lambda) cfg.penalty.lambda = f.lambda;
  if (f.has_alpha) cfg.penalty.alpha = f.alpha;
  if (!f.w.empty()) penlab::apply_config_text("[penalty]\nw = " + f.w, cfg);
  if (!f.phi.empty()) cfg.penalty.phi = penlab::Transform::parse(f.phi);
  if (!f.beta.empty()) cfg.penalty.beta = penlab::Transform::parse(f.beta);
  if (f.half_factor) cfg.penalty.half_factor = true;
  if (f.seed >= 0) cfg.solve.seed = static_cast<std::uint64_t>(f.seed);
  if (f.multistart > 0) cfg.solve.multistart = f.multistart;
  if (!f.json_path.empty()) cfg.json_path = f.json_path;
  if (!f.csv_path.empty()) cfg.csv_path = f.csv_path;
  if (f.eps_max > 0.0) cfg.solve.eps_max = f.eps_max;
  if (f.tol > 0.0) cfg.exactness.bisect_tol = f.tol;
  if (!f.x.empty()) {
    cfg.x.clear();
    std::string item;
    std::istringstream in(f.x);
    while (std::getline(in, item, ','))
      cfg.x.push_back(std::stod(item));
    cfg.has_x = true;
  }
  if (f.has_eps) cfg.eps = f.eps;
  if (!f.family.empty()) cfg.family = f.family;
  if (f.exponent > 0.0) cfg.exponent = f.exponent;
  if (f.oracle_resolution > 0) cfg.oracle_resolution = f.oracle_resolution;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"penlab: smooth exact penalty functions and an empirical exactness lab"};
  app.require_subcommand(1);

  Flags flags;
  penlab::RunConfig cfg;

  CLI::App* eval = app.add_subcommand("eval", "evaluate the smooth penalty at (x, eps)");
  eval->add_option("--x", flags.x, "point, comma separated")->required();
  eval->add_option("--eps", flags.eps, "eps value")->each([&](const std::string&) {
    flags.has_eps = true;
  });
  add_common_flags(eval, flags);

  CLI::App* reduce =
      app.add_subcommand("reduce", "minimize the penalty over eps at fixed x");
  reduce->add_option("--x", flags.x, "point, comma separated")->required();
  add_common_flags(reduce, flags);

  CLI::App* solve = app.add_subcommand("solve", "multistart penalized minimization");
  solve->add_option("--oracle-resolution", flags.oracle_resolution,
                    "also run the grid oracle (n <= 3)");
  add_common_flags(solve, flags);

  CLI::App* estimate =
      app.add_subcommand("estimate", "bisect for the exact penalty parameter");
  estimate->add_option("--family", flags.family, "smooth|distance|l1");
  estimate->add_option("--exponent", flags.exponent, "distance-family exponent");
  add_common_flags(estimate, flags);

  CLI::App* verify = app.add_subcommand("verify", "check one theorem group");
  std::string group;
  verify
      ->add_option("group", group,
                   "square|w_bounds|l1_bounds|beta|transforms|nonexactness")
      ->required();
  add_common_flags(verify, flags);

  CLI::App* bench =
      app.add_subcommand("bench", "run the verification matrix over the registry");
  add_common_flags(bench, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (eval->parsed()) cfg.command = "eval";
    if (reduce->parsed()) cfg.command = "reduce";
    if (solve->parsed()) cfg.command = "solve";
    if (estimate->parsed()) cfg.command = "estimate";
    if (verify->parsed()) {
      cfg.command = "verify";
      cfg.verify_group = group;
    }
    if (bench->parsed()) cfg.command = "bench";
    merge_flags(flags, cfg);
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  }

  return penlab::run(std::move(cfg), std::cout, std::cerr);
}
