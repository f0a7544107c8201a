#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "penlab/penalty.hpp"
#include "penlab/problem.hpp"

namespace penlab {

struct SolveSettings {
  int max_iterations = 5000;
  double armijo_c = 1e-4;
  double armijo_shrink = 0.5;
  double initial_step = 1.0;
  double grad_tolerance = 1e-9;       // on the projected-gradient norm
  int stagnation_window = 50;         // stop when best value stalls this long
  int multistart = 64;
  std::uint64_t seed = 1;
  double eps_max = 0.0;               // required by minimize_penalized
  double sample_clip = 1e3;           // infinite box bounds clipped for sampling
  bool grid_seed = true;              // coarse-scan seeding for n <= 3
  double unbounded_threshold = -1e12; // values below abort the run as unbounded
};

struct StartTrace {
  int start_index = 0;
  int iterations = 0;
  double value = kInf;
  Vec point;  // final iterate
  std::string stop_reason;  // converged|stagnant|step_underflow|max_iterations|
                            // infinite_start|unbounded|error
};

struct SolveReport {
  Vec best_point;  // (x, eps) for penalized solves, x otherwise
  double best_value = kInf;
  bool converged = false;
  bool unbounded = false;
  std::vector<StartTrace> traces;
  std::optional<double> oracle_gap;
};

/// A function with box bounds, minimized by multistart projected gradient
/// descent with Armijo backtracking.
struct BoxFunction {
  int dim = 0;
  Vec lower, upper;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
};

/// Deterministic low-discrepancy start points (Halton + seeded rotation),
/// infinite bounds clipped to +-clip.
std::vector<Vec> lds_box_starts(const Vec& lower, const Vec& upper, int count,
                                std::uint64_t seed, double clip);

/// Best `top_k` cells of a coarse per-axis scan; empty when dim > 3.
std::vector<Vec> grid_seed_starts(const BoxFunction& fn, int per_axis, int top_k,
                                  double clip);

/// Multistart projected-gradient minimization from the given starts.
SolveReport minimize_box(const BoxFunction& fn, const SolveSettings& s,
                         const std::vector<Vec>& starts);

/// Minimize F(x, eps) over box x [0, eps_max]. Gradient steps keep eps
/// strictly positive; the eps = 0 branch and the one-dimensional
/// eps-reduction at each run's final x are compared explicitly.
SolveReport minimize_penalized(const Problem& p, const PenaltyConfig& cfg,
                               const SolveSettings& s);

/// Exhaustive minimum over a resolution^n x-grid times a resolution-point
/// eps grid on (0, eps_max], plus the eps = 0 slice. Requires n <= 3 and a
/// finite box. Deterministic.
std::pair<Vec, double> grid_oracle(const Problem& p, const PenaltyConfig& cfg,
                                   int resolution, double eps_max);

/// Minimum of f over exactly-feasible grid points, if any.
std::optional<std::pair<Vec, double>> grid_feasible_min(const Problem& p, int resolution);

}  // namespace penlab
