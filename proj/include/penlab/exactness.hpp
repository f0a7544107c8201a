#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "penlab/benchmarks.hpp"
#include "penlab/penalty.hpp"
#include "penlab/solver.hpp"

namespace penlab {

struct ExactnessSettings {
  /// Exactness margin: a penalized minimum above f* - tol counts as exact.
  double tol_exact_rel = 1e-6;               // tol = tol_exact_rel * (1 + |f*|)
  std::optional<double> tol_exact_abs;       // overrides the relative rule
  double tol_eps = 1e-6;                     // "minimizer has eps = 0" threshold
  double bisect_tol = 2e-3;                  // final bracket width
  double widen_factor = 2.0;                 // geometric widening of the bracket top
  double widen_cap = 1e7;                    // give up (not exact) beyond this
  int spot_checks = 3;                       // monotonicity probes per estimate
  SolveSettings solve{.multistart = 32};     // eps_max = 0 -> derived from start set

  double exact_tol_for(double f_star) const {
    return tol_exact_abs ? *tol_exact_abs : tol_exact_rel * (1.0 + std::abs(f_star));
  }
};

enum class ExactStatus { exact, not_exact, indeterminate };

/// Outcome of one exactness test, with the solve that justifies it.
struct Evidence {
  ExactStatus status = ExactStatus::indeterminate;
  double parameter = 0.0;
  double f_star = 0.0;
  double margin = 0.0;  // solve minimum minus f*
  SolveReport report;
};

struct RelationRow {
  std::string problem;
  std::string family;
  std::string relation;
  double lhs = 0.0;
  double rhs = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string note;
};

struct ExactnessReport {
  enum class Status { estimated, not_exact, inconsistent, indeterminate };
  std::string problem;
  FamilyDescriptor family;
  Status status = Status::indeterminate;
  double estimate = 0.0;            // midpoint of the final bracket
  double bracket_lo = 0.0, bracket_hi = 0.0;
  double tol = 0.0;                 // bisection tolerance used
  double f_star = 0.0;
  double eps_max = 0.0;
  std::vector<std::pair<double, bool>> observations;  // (parameter, exact)
  std::string inconsistency_note;
  std::vector<RelationRow> relations;
};

/// Default eps bracket top: 10 (1 + max violation over the start sample).
double default_eps_max(const Problem& p, const SolveSettings& s);

/// Empirical test of condition "inf penalty = f* with minimizing eps = 0".
Evidence is_exact_at(const FamilyDescriptor& family, double parameter, const Problem& p,
                     double f_star, const ExactnessSettings& s);

/// Bisection on the monotone exactness predicate; widens the top of the
/// bracket geometrically first, probes parameter 0 when the bottom tests
/// exact, and spot-checks monotonicity away from the located boundary.
ExactnessReport estimate_exact_parameter(const FamilyDescriptor& family, const Problem& p,
                                         const std::string& problem_name, double f_star,
                                         std::pair<double, double> bracket, double tol,
                                         const ExactnessSettings& s);

/// Convenience wrapper: benchmark f*, default bracket (0, 1), oracle
/// comparison row appended when the instance knows the answer.
ExactnessReport estimate_on(const BenchmarkInstance& bench, const FamilyDescriptor& family,
                            const ExactnessSettings& s,
                            std::pair<double, double> bracket = {0.0, 1.0});

std::vector<RelationRow> verify_square_relation(const BenchmarkInstance& bench,
                                                const ExactnessSettings& s);
std::vector<RelationRow> verify_w_bounds(const BenchmarkInstance& bench, double w,
                                         const ExactnessSettings& s);
std::vector<RelationRow> verify_l1_bounds(const BenchmarkInstance& bench,
                                          const ExactnessSettings& s);
std::vector<RelationRow> verify_beta_reduction(const BenchmarkInstance& bench,
                                               const ExactnessSettings& s);
std::vector<RelationRow> verify_transform_bounds(const BenchmarkInstance& bench,
                                                 const ExactnessSettings& s);

enum class NonexactnessCase { signsqrt_w, power_phi };

struct NonexactnessEvidence {
  bool found = false;
  Vec witness_x;
  double witness_eps = 0.0;
  double value = 0.0;
  double f_star = 0.0;
  double margin = 0.0;  // value - f*
};

/// signsqrt_w: scans the curve x = eps w of the shifted sqrt-transform
/// penalty for values below f*. power_phi: line search toward the sphere
/// optimum under phi(t) = t^1.5, where the reduced penalty dips below f*.
NonexactnessEvidence demonstrate_nonexactness(NonexactnessCase c, double lambda_probe,
                                              double w = 1.0);

}  // namespace penlab
