#pragma once

#include <optional>
#include <string>

#include "penlab/problem.hpp"
#include "penlab/transform.hpp"

namespace penlab {

/// One member of the smooth penalty family
///   F(x, eps) = f(x) + (lambda^alpha / (c eps)) phi(Delta(x, eps)) + lambda beta(eps)
/// with Delta(x, eps) = shifted_violation_sq(x, eps, w) and c = 2 when
/// half_factor is set, 1 otherwise. At eps = 0 the value is f(x) for
/// feasible x and +inf otherwise.
struct PenaltyConfig {
  double lambda = 0.0;
  Vec w;                 // empty = zero shift; else length m + l
  double alpha = 0.0;
  Transform phi = Transform::identity();
  Transform beta = Transform::identity();
  bool half_factor = false;

  bool plain() const {  // identity transforms, zero shift
    return phi.is_identity() && beta.is_identity() && zero_shift();
  }
  bool zero_shift() const {
    for (double wi : w)
      if (wi != 0.0) return false;
    return true;
  }
};

/// Which penalty family a parameter estimate refers to.
/// smooth:   F with `config` (lambda is the swept parameter)
/// distance: f + sigma (phi(d^2))^(exponent/2)  -- exponent 1 is the classical
///           Euclidean-residual penalty, exponent 2/3 the fractional-power one
/// l1:       f + nu (sum |h_i| + sum max{0, g_k})
struct FamilyDescriptor {
  enum class Kind { smooth, distance, l1 };
  Kind kind = Kind::smooth;
  PenaltyConfig config;                       // smooth
  Transform phi = Transform::identity();      // distance
  double exponent = 1.0;                      // distance

  std::string label() const;

  static FamilyDescriptor smooth(PenaltyConfig cfg);
  static FamilyDescriptor distance(Transform phi = Transform::identity(),
                                   double exponent = 1.0);
  static FamilyDescriptor l1();
};

double smooth_penalty_eval(const Problem& p, const PenaltyConfig& cfg, const Vec& x,
                           double eps);

/// F at eps > 0 from a precomputed objective value and constraint residuals
/// (h_1..h_m, g_1..g_l); used by evaluators that sweep eps or x grids.
double smooth_penalty_from(const PenaltyConfig& cfg, double f, const Vec& residuals,
                           std::size_t num_eq, double eps);

/// Gradient (d/dx_1..d/dx_n, d/d eps); requires eps > 0 and Delta inside
/// phi's domain.
Vec smooth_penalty_grad(const Problem& p, const PenaltyConfig& cfg, const Vec& x,
                        double eps);

/// Closed-form minimizer of F(x, .) over eps > 0 as a function of the
/// violation d = d(0, Phi(x)); only for identity transforms with zero shift.
double epsilon_argmin(const PenaltyConfig& cfg, double d);

struct EpsReduction {
  double value = kInf;
  double eps = 0.0;
  bool closed_form = false;
};

/// inf over eps in (0, eps_max] of F(x, .), returning the minimizing eps.
/// Closed forms are used for (phi = beta = id, w = 0) and for
/// (phi = id, w = 0, beta = sqrt_double, alpha = 0) when the unconstrained
/// minimizer lies inside the bracket; otherwise a 256-point log grid on
/// (1e-12, eps_max] followed by golden-section refinement.
EpsReduction reduce_over_epsilon(const Problem& p, const PenaltyConfig& cfg, const Vec& x,
                                 double eps_max);
/// Same, forcing the numeric path (used as the closed-form oracle's counterpart).
EpsReduction reduce_over_epsilon_numeric(const Problem& p, const PenaltyConfig& cfg,
                                         const Vec& x, double eps_max);
double reduced_penalty(const Problem& p, const PenaltyConfig& cfg, const Vec& x,
                       double eps_max);

/// f(x) + sigma (phi(d^2))^(exponent/2) with d the Euclidean residual.
double distance_penalty(const Problem& p, double sigma, const Vec& x, const Transform& phi,
                        double exponent = 1.0);
Vec distance_penalty_grad(const Problem& p, double sigma, const Vec& x, const Transform& phi,
                          double exponent = 1.0);

/// f(x) + nu * l1 residual.
double l1_penalty(const Problem& p, double nu, const Vec& x);
Vec l1_penalty_grad(const Problem& p, double nu, const Vec& x);

/// Description of how F(x, .) reduces over eps for a given config.
struct ReducedForm {
  enum class Kind { closed_form, numeric };
  Kind kind = Kind::numeric;
  /// sigma with min_eps F = f + sigma d when one exists (identity transforms,
  /// zero shift): sigma = 2 lambda^((alpha+1)/2) / sqrt(c).
  std::optional<double> sigma_equivalent;
  std::function<double(double)> epsilon_minimizer;  // d -> argmin eps
};

ReducedForm reduced_form_for(const PenaltyConfig& cfg);

}  // namespace penlab
