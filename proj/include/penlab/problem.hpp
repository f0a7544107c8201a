#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace penlab {

using Vec = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Which norm the constraint violation is measured in.
enum class ViolationKind { euclidean, l1 };

/// Scalar function of x with an optional analytic gradient. When the
/// gradient is absent a central finite difference with step
/// h_i = max(1e-6, 1e-8*|x_i|) is used.
struct ScalarFunc {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;  // may be empty
};

/// Catalog entry describing one objective/constraint expression. Only the
/// forms below are representable in config files; arbitrary callables can
/// still be attached to a Problem programmatically (spec = nullopt).
struct ExprSpec {
  enum class Kind { affine, quadratic, piecewise, signsqrt };
  Kind kind = Kind::affine;
  // affine:     a_1..a_n, b                 -> a.x + b
  // quadratic:  q_1..q_n, a_1..a_n, b       -> sum q_i x_i^2 + a.x + b
  // piecewise:  c                           -> 1-D ramp/parabola/ramp objective
  // signsqrt:   (none)                      -> -sign(x) sqrt(|x|)
  std::vector<double> params;

  bool operator==(const ExprSpec&) const = default;
};

/// Serializable description of a constrained problem. build_problem turns
/// it into an executable Problem with analytic gradients.
struct ProblemSpec {
  int dimension = 0;
  Vec lower, upper;  // box; +-inf allowed
  ExprSpec objective;
  std::vector<ExprSpec> equalities;
  std::vector<ExprSpec> inequalities;

  bool operator==(const ProblemSpec&) const = default;
};

/// A constrained minimization instance:
///   min f(x)  s.t.  h_i(x) = 0, g_k(x) <= 0, x in [lower, upper].
/// The box is enforced by solvers, never folded into violation measures.
/// Immutable after construction; safe to share across threads.
class Problem {
 public:
  explicit Problem(int dimension);

  Problem& set_objective(ScalarFunc f);
  Problem& add_equality(ScalarFunc h);
  Problem& add_inequality(ScalarFunc g);
  Problem& set_box(Vec lower, Vec upper);
  Problem& allow_unconstrained();  // permit m + l = 0
  Problem& set_spec(ProblemSpec spec);

  int dimension() const { return n_; }
  std::size_t num_equalities() const { return equalities_.size(); }
  std::size_t num_inequalities() const { return inequalities_.size(); }
  std::size_t constraint_count() const { return equalities_.size() + inequalities_.size(); }
  const Vec& lower() const { return lower_; }
  const Vec& upper() const { return upper_; }
  const std::optional<ProblemSpec>& spec() const { return spec_; }

  double objective(const Vec& x) const;
  Vec objective_gradient(const Vec& x) const;
  double equality(std::size_t i, const Vec& x) const;
  double inequality(std::size_t k, const Vec& x) const;
  Vec equality_gradient(std::size_t i, const Vec& x) const;
  Vec inequality_gradient(std::size_t k, const Vec& x) const;

  bool in_box(const Vec& x) const;
  Vec clamp_to_box(Vec x) const;

  /// Finalize: validates invariants (box ordering, m + l >= 1 unless
  /// declared unconstrained). Called automatically by the evaluators.
  void validate() const;

 private:
  double checked_call(const ScalarFunc& f, const Vec& x, const char* what,
                      bool allow_pos_inf) const;
  Vec gradient_of(const ScalarFunc& f, const Vec& x, const char* what) const;
  void check_dim(const Vec& x) const;

  int n_;
  ScalarFunc objective_;
  std::vector<ScalarFunc> equalities_;
  std::vector<ScalarFunc> inequalities_;
  Vec lower_, upper_;
  bool allow_unconstrained_ = false;
  std::optional<ProblemSpec> spec_;
};

/// Violation of the equality/inequality system at x, box excluded.
/// euclidean: sqrt(sum h_i^2 + sum max{0,g_k}^2); l1: sum |h_i| + sum max{0,g_k}.
double feasibility_residual(const Problem& p, const Vec& x, ViolationKind kind);

/// Shifted squared violation  sum (h_i - eps w_i)^2 + sum max{0, g_k - eps w_{m+k}}^2.
/// w may be empty (treated as zero) or of length m + l.
double shifted_violation_sq(const Problem& p, const Vec& x, double eps, const Vec& w);

/// Raw constraint residuals (h_1..h_m, g_1..g_l) at x, used by evaluators
/// that sweep eps with fixed x.
Vec constraint_residuals(const Problem& p, const Vec& x);

/// Shifted squared violation from precomputed residuals.
double shifted_violation_sq_from(const Vec& residuals, std::size_t num_eq, double eps,
                                 const Vec& w);

/// d/d(eps) of shifted_violation_sq at fixed x.
double shifted_violation_sq_deps(const Problem& p, const Vec& x, double eps, const Vec& w);

/// Gradient in x of shifted_violation_sq.
Vec shifted_violation_sq_grad_x(const Problem& p, const Vec& x, double eps, const Vec& w);

/// Evaluate / differentiate a catalog expression.
double expr_value(const ExprSpec& e, const Vec& x);
Vec expr_gradient(const ExprSpec& e, const Vec& x);

/// Build an executable Problem (with analytic gradients) from a spec.
Problem build_problem(const ProblemSpec& spec);

}  // namespace penlab
