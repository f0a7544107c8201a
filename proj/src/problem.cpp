#include "penlab/problem.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "penlab/errors.hpp"

namespace penlab {

Problem::Problem(int dimension) : n_(dimension) {
  if (dimension <= 0) throw input_error("Problem: dimension must be positive");
  lower_.assign(static_cast<std::size_t>(n_), -kInf);
  upper_.assign(static_cast<std::size_t>(n_), kInf);
}

Problem& Problem::set_objective(ScalarFunc f) {
  if (!f.value) throw input_error("Problem: objective must be callable");
  objective_ = std::move(f);
  return *this;
}

Problem& Problem::add_equality(ScalarFunc h) {
  if (!h.value) throw input_error("Problem: equality must be callable");
  equalities_.push_back(std::move(h));
  return *this;
}

Problem& Problem::add_inequality(ScalarFunc g) {
  if (!g.value) throw input_error("Problem: inequality must be callable");
  inequalities_.push_back(std::move(g));
  return *this;
}

Problem& Problem::set_box(Vec lower, Vec upper) {
  if (lower.size() != static_cast<std::size_t>(n_) || upper.size() != static_cast<std::size_t>(n_))
    throw input_error("Problem: box bounds must have length n");
  for (int i = 0; i < n_; ++i) {
    if (std::isnan(lower[i]) || std::isnan(upper[i]) || lower[i] > upper[i])
      throw input_error("Problem: requires lower_i <= upper_i");
  }
  lower_ = std::move(lower);
  upper_ = std::move(upper);
  return *this;
}

Problem& Problem::allow_unconstrained() {
  allow_unconstrained_ = true;
  return *this;
}

Problem& Problem::set_spec(ProblemSpec spec) {
  spec_ = std::move(spec);
  return *this;
}

void Problem::validate() const {
  if (!objective_.value) throw config_error("Problem: no objective set");
  if (constraint_count() == 0 && !allow_unconstrained_)
    throw config_error("Problem: needs at least one constraint (or allow_unconstrained)");
}

void Problem::check_dim(const Vec& x) const {
  if (x.size() != static_cast<std::size_t>(n_))
    throw input_error("Problem: point has wrong dimension");
}

double Problem::checked_call(const ScalarFunc& f, const Vec& x, const char* what,
                             bool allow_pos_inf) const {
  double v = f.value(x);
  if (std::isnan(v)) throw evaluation_error(std::string(what) + " returned NaN");
  if (std::isinf(v) && !(allow_pos_inf && v > 0))
    throw evaluation_error(std::string(what) + " returned an infinite value");
  return v;
}

Vec Problem::gradient_of(const ScalarFunc& f, const Vec& x, const char* what) const {
  if (f.gradient) {
    Vec g = f.gradient(x);
    if (g.size() != static_cast<std::size_t>(n_))
      throw evaluation_error(std::string(what) + " gradient has wrong dimension");
    for (double gi : g)
      if (std::isnan(gi)) throw evaluation_error(std::string(what) + " gradient returned NaN");
    return g;
  }
  // central finite differences
  Vec g(static_cast<std::size_t>(n_));
  Vec xp = x, xm = x;
  for (int i = 0; i < n_; ++i) {
    const double h = std::max(1e-6, 1e-8 * std::abs(x[i]));
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    const double fp = checked_call(f, xp, what, false);
    const double fm = checked_call(f, xm, what, false);
    g[i] = (fp - fm) / (2.0 * h);
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return g;
}

double Problem::objective(const Vec& x) const {
  check_dim(x);
  validate();
  return checked_call(objective_, x, "objective", /*allow_pos_inf=*/true);
}

Vec Problem::objective_gradient(const Vec& x) const {
  check_dim(x);
  validate();
  return gradient_of(objective_, x, "objective");
}

double Problem::equality(std::size_t i, const Vec& x) const {
  check_dim(x);
  return checked_call(equalities_.at(i), x, "equality", false);
}

double Problem::inequality(std::size_t k, const Vec& x) const {
  check_dim(x);
  return checked_call(inequalities_.at(k), x, "inequality", false);
}

Vec Problem::equality_gradient(std::size_t i, const Vec& x) const {
  check_dim(x);
  return gradient_of(equalities_.at(i), x, "equality");
}

Vec Problem::inequality_gradient(std::size_t k, const Vec& x) const {
  check_dim(x);
  return gradient_of(inequalities_.at(k), x, "inequality");
}

bool Problem::in_box(const Vec& x) const {
  check_dim(x);
  for (int i = 0; i < n_; ++i)
    if (x[i] < lower_[i] || x[i] > upper_[i]) return false;
  return true;
}

Vec Problem::clamp_to_box(Vec x) const {
  check_dim(x);
  for (int i = 0; i < n_; ++i) x[i] = std::clamp(x[i], lower_[i], upper_[i]);
  return x;
}

Vec constraint_residuals(const Problem& p, const Vec& x) {
  Vec r;
  r.reserve(p.constraint_count());
  for (std::size_t i = 0; i < p.num_equalities(); ++i) r.push_back(p.equality(i, x));
  for (std::size_t k = 0; k < p.num_inequalities(); ++k) r.push_back(p.inequality(k, x));
  return r;
}

double feasibility_residual(const Problem& p, const Vec& x, ViolationKind kind) {
  const Vec r = constraint_residuals(p, x);
  const std::size_t m = p.num_equalities();
  double acc = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j) {
    const double t = j < m ? std::abs(r[j]) : std::max(0.0, r[j]);
    acc += kind == ViolationKind::euclidean ? t * t : t;
  }
  return kind == ViolationKind::euclidean ? std::sqrt(acc) : acc;
}

double shifted_violation_sq_from(const Vec& residuals, std::size_t num_eq, double eps,
                                 const Vec& w) {
  double acc = 0.0;
  for (std::size_t j = 0; j < residuals.size(); ++j) {
    const double wj = w.empty() ? 0.0 : w[j];
    const double s = residuals[j] - eps * wj;
    const double t = j < num_eq ? s : std::max(0.0, s);
    acc += t * t;
  }
  return acc;
}

static void check_shift(const Problem& p, double eps, const Vec& w) {
  if (!(eps > 0.0)) throw input_error("shifted_violation_sq: eps must be positive");
  if (!w.empty() && w.size() != p.constraint_count())
    throw input_error("shifted_violation_sq: w must have length m + l");
}

double shifted_violation_sq(const Problem& p, const Vec& x, double eps, const Vec& w) {
  check_shift(p, eps, w);
  return shifted_violation_sq_from(constraint_residuals(p, x), p.num_equalities(), eps, w);
}

double shifted_violation_sq_deps(const Problem& p, const Vec& x, double eps, const Vec& w) {
  check_shift(p, eps, w);
  if (w.empty()) return 0.0;
  const Vec r = constraint_residuals(p, x);
  const std::size_t m = p.num_equalities();
  double acc = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j) {
    const double s = r[j] - eps * w[j];
    const double active = j < m ? s : std::max(0.0, s);
    acc += -2.0 * active * w[j];
  }
  return acc;
}

Vec shifted_violation_sq_grad_x(const Problem& p, const Vec& x, double eps, const Vec& w) {
  check_shift(p, eps, w);
  const std::size_t m = p.num_equalities();
  Vec g(x.size(), 0.0);
  for (std::size_t i = 0; i < p.num_equalities(); ++i) {
    const double wj = w.empty() ? 0.0 : w[i];
    const double s = p.equality(i, x) - eps * wj;
    if (s == 0.0) continue;
    const Vec gh = p.equality_gradient(i, x);
    for (std::size_t d = 0; d < g.size(); ++d) g[d] += 2.0 * s * gh[d];
  }
  for (std::size_t k = 0; k < p.num_inequalities(); ++k) {
    const double wj = w.empty() ? 0.0 : w[m + k];
    const double s = p.inequality(k, x) - eps * wj;
    if (s <= 0.0) continue;  // max{0,.}^2 is C^1 with zero slope at the kink
    const Vec gg = p.inequality_gradient(k, x);
    for (std::size_t d = 0; d < g.size(); ++d) g[d] += 2.0 * s * gg[d];
  }
  return g;
}

// --- expression catalog ---------------------------------------------------

static void check_expr(const ExprSpec& e, std::size_t n) {
  switch (e.kind) {
    case ExprSpec::Kind::affine:
      if (e.params.size() != n + 1)
        throw config_error("affine expression needs n + 1 parameters");
      break;
    case ExprSpec::Kind::quadratic:
      if (e.params.size() != 2 * n + 1)
        throw config_error("quadratic expression needs 2n + 1 parameters");
      break;
    case ExprSpec::Kind::piecewise:
      if (e.params.size() != 1 || n != 1 || e.params[0] < 0.0)
        throw config_error("piecewise expression needs one parameter c >= 0 and n = 1");
      break;
    case ExprSpec::Kind::signsqrt:
      if (!e.params.empty() || n != 1)
        throw config_error("signsqrt expression takes no parameters and needs n = 1");
      break;
  }
}

double expr_value(const ExprSpec& e, const Vec& x) {
  const std::size_t n = x.size();
  check_expr(e, n);
  switch (e.kind) {
    case ExprSpec::Kind::affine: {
      double v = e.params[n];
      for (std::size_t i = 0; i < n; ++i) v += e.params[i] * x[i];
      return v;
    }
    case ExprSpec::Kind::quadratic: {
      double v = e.params[2 * n];
      for (std::size_t i = 0; i < n; ++i) v += e.params[i] * x[i] * x[i] + e.params[n + i] * x[i];
      return v;
    }
    case ExprSpec::Kind::piecewise: {
      const double c = e.params[0], t = x[0];
      if (t <= 1.0) return -t;
      if (t < c + 1.0) return -0.5 * t * t - 0.5;
      return -(c + 1.0) * t + 0.5 * c * c + c;
    }
    case ExprSpec::Kind::signsqrt: {
      const double t = x[0];
      return t >= 0.0 ? -std::sqrt(t) : std::sqrt(-t);
    }
  }
  throw input_error("expr_value: unknown kind");
}

Vec expr_gradient(const ExprSpec& e, const Vec& x) {
  const std::size_t n = x.size();
  check_expr(e, n);
  Vec g(n, 0.0);
  switch (e.kind) {
    case ExprSpec::Kind::affine:
      for (std::size_t i = 0; i < n; ++i) g[i] = e.params[i];
      return g;
    case ExprSpec::Kind::quadratic:
      for (std::size_t i = 0; i < n; ++i) g[i] = 2.0 * e.params[i] * x[i] + e.params[n + i];
      return g;
    case ExprSpec::Kind::piecewise: {
      const double c = e.params[0], t = x[0];
      g[0] = t <= 1.0 ? -1.0 : (t < c + 1.0 ? -t : -(c + 1.0));
      return g;
    }
    case ExprSpec::Kind::signsqrt: {
      // slope -1/(2 sqrt|x|); bounded surrogate at the nonsmooth origin
      const double a = std::max(std::abs(x[0]), 1e-16);
      g[0] = -0.5 / std::sqrt(a);
      return g;
    }
  }
  throw input_error("expr_gradient: unknown kind");
}

Problem build_problem(const ProblemSpec& spec) {
  if (spec.dimension <= 0) throw config_error("problem spec: dimension must be positive");
  const std::size_t n = static_cast<std::size_t>(spec.dimension);
  check_expr(spec.objective, n);
  for (const auto& e : spec.equalities) check_expr(e, n);
  for (const auto& e : spec.inequalities) check_expr(e, n);

  Problem p(spec.dimension);
  auto as_func = [](ExprSpec e) {
    return ScalarFunc{[e](const Vec& x) { return expr_value(e, x); },
                      [e](const Vec& x) { return expr_gradient(e, x); }};
  };
  p.set_objective(as_func(spec.objective));
  for (const auto& e : spec.equalities) p.add_equality(as_func(e));
  for (const auto& e : spec.inequalities) p.add_inequality(as_func(e));
  if (!spec.lower.empty() || !spec.upper.empty()) {
    if (spec.lower.size() != n || spec.upper.size() != n)
      throw config_error("problem spec: box bounds must have length n");
    p.set_box(spec.lower, spec.upper);
  }
  if (spec.equalities.empty() && spec.inequalities.empty()) p.allow_unconstrained();
  p.set_spec(spec);
  return p;
}

}  // namespace penlab
