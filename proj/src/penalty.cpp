#include "penlab/penalty.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

#include "penlab/errors.hpp"

namespace penlab {

namespace {

// lambda^alpha / c with the IEC pow(0, 0) = 1 convention, so alpha = 0
// leaves the violation term in place even at lambda = 0.
double violation_scale(const PenaltyConfig& cfg) {
  const double c = cfg.half_factor ? 2.0 : 1.0;
  return std::pow(cfg.lambda, cfg.alpha) / c;
}

void check_cfg(const Problem& p, const PenaltyConfig& cfg) {
  if (cfg.lambda < 0.0 || std::isnan(cfg.lambda))
    throw input_error("penalty: lambda must be nonnegative");
  if (cfg.alpha < 0.0 || std::isnan(cfg.alpha))
    throw input_error("penalty: alpha must be nonnegative");
  if (!cfg.w.empty() && cfg.w.size() != p.constraint_count())
    throw input_error("penalty: w must be empty or of length m + l");
}

double beta_term(const PenaltyConfig& cfg, double eps) {
  if (cfg.lambda == 0.0) return 0.0;
  return cfg.lambda * cfg.beta.value(eps);
}

}  // namespace

std::string FamilyDescriptor::label() const {
  char buf[160];
  switch (kind) {
    case Kind::smooth: {
      std::string ws;
      for (std::size_t i = 0; i < config.w.size(); ++i) {
        char b[40];
        std::snprintf(b, sizeof b, "%g", config.w[i]);
        if (i) ws += '|';
        ws += b;
      }
      // ';' separators keep the label usable as a single CSV field
      std::snprintf(buf, sizeof buf, "F[phi=%s;beta=%s;alpha=%g;w=%s%s]",
                    config.phi.name().c_str(), config.beta.name().c_str(), config.alpha,
                    ws.c_str(), config.half_factor ? ";half" : "");
      return buf;
    }
    case Kind::distance:
      std::snprintf(buf, sizeof buf, "G[phi=%s;exp=%g]", phi.name().c_str(), exponent);
      return buf;
    case Kind::l1: return "H_l1";
  }
  return "unknown";
}

FamilyDescriptor FamilyDescriptor::smooth(PenaltyConfig cfg) {
  FamilyDescriptor d;
  d.kind = Kind::smooth;
  d.config = std::move(cfg);
  return d;
}

FamilyDescriptor FamilyDescriptor::distance(Transform phi, double exponent) {
  FamilyDescriptor d;
  d.kind = Kind::distance;
  d.phi = std::move(phi);
  d.exponent = exponent;
  return d;
}

FamilyDescriptor FamilyDescriptor::l1() {
  FamilyDescriptor d;
  d.kind = Kind::l1;
  return d;
}

double smooth_penalty_from(const PenaltyConfig& cfg, double f, const Vec& residuals,
                           std::size_t num_eq, double eps) {
  if (!(eps > 0.0)) throw input_error("smooth_penalty_from: eps must be positive");
  const double delta = shifted_violation_sq_from(residuals, num_eq, eps, cfg.w);
  if (delta >= cfg.phi.domain_sup()) return kInf;
  if (std::isinf(f)) return kInf;
  return f + violation_scale(cfg) / eps * cfg.phi.value(delta) + beta_term(cfg, eps);
}

double smooth_penalty_eval(const Problem& p, const PenaltyConfig& cfg, const Vec& x,
                           double eps) {
  check_cfg(p, cfg);
  if (eps < 0.0 || std::isnan(eps)) throw input_error("smooth_penalty_eval: eps must be >= 0");
  if (eps == 0.0) {
    if (feasibility_residual(p, x, ViolationKind::euclidean) == 0.0) return p.objective(x);
    return kInf;
  }
  const double delta = shifted_violation_sq(p, x, eps, cfg.w);
  if (delta >= cfg.phi.domain_sup()) return kInf;
  const double f = p.objective(x);
  if (std::isinf(f)) return kInf;
  return f + violation_scale(cfg) / eps * cfg.phi.value(delta) + beta_term(cfg, eps);
}

Vec smooth_penalty_grad(const Problem& p, const PenaltyConfig& cfg, const Vec& x,
                        double eps) {
  check_cfg(p, cfg);
  if (!(eps > 0.0)) throw input_error("smooth_penalty_grad: eps must be positive");
  const double delta = shifted_violation_sq(p, x, eps, cfg.w);
  if (delta >= cfg.phi.domain_sup())
    throw input_error("smooth_penalty_grad: violation at or beyond phi domain boundary");

  const double s = violation_scale(cfg);
  const double phi_val = cfg.phi.value(delta);
  const double phi_der = cfg.phi.derivative(delta);
  const Vec dd_dx = shifted_violation_sq_grad_x(p, x, eps, cfg.w);
  const double dd_de = shifted_violation_sq_deps(p, x, eps, cfg.w);

  Vec grad = p.objective_gradient(x);
  grad.resize(x.size() + 1);
  for (std::size_t i = 0; i < x.size(); ++i) grad[i] += s / eps * phi_der * dd_dx[i];
  double ge = -s / (eps * eps) * phi_val + s / eps * phi_der * dd_de;
  if (cfg.lambda > 0.0) ge += cfg.lambda * cfg.beta.derivative(eps);
  grad[x.size()] = ge;
  return grad;
}

double epsilon_argmin(const PenaltyConfig& cfg, double d) {
  if (!(cfg.phi.is_identity() && cfg.beta.is_identity() && cfg.zero_shift()))
    throw unsupported_error(
        "epsilon_argmin: closed form needs identity transforms and w = 0; "
        "use reduce_over_epsilon for the numeric path");
  if (!(cfg.lambda > 0.0)) throw unsupported_error("epsilon_argmin: needs lambda > 0");
  if (d < 0.0) throw input_error("epsilon_argmin: violation must be nonnegative");
  if (d == 0.0) return 0.0;
  const double s = violation_scale(cfg);
  return d * std::sqrt(s / cfg.lambda);
}

namespace {

// F(x, .) at fixed x via cached constraint residuals; identical to
// smooth_penalty_eval for eps > 0.
struct EpsSection {
  double f;
  Vec residuals;
  std::size_t num_eq;
  const PenaltyConfig* cfg;

  double operator()(double eps) const {
    return smooth_penalty_from(*cfg, f, residuals, num_eq, eps);
  }
};

EpsReduction golden_refine(const EpsSection& section, double lo, double hi, double best_eps,
                           double best_val) {
  constexpr double inv_gr = 0.6180339887498949;  // 1/golden ratio
  double a = lo, b = hi;
  double c = b - (b - a) * inv_gr;
  double d = a + (b - a) * inv_gr;
  double fc = section(c), fd = section(d);
  while (b - a > 1e-12 * b) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - (b - a) * inv_gr;
      fc = section(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + (b - a) * inv_gr;
      fd = section(d);
    }
  }
  const double mid = 0.5 * (a + b);
  const double fmid = section(mid);
  EpsReduction r{best_val, best_eps, false};
  if (fmid < r.value) r = {fmid, mid, false};
  if (fc < r.value) r = {fc, c, false};
  if (fd < r.value) r = {fd, d, false};
  return r;
}

}  // namespace

EpsReduction reduce_over_epsilon_numeric(const Problem& p, const PenaltyConfig& cfg,
                                         const Vec& x, double eps_max) {
  check_cfg(p, cfg);
  if (!(eps_max > 0.0)) throw input_error("reduce_over_epsilon: eps_max must be positive");
  EpsSection section{p.objective(x), constraint_residuals(p, x), p.num_equalities(), &cfg};

  constexpr int kGridPoints = 256;
  const double eps_lo = std::min(1e-12, 0.5 * eps_max);
  const double ratio = std::log(eps_max / eps_lo) / kGridPoints;
  int best_i = -1;
  double best_val = kInf, best_eps = eps_max;
  for (int i = 0; i <= kGridPoints; ++i) {
    const double e = i == kGridPoints ? eps_max : eps_lo * std::exp(ratio * i);
    const double v = section(e);
    if (v < best_val) {
      best_val = v;
      best_eps = e;
      best_i = i;
    }
  }
  if (best_i < 0) return {kInf, eps_max, false};  // every evaluation was +inf
  const double lo = best_i == 0 ? eps_lo : eps_lo * std::exp(ratio * (best_i - 1));
  const double hi = best_i == kGridPoints ? eps_max
                                          : eps_lo * std::exp(ratio * (best_i + 1));
  return golden_refine(section, lo, hi, best_eps, best_val);
}

EpsReduction reduce_over_epsilon(const Problem& p, const PenaltyConfig& cfg, const Vec& x,
                                 double eps_max) {
  check_cfg(p, cfg);
  if (!(eps_max > 0.0)) throw input_error("reduce_over_epsilon: eps_max must be positive");
  const double s = violation_scale(cfg);

  if (cfg.plain()) {
    const double f = p.objective(x);
    const double d = feasibility_residual(p, x, ViolationKind::euclidean);
    if (d == 0.0) return {f, 0.0, true};
    if (cfg.lambda > 0.0) {
      const double eps_bar = d * std::sqrt(s / cfg.lambda);
      if (eps_bar <= eps_max)
        return {f + 2.0 * std::sqrt(s * cfg.lambda) * d, eps_bar, true};
    }
    // minimizer beyond the bracket: F decreases on (0, eps_max]
    return {f + s * d * d / eps_max + cfg.lambda * eps_max, eps_max, true};
  }

  if (cfg.phi.is_identity() && cfg.zero_shift() && cfg.alpha == 0.0 &&
      cfg.beta.kind() == Transform::Kind::sqrt_double && cfg.lambda > 0.0) {
    const double f = p.objective(x);
    const double d = feasibility_residual(p, x, ViolationKind::euclidean);
    if (d == 0.0) return {f, 0.0, true};
    const double eps_bar = std::pow(s * d * d / cfg.lambda, 2.0 / 3.0);
    if (eps_bar <= eps_max)
      return {f + 3.0 * std::pow(cfg.lambda, 2.0 / 3.0) * std::cbrt(s) *
                      std::pow(d, 2.0 / 3.0),
              eps_bar, true};
    return {f + s * d * d / eps_max + 2.0 * cfg.lambda * std::sqrt(eps_max), eps_max, true};
  }

  return reduce_over_epsilon_numeric(p, cfg, x, eps_max);
}

double reduced_penalty(const Problem& p, const PenaltyConfig& cfg, const Vec& x,
                       double eps_max) {
  return reduce_over_epsilon(p, cfg, x, eps_max).value;
}

ReducedForm reduced_form_for(const PenaltyConfig& cfg) {
  ReducedForm form;
  const double s =
      std::pow(cfg.lambda, cfg.alpha) / (cfg.half_factor ? 2.0 : 1.0);
  if (cfg.plain() && cfg.lambda > 0.0) {
    form.kind = ReducedForm::Kind::closed_form;
    form.sigma_equivalent = 2.0 * std::sqrt(s * cfg.lambda);
    const double lam = cfg.lambda;
    form.epsilon_minimizer = [s, lam](double d) { return d * std::sqrt(s / lam); };
    return form;
  }
  if (cfg.phi.is_identity() && cfg.zero_shift() && cfg.alpha == 0.0 &&
      cfg.beta.kind() == Transform::Kind::sqrt_double && cfg.lambda > 0.0) {
    form.kind = ReducedForm::Kind::closed_form;
    const double lam = cfg.lambda;
    form.epsilon_minimizer = [s, lam](double d) {
      return std::pow(s * d * d / lam, 2.0 / 3.0);
    };
    return form;
  }
  return form;
}

double distance_penalty(const Problem& p, double sigma, const Vec& x, const Transform& phi,
                        double exponent) {
  if (sigma < 0.0 || std::isnan(sigma)) throw input_error("distance_penalty: sigma >= 0");
  if (!(exponent > 0.0)) throw input_error("distance_penalty: exponent > 0");
  const double f = p.objective(x);
  if (sigma == 0.0) return f;
  const double d = feasibility_residual(p, x, ViolationKind::euclidean);
  const double v = phi.value(d * d);
  if (std::isinf(v) || std::isinf(f)) return kInf;
  return f + sigma * std::pow(v, 0.5 * exponent);
}

Vec distance_penalty_grad(const Problem& p, double sigma, const Vec& x, const Transform& phi,
                          double exponent) {
  Vec grad = p.objective_gradient(x);
  if (sigma == 0.0) return grad;
  const double d = feasibility_residual(p, x, ViolationKind::euclidean);
  const double dsq = d * d;
  if (dsq == 0.0) return grad;  // kink: zero-slope subgradient element
  const double v = phi.value(dsq);
  if (std::isinf(v))
    throw input_error("distance_penalty_grad: violation beyond phi domain");
  if (v == 0.0) return grad;
  const double outer = sigma * 0.5 * exponent * std::pow(v, 0.5 * exponent - 1.0) *
                       phi.derivative(dsq);
  const Vec dd = shifted_violation_sq_grad_x(p, x, 1.0, Vec{});
  for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += outer * dd[i];
  return grad;
}

double l1_penalty(const Problem& p, double nu, const Vec& x) {
  if (nu < 0.0 || std::isnan(nu)) throw input_error("l1_penalty: nu >= 0");
  const double f = p.objective(x);
  if (nu == 0.0) return f;
  return f + nu * feasibility_residual(p, x, ViolationKind::l1);
}

Vec l1_penalty_grad(const Problem& p, double nu, const Vec& x) {
  Vec grad = p.objective_gradient(x);
  if (nu == 0.0) return grad;
  for (std::size_t i = 0; i < p.num_equalities(); ++i) {
    const double h = p.equality(i, x);
    if (h == 0.0) continue;
    const double sg = h > 0.0 ? 1.0 : -1.0;
    const Vec gh = p.equality_gradient(i, x);
    for (std::size_t d = 0; d < grad.size(); ++d) grad[d] += nu * sg * gh[d];
  }
  for (std::size_t k = 0; k < p.num_inequalities(); ++k) {
    if (p.inequality(k, x) <= 0.0) continue;
    const Vec gg = p.inequality_gradient(k, x);
    for (std::size_t d = 0; d < grad.size(); ++d) grad[d] += nu * gg[d];
  }
  return grad;
}

}  // namespace penlab
