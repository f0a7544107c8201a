#include "penlab/benchmarks.hpp"

#include <cmath>
#include <cstdio>

#include "penlab/errors.hpp"

namespace penlab {

namespace {

bool is_linear(const Transform& t, double* slope) {
  if (t.kind() == Transform::Kind::linear) {
    *slope = t.param();
    return true;
  }
  if (t.is_identity()) {
    *slope = 1.0;
    return true;
  }
  return false;
}

// Exact parameters of the smooth family on an instance with a single
// interval-valued constraint, expressed through the distance-penalty
// parameter sigma_star (and sigma_star(phi) for the rational barrier,
// which coincides with sigma_star on these instances). Returns unknown
// for combinations without a closed form.
OracleValue smooth_oracle_single_constraint(const PenaltyConfig& cfg, double sigma_star,
                                            bool grad_at_opt_nonzero) {
  double beta_slope = 0.0;
  const bool beta_lin = is_linear(cfg.beta, &beta_slope);
  if (!beta_lin) return OracleValue::unknown();

  const double c = cfg.half_factor ? 2.0 : 1.0;
  const double w0 = cfg.w.empty() ? 0.0 : cfg.w[0];

  if (cfg.phi.kind() == Transform::Kind::power && cfg.phi.param() > 1.0)
    return grad_at_opt_nonzero ? OracleValue::not_exact() : OracleValue::unknown();

  double phi_slope = 0.0;
  double sigma_phi = sigma_star;
  if (!is_linear(cfg.phi, &phi_slope)) {
    if (cfg.phi.kind() == Transform::Kind::rational_barrier && w0 == 0.0 &&
        cfg.alpha == 0.0 && c == 1.0) {
      phi_slope = 1.0;  // violations shrink toward the optimum, barrier factor -> 1
    } else {
      return OracleValue::unknown();
    }
  }
  (void)sigma_phi;

  if (w0 == 0.0) {
    // min over eps is f + 2 sqrt(phi_s beta_s lambda^(alpha+1) / c) d, so the
    // family is exact iff that coefficient reaches sigma*
    const double base = c * sigma_star * sigma_star / (4.0 * phi_slope * beta_slope);
    return OracleValue::exact(std::pow(base, 1.0 / (cfg.alpha + 1.0)));
  }

  // shifted case: closed form only for the plain configuration
  if (!cfg.phi.is_identity() || cfg.alpha != 0.0 || c != 1.0 || beta_slope != 1.0)
    return OracleValue::unknown();
  const double q = sigma_star * sigma_star / 4.0;
  if (w0 < 0.0) return OracleValue::exact(std::max(0.0, q - std::abs(w0) * sigma_star));
  return OracleValue::exact(q + w0 * sigma_star);
}

}  // namespace

BenchmarkInstance make_sphere(int n) {
  if (n < 1) throw input_error("make_sphere: n >= 1");
  const std::size_t un = static_cast<std::size_t>(n);
  ProblemSpec spec;
  spec.dimension = n;
  spec.lower.assign(un, -2.0);
  spec.upper.assign(un, 2.0);
  spec.objective = {ExprSpec::Kind::affine, Vec(un + 1, 1.0)};
  spec.objective.params[un] = 0.0;
  ExprSpec ball{ExprSpec::Kind::quadratic, Vec(2 * un + 1, 0.0)};
  for (std::size_t i = 0; i < un; ++i) ball.params[i] = 1.0;
  ball.params[2 * un] = -1.0;
  spec.inequalities.push_back(ball);

  BenchmarkInstance b{"sphere", build_problem(spec), Vec(un, -1.0 / std::sqrt(n)),
                      -std::sqrt(n), nullptr};
  char buf[32];
  std::snprintf(buf, sizeof buf, "sphere=%d", n);
  b.name = buf;

  const double sigma_star = std::sqrt(n) / 2.0;
  b.oracle = [sigma_star](const FamilyDescriptor& fam) {
    switch (fam.kind) {
      case FamilyDescriptor::Kind::l1:
        return OracleValue::exact(sigma_star);  // single constraint: norms coincide
      case FamilyDescriptor::Kind::distance:
        if (fam.exponent != 1.0) return OracleValue::unknown();
        if (fam.phi.is_identity() || fam.phi.kind() == Transform::Kind::rational_barrier)
          return OracleValue::exact(sigma_star);
        return OracleValue::unknown();
      case FamilyDescriptor::Kind::smooth:
        return smooth_oracle_single_constraint(fam.config, sigma_star, true);
    }
    return OracleValue::unknown();
  };
  return b;
}

BenchmarkInstance make_piecewise(double c) {
  if (c < 0.0) throw input_error("make_piecewise: c >= 0");
  ProblemSpec spec;
  spec.dimension = 1;
  spec.lower = {-1000.0};
  spec.upper = {1000.0};
  spec.objective = {ExprSpec::Kind::piecewise, {c}};
  spec.inequalities.push_back({ExprSpec::Kind::affine, {1.0, 0.0}});

  BenchmarkInstance b{"piecewise", build_problem(spec), {0.0}, 0.0, nullptr};
  char buf[48];
  std::snprintf(buf, sizeof buf, "piecewise=%g", c);
  b.name = buf;

  const double sigma_star = c + 1.0;
  b.oracle = [sigma_star](const FamilyDescriptor& fam) {
    switch (fam.kind) {
      case FamilyDescriptor::Kind::l1:
        return OracleValue::exact(sigma_star);
      case FamilyDescriptor::Kind::distance:
        if (fam.exponent != 1.0) return OracleValue::unknown();
        if (fam.phi.is_identity()) return OracleValue::exact(sigma_star);
        if (fam.phi.kind() == Transform::Kind::rational_barrier)
          return OracleValue::exact(1.0);
        return OracleValue::unknown();
      case FamilyDescriptor::Kind::smooth: {
        const PenaltyConfig& cfg = fam.config;
        if (cfg.phi.kind() == Transform::Kind::rational_barrier && cfg.zero_shift() &&
            cfg.alpha == 0.0 && !cfg.half_factor && cfg.beta.is_identity())
          return OracleValue::exact(0.25);
        return smooth_oracle_single_constraint(cfg, sigma_star, true);
      }
    }
    return OracleValue::unknown();
  };
  return b;
}

BenchmarkInstance make_signsqrt() {
  ProblemSpec spec;
  spec.dimension = 1;
  spec.lower = {-4.0};
  spec.upper = {4.0};
  spec.objective = {ExprSpec::Kind::signsqrt, {}};
  spec.equalities.push_back({ExprSpec::Kind::affine, {1.0, 0.0}});

  BenchmarkInstance b{"signsqrt", build_problem(spec), {0.0}, 0.0, nullptr};
  b.oracle = [](const FamilyDescriptor& fam) {
    switch (fam.kind) {
      case FamilyDescriptor::Kind::l1:
        return OracleValue::not_exact();  // -sqrt(x) + nu x < 0 near 0 for every nu
      case FamilyDescriptor::Kind::distance:
        if (fam.exponent != 1.0) return OracleValue::unknown();
        if (fam.phi.is_identity()) return OracleValue::not_exact();
        if (fam.phi.kind() == Transform::Kind::power && fam.phi.param() == 0.5)
          return OracleValue::exact(1.0);
        return OracleValue::unknown();
      case FamilyDescriptor::Kind::smooth: {
        const PenaltyConfig& cfg = fam.config;
        const double w0 = cfg.w.empty() ? 0.0 : cfg.w[0];
        if (cfg.phi.kind() == Transform::Kind::power && cfg.phi.param() == 0.5 &&
            cfg.beta.is_identity() && cfg.alpha == 0.0 && !cfg.half_factor) {
          if (w0 == 0.0) return OracleValue::exact(0.25);
          if (w0 > 0.0) return OracleValue::not_exact();
          return OracleValue::unknown();
        }
        if (cfg.phi.is_identity() && cfg.zero_shift()) return OracleValue::not_exact();
        return OracleValue::unknown();
      }
    }
    return OracleValue::unknown();
  };
  return b;
}

BenchmarkInstance make_twocon() {
  ProblemSpec spec;
  spec.dimension = 2;
  spec.lower = {-5.0, -5.0};
  spec.upper = {5.0, 5.0};
  spec.objective = {ExprSpec::Kind::affine, {-2.0, -1.0, 0.0}};
  spec.equalities.push_back({ExprSpec::Kind::affine, {1.0, 0.0, 0.0}});
  spec.inequalities.push_back({ExprSpec::Kind::affine, {0.0, 1.0, 0.0}});

  BenchmarkInstance b{"twocon", build_problem(spec), {0.0, 0.0}, 0.0, nullptr};
  const double sigma_star = std::sqrt(5.0);  // worst ray direction (2,1)/sqrt5
  const double nu_star = 2.0;                // separable l1 slopes: max(2, 1)
  b.oracle = [sigma_star, nu_star](const FamilyDescriptor& fam) {
    switch (fam.kind) {
      case FamilyDescriptor::Kind::l1:
        return OracleValue::exact(nu_star);
      case FamilyDescriptor::Kind::distance:
        if (fam.exponent == 1.0 && fam.phi.is_identity())
          return OracleValue::exact(sigma_star);
        return OracleValue::unknown();
      case FamilyDescriptor::Kind::smooth: {
        const PenaltyConfig& cfg = fam.config;
        if (!cfg.zero_shift()) return OracleValue::unknown();
        return smooth_oracle_single_constraint(cfg, sigma_star, true);
      }
    }
    return OracleValue::unknown();
  };
  return b;
}

std::vector<BenchmarkInstance> benchmark_registry() {
  std::vector<BenchmarkInstance> r;
  r.push_back(make_sphere(2));
  r.push_back(make_sphere(4));
  r.push_back(make_piecewise(0.0));
  r.push_back(make_piecewise(1.0));
  r.push_back(make_piecewise(3.0));
  r.push_back(make_signsqrt());
  r.push_back(make_twocon());
  return r;
}

BenchmarkInstance find_benchmark(const std::string& name_with_param) {
  std::string name = name_with_param;
  double param = 0.0;
  bool has_param = false;
  if (auto pos = name_with_param.find('='); pos != std::string::npos) {
    name = name_with_param.substr(0, pos);
    try {
      param = std::stod(name_with_param.substr(pos + 1));
    } catch (const std::exception&) {
      throw config_error("benchmark '" + name_with_param + "': bad parameter");
    }
    has_param = true;
  }
  if (name == "sphere") return make_sphere(has_param ? static_cast<int>(param) : 2);
  if (name == "piecewise") return make_piecewise(has_param ? param : 1.0);
  if (name == "signsqrt") return make_signsqrt();
  if (name == "twocon") return make_twocon();
  throw config_error("unknown benchmark '" + name + "'");
}

}  // namespace penlab
