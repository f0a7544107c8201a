#include "penlab/exactness.hpp"

#include <algorithm>
#include <cmath>

#include "penlab/errors.hpp"

namespace penlab {

namespace {

SolveReport solve_x_only(const FamilyDescriptor& family, double parameter, const Problem& p,
                         const SolveSettings& s) {
  BoxFunction fn;
  fn.dim = p.dimension();
  fn.lower = p.lower();
  fn.upper = p.upper();
  if (family.kind == FamilyDescriptor::Kind::distance) {
    const Transform phi = family.phi;
    const double e = family.exponent;
    fn.value = [&p, parameter, phi, e](const Vec& x) {
      return distance_penalty(p, parameter, x, phi, e);
    };
    fn.gradient = [&p, parameter, phi, e](const Vec& x) {
      return distance_penalty_grad(p, parameter, x, phi, e);
    };
  } else {
    fn.value = [&p, parameter](const Vec& x) { return l1_penalty(p, parameter, x); };
    fn.gradient = [&p, parameter](const Vec& x) { return l1_penalty_grad(p, parameter, x); };
  }
  std::vector<Vec> starts = lds_box_starts(fn.lower, fn.upper, s.multistart, s.seed,
                                           s.sample_clip);
  if (s.grid_seed)
    for (Vec& seed : grid_seed_starts(fn, 33, 4, s.sample_clip))
      starts.push_back(std::move(seed));
  return minimize_box(fn, s, starts);
}

RelationRow make_row(const std::string& problem, const std::string& family,
                     const std::string& relation, double lhs, double rhs, double tol,
                     bool pass, std::string note = "") {
  return RelationRow{problem, family, relation, lhs, rhs, tol, pass, std::move(note)};
}

bool estimated(const ExactnessReport& r) {
  return r.status == ExactnessReport::Status::estimated;
}

// Inequality row lhs <= rhs + tol; marked inapplicable when an estimate is
// missing (not a failure of the relation itself).
RelationRow le_row(const std::string& problem, const std::string& family,
                   const std::string& relation, double lhs, double rhs, double tol,
                   bool applicable) {
  if (!applicable)
    return make_row(problem, family, relation, lhs, rhs, tol, true, "inapplicable");
  return make_row(problem, family, relation, lhs, rhs, tol, lhs <= rhs + tol);
}

RelationRow eq_row(const std::string& problem, const std::string& family,
                   const std::string& relation, double lhs, double rhs, double tol,
                   bool applicable) {
  if (!applicable)
    return make_row(problem, family, relation, lhs, rhs, tol, true, "inapplicable");
  return make_row(problem, family, relation, lhs, rhs, tol, std::abs(lhs - rhs) <= tol);
}

}  // namespace

double default_eps_max(const Problem& p, const SolveSettings& s) {
  const std::vector<Vec> sample =
      lds_box_starts(p.lower(), p.upper(), std::max(16, s.multistart), s.seed,
                     s.sample_clip);
  double worst = 0.0;
  for (const Vec& x : sample)
    worst = std::max(worst, feasibility_residual(p, x, ViolationKind::euclidean));
  return 10.0 * (1.0 + worst);
}

Evidence is_exact_at(const FamilyDescriptor& family, double parameter, const Problem& p,
                     double f_star, const ExactnessSettings& s) {
  if (parameter < 0.0 || std::isnan(parameter))
    throw input_error("is_exact_at: parameter must be nonnegative");
  Evidence ev;
  ev.parameter = parameter;
  ev.f_star = f_star;

  SolveSettings solve = s.solve;
  try {
    if (family.kind == FamilyDescriptor::Kind::smooth) {
      if (solve.eps_max <= 0.0) solve.eps_max = default_eps_max(p, solve);
      PenaltyConfig cfg = family.config;
      cfg.lambda = parameter;
      ev.report = minimize_penalized(p, cfg, solve);
    } else {
      ev.report = solve_x_only(family, parameter, p, solve);
    }
  } catch (const solve_error&) {
    ev.status = ExactStatus::indeterminate;
    return ev;
  }

  ev.margin = ev.report.best_value - f_star;
  const double tol = s.exact_tol_for(f_star);
  bool exact = ev.report.best_value >= f_star - tol && !ev.report.unbounded;
  if (family.kind == FamilyDescriptor::Kind::smooth && exact)
    exact = ev.report.best_point.back() <= s.tol_eps;
  ev.status = exact ? ExactStatus::exact : ExactStatus::not_exact;
  return ev;
}

ExactnessReport estimate_exact_parameter(const FamilyDescriptor& family, const Problem& p,
                                         const std::string& problem_name, double f_star,
                                         std::pair<double, double> bracket, double tol,
                                         const ExactnessSettings& s) {
  if (!(tol > 0.0)) throw input_error("estimate_exact_parameter: tol must be positive");
  if (bracket.first < 0.0 || bracket.second <= bracket.first)
    throw input_error("estimate_exact_parameter: need 0 <= lo < hi");

  ExactnessReport report;
  report.problem = problem_name;
  report.family = family;
  report.tol = tol;
  report.f_star = f_star;
  {
    SolveSettings probe = s.solve;
    report.eps_max = probe.eps_max > 0.0 ? probe.eps_max : default_eps_max(p, probe);
  }
  ExactnessSettings sfix = s;
  sfix.solve.eps_max = report.eps_max;

  bool indeterminate = false;
  auto predicate = [&](double param) {
    const Evidence ev = is_exact_at(family, param, p, f_star, sfix);
    if (ev.status == ExactStatus::indeterminate) {
      indeterminate = true;
      return false;
    }
    const bool exact = ev.status == ExactStatus::exact;
    report.observations.emplace_back(param, exact);
    return exact;
  };

  double lo = bracket.first, hi = bracket.second;
  const double lo0 = lo, hi0 = hi;
  (void)hi0;

  // make the top of the bracket exact
  while (!predicate(hi)) {
    if (indeterminate) {
      report.status = ExactnessReport::Status::indeterminate;
      return report;
    }
    lo = hi;
    hi *= s.widen_factor;
    if (hi > s.widen_cap) {
      report.status = ExactnessReport::Status::not_exact;
      report.bracket_lo = lo;
      report.bracket_hi = hi;
      return report;
    }
  }
  // make the bottom inexact (parameter 0 exact means the infimum is 0)
  if (lo == 0.0 || predicate(lo)) {
    if (lo > 0.0) hi = lo;
    lo = 0.0;
    if (hi > 0.0 && predicate(0.0)) {
      report.status = ExactnessReport::Status::estimated;
      report.bracket_lo = report.bracket_hi = 0.0;
      report.estimate = 0.0;
      return report;
    }
    if (indeterminate) {
      report.status = ExactnessReport::Status::indeterminate;
      return report;
    }
  }

  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (predicate(mid))
      hi = mid;
    else
      lo = mid;
    if (indeterminate) {
      report.status = ExactnessReport::Status::indeterminate;
      return report;
    }
  }
  report.bracket_lo = lo;
  report.bracket_hi = hi;
  report.estimate = 0.5 * (lo + hi);
  report.status = ExactnessReport::Status::estimated;

  // Monotonicity spot checks, kept clear of the located boundary where the
  // empirical predicate is legitimately fragile.
  const double guard = std::max(4.0 * tol, 0.02 * (hi - lo0 + 1.0));
  std::vector<double> spots;
  if (lo - guard > lo0) spots.push_back(std::max(lo0, 0.5 * (lo0 + lo)));
  spots.push_back(hi + guard);
  spots.push_back(2.0 * hi + guard);
  int used = 0;
  for (double sp : spots) {
    if (used >= s.spot_checks) break;
    if (sp > s.widen_cap) continue;
    predicate(sp);
    ++used;
  }

  double max_false = -kInf, min_true = kInf;
  for (const auto& [param, exact] : report.observations) {
    if (exact)
      min_true = std::min(min_true, param);
    else
      max_false = std::max(max_false, param);
  }
  if (max_false > min_true) {
    report.status = ExactnessReport::Status::inconsistent;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "exact at %.17g but not exact at %.17g (midpoint %.17g)", min_true,
                  max_false, 0.5 * (min_true + max_false));
    report.inconsistency_note = buf;
  }
  return report;
}

ExactnessReport estimate_on(const BenchmarkInstance& bench, const FamilyDescriptor& family,
                            const ExactnessSettings& s, std::pair<double, double> bracket) {
  ExactnessReport report = estimate_exact_parameter(
      family, bench.problem, bench.name, bench.f_star, bracket, s.bisect_tol, s);
  const OracleValue oracle = bench.oracle ? bench.oracle(family) : OracleValue::unknown();
  switch (oracle.status) {
    case OracleValue::Status::exact:
      report.relations.push_back(eq_row(bench.name, family.label(), "estimate vs oracle",
                                        report.estimate, oracle.value,
                                        2.0 * s.bisect_tol + 1e-2, estimated(report)));
      break;
    case OracleValue::Status::not_exact:
      report.relations.push_back(make_row(
          bench.name, family.label(), "oracle says not exact",
          report.status == ExactnessReport::Status::not_exact ? 1.0 : 0.0, 1.0, 0.0,
          report.status == ExactnessReport::Status::not_exact));
      break;
    case OracleValue::Status::unknown: break;
  }
  return report;
}

std::vector<RelationRow> verify_square_relation(const BenchmarkInstance& bench,
                                                const ExactnessSettings& s) {
  const ExactnessReport sig = estimate_on(bench, FamilyDescriptor::distance(), s);
  const ExactnessReport lam =
      estimate_on(bench, FamilyDescriptor::smooth(PenaltyConfig{}), s);
  PenaltyConfig alpha1;
  alpha1.alpha = 1.0;
  const ExactnessReport lam_a1 = estimate_on(bench, FamilyDescriptor::smooth(alpha1), s);

  const bool ok = estimated(sig) && estimated(lam);
  const double combined = 2.0 * (sig.tol + lam.tol);
  std::vector<RelationRow> rows;
  rows.push_back(eq_row(bench.name, "F vs G", "lambda* = sigma*^2/4", lam.estimate,
                        sig.estimate * sig.estimate / 4.0, combined, ok));
  rows.push_back(eq_row(bench.name, "F[alpha=1] vs G", "lambda* = sigma*/2",
                        lam_a1.estimate, sig.estimate / 2.0, combined,
                        estimated(sig) && estimated(lam_a1)));
  for (const ExactnessReport* r : {&sig, &lam, &lam_a1})
    for (const RelationRow& row : r->relations) rows.push_back(row);
  return rows;
}

std::vector<RelationRow> verify_w_bounds(const BenchmarkInstance& bench, double w,
                                         const ExactnessSettings& s) {
  const ExactnessReport sig = estimate_on(bench, FamilyDescriptor::distance(), s);
  PenaltyConfig shifted;
  shifted.w.assign(bench.problem.constraint_count(), w);
  const FamilyDescriptor fam = FamilyDescriptor::smooth(shifted);
  const ExactnessReport lam_w = estimate_on(bench, fam, s);

  const bool ok = estimated(sig) && estimated(lam_w);
  const double aw = std::abs(w) * std::sqrt(static_cast<double>(shifted.w.size()));
  const double sg = sig.estimate;
  const double combined = 2.0 * (sig.tol + lam_w.tol);
  std::vector<RelationRow> rows;
  rows.push_back(le_row(bench.name, fam.label(), "max{0; sigma*^2/4 - |w| sigma*} <= lambda*",
                        std::max(0.0, sg * sg / 4.0 - aw * sg), lam_w.estimate, combined,
                        ok));
  rows.push_back(le_row(bench.name, fam.label(), "lambda* <= (sigma*/2 + |w|)^2",
                        lam_w.estimate, (sg / 2.0 + aw) * (sg / 2.0 + aw), combined, ok));
  if (bench.problem.constraint_count() == 1) {
    rows.push_back(le_row(bench.name, fam.label(),
                          "lambda* <= sigma*^2/4 + |w| sigma* (interval-valued)",
                          lam_w.estimate, sg * sg / 4.0 + aw * sg, combined, ok));
  }
  for (const ExactnessReport* r : {&sig, &lam_w})
    for (const RelationRow& row : r->relations) rows.push_back(row);
  return rows;
}

std::vector<RelationRow> verify_l1_bounds(const BenchmarkInstance& bench,
                                          const ExactnessSettings& s) {
  const ExactnessReport sig = estimate_on(bench, FamilyDescriptor::distance(), s);
  const ExactnessReport nu = estimate_on(bench, FamilyDescriptor::l1(), s);
  const bool ok = estimated(sig) && estimated(nu);
  const double combined = 2.0 * (sig.tol + nu.tol);
  const double root = std::sqrt(static_cast<double>(bench.problem.constraint_count()));
  std::vector<RelationRow> rows;
  rows.push_back(le_row(bench.name, "H_l1 vs G", "sigma*/sqrt(m+l) <= nu*",
                        sig.estimate / root, nu.estimate, combined, ok));
  rows.push_back(le_row(bench.name, "H_l1 vs G", "nu* <= sigma*", nu.estimate, sig.estimate,
                        combined, ok));
  const bool sig_finite = estimated(sig);
  const bool nu_finite = estimated(nu);
  rows.push_back(make_row(bench.name, "H_l1 vs G", "sigma* finite iff nu* finite",
                          sig_finite ? 1.0 : 0.0, nu_finite ? 1.0 : 0.0, 0.0,
                          sig_finite == nu_finite));
  for (const ExactnessReport* r : {&sig, &nu})
    for (const RelationRow& row : r->relations) rows.push_back(row);
  return rows;
}

std::vector<RelationRow> verify_beta_reduction(const BenchmarkInstance& bench,
                                               const ExactnessSettings& s) {
  const ExactnessReport lam =
      estimate_on(bench, FamilyDescriptor::smooth(PenaltyConfig{}), s);
  PenaltyConfig b2;
  b2.beta = Transform::linear(2.0);
  const ExactnessReport lam_b2 = estimate_on(bench, FamilyDescriptor::smooth(b2), s);
  PenaltyConfig bs;
  bs.beta = Transform::sqrt_double();
  const ExactnessReport lam_bs = estimate_on(bench, FamilyDescriptor::smooth(bs), s);
  const ExactnessReport theta =
      estimate_on(bench, FamilyDescriptor::distance(Transform::identity(), 2.0 / 3.0), s);

  std::vector<RelationRow> rows;
  rows.push_back(eq_row(bench.name, "F[beta=linear:2]", "lambda*(beta) = lambda*/beta'(0)",
                        lam_b2.estimate, lam.estimate / 2.0, 2.0 * (lam.tol + lam_b2.tol),
                        estimated(lam) && estimated(lam_b2)));
  rows.push_back(eq_row(bench.name, "F[beta=identity]", "beta = identity recovers lambda*",
                        lam.estimate, lam.estimate, 1e-12, estimated(lam)));
  rows.push_back(eq_row(bench.name, "F[beta=sqrt_double] vs H_theta",
                        "lambda* = (theta*/3)^(3/2)", lam_bs.estimate,
                        std::pow(theta.estimate / 3.0, 1.5),
                        2.0 * (lam_bs.tol + theta.tol),
                        estimated(lam_bs) && estimated(theta)));
  for (const ExactnessReport* r : {&lam, &lam_b2, &lam_bs, &theta})
    for (const RelationRow& row : r->relations) rows.push_back(row);
  return rows;
}

std::vector<RelationRow> verify_transform_bounds(const BenchmarkInstance& bench,
                                                 const ExactnessSettings& s) {
  const ExactnessReport lam =
      estimate_on(bench, FamilyDescriptor::smooth(PenaltyConfig{}), s);
  PenaltyConfig rat;
  rat.phi = Transform::rational_barrier();
  const ExactnessReport lam_rat = estimate_on(bench, FamilyDescriptor::smooth(rat), s);
  PenaltyConfig lin2;
  lin2.phi = Transform::linear(2.0);
  const ExactnessReport lam_lin2 = estimate_on(bench, FamilyDescriptor::smooth(lin2), s);

  std::vector<RelationRow> rows;
  // psi = rational barrier dominates phi = t on [0, 1) with psi0 = 1
  rows.push_back(le_row(bench.name, "F[phi=rational_barrier]",
                        "lambda*(psi) <= lambda*(phi)/psi0", lam_rat.estimate, lam.estimate,
                        2.0 * (lam.tol + lam_rat.tol),
                        estimated(lam) && estimated(lam_rat)));
  // psi = 2t dominates t with psi0 = 2; convex with psi'(0) = 2, so equality
  rows.push_back(le_row(bench.name, "F[phi=linear:2]", "lambda*(psi) <= lambda*(phi)/psi0",
                        lam_lin2.estimate, lam.estimate / 2.0,
                        2.0 * (lam.tol + lam_lin2.tol),
                        estimated(lam) && estimated(lam_lin2)));
  rows.push_back(eq_row(bench.name, "F[phi=linear:2]", "convexity bound is sharp",
                        lam_lin2.estimate, lam.estimate / 2.0,
                        2.0 * (lam.tol + lam_lin2.tol),
                        estimated(lam) && estimated(lam_lin2)));
  // convexity upper estimate with phi'(0) = 1 for the barrier
  rows.push_back(le_row(bench.name, "F[phi=rational_barrier]",
                        "lambda*(phi) <= lambda*/phi'(0)", lam_rat.estimate, lam.estimate,
                        2.0 * (lam.tol + lam_rat.tol),
                        estimated(lam) && estimated(lam_rat)));
  for (const ExactnessReport* r : {&lam, &lam_rat, &lam_lin2})
    for (const RelationRow& row : r->relations) rows.push_back(row);
  return rows;
}

NonexactnessEvidence demonstrate_nonexactness(NonexactnessCase c, double lambda_probe,
                                              double w) {
  NonexactnessEvidence ev;
  if (c == NonexactnessCase::signsqrt_w) {
    const BenchmarkInstance bench = make_signsqrt();
    PenaltyConfig cfg;
    cfg.lambda = lambda_probe;
    cfg.phi = Transform::power(0.5);
    cfg.w = {w};
    ev.f_star = bench.f_star;
    ev.value = kInf;
    // the explicit curve x = eps w, swept over eps <= 1e-2
    constexpr int kPoints = 400;
    const double lo = std::log(1e-8), hi = std::log(1e-2);
    for (int i = 0; i <= kPoints; ++i) {
      const double eps = std::exp(lo + (hi - lo) * i / kPoints);
      const Vec x{eps * w};
      if (!bench.problem.in_box(x)) continue;
      const double v = smooth_penalty_eval(bench.problem, cfg, x, eps);
      if (v < ev.value) {
        ev.value = v;
        ev.witness_x = x;
        ev.witness_eps = eps;
      }
    }
    ev.margin = ev.value - ev.f_star;
    ev.found = ev.value < ev.f_star;
    return ev;
  }

  // power_phi: phi(t) = t^(1+theta), theta = 0.5, on SPHERE(2); the
  // objective gradient at the optimum is nonzero, so the reduced penalty
  // must dip below f* along a line toward the optimum.
  const BenchmarkInstance bench = make_sphere(2);
  PenaltyConfig cfg;
  cfg.lambda = lambda_probe;
  cfg.phi = Transform::power(1.5);
  ev.f_star = bench.f_star;
  ev.value = kInf;
  const double eps_max = 10.0 * (1.0 + 7.0);
  constexpr int kPoints = 400;
  const double lo = std::log(1e-10), hi = std::log(1.0);
  for (int i = 0; i <= kPoints; ++i) {
    const double t = std::exp(lo + (hi - lo) * i / kPoints);
    Vec x = bench.x_star;
    for (double& xi : x) xi *= 1.0 + t;
    if (!bench.problem.in_box(x)) continue;
    const EpsReduction er = reduce_over_epsilon(bench.problem, cfg, x, eps_max);
    if (er.value < ev.value) {
      ev.value = er.value;
      ev.witness_x = x;
      ev.witness_eps = er.eps;
    }
  }
  ev.margin = ev.value - ev.f_star;
  ev.found = ev.value < ev.f_star;
  return ev;
}

}  // namespace penlab
