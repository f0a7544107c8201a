#include "penlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "penlab/errors.hpp"

namespace penlab {

namespace {

constexpr double kEpsFloor = 1e-14;  // gradient steps never touch eps = 0

double splitmix64_unit(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

double halton(std::uint64_t index, int base) {
  double r = 0.0, f = 1.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % static_cast<std::uint64_t>(base));
    index /= static_cast<std::uint64_t>(base);
  }
  return r;
}

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19,
                           23, 29, 31, 37, 41, 43, 47, 53};

void clip_bounds(const Vec& lower, const Vec& upper, double clip, Vec& lo, Vec& hi) {
  lo = lower;
  hi = upper;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    lo[i] = std::max(lo[i], -clip);
    hi[i] = std::min(hi[i], clip);
    if (lo[i] > hi[i]) lo[i] = hi[i];
  }
}

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

Vec clamp_vec(Vec x, const Vec& lo, const Vec& hi) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
  return x;
}

bool lex_less(const Vec& a, const Vec& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct RunResult {
  StartTrace trace;
  double best_value = kInf;
  Vec best_point;
  bool failed = false;
  bool unbounded = false;
};

RunResult run_descent(const BoxFunction& fn, const SolveSettings& s, const Vec& start,
                      int start_index) {
  RunResult out;
  out.trace.start_index = start_index;
  Vec x = clamp_vec(start, fn.lower, fn.upper);
  double fx;
  try {
    fx = fn.value(x);
  } catch (const evaluation_error&) {
    out.failed = true;
    out.trace.stop_reason = "error";
    out.trace.point = x;
    return out;
  }
  if (!(fx < kInf)) {
    out.trace.stop_reason = "infinite_start";
    out.trace.value = fx;
    out.trace.point = x;
    out.best_value = fx;
    out.best_point = x;
    return out;
  }
  out.best_value = fx;
  out.best_point = x;

  double warm_step = s.initial_step;
  double window_best = fx;
  std::string stop = "max_iterations";
  int iter = 0;
  try {
    for (; iter < s.max_iterations; ++iter) {
      const Vec g = fn.gradient(x);
      // unit-step projected gradient as the stationarity measure
      Vec pg(x.size());
      {
        const Vec xt = clamp_vec([&] {
          Vec y = x;
          for (std::size_t i = 0; i < y.size(); ++i) y[i] -= g[i];
          return y;
        }(), fn.lower, fn.upper);
        for (std::size_t i = 0; i < x.size(); ++i) pg[i] = x[i] - xt[i];
      }
      if (norm2(pg) <= s.grad_tolerance) {
        stop = "converged";
        break;
      }

      double t = std::min(s.initial_step, 4.0 * warm_step);
      bool accepted = false;
      Vec trial;
      double ft = 0.0;
      while (t >= 1e-18) {
        trial = x;
        for (std::size_t i = 0; i < x.size(); ++i) trial[i] -= t * g[i];
        trial = clamp_vec(std::move(trial), fn.lower, fn.upper);
        double decrease = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) decrease += g[i] * (x[i] - trial[i]);
        if (decrease > 0.0) {
          ft = fn.value(trial);
          if (ft < kInf && ft <= fx - s.armijo_c * decrease) {
            accepted = true;
            break;
          }
        }
        t *= s.armijo_shrink;
      }
      if (!accepted) {
        stop = "step_underflow";
        break;
      }
      warm_step = t;
      x = std::move(trial);
      fx = ft;
      if (fx < out.best_value || (fx == out.best_value && lex_less(x, out.best_point))) {
        out.best_value = fx;
        out.best_point = x;
      }
      if (fx < s.unbounded_threshold) {
        stop = "unbounded";
        out.unbounded = true;
        break;
      }
      if (s.stagnation_window > 0 && (iter + 1) % s.stagnation_window == 0) {
        if (window_best - out.best_value <= 1e-16 * (1.0 + std::abs(out.best_value))) {
          stop = "stagnant";
          break;
        }
        window_best = out.best_value;
      }
    }
  } catch (const evaluation_error&) {
    out.failed = true;
    out.trace.stop_reason = "error";
    out.trace.point = x;
    out.trace.iterations = iter;
    return out;
  }
  out.trace.iterations = iter;
  out.trace.stop_reason = stop;
  out.trace.value = out.best_value;
  out.trace.point = out.best_point;
  return out;
}

// Sequential projection onto the linearized active constraints (with a tiny
// interior margin for inequalities), clamped to the box. Candidates built
// from the result are evaluated honestly, so a bad restoration only wastes
// one comparison.
Vec restore_feasibility(const Problem& p, Vec x) {
  constexpr int kMaxPasses = 30;
  for (int pass = 0; pass < kMaxPasses; ++pass) {
    if (feasibility_residual(p, x, ViolationKind::euclidean) <= 1e-13) break;
    for (std::size_t i = 0; i < p.num_equalities(); ++i) {
      const double v = p.equality(i, x);
      if (v == 0.0) continue;
      const Vec g = p.equality_gradient(i, x);
      const double gg = dot(g, g);
      if (gg <= 0.0) continue;
      for (std::size_t d = 0; d < x.size(); ++d) x[d] -= v * g[d] / gg;
    }
    for (std::size_t k = 0; k < p.num_inequalities(); ++k) {
      const double v = p.inequality(k, x);
      if (v <= 0.0) continue;
      const Vec g = p.inequality_gradient(k, x);
      const double gg = dot(g, g);
      if (gg <= 0.0) continue;
      const double step = (v + 1e-12) / gg;
      for (std::size_t d = 0; d < x.size(); ++d) x[d] -= step * g[d];
    }
    x = p.clamp_to_box(std::move(x));
  }
  return x;
}

}  // namespace

std::vector<Vec> lds_box_starts(const Vec& lower, const Vec& upper, int count,
                                std::uint64_t seed, double clip) {
  Vec lo, hi;
  clip_bounds(lower, upper, clip, lo, hi);
  const std::size_t dim = lo.size();
  std::vector<double> rot(dim);
  std::uint64_t state = seed;
  for (std::size_t d = 0; d < dim; ++d) rot[d] = splitmix64_unit(state);

  std::vector<Vec> starts;
  starts.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Vec x(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      double u;
      if (d < std::size(kPrimes)) {
        u = halton(static_cast<std::uint64_t>(i) + 1, kPrimes[d]);
      } else {
        u = splitmix64_unit(state);
      }
      u += rot[d];
      u -= std::floor(u);
      x[d] = lo[d] + u * (hi[d] - lo[d]);
    }
    starts.push_back(std::move(x));
  }
  return starts;
}

std::vector<Vec> grid_seed_starts(const BoxFunction& fn, int per_axis, int top_k,
                                  double clip) {
  if (fn.dim > 3 || per_axis < 2 || top_k < 1) return {};
  Vec lo, hi;
  clip_bounds(fn.lower, fn.upper, clip, lo, hi);
  std::vector<std::pair<double, Vec>> cells;
  std::vector<int> idx(static_cast<std::size_t>(fn.dim), 0);
  Vec x(static_cast<std::size_t>(fn.dim));
  const long total = static_cast<long>(std::pow(per_axis, fn.dim));
  for (long cell = 0; cell < total; ++cell) {
    long rem = cell;
    for (int d = 0; d < fn.dim; ++d) {
      idx[d] = static_cast<int>(rem % per_axis);
      rem /= per_axis;
      x[d] = lo[d] + (hi[d] - lo[d]) * idx[d] / (per_axis - 1);
    }
    double v;
    try {
      v = fn.value(x);
    } catch (const evaluation_error&) {
      continue;
    }
    if (v < kInf) cells.emplace_back(v, x);
  }
  std::stable_sort(cells.begin(), cells.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Vec> seeds;
  for (std::size_t i = 0; i < cells.size() && seeds.size() < static_cast<std::size_t>(top_k);
       ++i)
    seeds.push_back(cells[i].second);
  return seeds;
}

SolveReport minimize_box(const BoxFunction& fn, const SolveSettings& s,
                         const std::vector<Vec>& starts) {
  if (starts.empty()) throw input_error("minimize_box: no start points");
  SolveReport report;
  std::size_t failed = 0;
  bool have_best = false;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    RunResult r = run_descent(fn, s, starts[i], static_cast<int>(i));
    report.traces.push_back(r.trace);
    if (r.failed) {
      ++failed;
      continue;
    }
    report.unbounded = report.unbounded || r.unbounded;
    if (!have_best || r.best_value < report.best_value ||
        (r.best_value == report.best_value && lex_less(r.best_point, report.best_point))) {
      report.best_value = r.best_value;
      report.best_point = r.best_point;
      report.converged = r.trace.stop_reason == "converged" ||
                         r.trace.stop_reason == "stagnant" ||
                         r.trace.stop_reason == "step_underflow";
      have_best = true;
    }
  }
  if (failed == starts.size())
    throw solve_error("minimize_box: every start failed with evaluation errors");
  return report;
}

SolveReport minimize_penalized(const Problem& p, const PenaltyConfig& cfg,
                               const SolveSettings& s) {
  if (!(s.eps_max > 0.0)) throw input_error("minimize_penalized: eps_max must be positive");
  if (s.multistart < 1) throw input_error("minimize_penalized: multistart >= 1");
  p.validate();

  const std::size_t n = static_cast<std::size_t>(p.dimension());
  BoxFunction fn;
  fn.dim = p.dimension() + 1;
  fn.lower = p.lower();
  fn.lower.push_back(kEpsFloor);
  fn.upper = p.upper();
  fn.upper.push_back(s.eps_max);
  fn.value = [&p, &cfg](const Vec& z) {
    const Vec x(z.begin(), z.end() - 1);
    return smooth_penalty_eval(p, cfg, x, z.back());
  };
  fn.gradient = [&p, &cfg](const Vec& z) {
    const Vec x(z.begin(), z.end() - 1);
    return smooth_penalty_grad(p, cfg, x, z.back());
  };

  // Starts: low-discrepancy over box x eps, alternating linear and log eps
  // scales (the interesting eps range spans many decades near exactness).
  std::vector<Vec> starts = lds_box_starts(fn.lower, fn.upper, s.multistart, s.seed,
                                           s.sample_clip);
  const double log_lo = std::log(1e-13), log_hi = std::log(s.eps_max);
  for (std::size_t i = 1; i < starts.size(); i += 2) {
    const double u = starts[i].back() / s.eps_max;
    starts[i].back() = std::exp(log_lo + u * (log_hi - log_lo));
  }
  if (s.grid_seed) {
    for (Vec& seed : grid_seed_starts(fn, 9, 4, s.sample_clip)) {
      seed.back() = std::max(seed.back(), 1e-10);
      starts.push_back(std::move(seed));
    }
  }

  SolveReport report = minimize_box(fn, s, starts);

  // eps refinement: the run endpoints fix x; the eps section is cheap to
  // minimize exactly, and the eps = 0 branch is compared explicitly.
  auto consider = [&](Vec point, double value) {
    if (value < report.best_value ||
        (value == report.best_value && lex_less(point, report.best_point))) {
      report.best_value = value;
      report.best_point = std::move(point);
    }
  };
  auto consider_x = [&](const Vec& x) {
    const EpsReduction er = reduce_over_epsilon(p, cfg, x, s.eps_max);
    if (er.eps > 0.0) {
      Vec z = x;
      z.push_back(er.eps);
      consider(std::move(z), smooth_penalty_eval(p, cfg, x, er.eps));
    }
    const double v0 = smooth_penalty_eval(p, cfg, x, 0.0);
    if (v0 < kInf) {
      Vec z = x;
      z.push_back(0.0);
      consider(std::move(z), v0);
    }
  };
  for (const StartTrace& t : report.traces) {
    if (t.point.size() != n + 1 || !(t.value < kInf)) continue;
    const Vec x(t.point.begin(), t.point.end() - 1);
    try {
      consider_x(x);
      consider_x(restore_feasibility(p, x));
    } catch (const evaluation_error&) {
      // candidate skipped; the run value stands
    }
  }
  return report;
}

std::pair<Vec, double> grid_oracle(const Problem& p, const PenaltyConfig& cfg,
                                   int resolution, double eps_max) {
  if (p.dimension() > 3) throw unsupported_error("grid_oracle: supports n <= 3");
  if (resolution < 2) throw input_error("grid_oracle: resolution >= 2");
  if (!(eps_max > 0.0)) throw input_error("grid_oracle: eps_max > 0");
  for (int i = 0; i < p.dimension(); ++i)
    if (std::isinf(p.lower()[i]) || std::isinf(p.upper()[i]))
      throw input_error("grid_oracle: needs a finite box");
  p.validate();

  const int n = p.dimension();
  const std::size_t m = p.num_equalities();
  Vec best_point;
  double best_value = kInf;
  Vec x(static_cast<std::size_t>(n));
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  const long total = static_cast<long>(std::pow(resolution, n));
  for (long cell = 0; cell < total; ++cell) {
    long rem = cell;
    for (int d = 0; d < n; ++d) {
      idx[d] = static_cast<int>(rem % resolution);
      rem /= resolution;
      x[d] = p.lower()[d] + (p.upper()[d] - p.lower()[d]) * idx[d] / (resolution - 1);
    }
    const double f = p.objective(x);
    const Vec r = constraint_residuals(p, x);
    // eps = 0 slice: defined only at exactly-feasible points
    bool feasible = true;
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (j < m ? r[j] != 0.0 : r[j] > 0.0) {
        feasible = false;
        break;
      }
    }
    if (feasible && f < best_value) {
      best_value = f;
      best_point = x;
      best_point.push_back(0.0);
    }
    for (int j = 1; j <= resolution; ++j) {
      const double eps = eps_max * j / resolution;
      const double v = smooth_penalty_from(cfg, f, r, m, eps);
      if (v < best_value) {
        best_value = v;
        best_point = x;
        best_point.push_back(eps);
      }
    }
  }
  return {best_point, best_value};
}

std::optional<std::pair<Vec, double>> grid_feasible_min(const Problem& p, int resolution) {
  if (p.dimension() > 3) throw unsupported_error("grid_feasible_min: supports n <= 3");
  if (resolution < 2) throw input_error("grid_feasible_min: resolution >= 2");
  p.validate();
  const int n = p.dimension();
  Vec best_point;
  double best_value = kInf;
  Vec x(static_cast<std::size_t>(n));
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  const long total = static_cast<long>(std::pow(resolution, n));
  for (long cell = 0; cell < total; ++cell) {
    long rem = cell;
    for (int d = 0; d < n; ++d) {
      idx[d] = static_cast<int>(rem % resolution);
      rem /= resolution;
      const double lo = std::max(p.lower()[d], -1e3), hi = std::min(p.upper()[d], 1e3);
      x[d] = lo + (hi - lo) * idx[d] / (resolution - 1);
    }
    if (feasibility_residual(p, x, ViolationKind::euclidean) != 0.0) continue;
    const double f = p.objective(x);
    if (f < best_value) {
      best_value = f;
      best_point = x;
    }
  }
  if (best_point.empty()) return std::nullopt;
  return std::make_pair(best_point, best_value);
}

}  // namespace penlab
