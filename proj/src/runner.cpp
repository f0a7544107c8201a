#include "penlab/runner.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "penlab/benchmarks.hpp"
#include "penlab/errors.hpp"
#include "penlab/report_io.hpp"

namespace penlab {

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot write to '" + path + "'");
  out << content;
}

void begin_json(JsonWriter& w, const std::string& command) {
  w.begin_object();
  w.key("schema_version").value(1);
  w.key("command").value(command);
}

void emit_outputs(const RunConfig& cfg, const std::string& json, const std::string& csv) {
  if (!cfg.json_path.empty()) write_file(cfg.json_path, json);
  if (!cfg.csv_path.empty() && !csv.empty()) write_file(cfg.csv_path, csv);
}

std::string problem_label(const RunConfig& cfg) {
  return cfg.registry_problem ? *cfg.registry_problem : std::string("inline");
}

void print_rows(std::ostream& out, const std::vector<RelationRow>& rows) {
  for (const RelationRow& r : rows) {
    char line[256];
    std::snprintf(line, sizeof line, "  [%s] %-12s %-48s lhs=%-12.6g rhs=%-12.6g tol=%g %s",
                  r.pass ? "PASS" : "FAIL", r.problem.c_str(), r.relation.c_str(), r.lhs,
                  r.rhs, r.tol, r.note.c_str());
    out << line << '\n';
  }
}

bool all_pass(const std::vector<RelationRow>& rows) {
  for (const RelationRow& r : rows)
    if (!r.pass) return false;
  return true;
}

FamilyDescriptor family_from(const RunConfig& cfg) {
  if (cfg.family == "smooth") return FamilyDescriptor::smooth(cfg.penalty);
  if (cfg.family == "distance")
    return FamilyDescriptor::distance(cfg.penalty.phi, cfg.exponent);
  if (cfg.family == "l1") return FamilyDescriptor::l1();
  throw config_error("key 'family': expected smooth|distance|l1, got '" + cfg.family + "'");
}

int run_eval(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.has_x) throw config_error("eval needs an evaluation point: set key 'x'");
  const Problem p = resolve_problem(cfg);
  const double value = smooth_penalty_eval(p, cfg.penalty, cfg.x, cfg.eps);
  out << "F(x, eps) = " << format_double(value) << "  (eps = " << format_double(cfg.eps)
      << ", lambda = " << format_double(cfg.penalty.lambda) << ")\n";
  JsonWriter w;
  begin_json(w, "eval");
  w.key("problem").value(problem_label(cfg));
  w.key("x").value(cfg.x);
  w.key("eps").value(cfg.eps);
  w.key("lambda").value(cfg.penalty.lambda);
  w.key("value").value(value);
  w.end_object();
  emit_outputs(cfg, w.str(), "");
  return 0;
}

int run_reduce(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.has_x) throw config_error("reduce needs an evaluation point: set key 'x'");
  const Problem p = resolve_problem(cfg);
  double eps_max = cfg.solve.eps_max;
  if (eps_max <= 0.0) eps_max = default_eps_max(p, cfg.solve);
  const EpsReduction auto_path = reduce_over_epsilon(p, cfg.penalty, cfg.x, eps_max);
  const EpsReduction numeric = reduce_over_epsilon_numeric(p, cfg.penalty, cfg.x, eps_max);
  const double diff = std::abs(auto_path.value - numeric.value);
  out << "reduced penalty over eps in (0, " << format_double(eps_max) << "]\n";
  out << "  closed/auto : value = " << format_double(auto_path.value)
      << "  eps = " << format_double(auto_path.eps)
      << (auto_path.closed_form ? "  (closed form)" : "  (numeric)") << '\n';
  out << "  numeric     : value = " << format_double(numeric.value)
      << "  eps = " << format_double(numeric.eps) << '\n';
  out << "  |difference| = " << format_double(diff) << '\n';
  JsonWriter w;
  begin_json(w, "reduce");
  w.key("problem").value(problem_label(cfg));
  w.key("x").value(cfg.x);
  w.key("eps_max").value(eps_max);
  w.key("auto").begin_object();
  w.key("value").value(auto_path.value);
  w.key("eps").value(auto_path.eps);
  w.key("closed_form").value(auto_path.closed_form);
  w.end_object();
  w.key("numeric").begin_object();
  w.key("value").value(numeric.value);
  w.key("eps").value(numeric.eps);
  w.end_object();
  w.key("difference").value(diff);
  w.end_object();
  emit_outputs(cfg, w.str(), "");
  return 0;
}

int run_solve(const RunConfig& cfg, std::ostream& out) {
  const Problem p = resolve_problem(cfg);
  SolveSettings s = cfg.solve;
  if (s.eps_max <= 0.0) s.eps_max = default_eps_max(p, s);
  SolveReport report = minimize_penalized(p, cfg.penalty, s);
  if (cfg.oracle_resolution > 0) {
    const auto oracle = grid_oracle(p, cfg.penalty, cfg.oracle_resolution, s.eps_max);
    report.oracle_gap = report.best_value - oracle.second;
  }
  out << "best value = " << format_double(report.best_value) << "  at (";
  for (std::size_t i = 0; i < report.best_point.size(); ++i)
    out << (i ? ", " : "") << format_double(report.best_point[i]);
  out << ")\n";
  out << "converged = " << (report.converged ? "true" : "false")
      << ", unbounded = " << (report.unbounded ? "true" : "false");
  if (report.oracle_gap) out << ", oracle gap = " << format_double(*report.oracle_gap);
  out << '\n';
  JsonWriter w;
  begin_json(w, "solve");
  w.key("problem").value(problem_label(cfg));
  w.key("lambda").value(cfg.penalty.lambda);
  w.key("seed").value(static_cast<unsigned long long>(s.seed));
  w.key("eps_max").value(s.eps_max);
  w.key("report");
  write_solve_report(w, report);
  w.end_object();
  emit_outputs(cfg, w.str(), trace_csv(report));
  return 0;
}

int run_estimate(const RunConfig& cfg, std::ostream& out) {
  ExactnessSettings s = cfg.exactness;
  s.solve = cfg.solve;
  const FamilyDescriptor family = family_from(cfg);

  ExactnessReport report;
  if (cfg.registry_problem) {
    const BenchmarkInstance bench = find_benchmark(*cfg.registry_problem);
    report = estimate_on(bench, family, s, cfg.bracket);
  } else {
    const Problem p = resolve_problem(cfg);
    const auto feasible = grid_feasible_min(p, 201);
    if (!feasible)
      throw config_error(
          "estimate on an inline problem needs a feasible grid point to pin f*");
    report = estimate_exact_parameter(family, p, "inline", feasible->second, cfg.bracket,
                                      s.bisect_tol, s);
  }

  out << "family " << family.label() << " on " << report.problem << ": ";
  switch (report.status) {
    case ExactnessReport::Status::estimated:
      out << "parameter estimate = " << format_double(report.estimate) << "  bracket ["
          << format_double(report.bracket_lo) << ", " << format_double(report.bracket_hi)
          << "]\n";
      break;
    case ExactnessReport::Status::not_exact:
      out << "not exact up to the widening cap\n";
      break;
    case ExactnessReport::Status::inconsistent:
      out << "predicate inconsistent: " << report.inconsistency_note << '\n';
      break;
    case ExactnessReport::Status::indeterminate:
      out << "indeterminate (solver failure)\n";
      break;
  }
  print_rows(out, report.relations);

  JsonWriter w;
  begin_json(w, "estimate");
  w.key("report");
  write_exactness_report(w, report);
  w.end_object();
  emit_outputs(cfg, w.str(), relation_rows_csv(report.relations));
  return 0;
}

std::vector<RelationRow> nonexactness_rows(double) {
  std::vector<RelationRow> rows;
  for (double lambda : {1.0, 10.0, 100.0}) {
    const NonexactnessEvidence ev =
        demonstrate_nonexactness(NonexactnessCase::signsqrt_w, lambda, 1.0);
    RelationRow r;
    r.problem = "signsqrt";
    r.family = "F[phi=power:0.5;w=1]";
    char rel[96];
    std::snprintf(rel, sizeof rel, "witness below f* at lambda=%g (eps <= 1e-2)", lambda);
    r.relation = rel;
    r.lhs = ev.value;
    r.rhs = ev.f_star - 1e-4;
    r.tol = 0.0;
    r.pass = ev.found && ev.value <= ev.f_star - 1e-4 && ev.witness_eps <= 1e-2;
    rows.push_back(r);
  }
  {
    const NonexactnessEvidence ev =
        demonstrate_nonexactness(NonexactnessCase::signsqrt_w, 1.0, 0.0);
    RelationRow r;
    r.problem = "signsqrt";
    r.family = "F[phi=power:0.5;w=0]";
    r.relation = "no witness for w = 0 (exact case)";
    r.lhs = ev.value;
    r.rhs = ev.f_star;
    r.tol = 0.0;
    r.pass = !ev.found;
    rows.push_back(r);
  }
  {
    const NonexactnessEvidence ev =
        demonstrate_nonexactness(NonexactnessCase::power_phi, 1e3);
    RelationRow r;
    r.problem = "sphere=2";
    r.family = "F[phi=power:1.5]";
    r.relation = "reduced penalty below f* - 1e-8 at lambda=1000";
    r.lhs = ev.value;
    r.rhs = ev.f_star - 1e-8;
    r.tol = 0.0;
    r.pass = ev.found && ev.value <= ev.f_star - 1e-8;
    rows.push_back(r);
  }
  return rows;
}

std::vector<RelationRow> rows_for_group(const std::string& group, const RunConfig& cfg,
                                        const ExactnessSettings& s) {
  if (group == "nonexactness") return nonexactness_rows(cfg.penalty.lambda);
  if (!cfg.registry_problem)
    throw config_error("verify " + group + " needs a registry problem (--problem NAME)");
  const BenchmarkInstance bench = find_benchmark(*cfg.registry_problem);
  if (group == "square") return verify_square_relation(bench, s);
  if (group == "w_bounds") {
    const double w = cfg.penalty.w.empty() ? 0.5 : cfg.penalty.w[0];
    return verify_w_bounds(bench, w, s);
  }
  if (group == "l1_bounds") return verify_l1_bounds(bench, s);
  if (group == "beta") return verify_beta_reduction(bench, s);
  if (group == "transforms") return verify_transform_bounds(bench, s);
  throw config_error("unknown verify group '" + group +
                     "' (square|w_bounds|l1_bounds|beta|transforms|nonexactness)");
}

int run_verify(const RunConfig& cfg, std::ostream& out) {
  ExactnessSettings s = cfg.exactness;
  s.solve = cfg.solve;
  const std::vector<RelationRow> rows = rows_for_group(cfg.verify_group, cfg, s);
  out << "verify " << cfg.verify_group << ":\n";
  print_rows(out, rows);
  const bool ok = all_pass(rows);
  out << (ok ? "all relations hold\n" : "some relations FAILED\n");
  JsonWriter w;
  begin_json(w, "verify");
  w.key("group").value(cfg.verify_group);
  w.key("all_pass").value(ok);
  w.key("rows");
  write_relation_rows(w, rows);
  w.end_object();
  emit_outputs(cfg, w.str(), relation_rows_csv(rows));
  return ok ? 0 : 1;
}

int run_bench(const RunConfig& cfg, std::ostream& out) {
  ExactnessSettings s = cfg.exactness;
  s.solve = cfg.solve;

  struct GroupSpec {
    std::string group;
    std::string problem;  // empty = none needed
    double w = 0.0;
  };
  const std::vector<GroupSpec> plan = {
      {"square", "sphere=2"},        {"square", "piecewise=1"},
      {"w_bounds", "sphere=4", -0.5}, {"w_bounds", "sphere=4", 0.5},
      {"l1_bounds", "twocon"},       {"l1_bounds", "sphere=2"},
      {"l1_bounds", "signsqrt"},     {"beta", "sphere=2"},
      {"transforms", "piecewise=0"}, {"transforms", "piecewise=3"},
      {"nonexactness", ""},
  };

  std::vector<RelationRow> all_rows;
  int groups_passed = 0;
  JsonWriter w;
  begin_json(w, "bench");
  w.key("groups").begin_array();
  for (const GroupSpec& g : plan) {
    RunConfig sub = cfg;
    sub.verify_group = g.group;
    if (!g.problem.empty()) sub.registry_problem = g.problem;
    sub.penalty.w = g.group == "w_bounds" ? Vec{g.w} : Vec{};
    ExactnessSettings gs = s;
    if (g.problem == "signsqrt") gs.tol_exact_abs = 1e-9;  // shallow-well instance
    const std::vector<RelationRow> rows = rows_for_group(g.group, sub, gs);
    const bool ok = all_pass(rows);
    groups_passed += ok ? 1 : 0;
    char head[96];
    std::snprintf(head, sizeof head, "%-14s %-14s %s", g.group.c_str(),
                  g.problem.empty() ? "-" : g.problem.c_str(), ok ? "PASS" : "FAIL");
    out << head << '\n';
    print_rows(out, rows);
    w.begin_object();
    w.key("group").value(g.group);
    w.key("problem").value(g.problem.empty() ? "-" : g.problem);
    w.key("pass").value(ok);
    w.key("rows");
    write_relation_rows(w, rows);
    w.end_object();
    all_rows.insert(all_rows.end(), rows.begin(), rows.end());
  }
  w.end_array();
  const bool ok = all_pass(all_rows);
  int rows_passed = 0;
  for (const RelationRow& r : all_rows) rows_passed += r.pass ? 1 : 0;
  out << "bench summary: " << groups_passed << '/' << plan.size() << " groups, "
      << rows_passed << '/' << all_rows.size() << " relations passed\n";
  w.key("groups_passed").value(groups_passed);
  w.key("rows_passed").value(rows_passed);
  w.key("rows_total").value(static_cast<long long>(all_rows.size()));
  w.key("all_pass").value(ok);
  w.end_object();
  emit_outputs(cfg, w.str(), relation_rows_csv(all_rows));
  return ok ? 0 : 1;
}

}  // namespace

int run(RunConfig cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.command == "eval") return run_eval(cfg, out);
    if (cfg.command == "reduce") return run_reduce(cfg, out);
    if (cfg.command == "solve") return run_solve(cfg, out);
    if (cfg.command == "estimate") return run_estimate(cfg, out);
    if (cfg.command == "verify") return run_verify(cfg, out);
    if (cfg.command == "bench") return run_bench(cfg, out);
    throw config_error("unknown command '" + cfg.command + "'");
  } catch (const config_error& e) {
    err << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const input_error& e) {
    err << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const unsupported_error& e) {
    err << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const solve_error& e) {
    err << "solver failure: " << e.what() << '\n';
    return 3;
  } catch (const evaluation_error& e) {
    err << "solver failure: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace penlab
