#include "penlab/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "penlab/benchmarks.hpp"
#include "penlab/errors.hpp"
#include "penlab/report_io.hpp"

namespace penlab {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (trim(value.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw config_error("key '" + key + "': expected a number, got '" + value + "'");
}

long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long v = std::stol(value, &used, 10);
    if (trim(value.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw config_error("key '" + key + "': expected an integer, got '" + value + "'");
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw config_error("key '" + key + "': expected true/false, got '" + value + "'");
}

Vec parse_list(const std::string& key, const std::string& value) {
  Vec out;
  std::string cur;
  std::istringstream in(value);
  while (std::getline(in, cur, ',')) {
    cur = trim(cur);
    if (cur.empty()) throw config_error("key '" + key + "': empty list entry");
    out.push_back(parse_double(key, cur));
  }
  return out;
}

struct SpecAccumulator {
  ProblemSpec spec;
  bool touched = false;
};

void apply_problem_key(const std::string& key, const std::string& value, RunConfig& cfg,
                       SpecAccumulator& acc) {
  if (key == "registry") {
    cfg.registry_problem = value;
    return;
  }
  acc.touched = true;
  if (key == "dimension") {
    acc.spec.dimension = static_cast<int>(parse_int(key, value));
  } else if (key == "lower") {
    acc.spec.lower = parse_list(key, value);
  } else if (key == "upper") {
    acc.spec.upper = parse_list(key, value);
  } else if (key == "objective") {
    acc.spec.objective = parse_expr(value);
  } else if (key == "equality") {
    acc.spec.equalities.push_back(parse_expr(value));
  } else if (key == "inequality") {
    acc.spec.inequalities.push_back(parse_expr(value));
  } else {
    throw config_error("unknown key '" + key + "' in [problem]");
  }
}

void apply_penalty_key(const std::string& key, const std::string& value, RunConfig& cfg) {
  PenaltyConfig& p = cfg.penalty;
  if (key == "lambda") {
    p.lambda = parse_double(key, value);
  } else if (key == "alpha") {
    p.alpha = parse_double(key, value);
  } else if (key == "w") {
    p.w = parse_list(key, value);
  } else if (key == "phi") {
    p.phi = Transform::parse(value);
  } else if (key == "beta") {
    p.beta = Transform::parse(value);
  } else if (key == "half_factor") {
    p.half_factor = parse_bool(key, value);
  } else {
    throw config_error("unknown key '" + key + "' in [penalty]");
  }
}

void apply_solver_key(const std::string& key, const std::string& value, RunConfig& cfg) {
  SolveSettings& s = cfg.solve;
  if (key == "max_iterations") {
    s.max_iterations = static_cast<int>(parse_int(key, value));
  } else if (key == "multistart") {
    s.multistart = static_cast<int>(parse_int(key, value));
  } else if (key == "seed") {
    s.seed = static_cast<std::uint64_t>(parse_int(key, value));
  } else if (key == "eps_max") {
    s.eps_max = parse_double(key, value);
  } else if (key == "grad_tolerance") {
    s.grad_tolerance = parse_double(key, value);
  } else if (key == "sample_clip") {
    s.sample_clip = parse_double(key, value);
  } else if (key == "grid_seed") {
    s.grid_seed = parse_bool(key, value);
  } else if (key == "unbounded_threshold") {
    s.unbounded_threshold = parse_double(key, value);
  } else {
    throw config_error("unknown key '" + key + "' in [solver]");
  }
}

void apply_exactness_key(const std::string& key, const std::string& value, RunConfig& cfg) {
  ExactnessSettings& e = cfg.exactness;
  if (key == "bisect_tol") {
    e.bisect_tol = parse_double(key, value);
  } else if (key == "tol_exact_rel") {
    e.tol_exact_rel = parse_double(key, value);
  } else if (key == "tol_exact_abs") {
    e.tol_exact_abs = parse_double(key, value);
  } else if (key == "tol_eps") {
    e.tol_eps = parse_double(key, value);
  } else if (key == "widen_cap") {
    e.widen_cap = parse_double(key, value);
  } else if (key == "spot_checks") {
    e.spot_checks = static_cast<int>(parse_int(key, value));
  } else if (key == "family") {
    if (value != "smooth" && value != "distance" && value != "l1")
      throw config_error("key 'family': expected smooth|distance|l1, got '" + value + "'");
    cfg.family = value;
  } else if (key == "exponent") {
    cfg.exponent = parse_double(key, value);
  } else if (key == "bracket_lo") {
    cfg.bracket.first = parse_double(key, value);
  } else if (key == "bracket_hi") {
    cfg.bracket.second = parse_double(key, value);
  } else {
    throw config_error("unknown key '" + key + "' in [exactness]");
  }
}

}  // namespace

std::string serialize_expr(const ExprSpec& e) {
  std::string name;
  switch (e.kind) {
    case ExprSpec::Kind::affine: name = "affine"; break;
    case ExprSpec::Kind::quadratic: name = "quadratic"; break;
    case ExprSpec::Kind::piecewise: name = "piecewise"; break;
    case ExprSpec::Kind::signsqrt: name = "signsqrt"; break;
  }
  if (e.params.empty()) return name;
  std::string out = name + ": ";
  for (std::size_t i = 0; i < e.params.size(); ++i) {
    if (i) out += ", ";
    out += format_double(e.params[i]);
  }
  return out;
}

ExprSpec parse_expr(const std::string& text) {
  std::string head = trim(text), args;
  if (auto pos = head.find(':'); pos != std::string::npos) {
    args = trim(head.substr(pos + 1));
    head = trim(head.substr(0, pos));
  }
  ExprSpec e;
  if (head == "affine") {
    e.kind = ExprSpec::Kind::affine;
  } else if (head == "quadratic") {
    e.kind = ExprSpec::Kind::quadratic;
  } else if (head == "piecewise") {
    e.kind = ExprSpec::Kind::piecewise;
  } else if (head == "signsqrt") {
    e.kind = ExprSpec::Kind::signsqrt;
  } else {
    throw config_error("unknown expression '" + head + "'");
  }
  if (!args.empty()) e.params = parse_list("expression", args);
  return e;
}

void apply_config_text(const std::string& text, RunConfig& into) {
  std::istringstream in(text);
  std::string line, section;
  SpecAccumulator acc;
  if (into.problem_spec) acc.spec = *into.problem_spec;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw config_error("line " + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "problem" && section != "penalty" && section != "solver" &&
          section != "exactness")
        throw config_error("unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw config_error("line " + std::to_string(lineno) + ": empty key");
    if (section == "problem") {
      apply_problem_key(key, value, into, acc);
    } else if (section == "penalty") {
      apply_penalty_key(key, value, into);
    } else if (section == "solver") {
      apply_solver_key(key, value, into);
    } else if (section == "exactness") {
      apply_exactness_key(key, value, into);
    } else {
      throw config_error("key '" + key + "' outside any section");
    }
  }
  if (acc.touched) into.problem_spec = acc.spec;
}

void apply_config_file(const std::string& path, RunConfig& into) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  apply_config_text(buf.str(), into);
}

std::string serialize_problem_spec(const ProblemSpec& spec) {
  std::string out = "[problem]\n";
  out += "dimension = " + std::to_string(spec.dimension) + '\n';
  auto list = [](const Vec& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ", ";
      s += format_double(v[i]);
    }
    return s;
  };
  if (!spec.lower.empty()) out += "lower = " + list(spec.lower) + '\n';
  if (!spec.upper.empty()) out += "upper = " + list(spec.upper) + '\n';
  out += "objective = " + serialize_expr(spec.objective) + '\n';
  for (const ExprSpec& e : spec.equalities) out += "equality = " + serialize_expr(e) + '\n';
  for (const ExprSpec& e : spec.inequalities)
    out += "inequality = " + serialize_expr(e) + '\n';
  return out;
}

ProblemSpec parse_problem_spec(const std::string& text) {
  RunConfig cfg;
  apply_config_text(text, cfg);
  if (!cfg.problem_spec) throw config_error("no inline [problem] spec in text");
  return *cfg.problem_spec;
}

std::string serialize_penalty_config(const PenaltyConfig& cfg) {
  std::string out = "[penalty]\n";
  out += "lambda = " + format_double(cfg.lambda) + '\n';
  out += "alpha = " + format_double(cfg.alpha) + '\n';
  if (!cfg.w.empty()) {
    out += "w = ";
    for (std::size_t i = 0; i < cfg.w.size(); ++i) {
      if (i) out += ", ";
      out += format_double(cfg.w[i]);
    }
    out += '\n';
  }
  out += "phi = " + cfg.phi.name() + '\n';
  out += "beta = " + cfg.beta.name() + '\n';
  out += std::string("half_factor = ") + (cfg.half_factor ? "true" : "false") + '\n';
  return out;
}

Problem resolve_problem(const RunConfig& cfg) {
  if (cfg.registry_problem) return find_benchmark(*cfg.registry_problem).problem;
  if (cfg.problem_spec) return build_problem(*cfg.problem_spec);
  throw config_error("no problem configured: set --problem or a [problem] section");
}

}  // namespace penlab
