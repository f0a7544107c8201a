#pragma once

#include <functional>
#include <string>
#include <vector>

#include "penlab/penalty.hpp"
#include "penlab/problem.hpp"

namespace penlab {

/// Known exact penalty parameter for one (instance, family) pair.
struct OracleValue {
  enum class Status { exact, not_exact, unknown };
  Status status = Status::unknown;
  double value = 0.0;

  static OracleValue exact(double v) { return {Status::exact, v}; }
  static OracleValue not_exact() { return {Status::not_exact, 0.0}; }
  static OracleValue unknown() { return {Status::unknown, 0.0}; }
};

/// A test problem with its analytic optimum and exact-parameter oracle.
struct BenchmarkInstance {
  std::string name;
  Problem problem;
  Vec x_star;
  double f_star = 0.0;
  std::function<OracleValue(const FamilyDescriptor&)> oracle;
};

/// SPHERE(n): min sum x_i s.t. |x|^2 <= 1 on [-2,2]^n.
BenchmarkInstance make_sphere(int n);
/// PIECEWISE(c): 1-D ramp/parabola/ramp objective, constraint x <= 0, box +-1000.
BenchmarkInstance make_piecewise(double c);
/// SIGNSQRT: f(x) = -sign(x) sqrt|x|, equality constraint x = 0, box +-4.
BenchmarkInstance make_signsqrt();
/// TWOCON: f = -2x_1 - x_2, h = x_1, g = x_2 on [-5,5]^2 (two constraints).
BenchmarkInstance make_twocon();

/// The default desk-scale instances.
std::vector<BenchmarkInstance> benchmark_registry();

/// Resolve "sphere=4", "piecewise=3", "signsqrt", "twocon".
BenchmarkInstance find_benchmark(const std::string& name_with_param);

}  // namespace penlab
