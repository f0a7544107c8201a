#include "penlab/transform.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>

#include "penlab/errors.hpp"
#include "penlab/problem.hpp"

namespace penlab {

Transform::Transform() : domain_sup_(kInf) {}

Transform Transform::identity() { return Transform(); }

Transform Transform::linear(double slope) {
  if (!(slope > 0.0)) throw input_error("Transform::linear: slope must be positive");
  Transform t;
  t.kind_ = Kind::linear;
  t.param_ = slope;
  t.d0_ = slope;
  return t;
}

Transform Transform::rational_barrier() {
  Transform t;
  t.kind_ = Kind::rational_barrier;
  t.d0_ = 1.0;
  t.domain_sup_ = 1.0;
  return t;
}

Transform Transform::power(double exponent) {
  if (!(exponent > 0.0)) throw input_error("Transform::power: exponent must be positive");
  Transform t;
  t.kind_ = Kind::power;
  t.param_ = exponent;
  t.d0_ = exponent > 1.0 ? 0.0 : (exponent == 1.0 ? 1.0 : kInf);
  return t;
}

Transform Transform::sqrt_double() {
  Transform t;
  t.kind_ = Kind::sqrt_double;
  t.d0_ = kInf;
  return t;
}

Transform Transform::custom(std::function<double(double)> value,
                            std::function<double(double)> derivative,
                            double right_derivative_at_0, double domain_sup,
                            std::string label) {
  if (!value) throw input_error("Transform::custom: value must be callable");
  Transform t;
  t.kind_ = Kind::custom;
  t.d0_ = right_derivative_at_0;
  t.domain_sup_ = domain_sup;
  t.custom_value_ = std::move(value);
  t.custom_derivative_ = std::move(derivative);
  t.custom_label_ = std::move(label);
  return t;
}

double Transform::value(double t) const {
  if (t < 0.0) throw input_error("Transform::value: negative argument");
  if (t >= domain_sup_) return kInf;
  switch (kind_) {
    case Kind::identity: return t;
    case Kind::linear: return param_ * t;
    case Kind::rational_barrier: return t / (1.0 - t);
    case Kind::power: return std::pow(t, param_);
    case Kind::sqrt_double: return 2.0 * std::sqrt(t);
    case Kind::custom: return custom_value_(t);
  }
  throw input_error("Transform::value: unknown kind");
}

double Transform::derivative(double t) const {
  if (t < 0.0) throw input_error("Transform::derivative: negative argument");
  if (t >= domain_sup_) throw input_error("Transform::derivative: outside domain");
  switch (kind_) {
    case Kind::identity: return 1.0;
    case Kind::linear: return param_;
    case Kind::rational_barrier: {
      const double s = 1.0 - t;
      return 1.0 / (s * s);
    }
    case Kind::power:
      if (t == 0.0) return d0_;
      return param_ * std::pow(t, param_ - 1.0);
    case Kind::sqrt_double:
      return t == 0.0 ? kInf : 1.0 / std::sqrt(t);
    case Kind::custom:
      if (custom_derivative_) return custom_derivative_(t);
      {  // central difference fallback
        const double h = std::max(1e-7, 1e-9 * t);
        const double lo = std::max(0.0, t - h);
        return (value(t + h) - value(lo)) / (t + h - lo);
      }
  }
  throw input_error("Transform::derivative: unknown kind");
}

std::string Transform::name() const {
  char buf[64];
  switch (kind_) {
    case Kind::identity: return "identity";
    case Kind::linear:
      std::snprintf(buf, sizeof buf, "linear:%.17g", param_);
      return buf;
    case Kind::rational_barrier: return "rational_barrier";
    case Kind::power:
      std::snprintf(buf, sizeof buf, "power:%.17g", param_);
      return buf;
    case Kind::sqrt_double: return "sqrt_double";
    case Kind::custom: return custom_label_;
  }
  return "unknown";
}

Transform Transform::parse(const std::string& text) {
  std::string head = text, arg;
  if (auto pos = text.find(':'); pos != std::string::npos) {
    head = text.substr(0, pos);
    arg = text.substr(pos + 1);
  }
  auto numeric_arg = [&]() {
    try {
      std::size_t used = 0;
      double v = std::stod(arg, &used);
      if (used != arg.size()) throw config_error("transform '" + text + "': bad parameter");
      return v;
    } catch (const std::exception&) {
      throw config_error("transform '" + text + "': bad parameter");
    }
  };
  if (head == "identity" || head == "id") return identity();
  if (head == "linear") return linear(numeric_arg());
  if (head == "rational_barrier" || head == "rational") return rational_barrier();
  if (head == "power") return power(numeric_arg());
  if (head == "sqrt_double") return sqrt_double();
  throw config_error("unknown transform '" + text + "'");
}

}  // namespace penlab
