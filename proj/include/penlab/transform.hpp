#pragma once

#include <functional>
#include <string>

namespace penlab {

/// Nondecreasing scalar reshaping used for the violation term (phi), the
/// epsilon term (beta) and their comparison counterparts (psi, gamma).
/// All transforms satisfy value(0) = 0 and value(t) > 0 for t > 0 inside
/// the domain; value(t) = +inf at and beyond domain_sup.
class Transform {
 public:
  enum class Kind { identity, linear, rational_barrier, power, sqrt_double, custom };

  Transform();  // identity

  double value(double t) const;
  double derivative(double t) const;
  /// Right-hand derivative at 0; may be +inf (e.g. power p < 1, sqrt_double).
  double right_derivative_at_0() const { return d0_; }
  /// Supremum of the finite domain; value(t) = +inf for t >= domain_sup.
  double domain_sup() const { return domain_sup_; }
  Kind kind() const { return kind_; }
  double param() const { return param_; }
  /// Canonical "name" or "name:param" string (config-file syntax).
  std::string name() const;
  bool is_identity() const { return kind_ == Kind::identity; }

  static Transform identity();
  static Transform linear(double slope);
  static Transform rational_barrier();        // t / (1 - t), +inf for t >= 1
  static Transform power(double exponent);    // t^p, p > 0
  static Transform sqrt_double();             // 2 sqrt(t)
  static Transform custom(std::function<double(double)> value,
                          std::function<double(double)> derivative,
                          double right_derivative_at_0, double domain_sup,
                          std::string label = "custom");

  /// Parse "identity", "linear:2", "rational_barrier", "power:1.5", "sqrt_double".
  static Transform parse(const std::string& text);

  bool operator==(const Transform& o) const { return kind_ == o.kind_ && param_ == o.param_; }

 private:
  Kind kind_ = Kind::identity;
  double param_ = 0.0;
  double d0_ = 1.0;
  double domain_sup_;
  std::function<double(double)> custom_value_;
  std::function<double(double)> custom_derivative_;
  std::string custom_label_;
};

}  // namespace penlab
