#pragma once

#include <string>

namespace mcflow {

/// Right-hand side of div(grad u / W) = g(W), W = sqrt(1 + |grad u|^2).
///
///   PowerMC(alpha):       g(W) = W^-alpha
///   ConstantForcing(mu):  g(W) = 1/W + mu
class Problem {
 public:
  enum class Kind { PowerMC, ConstantForcing };

  static Problem power_mc(double alpha);
  static Problem constant_forcing(double mu);

  Kind kind() const { return kind_; }
  /// alpha for PowerMC, mu for ConstantForcing.
  double parameter() const { return param_; }
  double alpha() const;
  double mu() const;

  bool is_power() const { return kind_ == Kind::PowerMC; }
  /// alpha == 1, the translating soliton equation.
  bool is_soliton() const { return is_power() && param_ == 1.0; }

  double forcing(double W) const;
  double forcing_derivative(double W) const;

  /// Same kind with a different parameter (used for continuation).
  Problem with_parameter(double value) const;

  std::string name() const;

  bool operator==(const Problem&) const = default;

 private:
  Problem(Kind kind, double param) : kind_(kind), param_(param) {}
  Kind kind_;
  double param_;
};

}  // namespace mcflow
