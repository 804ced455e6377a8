#include "mcflow/problem.hpp"

#include <cmath>
#include <sstream>

#include "mcflow/errors.hpp"

namespace mcflow {

Problem Problem::power_mc(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha must be finite and positive");
  return Problem(Kind::PowerMC, alpha);
}

Problem Problem::constant_forcing(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidArgument("mu must be finite and positive");
  return Problem(Kind::ConstantForcing, mu);
}

double Problem::alpha() const {
  if (!is_power()) throw InvalidArgument("alpha requested for a ConstantForcing problem");
  return param_;
}

double Problem::mu() const {
  if (is_power()) throw InvalidArgument("mu requested for a PowerMC problem");
  return param_;
}

double Problem::forcing(double W) const {
  if (is_power()) return std::pow(W, -param_);
  return 1.0 / W + param_;
}

double Problem::forcing_derivative(double W) const {
  if (is_power()) return -param_ * std::pow(W, -param_ - 1.0);
  return -1.0 / (W * W);
}

Problem Problem::with_parameter(double value) const { return Problem(kind_, value); }

std::string Problem::name() const {
  std::ostringstream os;
  os << (is_power() ? "PowerMC(alpha=" : "ConstantForcing(mu=") << param_ << ")";
  return os.str();
}

}  // namespace mcflow
