#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mcflow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateTangent : public Error {
 public:
  explicit DegenerateTangent(double t)
      : Error("curve velocity vanishes at t = " + std::to_string(t)), t_(t) {}
  double parameter() const { return t_; }

 private:
  double t_;
};

class NonConvex : public Error {
 public:
  NonConvex(double t, double kappa)
      : Error("boundary curvature " + std::to_string(kappa) +
              " is not positive at t = " + std::to_string(t)),
        t_(t), kappa_(kappa) {}
  double parameter() const { return t_; }
  double curvature() const { return kappa_; }

 private:
  double t_;
  double kappa_;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidDomain : public Error {
 public:
  using Error::Error;
};

class MeshQualityFailure : public Error {
 public:
  MeshQualityFailure(double min_angle_deg, const std::string& detail)
      : Error("mesh quality failure (min angle " + std::to_string(min_angle_deg) +
              " deg): " + detail),
        min_angle_(min_angle_deg) {}
  double min_angle_degrees() const { return min_angle_; }

 private:
  double min_angle_;
};

class UnknownVertex : public Error {
 public:
  explicit UnknownVertex(long id) : Error("unknown vertex id " + std::to_string(id)) {}
};

class InterpolationOutsideDomain : public Error {
 public:
  using Error::Error;
};

/// One Newton iteration as written to the solver log.
struct NewtonStep {
  int iteration = 0;
  double residual = 0.0;
  double damping = 1.0;
  double parameter = 0.0;  // continuation value of alpha or mu
};

class NonConvergence : public Error {
 public:
  NonConvergence(int iterations, double final_residual, std::vector<NewtonStep> trace,
                 const std::string& reason)
      : Error("Newton iteration did not converge after " + std::to_string(iterations) +
              " iterations (residual " + std::to_string(final_residual) + "): " + reason),
        iterations_(iterations), final_residual_(final_residual), trace_(std::move(trace)) {}

  int iterations() const { return iterations_; }
  double final_residual() const { return final_residual_; }
  const std::vector<NewtonStep>& trace() const { return trace_; }

 private:
  int iterations_;
  double final_residual_;
  std::vector<NewtonStep> trace_;
};

/// Converged field violates u < 0 at some interior vertex.
class SignViolation : public Error {
 public:
  using Error::Error;
};

class SlopeBlowup : public Error {
 public:
  explicit SlopeBlowup(double r)
      : Error("radial slope exceeded 1e8 at r = " + std::to_string(r)), r_(r) {}
  double radius() const { return r_; }

 private:
  double r_;
};

class AlphaOne : public Error {
 public:
  AlphaOne() : Error("Phi is undefined for alpha = 1") {}
};

class NoCriticalPoint : public Error {
 public:
  explicit NoCriticalPoint(double tol)
      : Error("no interior vertex has |grad u| below " + std::to_string(tol)) {}
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : Error("config field '" + field + "': " + message), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace mcflow
