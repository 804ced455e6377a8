#pragma once

// Thin RAII wrapper over GSL's nmsimplex2 minimizer for 2-D objectives.

#include <functional>
#include <memory>

#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include <Eigen/Core>

namespace mcflow::detail {

struct NelderMeadOptions {
  double initial_step = 0.1;
  double x_tolerance = 1e-10;  // simplex characteristic size
  int max_evaluations = 2000;
};

struct NelderMeadResult {
  Eigen::Vector2d x;
  double f;
  int iterations;
};

template <class F>
NelderMeadResult nelder_mead(F&& objective, const Eigen::Vector2d& start,
                             const NelderMeadOptions& opts) {
  using Objective = std::function<double(const Eigen::Vector2d&)>;
  Objective fn = std::forward<F>(objective);

  gsl_multimin_function gf;
  gf.n = 2;
  gf.params = &fn;
  gf.f = [](const gsl_vector* v, void* params) {
    const auto& f = *static_cast<Objective*>(params);
    return f(Eigen::Vector2d(gsl_vector_get(v, 0), gsl_vector_get(v, 1)));
  };

  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> x(gsl_vector_alloc(2), gsl_vector_free);
  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> step(gsl_vector_alloc(2),
                                                              gsl_vector_free);
  gsl_vector_set(x.get(), 0, start.x());
  gsl_vector_set(x.get(), 1, start.y());
  gsl_vector_set_all(step.get(), opts.initial_step);

  std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> s(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2),
      gsl_multimin_fminimizer_free);
  gsl_multimin_fminimizer_set(s.get(), &gf, x.get(), step.get());

  int iter = 0;
  while (iter < opts.max_evaluations) {
    ++iter;
    if (gsl_multimin_fminimizer_iterate(s.get()) != 0) break;
    const double size = gsl_multimin_fminimizer_size(s.get());
    if (gsl_multimin_test_size(size, opts.x_tolerance) == GSL_SUCCESS) break;
  }
  const gsl_vector* xm = gsl_multimin_fminimizer_x(s.get());
  return {Eigen::Vector2d(gsl_vector_get(xm, 0), gsl_vector_get(xm, 1)),
          gsl_multimin_fminimizer_minimum(s.get()), iter};
}

}  // namespace mcflow::detail
