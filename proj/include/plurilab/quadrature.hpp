#pragma once

// Thin wrapper over Boost.Math double-exponential quadrature. Callers split
// integrands at every kink first, so each call sees a smooth integrand with at
// most algebraic endpoint singularities.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <cstddef>
#include <limits>

namespace plurilab {

struct QuadratureStats {
  std::size_t pieces = 0;
  double error_estimate = 0.0;
  double l1_norm = 0.0;
};

inline constexpr double kQuadratureTol = 1e-13;

/// Integral of f over [a, b]; a may be -inf or b may be +inf (not both).
/// Endpoint abscissae are reconstructed from their distance to the endpoint,
/// so f is never evaluated exactly at a finite endpoint.
template <class F>
double integrate(const F& f, double a, double b, QuadratureStats* stats = nullptr, double tol = kQuadratureTol) {
  if (!(a < b)) return 0.0;
  double err = 0.0;
  double l1 = 0.0;
  double result = 0.0;
  if (std::isinf(a) || std::isinf(b)) {
    thread_local boost::math::quadrature::exp_sinh<double> integrator;
    result = integrator.integrate(f, a, b, tol, &err, &l1);
  } else {
    thread_local boost::math::quadrature::tanh_sinh<double> integrator;
    auto g = [&](double x, double xc) {
      double t = x;
      if (xc < 0.0) t = a - xc;
      else if (xc > 0.0) t = b - xc;
      return f(t);
    };
    result = integrator.integrate(g, a, b, tol, &err, &l1);
  }
  if (stats) {
    stats->pieces += 1;
    stats->error_estimate += err;
    stats->l1_norm += l1;
  }
  return result;
}

}  // namespace plurilab
