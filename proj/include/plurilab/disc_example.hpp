#pragma once

// Capped Green potentials in the unit disc with poles running into z = 1.
//
// Poles near 1 are stored through their gap 1 - a = |1 - a| * direction with
// log|1 - a| kept separately: for the default schedule |1 - a_j| = e^{-2^j}
// underflows long before j = 30, while log|1 - a_j| = -2^j stays exact.

#include <cmath>
#include <complex>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "plurilab/error.hpp"
#include "plurilab/profile.hpp"

namespace plurilab {

using cplx = std::complex<double>;

struct Pole {
  cplx direction{1.0, 0.0};  // (1 - a) / |1 - a|
  double gap_abs = 1.0;      // |1 - a|, may underflow to 0
  double log_gap = 0.0;      // log|1 - a|

  cplx gap() const { return gap_abs * direction; }
  cplx value() const { return 1.0 - gap(); }
};

inline Pole pole_at(cplx a) {
  require(std::abs(a) < 1.0, ErrorCode::Domain, "pole must lie in the open unit disc");
  const cplx g = 1.0 - a;
  return Pole{g / std::abs(g), std::abs(g), std::log(std::abs(g))};
}

/// The pole 1 - e^{log_gap} * direction.
inline Pole pole_near_one(double log_gap, cplx direction = {1.0, 0.0}) {
  require(std::isfinite(log_gap), ErrorCode::Domain, "log gap must be finite");
  const double d = std::abs(direction);
  require(d > 0.0, ErrorCode::Domain, "direction must be nonzero");
  Pole p{direction / d, std::exp(log_gap), log_gap};
  // |a|^2 = 1 - |g| (2 Re u - |g|)
  require(2.0 * p.direction.real() - p.gap_abs > 0.0, ErrorCode::Domain, "pole must lie in the open unit disc");
  return p;
}

struct GreenPoleSystem {
  std::vector<Pole> poles;
  std::vector<double> weights;

  /// a_j = 1 - e^{-2^j}, eps_j = 2^{-j}, j = 1..J.
  static GreenPoleSystem default_schedule(int J) {
    require(J >= 1 && J <= 1000, ErrorCode::Domain, "truncation J must lie in [1, 1000]");
    GreenPoleSystem sys;
    for (int j = 1; j <= J; ++j) {
      sys.poles.push_back(pole_near_one(-std::ldexp(1.0, j)));
      sys.weights.push_back(std::ldexp(1.0, -j));
    }
    return sys;
  }

  std::size_t size() const { return poles.size(); }
};

inline GreenPoleSystem single_pole(cplx a, double weight = 1.0) {
  require(weight > 0.0, ErrorCode::Domain, "weight must be > 0");
  return GreenPoleSystem{{pole_at(a)}, {weight}};
}

/// log|(z - a) / (1 - conj(a) z)|, written as (z - 1 + g) / (1 - z + conj(g) z)
/// with g = 1 - a so that poles close to 1 keep their digits.
inline double green(cplx z, const Pole& a) {
  const double r = std::abs(z);
  require(r <= 1.0, ErrorCode::Domain, "point must lie in the closed unit disc");
  if (r == 1.0) return 0.0;
  const cplx g = a.gap();
  const double num = std::abs((z - 1.0) + g);
  const double den = std::abs((1.0 - z) + std::conj(g) * z);
  if (num == 0.0) return -kInf;
  return std::min(0.0, std::log(num / den));
}

inline double green(cplx z, cplx a) { return green(z, pole_at(a)); }

inline double v_field(const GreenPoleSystem& sys, cplx z) {
  require(std::abs(z) < 1.0, ErrorCode::Domain, "point must lie in the open unit disc");
  double v = 0.0;
  for (std::size_t j = 0; j < sys.size(); ++j) v += sys.weights[j] * std::max(green(z, sys.poles[j]), -1.0);
  return v;
}

struct SublevelDisc {
  cplx center;
  double radius;
  cplx one_minus_center;
  // The same two quantities divided by |1 - a|, finite even when the gap underflows.
  cplx scaled_offset;
  double scaled_radius;

  bool touches_one() const { return std::abs(scaled_offset) <= scaled_radius; }
};

/// Euclidean form of {|(z - a)/(1 - conj(a) z)| < e^{-1}}.
inline SublevelDisc sublevel_disc(const Pole& a) {
  const double rho = std::exp(-1.0);
  const double r2 = rho * rho;
  const cplx u = a.direction;
  const double g = a.gap_abs;
  // 1 - |a|^2 = g (2 Re u - g)
  const double k = 2.0 * u.real() - g;
  const double D = 1.0 - r2 + r2 * g * k;
  SublevelDisc d;
  d.scaled_offset = (u * (1.0 - r2) + r2 * k) / D;
  d.scaled_radius = rho * k / D;
  d.one_minus_center = g * d.scaled_offset;
  d.center = 1.0 - d.one_minus_center;
  d.radius = g * d.scaled_radius;
  return d;
}

inline SublevelDisc sublevel_disc(cplx a) { return sublevel_disc(pole_at(a)); }

/// Integral of log|1 - z| against the harmonic measure of the sublevel disc
/// seen from a, which is the Laplacian of the capped potential.
inline double riesz_moment(const Pole& a) {
  require(!sublevel_disc(a).touches_one(), ErrorCode::Domain, "sublevel disc reaches the boundary point 1");
  return a.log_gap;
}

inline double riesz_moment(cplx a) { return riesz_moment(pole_at(a)); }

inline double obstruction_sum(const GreenPoleSystem& sys, std::size_t J) {
  require(J <= sys.size(), ErrorCode::Domain, "J exceeds the number of poles");
  double s = 0.0;
  for (std::size_t j = 0; j < J; ++j) s += sys.weights[j] * riesz_moment(sys.poles[j]);
  return s;
}

inline double riesz_mass(const GreenPoleSystem& sys, std::size_t J) {
  require(J <= sys.size(), ErrorCode::Domain, "J exceeds the number of poles");
  double m = 0.0;
  for (std::size_t j = 0; j < J; ++j) m += sys.weights[j];
  return m;
}

}  // namespace plurilab
