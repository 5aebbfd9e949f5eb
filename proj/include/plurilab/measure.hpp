#pragma once

// Monge-Ampere measure of a radial profile and its p-energy.
//
// Normalization: (dd^c log|z|)^n is the unit Dirac at the origin. With this
// convention the mass of the closed ball {|z| <= e^t} is f'(t^+)^n, so the
// measure is d[(f')^n] on the t-line plus an atom at z = 0 carrying
// lim_{t -> -inf} f'(t)^n.

#include <cmath>
#include <utility>
#include <vector>

#include "plurilab/error.hpp"
#include "plurilab/profile.hpp"
#include "plurilab/quadrature.hpp"

namespace plurilab {

inline void check_dimension(int n) { require(n >= 1, ErrorCode::Domain, "dimension n must be >= 1"); }

/// Mass of the closed ball {t' <= t}: f'(t^+)^n.
inline double mass_closed_ball(const Profile& p, int n, double t) {
  check_dimension(n);
  return std::pow(right_derivative(p, t), n);
}

/// Mass of the open ball {t' < t}: f'(t^-)^n.
inline double mass_open_ball(const Profile& p, int n, double t) {
  check_dimension(n);
  return std::pow(left_derivative(p, t), n);
}

/// Total mass on the unit ball: f'(0^-)^n.
inline double total_mass(const Profile& p, int n) { return mass_open_ball(p, n, 0.0); }

struct Atom {
  double t;
  double mass;
};

struct Interval {
  double lo;
  double hi;
};

struct RadialMeasure {
  Profile profile;
  int dimension = 1;
  double origin_atom = 0.0;
  std::vector<Atom> atoms;
  // Pieces on which the measure has a density; lo may be -inf.
  std::vector<Interval> smooth;
  bool boundary_divergent = false;

  /// Density of d[(f')^n] with respect to dt.
  double density(double t) const {
    const double d1 = detail::slope(profile, t, Side::Right);
    const double d2 = detail::curvature(profile, t);
    if (d2 == 0.0) return 0.0;
    return dimension * std::pow(d1, dimension - 1) * d2;
  }

  /// Mass of {t' <= t}, aggregated from the atoms and integrated densities.
  double cumulative(double t, QuadratureStats* stats = nullptr) const { return aggregate(t, true, stats); }

  /// Mass of {t' < t}.
  double cumulative_open(double t, QuadratureStats* stats = nullptr) const { return aggregate(t, false, stats); }

  /// Mass of the open unit ball.
  double total(QuadratureStats* stats = nullptr) const {
    if (boundary_divergent) return kInf;
    return aggregate(0.0, false, stats);
  }

 private:
  double aggregate(double t, bool closed, QuadratureStats* stats) const {
    double m = origin_atom;
    for (const auto& a : atoms)
      if (a.t < t || (closed && a.t == t)) m += a.mass;
    for (const auto& iv : smooth) {
      const double hi = std::min(iv.hi, t);
      if (hi <= iv.lo) continue;
      if (hi == 0.0 && boundary_divergent) return kInf;
      m += integrate([&](double x) { return density(x); }, iv.lo, hi, stats);
    }
    return m;
  }
};

/// Smooth pieces of p on (-inf, hi]: between consecutive kinks, starting where
/// the profile stops being constant.
inline std::vector<Interval> smooth_intervals(const Profile& p, const std::vector<KinkCluster>& clusters, double hi) {
  const auto tb = tail_behavior(p);
  double lo = tb.bounded ? tb.constant_below : -kInf;
  std::vector<Interval> out;
  for (const auto& c : clusters) {
    if (c.first > lo) out.push_back({lo, c.first});
    lo = std::max(lo, c.last);
  }
  if (hi > lo) out.push_back({lo, hi});
  return out;
}

inline RadialMeasure ma_measure(const Profile& p, int n) {
  check_dimension(n);
  RadialMeasure mu{p, n, 0.0, {}, {}, false};
  const auto tb = tail_behavior(p);
  mu.origin_atom = tb.bounded ? 0.0 : std::pow(tb.lelong, n);
  const auto clusters = kink_clusters(p);
  for (const auto& c : clusters) {
    const double left = std::pow(detail::slope(p, c.first, Side::Left), n);
    const double right = std::pow(detail::slope(p, c.last, Side::Right), n);
    const double jump = right - left;
    require(jump >= -1e-12 * std::max(1.0, right), ErrorCode::Invariant,
            "profile is not convex: slope drops at t = " + std::to_string(c.first));
    if (jump > 0.0) mu.atoms.push_back({c.first, jump});
  }
  mu.smooth = smooth_intervals(p, clusters, 0.0);
  mu.boundary_divergent = boundary_behavior(p).slope == kInf;
  return mu;
}

// Exponent sums within this of zero count as the borderline (divergent) case.
inline constexpr double kExponentSlack = 1e-12;

/// e_p = integral of (-f)^p d[(f')^n] over {t <= t_max} (the open unit ball
/// when t_max = 0). Divergence is decided from the tail and boundary exponents
/// before any quadrature runs; +inf is returned in that case.
inline double p_energy(const Profile& p, int n, double exponent, double t_max = 0.0,
                       QuadratureStats* stats = nullptr) {
  check_dimension(n);
  require(exponent >= 0.0 && std::isfinite(exponent), ErrorCode::Domain, "energy exponent p must be >= 0");
  require(t_max <= 0.0, ErrorCode::Domain, "truncation t_max must be <= 0");
  const auto tb = tail_behavior(p);

  double energy = 0.0;
  if (!tb.bounded) {
    if (tb.lelong > 0.0) {
      if (exponent > 0.0) return kInf;
      energy += std::pow(tb.lelong, n);
    } else if (exponent > 0.0 && tb.exponent * exponent + n * (tb.exponent - 1.0) >= -kExponentSlack) {
      // -f ~ sigma^beta, d[(f')^n] ~ sigma^{n(beta-1)-1} d sigma
      return kInf;
    }
  }
  if (t_max == 0.0) {
    const auto bb = boundary_behavior(p);
    if (bb.slope == kInf) {
      if (bb.value < 0.0 || exponent == 0.0) return kInf;
      if (bb.exponent * exponent + n * (bb.exponent - 1.0) <= kExponentSlack) return kInf;
    }
  }

  const auto mu = ma_measure(p, n);
  for (const auto& a : mu.atoms)
    if (a.t <= t_max) energy += a.mass * std::pow(-detail::value(p, a.t), exponent);
  for (const auto& iv : mu.smooth) {
    const double hi = std::min(iv.hi, t_max);
    if (hi <= iv.lo) continue;
    energy += integrate([&](double t) { return std::pow(-detail::value(p, t), exponent) * mu.density(t); }, iv.lo,
                        hi, stats);
  }
  return energy;
}

}  // namespace plurilab
