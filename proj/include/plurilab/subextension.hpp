#pragma once

// Subextension of a radial profile to a global function of logarithmic growth.
//
// For a level s the sublevel set {phi < -s} ∩ B_rho is a ball of log-radius
// tau(s). Its L-extremal function is V_s = max(t - tau, 0), M(s) = -tau, and
// w_s = V_s - M(s) = max(t, tau). Since chi(s) = (-tau)^{-n},
//   w_s(t) chi(s)^{1/n} = max(t / (-tau(s)), -1),
// and v_c(t) is the integral of that over s in [c, inf).

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "plurilab/capacity.hpp"
#include "plurilab/error.hpp"
#include "plurilab/profile.hpp"
#include "plurilab/quadrature.hpp"

namespace plurilab {

inline double L_extremal_ball(double r, double t) {
  require(r > 0.0 && r < 1.0, ErrorCode::Domain, "ball radius must lie in (0,1)");
  return std::max(t - std::log(r), 0.0);
}

namespace detail {

inline double sublevel_ball(const Profile& p, double rho, double s) {
  require(rho > 0.0 && rho <= 1.0, ErrorCode::Domain, "omega radius must lie in (0,1]");
  const auto ts = sublevel_radius(p, s);
  require(ts.has_value(), ErrorCode::EmptySublevel, "sublevel set {phi < -" + std::to_string(s) + "} is empty");
  return std::min(*ts, std::log(rho));
}

}  // namespace detail

/// M(s) = max of V_s over the closed unit ball.
inline double big_M(const Profile& p, double rho, int n, double s) {
  check_dimension(n);
  return -detail::sublevel_ball(p, rho, s);
}

inline double w_field(const Profile& p, double rho, int n, double s, double t) {
  check_dimension(n);
  return std::max(t, detail::sublevel_ball(p, rho, s));
}

struct EtaResult {
  double value = 0.0;
  bool integrable = true;
  QuadratureStats stats;
};

namespace detail {

// Integral of g over [a, inf), split at the curve's breakpoints.
template <class G>
double integrate_levels(const CapacityCurve& curve, const G& g, double a, QuadratureStats* stats) {
  const double end = curve.support_end();
  if (a >= end) return 0.0;
  std::vector<double> cuts{a};
  for (double s : curve.breakpoints(a, end)) cuts.push_back(s);
  double total = 0.0;
  if (std::isfinite(end)) {
    cuts.push_back(end);
  } else {
    // exp_sinh wants the far end to carry the decay; start it past the last kink.
    const double last = cuts.back();
    total += integrate(g, last, kInf, stats);
  }
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += integrate(g, cuts[i], cuts[i + 1], stats);
  return total;
}

}  // namespace detail

/// eta_c = integral over [c, inf) of chi(s)^{1/n}.
inline EtaResult eta(const CapacityCurve& curve, double c) {
  require(c > 0.0 && std::isfinite(c), ErrorCode::Domain, "cut c must be finite and > 0");
  EtaResult r;
  if (!curve.tail_integrable()) {
    r.value = kInf;
    r.integrable = false;
    return r;
  }
  const double blow = curve.blowup_level();
  if (blow > 0.0 && c <= blow) {
    r.value = kInf;
    return r;
  }
  const int n = curve.dimension();
  if (const auto* pl = std::get_if<PowerLawCurve>(&curve.source())) {
    const double k = pl->q / n;
    r.value = std::pow(pl->coef, 1.0 / n) * std::pow(c, 1.0 - k) / (k - 1.0);
    return r;
  }
  r.value = detail::integrate_levels(curve, [&](double s) { return curve.root(s); }, c, &r.stats);
  return r;
}

/// v_c and u_c = v_c - c of a radial field, evaluated on demand.
class SubextensionField {
 public:
  SubextensionField(CapacityCurve curve, double c, std::optional<Profile> source, double rho)
      : curve_(std::move(curve)), c_(c), source_(std::move(source)), rho_(rho) {
    const auto e = plurilab::eta(curve_, c_);
    require(std::isfinite(e.value), ErrorCode::NotIntegrable,
            "integral of chi^{1/n} over [c, inf) diverges; no subextension at this cut");
    eta_ = e.value;
  }

  double cut() const { return c_; }
  double eta() const { return eta_; }
  int dimension() const { return curve_.dimension(); }
  const CapacityCurve& curve() const { return curve_; }
  const std::optional<Profile>& source() const { return source_; }
  double rho() const { return rho_; }

  /// v_c(t) for any t in R (inside and outside the unit ball).
  double v(double t, QuadratureStats* stats = nullptr) const {
    require(!std::isnan(t), ErrorCode::Domain, "log-radius is NaN");
    const double end = curve_.support_end();
    if (t == -kInf) return std::isfinite(end) ? -std::max(end - c_, 0.0) : -kInf;
    if (t == kInf) return kInf;
    // On [c, s*] the sublevel ball contains t and the integrand is exactly -1.
    const double star = std::min(crossover(t), end);
    double out = -std::max(star - c_, 0.0);
    if (t != 0.0) {
      const double lo = std::max(star, c_);
      out += detail::integrate_levels(curve_, [&](double s) { return t * curve_.root(s); }, lo, stats);
    }
    return out;
  }

  double u(double t, QuadratureStats* stats = nullptr) const { return v(t, stats) - c_; }

  /// Upper bound u_c(t) <= eta_c max(t, 0) + growth_constant().
  double growth_constant() const { return -c_; }

  /// b with integral of w_s over the unit ball >= -b for every s >= c.
  /// The integral equals -vol(B)(1 - e^{2n tau})/(2n).
  double ball_integral_bound() const {
    const int n = curve_.dimension();
    const double vol = std::pow(M_PI, n) / std::tgamma(n + 1.0);
    double tau_min = -kInf;
    if (const auto* pc = curve_.profile_curve()) {
      const auto tb = tail_behavior(pc->profile);
      if (tb.bounded) tau_min = std::min(tb.constant_below, std::log(pc->rho));
    }
    return vol * (1.0 - std::exp(2.0 * n * tau_min)) / (2.0 * n);
  }

 private:
  // Largest level whose sublevel ball still reaches t; c when none does.
  double crossover(double t) const {
    if (t >= 0.0) return c_;
    if (const auto* pc = curve_.profile_curve()) {
      if (t > std::log(pc->rho)) return c_;
      return std::max(c_, -detail::value(pc->profile, t));
    }
    const double target = -1.0 / t;
    if (curve_.root(c_) <= target) return c_;
    double lo = c_;
    double hi = 2.0 * c_;
    while (curve_.root(hi) > target) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e300) return kInf;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (curve_.root(mid) > target ? lo : hi) = mid;
    }
    return hi;
  }

  CapacityCurve curve_;
  double c_;
  double eta_ = 0.0;
  std::optional<Profile> source_;
  double rho_ = 1.0;
};

inline SubextensionField build_subextension(const Profile& p, double rho, int n, double c) {
  return SubextensionField(sublevel_capacity_curve(p, rho, n), c, p, rho);
}

inline SubextensionField build_subextension(const CapacityCurve& curve, double c) {
  return SubextensionField(curve, c, std::nullopt, 1.0);
}

/// Smallest c of the form 2^k (k >= 0) with eta_c <= eps.
inline double cut_for_eta(const CapacityCurve& curve, double eps) {
  require(eps > 0.0, ErrorCode::Domain, "eps must be > 0");
  require(curve.tail_integrable(), ErrorCode::NotIntegrable, "capacity curve is not tail integrable");
  double c = 1.0;
  for (int k = 0; k < 200; ++k, c *= 2.0)
    if (eta(curve, c).value <= eps) return c;
  fail(ErrorCode::NotIntegrable, "no cut reaches eta <= " + std::to_string(eps));
}

/// Integral of -h(-t) / t^{1+1/n} over [1, inf) is finite, for h = -k(-x)^alpha.
inline bool h_condition(const PowerH& h, int n) {
  check_dimension(n);
  require(h.scale > 0.0 && h.exponent > 0.0, ErrorCode::Domain, "h must be increasing");
  require(h.exponent <= 1.0, ErrorCode::Domain, "h = -k(-x)^alpha with alpha > 1 is not convex");
  // integrand k t^{alpha - 1 - 1/n}
  return h.exponent < 1.0 / n;
}

/// Profile of h(u).
inline Profile compose_h(const Profile& u, const PowerH& h) {
  require(h.scale > 0.0 && h.exponent > 0.0 && h.exponent <= 1.0, ErrorCode::Domain,
          "h must be increasing and convex");
  if (h.is_identity()) return u;
  return std::visit(
      detail::overloaded{
          [&](const LogLinear& l) {
            if (l.offset != 0.0 && h.exponent != 1.0) return detail::make({Composed{h, u}});
            if (h.exponent == 1.0) return log_linear(h.scale * l.slope, h.scale * l.offset);
            if (l.slope == 0.0) return u;
            return power_alpha(h.scale * std::pow(l.slope, h.exponent), h.exponent);
          },
          [&](const PowerAlpha& a) {
            return power_alpha(h.scale * std::pow(a.scale, h.exponent), h.exponent * a.exponent);
          },
          [&](const FloorCap& f) { return floor_cap(compose_h(f.inner, h), -h(-f.floor)); },
          [&](const Piecewise& pw) {
            std::vector<Profile> seg;
            for (const auto& s : pw.segments) seg.push_back(compose_h(s, h));
            return piecewise(compose_h(pw.tail, h), pw.breakpoints, std::move(seg));
          },
          [&](const Composed& c) {
            const PowerH hh{h.scale * std::pow(c.h.scale, h.exponent), h.exponent * c.h.exponent};
            return compose_h(c.inner, hh);
          },
          [&](const PositiveSum&) { return detail::make({Composed{h, u}}); },
      },
      u.node().form);
}

}  // namespace plurilab
