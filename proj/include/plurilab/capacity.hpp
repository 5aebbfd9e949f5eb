#pragma once

// Relative Monge-Ampere capacities in the unit ball.
//
// Cap(B_r; B_1) = (-log r)^{-n}: the extremal function of the condenser is
// max(log|z| / (-log r), -1), whose only mass is the slope jump (1/(-log r))^n
// on the sphere |z| = r. Sublevel sets of radial functions are balls, so every
// capacity curve reduces to this closed form.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "plurilab/error.hpp"
#include "plurilab/measure.hpp"
#include "plurilab/profile.hpp"
#include "plurilab/quadrature.hpp"

namespace plurilab {

inline double ball_capacity(double r, int n) {
  check_dimension(n);
  require(r > 0.0 && r < 1.0, ErrorCode::Domain, "ball radius must lie in (0,1)");
  return std::pow(-std::log(r), -n);
}

/// The condenser extremal of B_r in B_1 as a profile.
inline Profile ball_extremal_profile(double r) {
  require(r > 0.0 && r < 1.0, ErrorCode::Domain, "ball radius must lie in (0,1)");
  return floor_cap(log_linear(1.0 / -std::log(r), 0.0), 1.0);
}

/// chi(s) = coef * s^{-q}.
struct PowerLawCurve {
  double coef;
  double q;
};

/// chi(s) = Cap({phi < -s} ∩ B_rho; B_1) for a radial phi.
struct ProfileCurve {
  Profile profile;
  double rho;
};

/// Log-log interpolated samples; extrapolated beyond the last knot as a power
/// law with exponent tail_q.
struct SampledCurve {
  std::vector<double> s;
  std::vector<double> chi;
  double tail_q;
};

struct TailCertificate {
  double q = 0.0;               // chi(s) ~ C s^{-q}; +inf when eventually zero
  bool eventually_zero = false;
};

class CapacityCurve {
 public:
  using Source = std::variant<PowerLawCurve, ProfileCurve, SampledCurve>;

  CapacityCurve(Source source, int n) : source_(std::move(source)), n_(n) { check_dimension(n); }

  int dimension() const { return n_; }
  const Source& source() const { return source_; }
  const ProfileCurve* profile_curve() const { return std::get_if<ProfileCurve>(&source_); }

  /// Log-radius of the ball {phi < -s} ∩ B_rho; nullopt when empty.
  std::optional<double> ball_log_radius(double s) const {
    const auto& pc = std::get<ProfileCurve>(source_);
    const auto ts = sublevel_radius(pc.profile, s);
    if (!ts) return std::nullopt;
    return std::min(*ts, std::log(pc.rho));
  }

  double operator()(double s) const {
    require(s > 0.0, ErrorCode::Domain, "level s must be > 0");
    return std::visit(detail::overloaded{
                          [&](const PowerLawCurve& c) { return c.coef * std::pow(s, -c.q); },
                          [&](const ProfileCurve&) {
                            const auto tau = ball_log_radius(s);
                            if (!tau) return 0.0;
                            if (*tau >= 0.0) return kInf;
                            return std::pow(-*tau, -n_);
                          },
                          [&](const SampledCurve& c) { return sampled(c, s); },
                      },
                      source_);
  }

  /// chi(s)^{1/n}.
  double root(double s) const {
    if (profile_curve()) {
      const auto tau = ball_log_radius(s);
      if (!tau) return 0.0;
      if (*tau >= 0.0) return kInf;
      return 1.0 / -*tau;
    }
    return std::pow((*this)(s), 1.0 / n_);
  }

  TailCertificate tail() const {
    return std::visit(detail::overloaded{
                          [&](const PowerLawCurve& c) { return TailCertificate{c.q, false}; },
                          [&](const ProfileCurve& c) {
                            const auto tb = tail_behavior(c.profile);
                            if (tb.bounded) return TailCertificate{kInf, true};
                            return TailCertificate{n_ / tb.exponent, false};
                          },
                          [&](const SampledCurve& c) {
                            if (c.chi.back() == 0.0) return TailCertificate{kInf, true};
                            return TailCertificate{c.tail_q, false};
                          },
                      },
                      source_);
  }

  /// Tail integral of chi^{1/n} finite.
  bool tail_integrable() const {
    const auto tc = tail();
    return tc.eventually_zero || tc.q > n_;
  }

  /// Levels where chi changes formula or loses smoothness, strictly inside (a, b).
  std::vector<double> breakpoints(double a, double b) const {
    std::vector<double> out;
    auto push = [&](double s) {
      if (s > a && s < b && std::isfinite(s)) out.push_back(s);
    };
    std::visit(detail::overloaded{
                   [&](const PowerLawCurve&) {},
                   [&](const ProfileCurve& c) {
                     const double L = std::log(c.rho);
                     for (double t : kinks(c.profile))
                       if (t < L) push(-detail::value(c.profile, t));
                     if (c.rho < 1.0) push(-detail::value(c.profile, L));
                     push(blowup_level());
                     push(support_end());
                   },
                   [&](const SampledCurve& c) {
                     for (double s : c.s) push(s);
                   },
               },
               source_);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// chi vanishes for s >= support_end().
  double support_end() const {
    if (const auto* pc = profile_curve()) {
      const auto tb = tail_behavior(pc->profile);
      return tb.bounded ? -tb.infimum : kInf;
    }
    if (const auto* sc = std::get_if<SampledCurve>(&source_)) {
      for (std::size_t i = 0; i < sc->chi.size(); ++i)
        if (sc->chi[i] == 0.0) return sc->s[i];
    }
    return kInf;
  }

  /// chi = +inf for s < blowup_level() (sublevel set fills the unit ball).
  double blowup_level() const {
    if (const auto* pc = profile_curve()) {
      if (pc->rho < 1.0) return 0.0;
      return std::max(0.0, -detail::value(pc->profile, 0.0));
    }
    return 0.0;
  }

 private:
  static double sampled(const SampledCurve& c, double s) {
    const auto& xs = c.s;
    if (s <= xs.front()) {
      if (xs.size() < 2 || c.chi[0] <= 0.0 || c.chi[1] <= 0.0) return c.chi.front();
      const double k = std::log(c.chi[1] / c.chi[0]) / std::log(xs[1] / xs[0]);
      return c.chi[0] * std::pow(s / xs[0], k);
    }
    if (s >= xs.back()) {
      if (c.chi.back() == 0.0) return 0.0;
      return c.chi.back() * std::pow(s / xs.back(), -c.tail_q);
    }
    const auto it = std::upper_bound(xs.begin(), xs.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
    if (c.chi[i + 1] == 0.0) return 0.0;
    const double w = std::log(s / xs[i]) / std::log(xs[i + 1] / xs[i]);
    return std::exp((1.0 - w) * std::log(c.chi[i]) + w * std::log(c.chi[i + 1]));
  }

  Source source_;
  int n_;
};

inline CapacityCurve sublevel_capacity_curve(const Profile& p, double rho, int n) {
  require(rho > 0.0 && rho <= 1.0, ErrorCode::Domain, "omega radius must lie in (0,1]");
  return CapacityCurve(ProfileCurve{p, rho}, n);
}

inline CapacityCurve power_law_curve(double coef, double q, int n) {
  require(coef > 0.0 && q > 0.0, ErrorCode::Domain, "power-law curve needs coef > 0, q > 0");
  return CapacityCurve(PowerLawCurve{coef, q}, n);
}

/// Monotone sample table; tail_q defaults to the last log-log slope.
inline CapacityCurve sampled_curve(std::vector<double> s, std::vector<double> chi, int n,
                                   std::optional<double> tail_q = std::nullopt) {
  require(s.size() == chi.size() && s.size() >= 2, ErrorCode::Domain, "sampled curve needs >= 2 knots");
  for (std::size_t i = 0; i < s.size(); ++i) {
    require(s[i] > 0.0 && chi[i] >= 0.0, ErrorCode::Domain, "sampled curve needs s > 0, chi >= 0");
    if (i > 0) {
      require(s[i] > s[i - 1], ErrorCode::Domain, "sampled curve knots must increase");
      require(chi[i] <= chi[i - 1], ErrorCode::Domain, "capacity curve must be nonincreasing");
    }
  }
  double q = 0.0;
  if (tail_q) {
    q = *tail_q;
  } else {
    const std::size_t k = s.size() - 1;
    if (chi[k] > 0.0 && chi[k - 1] > 0.0) q = -std::log(chi[k] / chi[k - 1]) / std::log(s[k] / s[k - 1]);
  }
  return CapacityCurve(SampledCurve{std::move(s), std::move(chi), q}, n);
}

// ---------------------------------------------------------------------------

struct PhiCapacityBounds {
  double lower = 0.0;
  double mid = 0.0;
  bool upper_certified = false;
  bool sandwich_holds = false;
  std::vector<double> candidate_masses;
};

namespace detail {

inline std::vector<double> admissibility_grid(const Profile& a, const Profile& b) {
  std::vector<double> grid;
  for (int k = -60; k <= 60; ++k) grid.push_back(-std::pow(10.0, k / 10.0));
  grid.push_back(0.0);
  for (const auto& prof : {a, b}) {
    for (double t : kinks(prof)) {
      grid.push_back(t);
      grid.push_back(std::min(0.0, t + 1e-9));
      grid.push_back(t - 1e-9);
    }
  }
  std::sort(grid.begin(), grid.end());
  return grid;
}

}  // namespace detail

/// Sandwich C_phi(K°) <= mass of the swept function <= C_phi(K̄) for the
/// closed ball K of radius rho. Each candidate psi must be bounded with
/// phi <= psi <= 0; its mass on K is f_psi'(log rho^+)^n.
inline PhiCapacityBounds phi_capacity_bounds(const Profile& p, double rho, int n, std::span<const Profile> candidates) {
  check_dimension(n);
  const Profile swept = sweep(p, rho);
  const double L = std::log(rho);
  PhiCapacityBounds out;
  out.mid = total_mass(swept, n);

  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Profile& psi = candidates[i];
    require(tail_behavior(psi).bounded, ErrorCode::Inadmissible,
            "candidate " + std::to_string(i) + " is unbounded");
    for (double t : detail::admissibility_grid(p, psi)) {
      const double v = detail::value(psi, t);
      const double f = detail::value(p, t);
      require(v <= 1e-12, ErrorCode::Inadmissible,
              "candidate " + std::to_string(i) + " is positive at t = " + std::to_string(t));
      require(v >= f - 1e-12 * std::max(1.0, std::abs(f)), ErrorCode::Inadmissible,
              "candidate " + std::to_string(i) + " lies below phi at t = " + std::to_string(t));
    }
    const double mass = mass_closed_ball(psi, n, L);
    out.candidate_masses.push_back(mass);
    out.lower = std::max(out.lower, mass);
  }
  out.sandwich_holds = out.lower <= out.mid * (1.0 + 1e-9);

  // The floored sweep is bounded, admissible, and carries the full mass on K.
  const Profile maximizer = floor_cap(swept, -detail::value(p, L) + 1.0);
  const double best = mass_closed_ball(maximizer, n, L);
  out.upper_certified = std::abs(best - out.mid) <= 1e-12 * std::max(1.0, out.mid);
  return out;
}

// ---------------------------------------------------------------------------

/// theta(t) = coef * t^power * log(1 + t)^{-log_power}.
struct ThetaDescriptor {
  double coef = 1.0;
  double power = 0.0;
  double log_power = 0.0;

  double operator()(double t) const { return coef * std::pow(t, power) * std::pow(std::log1p(t), -log_power); }
};

/// Convergence of the integral of theta(t)/t over [1, inf).
inline bool bedford_theta_check(const ThetaDescriptor& theta) {
  require(theta.coef > 0.0, ErrorCode::Domain, "theta coefficient must be > 0");
  require(theta.power <= 0.0 && theta.log_power >= 0.0 && (theta.power < 0.0 || theta.log_power > 0.0),
          ErrorCode::Domain, "theta must be decreasing");
  if (theta.power < 0.0) return true;
  return theta.log_power > 1.0;
}

struct ThetaVerdict {
  bool converges = false;
  double partial = 0.0;     // integral over [1, 10^decades]
  double tail_bound = kInf; // geometric bound on the rest when convergent
};

/// Fallback for an arbitrary decreasing theta: integrates decade by decade and
/// certifies convergence only when the decade integrals decay at least
/// geometrically (ratio <= 0.9) over the last three decades.
inline ThetaVerdict bedford_theta_check(const std::function<double(double)>& theta, int decades = 12) {
  double prev = kInf;
  for (int k = 0; k <= 4 * decades; ++k) {
    const double v = theta(std::pow(10.0, k / 4.0));
    require(v <= prev && v > 0.0, ErrorCode::Domain, "theta must be positive and decreasing");
    prev = v;
  }
  std::vector<double> pieces;
  ThetaVerdict out;
  for (int k = 0; k < decades; ++k) {
    const double a = k * std::log(10.0);
    const double b = (k + 1) * std::log(10.0);
    pieces.push_back(integrate([&](double u) { return theta(std::exp(u)); }, a, b));
    out.partial += pieces.back();
  }
  double worst = 0.0;
  for (std::size_t k = pieces.size() - 3; k < pieces.size(); ++k) worst = std::max(worst, pieces[k] / pieces[k - 1]);
  out.converges = worst <= 0.9;
  if (out.converges) out.tail_bound = pieces.back() * worst / (1.0 - worst);
  return out;
}

// ---------------------------------------------------------------------------

struct ClassReport {
  bool in_F = false;
  bool in_Fa = false;
  double p_sup = 0.0;
  double swept_mass = 0.0;
  double origin_atom = 0.0;
  double decay_exponent = 0.0;  // q of s -> Cap({swept < -s}; B_1)
  std::array<double, 3> fa_probe{};  // s^n chi(s) at s = 1e2, 1e4, 1e6
  bool fa_probe_pass = false;
};

inline ClassReport class_membership(const Profile& p, double rho, int n) {
  check_dimension(n);
  const Profile swept = sweep(p, rho);
  ClassReport r;
  r.swept_mass = total_mass(swept, n);
  r.in_F = std::isfinite(r.swept_mass);
  const auto tb = tail_behavior(swept);
  r.origin_atom = tb.bounded ? 0.0 : std::pow(tb.lelong, n);

  const auto curve = sublevel_capacity_curve(swept, 1.0, n);
  const auto tc = curve.tail();
  r.decay_exponent = tc.q;
  r.in_Fa = r.in_F && (tc.eventually_zero || tc.q > n);

  if (tb.bounded) r.p_sup = kInf;
  else if (tb.lelong > 0.0) r.p_sup = 0.0;
  else r.p_sup = n * (1.0 - tb.exponent) / tb.exponent;

  const std::array<double, 3> levels{1e2, 1e4, 1e6};
  r.fa_probe_pass = true;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    r.fa_probe[i] = std::pow(levels[i], n) * curve(levels[i]);
    if (!(r.fa_probe[i] < 1e-3)) r.fa_probe_pass = false;
    if (i > 0 && r.fa_probe[i] > r.fa_probe[i - 1]) r.fa_probe_pass = false;
  }
  return r;
}

}  // namespace plurilab
