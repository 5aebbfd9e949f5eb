#pragma once

// The property battery behind `plurilab suite`. Every check is deterministic:
// fixed grids and a fixed-seed generator for the random samples.

#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "plurilab/capacity.hpp"
#include "plurilab/disc_example.hpp"
#include "plurilab/estimates.hpp"
#include "plurilab/global_radial.hpp"
#include "plurilab/measure.hpp"
#include "plurilab/profile.hpp"
#include "plurilab/report.hpp"
#include "plurilab/subextension.hpp"

namespace plurilab {

namespace detail {

// |value - expected| <= tol as a report sample.
inline void expect_near(InequalityReport& r, double s, double value, double expected, double tol,
                        const std::string& what) {
  const double diff = value == expected ? 0.0 : std::abs(value - expected);
  r.samples.push_back({s, std::isnan(diff) ? kInf : diff, tol, what});
}

inline void expect_true(InequalityReport& r, double s, bool ok, const std::string& what) {
  r.samples.push_back({s, ok ? 0.0 : 1.0, 0.0, what});
}

inline InequalityReport named(std::string name) {
  InequalityReport r;
  r.name = std::move(name);
  return r;
}

inline InequalityReport close(InequalityReport r) {
  finalize(r, 0.0);
  return r;
}

// Merges several reports into one: fails if any fails.
inline InequalityReport merge(std::string name, const std::vector<InequalityReport>& parts) {
  InequalityReport r = named(std::move(name));
  bool any_fail = false;
  double worst = 0.0;
  for (const auto& p : parts) {
    if (p.verdict == Verdict::Fails) {
      any_fail = true;
      if (r.note.empty()) r.note = p.name + " fails" + (p.note.empty() ? "" : ": " + p.note);
    }
    if (p.applicable()) worst = std::max(worst, p.fitted_constant);
    r.samples.insert(r.samples.end(), p.samples.begin(), p.samples.end());
  }
  finalize(r, kReportTol);
  if (any_fail) r.verdict = Verdict::Fails;
  r.fitted_constant = worst;
  return r;
}

}  // namespace detail

inline std::vector<InequalityReport> run_suite(double tol = kReportTol) {
  using detail::expect_near;
  using detail::expect_true;
  std::vector<InequalityReport> out;
  const auto s_grid = log_grid(1e-3, 1e6, 1000);

  {
    auto r = detail::named("normalization");
    for (double s : {0.1, 1.0, 10.0}) {
      const auto mu = ma_measure(floor_cap(log_linear(1, 0), s), 3);
      expect_near(r, s, mu.total(), 1.0, 1e-12, "total mass of max(log|z|, -s)");
    }
    out.push_back(detail::close(r));
  }
  {
    auto r = detail::named("ball-capacity");
    std::mt19937_64 gen(20240601);
    std::uniform_real_distribution<double> radius(0.01, 0.99);
    for (int k = 0; k < 20; ++k) {
      const double rr = radius(gen);
      const int n = 1 + k % 3;
      const auto mu = ma_measure(ball_extremal_profile(rr), n);
      expect_near(r, rr, ball_capacity(rr, n), mu.total(), 1e-10, "cap(B_r) vs extremal mass");
    }
    out.push_back(detail::close(r));
  }
  {
    auto r = detail::named("energy-closed-form");
    const double e = p_energy(sweep(power_alpha(1, 1.0 / 3.0), std::exp(-1.0)), 2, 0.5);
    expect_near(r, 0.5, e, 64.0 / 63.0, 1e-8, "e_{1/2}");
    out.push_back(detail::close(r));
  }
  {
    std::vector<InequalityReport> parts;
    for (const auto& b : battery()) parts.push_back(check_prop31(b.profile, b.rho, 2, 0.5, s_grid, tol));
    auto worked = check_prop31(power_alpha(1, 1.0 / 3.0), std::exp(-1.0), 2, 0.5, s_grid, tol);
    auto r = detail::named("capacity-energy");
    expect_near(r, 1.0, worked.fitted_constant, 63.0 / 64.0, 1e-6, "empirical constant of the worked example");
    expect_near(r, 1.0, worked.worst_s, 1.0, 1e-12, "level attaining the constant");
    parts.push_back(detail::close(r));
    out.push_back(detail::merge("capacity-energy", parts));
  }
  {
    std::vector<InequalityReport> parts;
    for (const auto& b : battery()) parts.push_back(check_compest(b.profile, b.rho, 2, s_grid, tol));
    out.push_back(detail::merge("two-sided-comparison", parts));
  }
  {
    auto r = detail::named("fa-equivalence");
    for (const auto& b : battery()) {
      const auto fa = classify_Fa(b.profile, b.rho, 2);
      expect_true(r, b.rho, fa.no_mass_at_poles == fa.capacity_decay, b.name);
    }
    const auto ll = classify_Fa(log_linear(1, 0), std::exp(-1.0), 2);
    expect_true(r, 0.0, !ll.no_mass_at_poles && !ll.capacity_decay, "loglinear lies outside F^a");
    out.push_back(detail::close(r));
  }
  {
    auto r = detail::named("extremal-product");
    const Profile f = power_alpha(1, 1.0 / 3.0);
    const auto curve = sublevel_capacity_curve(f, 1.0, 2);
    for (double s : s_grid) expect_near(r, s, big_M(f, 1.0, 2, s) * curve.root(s), 1.0, 1e-10, "M(s) chi(s)^{1/n}");
    out.push_back(detail::close(r));
  }
  {
    auto r = detail::named("subextension");
    const Profile f = power_alpha(1, 1.0 / 3.0);
    const auto field = build_subextension(f, 1.0, 2, 1.0);
    expect_near(r, 1.0, field.eta(), 0.5, 1e-8, "eta_1");
    expect_near(r, -1.0, field.u(-1.0), -1.5, 1e-7, "u_1(-1)");
    for (double t : {1.0, 5.0, 10.0, 20.0}) expect_near(r, t, field.u(t) - t / 2.0, -1.0, 1e-7, "u_1(t) - t/2");
    for (int k = 0; k < 1000; ++k) {
      const double t = -std::pow(10.0, -4.0 + 8.0 * k / 999.0);
      r.samples.push_back({t, field.u(t), detail::value(f, t) + 1e-7, "u_1 <= phi"});
    }
    out.push_back(detail::close(r));
  }
  {
    auto r = detail::named("h-condition");
    for (int n = 1; n <= 3; ++n) {
      for (double d : {-0.05, 0.0, 0.05}) {
        const double alpha = 1.0 / n + d;
        bool verdict = false;
        try {
          verdict = h_condition(PowerH{1.0, alpha}, n);
        } catch (const Error&) {
          verdict = false;
        }
        expect_true(r, alpha, verdict == (alpha < 1.0 / n), "n = " + std::to_string(n));
      }
    }
    out.push_back(detail::close(r));
  }
  {
    std::vector<InequalityReport> parts;
    const std::vector<Profile> profiles{floor_cap(log_linear(1, 0), 1), log_linear(1, -1),
                                        sweep(power_alpha(1, 1.0 / 3.0), std::exp(-1.0))};
    auto r = detail::named("global-growth");
    for (const auto& f : profiles) {
      const auto g = global_subextension(f, 2);
      expect_near(r, 0.0, std::pow(g.gamma, 2), total_mass(f, 2), 0.0, "gamma^n = total mass");
      for (int k = 0; k <= 100; ++k) {
        const double t = -std::pow(10.0, -3.0 + 6.0 * k / 100.0);
        expect_near(r, t, g.eval(t), detail::value(f, t), 0.0, "g = f inside the ball");
      }
      const auto id = verify_mass_identity(g, 2);
      parts.push_back(id.report);
      const auto bad = verify_mass_identity(with_outer_slope(g, g.gamma + 0.1), 2);
      expect_true(r, 0.0, !bad.report.holds(), "perturbed slope fails");
      expect_near(r, 0.0, bad.sphere_atom, std::pow(g.gamma + 0.1, 2) - std::pow(g.gamma, 2), 1e-12,
                  "predicted sphere atom");
    }
    parts.push_back(detail::close(r));
    out.push_back(detail::merge("global-subextension", parts));
  }
  {
    auto r = detail::named("disc-example");
    const auto sys = GreenPoleSystem::default_schedule(30);
    for (std::size_t J = 1; J <= 30; ++J)
      expect_near(r, static_cast<double>(J), obstruction_sum(sys, J), -static_cast<double>(J), 0.0, "obstruction sum");
    const auto small = GreenPoleSystem::default_schedule(6);
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int kept = 0;
    while (kept < 10000) {
      const cplx z{u(gen), u(gen)};
      if (std::abs(z) >= 1.0) continue;
      const double v = v_field(small, z);
      r.samples.push_back({z.real(), -v, 1.0, "v >= -1"});
      r.samples.push_back({z.real(), v, 0.0, "v <= 0"});
      ++kept;
    }
    out.push_back(detail::close(r));
  }
  return out;
}

}  // namespace plurilab
