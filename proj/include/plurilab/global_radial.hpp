#pragma once

// Global radial subextension. Prescribing a radial Monge-Ampere measure is a
// first-order equation in (g')^n, so the subextension of f in F is f itself
// continued past the unit sphere by the line of slope gamma = f'(0^-). Any
// other outer slope puts the mass gamma'^n - gamma^n on the sphere.

#include <cmath>
#include <string>
#include <vector>

#include "plurilab/error.hpp"
#include "plurilab/measure.hpp"
#include "plurilab/profile.hpp"
#include "plurilab/report.hpp"

namespace plurilab {

struct GlobalProfile {
  Profile inner;
  double gamma;     // outer slope
  double junction;  // f(0^-)

  double eval(double t) const {
    if (t <= 0.0) return detail::value(inner, t);
    return junction + gamma * t;
  }

  double slope(double t, Side side) const {
    if (t > 0.0 || (t == 0.0 && side == Side::Right)) return gamma;
    return detail::slope(inner, t, side);
  }

  /// Mass of {log|z| <= t} for any real t.
  double mass_closed(int n, double t) const { return std::pow(slope(t, Side::Right), n); }
};

inline GlobalProfile global_subextension(const Profile& p, int n) {
  check_dimension(n);
  const double gamma = left_derivative(p, 0.0);
  require(std::isfinite(gamma), ErrorCode::NotInF, "total Monge-Ampere mass is infinite");
  return GlobalProfile{p, gamma, detail::value(p, 0.0)};
}

inline GlobalProfile with_outer_slope(GlobalProfile g, double gamma) {
  require(gamma >= 0.0 && std::isfinite(gamma), ErrorCode::Domain, "outer slope must be finite and >= 0");
  g.gamma = gamma;
  return g;
}

struct MassIdentityReport {
  InequalityReport report;
  double origin_atom_global = 0.0;
  double origin_atom_inner = 0.0;
  double sphere_atom = 0.0;
  double outer_mass = 0.0;  // mass of {t > 0}
  std::vector<Atom> atoms_global;
  std::vector<Atom> atoms_inner;
  std::vector<Atom> discrepancy;
};

/// Compares the measure of g on R with the measure of f restricted to the
/// open unit ball: the first from slopes of g, the second from atoms plus
/// integrated density of f.
inline MassIdentityReport verify_mass_identity(const GlobalProfile& g, int n, double tol = 1e-10) {
  check_dimension(n);
  MassIdentityReport out;
  const auto mu = ma_measure(g.inner, n);
  out.origin_atom_inner = mu.origin_atom;
  out.atoms_inner = mu.atoms;

  const auto tb = tail_behavior(g.inner);
  out.origin_atom_global = tb.bounded ? 0.0 : std::pow(g.slope(-kInf, Side::Right), n);
  for (const auto& c : kink_clusters(g.inner)) {
    const double jump = std::pow(g.slope(c.last, Side::Right), n) - std::pow(g.slope(c.first, Side::Left), n);
    if (jump > 0.0) out.atoms_global.push_back({c.first, jump});
  }
  out.sphere_atom = std::pow(g.gamma, n) - std::pow(g.slope(0.0, Side::Left), n);
  if (out.sphere_atom != 0.0) {
    out.atoms_global.push_back({0.0, out.sphere_atom});
    out.discrepancy.push_back({0.0, out.sphere_atom});
  }
  out.outer_mass = g.mass_closed(n, 1e6) - g.mass_closed(n, 0.0);

  auto& r = out.report;
  r.name = "mass-identity";
  auto check = [&](double t, double diff, const char* what) {
    r.samples.push_back({t, std::abs(diff), tol, what});
  };
  check(-kInf, out.origin_atom_global - out.origin_atom_inner, "origin atom");
  check(0.0, out.sphere_atom, "sphere atom");
  check(0.0, out.outer_mass, "mass outside the ball");
  if (out.atoms_global.size() - out.discrepancy.size() != out.atoms_inner.size())
    check(0.0, 1.0, "atom count");
  for (std::size_t i = 0; i < out.atoms_inner.size() && i < out.atoms_global.size(); ++i) {
    check(out.atoms_inner[i].t, out.atoms_global[i].t - out.atoms_inner[i].t, "atom position");
    check(out.atoms_inner[i].t, out.atoms_global[i].mass - out.atoms_inner[i].mass, "atom mass");
  }

  std::vector<double> grid;
  for (int k = -40; k <= 20; ++k) grid.push_back(-std::pow(10.0, k / 10.0));
  for (const auto& a : mu.atoms) {
    grid.push_back(a.t);
    grid.push_back(a.t - 1e-6);
    if (a.t + 1e-6 < 0.0) grid.push_back(a.t + 1e-6);
  }
  std::sort(grid.begin(), grid.end());
  const double total = mu.total();
  for (double t : grid) check(t, g.mass_closed(n, t) - mu.cumulative(t), "cumulative mass");
  for (double t : {0.0, 1.0, 10.0}) check(t, g.mass_closed(n, t) - total, "cumulative mass");

  finalize(r, 0.0);
  if (!r.holds()) r.note = "discrepancy of the measures; sphere atom " + std::to_string(out.sphere_atom);
  return out;
}

}  // namespace plurilab
