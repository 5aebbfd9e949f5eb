#pragma once

// Radial plurisubharmonic profiles on the unit ball of C^n.
//
// A radial psh function is phi(z) = f(log|z|) with f convex and nondecreasing
// on t = log|z| <= 0. Profiles are exact symbolic trees built from a handful of
// primitive forms; every quantity downstream (Monge-Ampere mass, energies,
// capacities of sublevel sets) is computed from the tree, never from a grid.

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "plurilab/error.hpp"

namespace plurilab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Breakpoints closer than this are one breakpoint.
inline constexpr double kBreakpointMerge = 1e-12;

enum class Side { Left, Right };

struct ProfileNode;

/// Immutable handle to a profile tree. Copies share the tree.
class Profile {
 public:
  explicit Profile(std::shared_ptr<const ProfileNode> node) : node_(std::move(node)) {}

  const ProfileNode& node() const { return *node_; }
  bool same_node(const Profile& other) const { return node_ == other.node_; }

 private:
  std::shared_ptr<const ProfileNode> node_;
};

/// h(x) = -scale * (-x)^exponent on x <= 0. Increasing and convex for
/// exponent in (0, 1]; exponent = 1, scale = 1 is the identity.
struct PowerH {
  double scale = 1.0;
  double exponent = 1.0;

  bool is_identity() const { return scale == 1.0 && exponent == 1.0; }

  double operator()(double x) const {
    if (x == -kInf) return -kInf;
    return -scale * std::pow(-x, exponent);
  }
  double derivative(double x) const {
    if (exponent == 1.0) return scale;
    if (x == 0.0) return kInf;
    return scale * exponent * std::pow(-x, exponent - 1.0);
  }
  double second_derivative(double x) const {
    if (exponent == 1.0) return 0.0;
    if (x == 0.0) return kInf;
    return scale * exponent * (1.0 - exponent) * std::pow(-x, exponent - 2.0);
  }
  /// g = h^{-1}: g(y) = -(-y / scale)^{1/exponent}.
  double inverse(double y) const { return -std::pow(-y / scale, 1.0 / exponent); }
};

struct LogLinear {
  double slope;
  double offset;
};

struct PowerAlpha {
  double scale;
  double exponent;
};

struct FloorCap {
  Profile inner;
  double floor;
  // Crossing point of inner with -floor; empty when inner never drops below it.
  std::optional<double> kink;
  // Floor active on all of (-inf, 0].
  bool flat = false;
};

struct PositiveSum {
  std::vector<double> weights;
  std::vector<Profile> terms;
};

struct SweepOrigin {
  Profile source;
  double rho;
};

/// tail on (-inf, b_1], segments[i] on [b_{i+1}, b_{i+2}] with b_{k+1} = 0.
struct Piecewise {
  Profile tail;
  std::vector<double> breakpoints;
  std::vector<Profile> segments;
  std::optional<SweepOrigin> origin;
};

struct Composed {
  PowerH h;
  Profile inner;
};

struct ProfileNode {
  std::variant<LogLinear, PowerAlpha, FloorCap, PositiveSum, Piecewise, Composed> form;
};

namespace detail {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline Profile make(ProfileNode node) {
  return Profile(std::make_shared<const ProfileNode>(std::move(node)));
}

inline bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-15 * std::max({1.0, std::abs(a), std::abs(b)});
}

inline double value(const Profile& p, double t);
inline double slope(const Profile& p, double t, Side side);
inline std::optional<double> sublevel(const Profile& p, double s);

// Index 0 is the tail; index i >= 1 is segments[i - 1].
inline std::size_t piece_index(const Piecewise& pw, double t, Side side) {
  const auto& b = pw.breakpoints;
  if (side == Side::Right) return static_cast<std::size_t>(std::upper_bound(b.begin(), b.end(), t) - b.begin());
  return static_cast<std::size_t>(std::lower_bound(b.begin(), b.end(), t) - b.begin());
}

inline const Profile& piece(const Piecewise& pw, std::size_t idx) {
  return idx == 0 ? pw.tail : pw.segments[idx - 1];
}

inline double value(const Profile& p, double t) {
  return std::visit(
      overloaded{
          [&](const LogLinear& f) { return f.slope == 0.0 ? f.offset : f.slope * t + f.offset; },
          [&](const PowerAlpha& f) { return -f.scale * std::pow(-t, f.exponent); },
          [&](const FloorCap& f) {
            if (f.flat) return -f.floor;
            return std::max(value(f.inner, t), -f.floor);
          },
          [&](const PositiveSum& f) {
            double acc = 0.0;
            for (std::size_t i = 0; i < f.terms.size(); ++i) acc += f.weights[i] * value(f.terms[i], t);
            return acc;
          },
          [&](const Piecewise& f) { return value(piece(f, piece_index(f, t, Side::Right)), t); },
          [&](const Composed& f) { return f.h(value(f.inner, t)); },
      },
      p.node().form);
}

inline double slope(const Profile& p, double t, Side side) {
  return std::visit(
      overloaded{
          [&](const LogLinear& f) { return f.slope; },
          [&](const PowerAlpha& f) {
            if (t == 0.0) return kInf;
            return f.scale * f.exponent * std::pow(-t, f.exponent - 1.0);
          },
          [&](const FloorCap& f) {
            if (f.flat) return 0.0;
            if (!f.kink) return slope(f.inner, t, side);
            if (t < *f.kink) return 0.0;
            if (t > *f.kink) return slope(f.inner, t, side);
            return side == Side::Left ? 0.0 : slope(f.inner, t, Side::Right);
          },
          [&](const PositiveSum& f) {
            double acc = 0.0;
            for (std::size_t i = 0; i < f.terms.size(); ++i) acc += f.weights[i] * slope(f.terms[i], t, side);
            return acc;
          },
          [&](const Piecewise& f) { return slope(piece(f, piece_index(f, t, side)), t, side); },
          [&](const Composed& f) {
            const double inner_slope = slope(f.inner, t, side);
            if (inner_slope == 0.0) return 0.0;
            return f.h.derivative(value(f.inner, t)) * inner_slope;
          },
      },
      p.node().form);
}

// Second derivative on smooth pieces (right-side convention at kinks).
inline double curvature(const Profile& p, double t) {
  return std::visit(
      overloaded{
          [&](const LogLinear&) { return 0.0; },
          [&](const PowerAlpha& f) {
            if (t == 0.0) return kInf;
            return f.scale * f.exponent * (1.0 - f.exponent) * std::pow(-t, f.exponent - 2.0);
          },
          [&](const FloorCap& f) {
            if (f.flat) return 0.0;
            if (f.kink && t < *f.kink) return 0.0;
            return curvature(f.inner, t);
          },
          [&](const PositiveSum& f) {
            double acc = 0.0;
            for (std::size_t i = 0; i < f.terms.size(); ++i) acc += f.weights[i] * curvature(f.terms[i], t);
            return acc;
          },
          [&](const Piecewise& f) { return curvature(piece(f, piece_index(f, t, Side::Right)), t); },
          [&](const Composed& f) {
            const double x = value(f.inner, t);
            const double d1 = slope(f.inner, t, Side::Right);
            const double d2 = curvature(f.inner, t);
            double acc = 0.0;
            if (d1 != 0.0) acc += f.h.second_derivative(x) * d1 * d1;
            if (d2 != 0.0) acc += f.h.derivative(x) * d2;
            return acc;
          },
      },
      p.node().form);
}

// Raw slope-jump locations strictly inside (lo, hi).
inline void collect_kinks(const Profile& p, double lo, double hi, std::vector<double>& out) {
  if (!(lo < hi)) return;
  auto push = [&](double t) {
    if (t > lo && t < hi) out.push_back(t);
  };
  std::visit(overloaded{
                 [&](const LogLinear&) {},
                 [&](const PowerAlpha&) {},
                 [&](const FloorCap& f) {
                   if (f.flat) return;
                   if (f.kink) {
                     push(*f.kink);
                     collect_kinks(f.inner, std::max(lo, *f.kink), hi, out);
                   } else {
                     collect_kinks(f.inner, lo, hi, out);
                   }
                 },
                 [&](const PositiveSum& f) {
                   for (const auto& term : f.terms) collect_kinks(term, lo, hi, out);
                 },
                 [&](const Piecewise& f) {
                   const auto& b = f.breakpoints;
                   for (double t : b) push(t);
                   collect_kinks(f.tail, lo, std::min(hi, b.front()), out);
                   for (std::size_t i = 0; i < f.segments.size(); ++i) {
                     const double a = b[i];
                     const double e = i + 1 < b.size() ? b[i + 1] : 0.0;
                     collect_kinks(f.segments[i], std::max(lo, a), std::min(hi, e), out);
                   }
                 },
                 [&](const Composed& f) { collect_kinks(f.inner, lo, hi, out); },
             },
             p.node().form);
}

}  // namespace detail

/// A cluster of slope jumps merged under kBreakpointMerge: the jump is
/// slope(last, Right) - slope(first, Left).
struct KinkCluster {
  double first;
  double last;
};

inline std::vector<KinkCluster> kink_clusters(const Profile& p, double hi = 0.0) {
  std::vector<double> raw;
  detail::collect_kinks(p, -kInf, hi, raw);
  std::sort(raw.begin(), raw.end());
  std::vector<KinkCluster> out;
  for (double t : raw) {
    if (!out.empty() && t - out.back().last <= kBreakpointMerge) {
      out.back().last = t;
    } else {
      out.push_back({t, t});
    }
  }
  return out;
}

inline std::vector<double> kinks(const Profile& p) {
  std::vector<double> out;
  for (const auto& c : kink_clusters(p)) out.push_back(c.first);
  return out;
}

/// Behavior as t -> -inf. For unbounded profiles -f(t) ~ coef * (-t)^exponent
/// with exponent in (0, 1]; bounded profiles are constant below constant_below.
struct TailBehavior {
  bool bounded = false;
  double constant_below = -kInf;
  double infimum = -kInf;
  double lelong = 0.0;
  double exponent = 0.0;
  double coef = 0.0;
};

inline TailBehavior tail_behavior(const Profile& p) {
  using detail::overloaded;
  return std::visit(
      overloaded{
          [&](const LogLinear& f) {
            TailBehavior tb;
            if (f.slope == 0.0) {
              tb.bounded = true;
              tb.constant_below = 0.0;
              tb.infimum = f.offset;
            } else {
              tb.lelong = f.slope;
              tb.exponent = 1.0;
              tb.coef = f.slope;
            }
            return tb;
          },
          [&](const PowerAlpha& f) {
            TailBehavior tb;
            tb.exponent = f.exponent;
            tb.coef = f.scale;
            return tb;
          },
          [&](const FloorCap& f) {
            if (!f.flat && !f.kink) return tail_behavior(f.inner);
            TailBehavior tb;
            tb.bounded = true;
            tb.constant_below = f.flat ? 0.0 : *f.kink;
            tb.infimum = -f.floor;
            return tb;
          },
          [&](const PositiveSum& f) {
            TailBehavior tb;
            tb.bounded = true;
            tb.constant_below = 0.0;
            tb.infimum = 0.0;
            std::vector<TailBehavior> parts;
            for (const auto& term : f.terms) parts.push_back(tail_behavior(term));
            for (std::size_t i = 0; i < parts.size(); ++i) {
              if (!parts[i].bounded) tb.bounded = false;
              tb.lelong += f.weights[i] * parts[i].lelong;
            }
            if (tb.bounded) {
              for (std::size_t i = 0; i < parts.size(); ++i) {
                tb.constant_below = std::min(tb.constant_below, parts[i].constant_below);
                tb.infimum += f.weights[i] * parts[i].infimum;
              }
              return tb;
            }
            tb.constant_below = -kInf;
            tb.infimum = -kInf;
            for (const auto& part : parts)
              if (!part.bounded) tb.exponent = std::max(tb.exponent, part.exponent);
            for (std::size_t i = 0; i < parts.size(); ++i)
              if (!parts[i].bounded && parts[i].exponent == tb.exponent) tb.coef += f.weights[i] * parts[i].coef;
            return tb;
          },
          [&](const Piecewise& f) {
            TailBehavior tb = tail_behavior(f.tail);
            if (tb.bounded) tb.constant_below = std::min(tb.constant_below, f.breakpoints.front());
            return tb;
          },
          [&](const Composed& f) {
            TailBehavior tb = tail_behavior(f.inner);
            if (tb.bounded) {
              tb.infimum = f.h(tb.infimum);
              return tb;
            }
            tb.exponent *= f.h.exponent;
            tb.coef = f.h.scale * std::pow(tb.coef, f.h.exponent);
            tb.lelong = tb.exponent == 1.0 ? tb.coef : 0.0;
            return tb;
          },
      },
      p.node().form);
}

/// Behavior as t -> 0^-: f(0^-), f'(0^-) (possibly +inf), and the exponent d
/// with f(0) - f(t) ~ B (-t)^d when the slope is infinite (d = 1 otherwise).
struct BoundaryBehavior {
  double value = 0.0;
  double slope = 0.0;
  double exponent = 1.0;
};

inline BoundaryBehavior boundary_behavior(const Profile& p) {
  using detail::overloaded;
  return std::visit(
      overloaded{
          [&](const LogLinear& f) { return BoundaryBehavior{f.offset, f.slope, 1.0}; },
          [&](const PowerAlpha& f) { return BoundaryBehavior{0.0, kInf, f.exponent}; },
          [&](const FloorCap& f) {
            if (f.flat) return BoundaryBehavior{-f.floor, 0.0, 1.0};
            return boundary_behavior(f.inner);
          },
          [&](const PositiveSum& f) {
            BoundaryBehavior bb{0.0, 0.0, 1.0};
            for (std::size_t i = 0; i < f.terms.size(); ++i) {
              const auto part = boundary_behavior(f.terms[i]);
              bb.value += f.weights[i] * part.value;
              bb.slope += f.weights[i] * part.slope;
              if (part.slope == kInf) bb.exponent = std::min(bb.exponent, part.exponent);
            }
            return bb;
          },
          [&](const Piecewise& f) {
            return boundary_behavior(f.segments.empty() ? f.tail : f.segments.back());
          },
          [&](const Composed& f) {
            const auto in = boundary_behavior(f.inner);
            if (in.value < 0.0) return BoundaryBehavior{f.h(in.value), f.h.derivative(in.value) * in.slope, in.exponent};
            const double d = f.h.exponent * in.exponent;
            const double s = d < 1.0 ? kInf : f.h.scale * in.slope;
            return BoundaryBehavior{0.0, s, d};
          },
      },
      p.node().form);
}

namespace detail {

inline std::optional<double> bisect_sublevel(const Profile& p, double s) {
  if (value(p, 0.0) < -s) return 0.0;
  const auto tb = tail_behavior(p);
  if (tb.bounded && tb.infimum >= -s) return std::nullopt;
  double lo = -1.0;
  while (!(value(p, lo) < -s)) {
    lo *= 2.0;
    if (!std::isfinite(lo)) return std::nullopt;
  }
  double hi = 0.0;
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (value(p, mid) < -s) lo = mid;
    else hi = mid;
  }
  return lo;
}

// sup{t <= 0 : f(t) < -s}; nullopt when the set is empty.
inline std::optional<double> sublevel(const Profile& p, double s) {
  return std::visit(
      overloaded{
          [&](const LogLinear& f) -> std::optional<double> {
            if (f.slope == 0.0) {
              if (f.offset < -s) return 0.0;
              return std::nullopt;
            }
            return std::min((-s - f.offset) / f.slope, 0.0);
          },
          [&](const PowerAlpha& f) -> std::optional<double> { return -std::pow(s / f.scale, 1.0 / f.exponent); },
          [&](const FloorCap& f) -> std::optional<double> {
            if (f.floor <= s) return std::nullopt;
            if (f.flat) return 0.0;
            return sublevel(f.inner, s);
          },
          [&](const PositiveSum&) { return bisect_sublevel(p, s); },
          [&](const Piecewise& f) -> std::optional<double> {
            const auto& b = f.breakpoints;
            for (std::size_t i = f.segments.size(); i-- > 0;) {
              const double a = b[i];
              const double e = i + 1 < b.size() ? b[i + 1] : 0.0;
              if (value(f.segments[i], a) < -s) {
                const auto r = sublevel(f.segments[i], s);
                return std::clamp(r.value_or(a), a, e);
              }
            }
            const auto r = sublevel(f.tail, s);
            if (!r) return std::nullopt;
            return std::min(*r, b.front());
          },
          [&](const Composed& f) -> std::optional<double> {
            return sublevel(f.inner, -f.h.inverse(-s));
          },
      },
      p.node().form);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Construction

inline Profile log_linear(double slope, double offset) {
  require(slope >= 0.0 && std::isfinite(slope), ErrorCode::Domain, "loglinear slope must be finite and >= 0");
  require(offset <= 0.0 && std::isfinite(offset), ErrorCode::Domain, "loglinear offset must be finite and <= 0");
  return detail::make({LogLinear{slope, offset}});
}

inline Profile power_alpha(double scale, double exponent) {
  require(scale > 0.0 && std::isfinite(scale), ErrorCode::Domain, "power scale must be > 0");
  require(exponent > 0.0 && exponent < 1.0, ErrorCode::Domain, "power exponent must lie in (0,1)");
  return detail::make({PowerAlpha{scale, exponent}});
}

inline Profile floor_cap(Profile inner, double floor) {
  require(floor > 0.0 && std::isfinite(floor), ErrorCode::Domain, "floor must be finite and > 0");
  FloorCap fc{inner, floor, std::nullopt, false};
  if (const auto r = detail::sublevel(inner, floor)) {
    if (*r >= 0.0) fc.flat = true;
    else fc.kink = *r;
  }
  return detail::make({std::move(fc)});
}

inline Profile positive_sum(std::vector<std::pair<double, Profile>> terms) {
  require(!terms.empty(), ErrorCode::Domain, "sum needs at least one term");
  PositiveSum ps;
  for (auto& [w, prof] : terms) {
    require(w > 0.0 && std::isfinite(w), ErrorCode::Domain, "sum weights must be > 0");
    ps.weights.push_back(w);
    ps.terms.push_back(std::move(prof));
  }
  return detail::make({std::move(ps)});
}

/// Builds the Piecewise normal form: breakpoints within kBreakpointMerge are
/// merged, adjacent identical log-linear pieces are fused, and a single piece
/// collapses to itself. Continuity and monotonicity are validated; convexity
/// is checked by the Monge-Ampere computation.
inline Profile piecewise(Profile tail, std::vector<double> breakpoints, std::vector<Profile> segments,
                         std::optional<SweepOrigin> origin = std::nullopt) {
  require(breakpoints.size() == segments.size(), ErrorCode::Domain, "one segment per breakpoint");
  auto is_pw = [](const Profile& q) { return std::holds_alternative<Piecewise>(q.node().form); };
  require(!is_pw(tail), ErrorCode::Invariant, "nested piecewise tail");
  for (const auto& s : segments) require(!is_pw(s), ErrorCode::Invariant, "nested piecewise segment");

  std::vector<double> bp;
  std::vector<Profile> seg;
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    const double t = breakpoints[i];
    require(t < 0.0, ErrorCode::Domain, "breakpoints must be < 0");
    if (!bp.empty()) {
      require(t > bp.back(), ErrorCode::Domain, "breakpoints must increase");
      if (t - bp.back() <= kBreakpointMerge) {
        seg.back() = segments[i];
        continue;
      }
    }
    bp.push_back(t);
    seg.push_back(segments[i]);
  }

  auto same_linear = [](const Profile& a, const Profile& b) {
    const auto* la = std::get_if<LogLinear>(&a.node().form);
    const auto* lb = std::get_if<LogLinear>(&b.node().form);
    if (!la || !lb) return a.same_node(b);
    return detail::nearly_equal(la->slope, lb->slope) && detail::nearly_equal(la->offset, lb->offset);
  };
  std::vector<double> fbp;
  std::vector<Profile> fseg;
  for (std::size_t i = 0; i < bp.size(); ++i) {
    const Profile& prev = fseg.empty() ? tail : fseg.back();
    if (same_linear(prev, seg[i])) continue;
    fbp.push_back(bp[i]);
    fseg.push_back(seg[i]);
  }
  if (fbp.empty()) return tail;

  for (std::size_t i = 0; i < fbp.size(); ++i) {
    const Profile& prev = i == 0 ? tail : fseg[i - 1];
    const double l = detail::value(prev, fbp[i]);
    const double r = detail::value(fseg[i], fbp[i]);
    require(std::abs(l - r) <= 1e-9 * std::max(1.0, std::abs(l)), ErrorCode::Invariant,
            "piecewise profile is discontinuous at t = " + std::to_string(fbp[i]));
  }
  return detail::make({Piecewise{std::move(tail), std::move(fbp), std::move(fseg), std::move(origin)}});
}

// ---------------------------------------------------------------------------
// Operations

inline void check_log_radius(double t) {
  require(!std::isnan(t) && t <= 0.0, ErrorCode::Domain, "log-radius must be <= 0");
}

/// f(t); -inf is a legitimate value at t = -inf.
inline double eval(const Profile& p, double t) {
  check_log_radius(t);
  return detail::value(p, t);
}

/// Right derivative; at t = 0 the inner limit f'(0^-) (possibly +inf).
inline double right_derivative(const Profile& p, double t) {
  check_log_radius(t);
  return detail::slope(p, t, t == 0.0 ? Side::Left : Side::Right);
}

inline double left_derivative(const Profile& p, double t) {
  check_log_radius(t);
  return detail::slope(p, t, Side::Left);
}

/// lim_{t -> -inf} f'(t): the Lelong number at the origin.
inline double lelong_number(const Profile& p) { return tail_behavior(p).lelong; }

/// t_s = sup{t : f(t) < -s}; nullopt when {phi < -s} is empty. The sublevel
/// set is the open ball of radius e^{t_s}.
inline std::optional<double> sublevel_radius(const Profile& p, double s) {
  require(s > 0.0, ErrorCode::Domain, "level s must be > 0");
  return detail::sublevel(p, s);
}

/// Relative extremal function of the closed ball of radius rho: f below
/// log(rho), then the chord to (0, 0).
inline Profile sweep(const Profile& p, double rho) {
  require(rho > 0.0 && rho < 1.0, ErrorCode::Domain, "sweep radius must lie in (0,1)");
  const double L = std::log(rho);
  const double v = detail::value(p, L);
  require(std::isfinite(v), ErrorCode::Domain, "profile must be finite at log(rho)");
  const Profile chord = log_linear(v / L, 0.0);

  if (const auto* pw = std::get_if<Piecewise>(&p.node().form)) {
    std::vector<double> bp;
    std::vector<Profile> seg;
    for (std::size_t i = 0; i < pw->breakpoints.size(); ++i) {
      if (pw->breakpoints[i] < L - kBreakpointMerge) {
        bp.push_back(pw->breakpoints[i]);
        seg.push_back(pw->segments[i]);
      }
    }
    bp.push_back(L);
    seg.push_back(chord);
    return piecewise(pw->tail, std::move(bp), std::move(seg), SweepOrigin{p, rho});
  }
  return piecewise(p, {L}, {chord}, SweepOrigin{p, rho});
}

struct InvariantDiagnostics {
  bool nonpositive = true;
  bool nondecreasing = true;
  bool convex = true;
  double worst_t = 0.0;
};

/// Grid check of f <= 0, f' >= 0 and nondecreasing right derivatives.
inline InvariantDiagnostics check_invariants(const Profile& p, std::span<const double> grid, double tol = 1e-12) {
  InvariantDiagnostics d;
  std::vector<double> ts(grid.begin(), grid.end());
  std::sort(ts.begin(), ts.end());
  double prev = -kInf;
  for (double t : ts) {
    const double v = eval(p, t);
    const double s = right_derivative(p, t);
    if (v > tol) {
      d.nonpositive = false;
      d.worst_t = t;
    }
    if (s < -tol) {
      d.nondecreasing = false;
      d.worst_t = t;
    }
    if (s < prev - tol * std::max(1.0, std::abs(prev))) {
      d.convex = false;
      d.worst_t = t;
    }
    prev = s;
  }
  return d;
}

}  // namespace plurilab
