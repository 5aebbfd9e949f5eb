#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace plurilab {

// Relative slack allowed in lhs <= rhs * (1 + tol).
inline constexpr double kReportTol = 1e-9;

enum class Verdict { Holds, Fails, NotApplicable };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::NotApplicable: return "not-applicable";
  }
  return "unknown";
}

struct Sample {
  double s;
  double lhs;
  double rhs;
  std::string relation;
};

struct InequalityReport {
  std::string name;
  std::vector<Sample> samples;
  Verdict verdict = Verdict::Holds;
  double worst_ratio = 0.0;
  double worst_s = 0.0;
  double fitted_constant = 0.0;
  std::optional<double> fail_s;
  std::string note;

  bool holds() const { return verdict == Verdict::Holds; }
  bool applicable() const { return verdict != Verdict::NotApplicable; }
};

inline double ratio_of(double lhs, double rhs) {
  if (rhs > 0.0) return lhs / rhs;
  return lhs > 0.0 ? INFINITY : 0.0;
}

/// Sets verdict, worst ratio and first failing level from the samples.
inline void finalize(InequalityReport& r, double tol = kReportTol) {
  r.verdict = Verdict::Holds;
  r.worst_ratio = -1.0;
  r.fail_s.reset();
  for (const auto& smp : r.samples) {
    const double q = ratio_of(smp.lhs, smp.rhs);
    if (q > r.worst_ratio) {
      r.worst_ratio = q;
      r.worst_s = smp.s;
    }
    const bool ok = smp.lhs <= smp.rhs * (1.0 + tol) || (std::isinf(smp.rhs) && smp.rhs > 0.0);
    if (!ok && !r.fail_s) {
      r.verdict = Verdict::Fails;
      r.fail_s = smp.s;
    }
  }
  if (r.samples.empty()) r.worst_ratio = 0.0;
}

inline InequalityReport not_applicable(std::string name, std::string why) {
  InequalityReport r;
  r.name = std::move(name);
  r.verdict = Verdict::NotApplicable;
  r.note = std::move(why);
  return r;
}

}  // namespace plurilab
