#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "plurilab/capacity.hpp"
#include "plurilab/estimates.hpp"

using namespace plurilab;

namespace {
const double kE1 = std::exp(-1.0);
}

TEST(BallCapacity, ClosedForm) {
  EXPECT_NEAR(ball_capacity(kE1, 2), 1.0, 1e-15);
  EXPECT_NEAR(ball_capacity(std::exp(-2.0), 2), 0.25, 1e-15);
  double prev = 0.0;
  for (double r : {0.1, 0.5, 0.9, 0.99, 0.999999}) {
    const double c = ball_capacity(r, 2);
    EXPECT_GT(c, prev);
    prev = c;
  }
  EXPECT_GT(prev, 1e10);
  EXPECT_THROW(ball_capacity(1.0, 2), Error);
  EXPECT_THROW(ball_capacity(0.0, 2), Error);
  EXPECT_THROW(ball_capacity(0.5, 0), Error);
}

TEST(BallCapacity, EqualsMassOfTheExtremalProfile) {
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> u(0.001, 0.999);
  for (int k = 0; k < 20; ++k) {
    const double r = u(gen);
    const int n = 1 + static_cast<int>(gen() % 3);
    const double lr = -std::log(r);
    // slope jump of max(t / lr, -1) at t = -lr
    const double mass = std::pow(1.0 / lr, n);
    EXPECT_NEAR(ball_capacity(r, n), mass, 1e-10 * mass);
    EXPECT_NEAR(ma_measure(ball_extremal_profile(r), n).total(), mass, 1e-10 * mass);
  }
}

TEST(SublevelCurve, ClosedForms) {
  const auto a = sublevel_capacity_curve(power_alpha(1, 1.0 / 3.0), 1.0, 2);
  const auto b = sublevel_capacity_curve(log_linear(1, 0), 1.0, 2);
  for (double s : {0.01, 0.5, 1.0, 3.0, 100.0}) {
    EXPECT_NEAR(a(s), std::pow(s, -6.0), 1e-12 * std::pow(s, -6.0));
    EXPECT_NEAR(b(s), std::pow(s, -2.0), 1e-12 * std::pow(s, -2.0));
  }
  EXPECT_EQ(sublevel_capacity_curve(floor_cap(log_linear(1, 0), 1), 1.0, 2)(2.0), 0.0);
}

TEST(SublevelCurve, FrozenWhileTheSublevelFillsOmega) {
  const double rho = std::exp(-2.0);
  const auto c = sublevel_capacity_curve(power_alpha(1, 1.0 / 3.0), rho, 2);
  // f(log rho) = -2^{1/3}: below that level the set contains B_rho
  for (double s : {0.1, 0.5, 1.2}) EXPECT_NEAR(c(s), 0.25, 1e-15);
  EXPECT_NEAR(c(2.0), std::pow(2.0, -6.0), 1e-15);
}

TEST(SublevelCurve, Nonincreasing) {
  for (const auto& b : battery()) {
    for (double rho : {1.0, b.rho}) {
      const auto c = sublevel_capacity_curve(sweep(b.profile, b.rho), rho, 2);
      double prev = kInf;
      for (double s : log_grid(1e-3, 1e6, 500)) {
        const double v = c(s);
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, prev);
        prev = v;
      }
    }
  }
}

TEST(PhiBounds, LogarithmWithItsTruncation) {
  const Profile f = log_linear(1, 0);
  const std::vector<Profile> cands{floor_cap(f, 1)};
  const auto b = phi_capacity_bounds(f, kE1, 2, cands);
  EXPECT_NEAR(b.lower, 1.0, 1e-15);
  EXPECT_NEAR(b.mid, 1.0, 1e-15);
  EXPECT_TRUE(b.upper_certified);
  EXPECT_TRUE(b.sandwich_holds);
}

TEST(PhiBounds, TruncationsOfTheSweepApproachTheMass) {
  const Profile f = power_alpha(1, 1.0 / 3.0);
  const Profile g = sweep(f, kE1);
  std::vector<Profile> cands;
  for (double M : {1.5, 4.0, 100.0}) cands.push_back(floor_cap(g, M));
  const auto b = phi_capacity_bounds(f, kE1, 2, cands);
  EXPECT_NEAR(b.mid, 1.0, 1e-15);
  for (double m : b.candidate_masses) EXPECT_NEAR(m, 1.0, 1e-15);
  EXPECT_TRUE(b.sandwich_holds);

  // truncations of f itself only carry f'(-1)^2 on K
  std::vector<Profile> raw;
  for (double M : {2.0, 10.0, 1e3}) raw.push_back(floor_cap(f, M));
  const auto r = phi_capacity_bounds(f, kE1, 2, raw);
  for (double m : r.candidate_masses) EXPECT_NEAR(m, 1.0 / 9.0, 1e-15);
  EXPECT_TRUE(r.sandwich_holds);
}

TEST(PhiBounds, RandomAdmissibleCandidatesRespectTheSandwich) {
  const Profile f = power_alpha(1, 1.0 / 3.0);
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> w(0.05, 0.95);
  std::uniform_real_distribution<double> lr(-3.0, -0.1);
  std::uniform_real_distribution<double> floor(0.5, 50.0);
  for (double rho : {kE1, std::exp(-2.0)}) {
    std::vector<Profile> cands;
    for (int k = 0; k < 100; ++k) {
      // convex combinations and floors of sweeps stay between f and 0
      const double a = w(gen);
      const Profile mix = positive_sum({{a, sweep(f, std::exp(lr(gen)))}, {1.0 - a, sweep(f, std::exp(lr(gen)))}});
      cands.push_back(k % 2 ? floor_cap(mix, floor(gen)) : floor_cap(sweep(f, std::exp(lr(gen))), floor(gen)));
    }
    const auto b = phi_capacity_bounds(f, rho, 2, cands);
    EXPECT_TRUE(b.sandwich_holds);
    for (double m : b.candidate_masses) EXPECT_LE(m, b.mid * (1 + 1e-9));
  }
}

TEST(PhiBounds, RejectsInadmissibleCandidates) {
  const Profile f = log_linear(1, 0);
  auto code_of = [&](const Profile& cand) {
    try {
      const std::vector<Profile> c{cand};
      phi_capacity_bounds(f, kE1, 2, c);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Domain;
  };
  EXPECT_EQ(code_of(log_linear(1, 0)), ErrorCode::Inadmissible);                 // unbounded
  EXPECT_EQ(code_of(floor_cap(log_linear(2, 0), 5)), ErrorCode::Inadmissible);  // below f
}

TEST(Bedford, ExponentRule) {
  // t^{n alpha - 1} with n = 2, alpha = 1/3
  EXPECT_TRUE(bedford_theta_check(ThetaDescriptor{1.0, 2.0 / 3.0 - 1.0, 0.0}));
  EXPECT_FALSE(bedford_theta_check(ThetaDescriptor{1.0, 0.0, 1.0}));
  EXPECT_TRUE(bedford_theta_check(ThetaDescriptor{1.0, -0.5, 0.0}));
  EXPECT_TRUE(bedford_theta_check(ThetaDescriptor{1.0, 0.0, 1.5}));
  EXPECT_THROW(bedford_theta_check(ThetaDescriptor{1.0, 0.5, 0.0}), Error);
}

TEST(Bedford, NumericFallbackAgrees) {
  const auto slow = bedford_theta_check([](double t) { return 1.0 / std::log1p(t); });
  EXPECT_FALSE(slow.converges);
  // the partial integral over [1, 1e8] already exceeds that of 1/(t log t) there
  const double oracle = oracle::simpson([](double u) { return 1.0 / std::log1p(std::exp(u)); }, 0.0, 8 * std::log(10.0));
  EXPECT_GT(slow.partial, oracle);
  const auto fast = bedford_theta_check([](double t) { return std::pow(t, -0.5); });
  EXPECT_TRUE(fast.converges);
  EXPECT_NEAR(fast.partial + fast.tail_bound, 2.0, 1e-3);
  EXPECT_THROW(bedford_theta_check([](double t) { return t; }), Error);
}

TEST(ClassMembership, Examples) {
  const auto a = class_membership(power_alpha(1, 1.0 / 3.0), kE1, 2);
  EXPECT_TRUE(a.in_F);
  EXPECT_TRUE(a.in_Fa);
  EXPECT_NEAR(a.p_sup, 4.0, 1e-12);
  EXPECT_TRUE(std::isfinite(p_energy(sweep(power_alpha(1, 1.0 / 3.0), kE1), 2, 3.99)));
  EXPECT_EQ(p_energy(sweep(power_alpha(1, 1.0 / 3.0), kE1), 2, 4.0), kInf);

  const auto b = class_membership(log_linear(1, 0), kE1, 2);
  EXPECT_TRUE(b.in_F);
  EXPECT_FALSE(b.in_Fa);
  EXPECT_EQ(b.p_sup, 0.0);
  EXPECT_FALSE(b.fa_probe_pass);
  EXPECT_NEAR(b.fa_probe[2], 1.0, 1e-12);

  const auto c = class_membership(floor_cap(log_linear(1, 0), 1), kE1, 2);
  EXPECT_TRUE(c.in_F);
  EXPECT_TRUE(c.in_Fa);
  EXPECT_EQ(c.p_sup, kInf);
  EXPECT_TRUE(c.fa_probe_pass);
}

TEST(ClassMembership, EnergyThresholdDominatesFittedDecay) {
  for (const auto& b : battery()) {
    const auto rep = class_membership(b.profile, b.rho, 2);
    const auto curve = sublevel_capacity_curve(sweep(b.profile, b.rho), 1.0, 2);
    if (curve(1e9) == 0.0) {
      EXPECT_EQ(rep.p_sup, kInf);
      continue;
    }
    const auto fit = fit_decay_exponent(curve, 1e9, 1e12, 100);
    EXPECT_GE(rep.p_sup, fit.q - 2 - 1e-3) << b.name;
  }
}
