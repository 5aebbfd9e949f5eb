#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "oracles.hpp"
#include "plurilab/disc_example.hpp"

using namespace plurilab;

namespace {
const double kRho = std::exp(-1.0);

cplx mobius(cplx z, cplx a) { return (z - a) / (1.0 - std::conj(a) * z); }

// Mean of max(log|1 - z|, -T) over the harmonic measure of {|mobius(., a)| < e^-1}
// seen from a, for a = 1 - e^{log_gap} real. Everything is measured in w = (1 - z)/|1 - a|:
// 1 - center = g (1 + rho^2 a)/(1 - rho^2 a^2), radius = rho g (2 - g)/(1 - rho^2 a^2).
double truncated_moment(double log_gap, double T, int points = 8192) {
  const double g = std::exp(log_gap);
  const double a = 1.0 - g;
  const double r2 = kRho * kRho;
  const double D = 1.0 - r2 * a * a;
  const double s = (1.0 + r2 * a) / D;
  const double R = kRho * (2.0 - g) / D;
  double sum = 0.0;
  for (int k = 0; k < points; ++k) {
    const cplx w = s - R * std::polar(1.0, 2.0 * M_PI * k / points);
    const double weight = (R * R - (1.0 - s) * (1.0 - s)) / std::norm(w - 1.0);
    sum += weight * std::max(log_gap + std::log(std::abs(w)), -T);
  }
  return sum / points;
}
}  // namespace

TEST(Green, Examples) {
  EXPECT_NEAR(green(cplx{0, 0}, cplx{0.5, 0}), std::log(0.5), 1e-15);
  const cplx a{0.3, -0.4};
  EXPECT_EQ(green(a, a), -kInf);
  EXPECT_EQ(green(std::polar(1.0, 0.7), a), 0.0);
  EXPECT_THROW(green(cplx{1.1, 0}, a), Error);
  EXPECT_THROW(green(cplx{0, 0}, cplx{1.0, 0}), Error);
}

TEST(Green, MatchesTheMobiusFormula) {
  std::mt19937 gen(17);
  std::uniform_real_distribution<double> rad(0.0, 0.999);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
  for (int k = 0; k < 2000; ++k) {
    const cplx z = std::polar(rad(gen), ang(gen));
    const cplx a = std::polar(rad(gen), ang(gen));
    const double ref = std::log(std::abs(mobius(z, a)));
    EXPECT_NEAR(green(z, a), ref, 1e-9 * std::max(1.0, std::abs(ref)));
    EXPECT_LE(green(z, a), 0.0);
  }
}

TEST(VField, Examples) {
  const auto one = GreenPoleSystem::default_schedule(1);
  EXPECT_NEAR(v_field(one, 0.0), 0.5 * std::log(1.0 - std::exp(-2.0)), 1e-15);

  // far from every pole the caps are inactive
  const auto sys = GreenPoleSystem::default_schedule(8);
  const cplx z{-0.5, 0.2};
  double plain = 0.0;
  for (std::size_t j = 0; j < sys.size(); ++j) {
    ASSERT_GE(std::abs(mobius(z, sys.poles[j].value())), kRho);
    plain += sys.weights[j] * green(z, sys.poles[j]);
  }
  EXPECT_NEAR(v_field(sys, z), plain, 1e-15);

  // at a pole the cap holds the value at -eps_1
  EXPECT_GE(v_field(sys, sys.poles[0].value()), -1.0);
  EXPECT_THROW(v_field(sys, cplx{1.0, 0.0}), Error);
}

TEST(VField, BoundedOnRandomPoints) {
  std::mt19937 gen(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> near(0.0, 1.0);
  for (int J : {5, 30}) {
    const auto sys = GreenPoleSystem::default_schedule(J);
    int count = 0;
    while (count < 10000) {
      cplx z{u(gen), u(gen)};
      // half of the points crowd the accumulation point 1
      if (count % 2) z = 1.0 - std::pow(near(gen), 4.0) * std::polar(1.0, 0.99 * M_PI * u(gen) / 2.0);
      if (std::abs(z) >= 1.0) continue;
      const double v = v_field(sys, z);
      EXPECT_GE(v, -1.0);
      EXPECT_LE(v, 0.0);
      ++count;
    }
  }
}

TEST(SublevelDisc, Examples) {
  const auto z = sublevel_disc(cplx{0, 0});
  EXPECT_NEAR(std::abs(z.center), 0.0, 1e-15);
  EXPECT_NEAR(z.radius, kRho, 1e-15);

  for (double a : {0.1, 0.5, 0.9, 0.999}) {
    const auto d = sublevel_disc(cplx{a, 0});
    EXPECT_EQ(d.center.imag(), 0.0);
    EXPECT_GT(d.center.real(), 0.0);
    EXPECT_LT(d.center.real(), 1.0);
    EXPECT_LT(d.center.real() + d.radius, 1.0);
  }

  const double r2 = kRho * kRho;
  const auto d = sublevel_disc(cplx{0.8, 0});
  EXPECT_NEAR(d.center.real(), 0.8 * (1.0 - r2) / (1.0 - 0.64 * r2), 1e-14);
  EXPECT_NEAR(d.radius, kRho * 0.36 / (1.0 - 0.64 * r2), 1e-14);
  for (int k = 0; k < 200; ++k) {
    const cplx b = d.center + d.radius * std::polar(1.0, 2.0 * M_PI * k / 200);
    EXPECT_NEAR(std::abs(mobius(b, 0.8)), kRho, 1e-10);
  }
}

TEST(SublevelDisc, BoundaryIsTheLevelSetForRandomPoles) {
  std::mt19937 gen(29);
  std::uniform_real_distribution<double> rad(0.0, 0.99);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
  for (int k = 0; k < 50; ++k) {
    const cplx a = std::polar(rad(gen), ang(gen));
    const auto d = sublevel_disc(a);
    EXPECT_FALSE(d.touches_one());
    EXPECT_LT(std::abs(mobius(d.center, a)), kRho);
    for (int i = 0; i < 64; ++i) {
      const cplx b = d.center + d.radius * std::polar(1.0, 2.0 * M_PI * i / 64);
      EXPECT_NEAR(std::abs(mobius(b, a)), kRho, 1e-10);
    }
  }
}

TEST(RieszMoment, Examples) {
  EXPECT_EQ(riesz_moment(cplx{0, 0}), 0.0);
  const auto sys = GreenPoleSystem::default_schedule(30);
  for (std::size_t j = 0; j < sys.size(); ++j) EXPECT_EQ(riesz_moment(sys.poles[j]), -std::ldexp(1.0, static_cast<int>(j) + 1));
}

TEST(RieszMoment, MatchesPoissonOracle) {
  std::mt19937 gen(31);
  std::uniform_real_distribution<double> rad(0.0, 0.95);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
  for (int k = 0; k < 20; ++k) {
    const cplx a = std::polar(rad(gen), ang(gen));
    // Euclidean form of the sublevel disc, straight from the Mobius map
    const double r2 = kRho * kRho;
    const double D = 1.0 - r2 * std::norm(a);
    const cplx c = a * (1.0 - r2) / D;
    const double R = kRho * (1.0 - std::norm(a)) / D;
    const double ref = oracle::harmonic_mean(c, R, a, [](cplx z) { return std::log(std::abs(1.0 - z)); });
    EXPECT_NEAR(riesz_moment(a), ref, 1e-6) << a;
  }
  // poles of the default schedule, measured in gap units
  for (int j = 1; j <= 6; ++j) {
    const double lg = -std::ldexp(1.0, j);
    EXPECT_NEAR(truncated_moment(lg, 1e9), lg, 1e-6 * std::abs(lg));
  }
}

TEST(ObstructionSum, ExactlyMinusJ) {
  const auto sys = GreenPoleSystem::default_schedule(30);
  for (std::size_t J = 1; J <= 30; ++J) EXPECT_EQ(obstruction_sum(sys, J), -static_cast<double>(J));
  EXPECT_EQ(obstruction_sum(GreenPoleSystem::default_schedule(5), 5), -5.0);
  EXPECT_EQ(obstruction_sum(GreenPoleSystem::default_schedule(20), 20), -20.0);
  EXPECT_EQ(obstruction_sum(single_pole(0.0), 1), 0.0);
  EXPECT_THROW(obstruction_sum(sys, 31), Error);
}

TEST(RieszMass, PartialSums) {
  const auto sys = GreenPoleSystem::default_schedule(30);
  EXPECT_EQ(riesz_mass(sys, 3), 0.875);
  for (std::size_t J = 1; J <= 30; ++J) EXPECT_EQ(riesz_mass(sys, J), 1.0 - std::ldexp(1.0, -static_cast<int>(J)));
  EXPECT_EQ(riesz_mass(single_pole(cplx{0.2, 0.1}), 1), 1.0);
  EXPECT_THROW(GreenPoleSystem::default_schedule(0), Error);
}

TEST(WeakStar, TruncatedMomentsApproachTheValueAtOne) {
  const double T = 5.0;
  double prev = kInf;
  for (int j = 1; j <= 5; ++j) {
    const double m = truncated_moment(-std::ldexp(1.0, j), T);
    const double dist = std::abs(m + T);
    EXPECT_LE(dist, prev + 1e-12) << j;
    prev = dist;
    // once the disc sits inside |1 - z| < e^-T the truncated moment is -T
    if (j >= 3) EXPECT_NEAR(m, -T, 1e-12) << j;
  }
  EXPECT_GT(std::abs(truncated_moment(-2.0, T) + T), 1.0);
}
