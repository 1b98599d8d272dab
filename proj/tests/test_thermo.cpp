#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dmv/thermo.hpp"

using namespace dmv;
using namespace dmv::thermo;

namespace {

FluidParams gas(double gamma, double a = 1.0, double c_star = 0.5) {
  FluidParams p;
  p.gamma = gamma;
  p.a = a;
  p.c_star = c_star;
  return p;
}

const double e = std::exp(1.0);

}  // namespace

TEST(FluidParams, RejectsEachViolatedConstraint) {
  EXPECT_NO_THROW(FluidParams{}.validate());
  FluidParams p;
  p.gamma = 1.0;
  EXPECT_THROW(p.validate(), DomainError);
  p = {};
  p.a = 0.0;
  EXPECT_THROW(p.validate(), DomainError);
  p = {};
  p.mu = 0.0;
  EXPECT_THROW(p.validate(), DomainError);
  p = {};
  p.lambda = -0.011;
  EXPECT_THROW(p.validate(), DomainError);
  p.lambda = -0.01;
  EXPECT_NO_THROW(p.validate());
  p = {};
  p.c_star = 0.0;
  EXPECT_THROW(p.validate(), DomainError);
}

TEST(Pressure, Examples) {
  EXPECT_EQ(pressure(0.0, gas(1.4)), 0.0);
  EXPECT_DOUBLE_EQ(pressure(1.0, gas(1.4, 2.0)), 2.0);
  EXPECT_DOUBLE_EQ(pressure(3.0, gas(2.0)), 9.0);
  EXPECT_THROW(pressure(-1e-3, gas(2.0)), DomainError);
}

TEST(Pressure, StrictlyIncreasing) {
  const FluidParams p = gas(1.4);
  double prev = pressure(0.0, p);
  for (double w = 0.01; w < 10.0; w *= 1.3) {
    const double cur = pressure(w, p);
    EXPECT_GT(cur, prev);
    prev = cur;
  }
}

TEST(PressurePotential, Examples) {
  EXPECT_EQ(pressure_potential(0.0, gas(2.0)), 0.0);
  EXPECT_DOUBLE_EQ(pressure_potential(1.0, gas(2.0)), 1.0);
  EXPECT_DOUBLE_EQ(pressure_potential(2.0, gas(2.0)), 4.0);
  EXPECT_DOUBLE_EQ(pressure_potential(2.0, gas(1.4)), pressure(2.0, gas(1.4)) / 0.4);
  EXPECT_THROW(pressure_potential(-1.0, gas(2.0)), DomainError);
}

TEST(Entropy, Examples) {
  EXPECT_EQ(entropy(0.0, 1.0, gas(1.4)), 0.0);
  EXPECT_NEAR(entropy(2.0, e, gas(2.0)), 4.0, 1e-14);
  for (double g : {1.4, 2.0, 5.0 / 3.0}) EXPECT_EQ(entropy(1.0, 1.0, gas(g)), 0.0);
  EXPECT_THROW(entropy(1.0, 0.49, gas(1.4)), DomainError);
  EXPECT_THROW(entropy(-1.0, 1.0, gas(1.4)), DomainError);
}

TEST(ThetaOfEntropy, Examples) {
  EXPECT_DOUBLE_EQ(theta_of_entropy(1.0, 0.0, gas(1.4)), 1.0);
  EXPECT_NEAR(theta_of_entropy(2.0, 4.0, gas(2.0)), e, 1e-14);
  EXPECT_THROW(theta_of_entropy(0.0, 1.0, gas(1.4)), DomainError);
}

TEST(ThetaOfEntropy, RoundTrip) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lr(std::log(1e-3), std::log(1e3)), lt(std::log(0.5), std::log(100.0));
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const FluidParams p = gas(k % 3 == 0 ? 1.4 : k % 3 == 1 ? 2.0 : 5.0 / 3.0, 1.7);
    const double rho = std::exp(lr(rng)), theta = std::exp(lt(rng));
    const double S = entropy(rho, theta, p);
    const double back = entropy(rho, theta_of_entropy(rho, S, p), p);
    worst = std::max(worst, std::abs(back - S) / std::max(std::abs(S), 1e-300));
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(PressureRhoS, Examples) {
  EXPECT_DOUBLE_EQ(pressure_rho_s(1.0, 0.0, gas(2.0)), 1.0);
  EXPECT_EQ(pressure_rho_s(0.0, -1.0, gas(2.0)), 0.0);
  EXPECT_NEAR(pressure_rho_s(2.0, 4.0, gas(2.0)), 4.0 * e * e, 1e-12);
  EXPECT_NEAR(pressure_rho_s(2.0, 4.0, gas(2.0)), pressure(2.0 * e, gas(2.0)), 1e-12);
  EXPECT_THROW(pressure_rho_s(0.0, 1.0, gas(2.0)), DomainError);
  EXPECT_THROW(pressure_rho_s(-1.0, 0.0, gas(2.0)), DomainError);
}

TEST(PressureRhoS, IndependentOfAForFixedS) {
  EXPECT_EQ(pressure_rho_s(1.3, 0.7, gas(1.4, 1.0)), pressure_rho_s(1.3, 0.7, gas(1.4, 5.0)));
}

TEST(PressurePotentialRhoS, Examples) {
  EXPECT_DOUBLE_EQ(pressure_potential_rho_s(1.0, 0.0, gas(2.0)), 1.0);
  EXPECT_DOUBLE_EQ(pressure_potential_rho_s(2.0, 0.0, gas(2.0)), 4.0);
  EXPECT_EQ(pressure_potential_rho_s(0.0, 0.0, gas(2.0)), 0.0);
}

TEST(Derivatives, Examples) {
  EXPECT_DOUBLE_EQ(dP_drho(1.0, 0.0, gas(2.0)), 2.0);
  EXPECT_DOUBLE_EQ(dP_dS(1.0, 0.0, gas(2.0)), 1.0);
  EXPECT_THROW(dP_drho(0.0, 0.0, gas(2.0)), DomainError);
  EXPECT_THROW(dP_dS(-1.0, 0.0, gas(2.0)), DomainError);
}

TEST(Derivatives, MatchCentralDifferences) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> lr(std::log(1e-2), std::log(1e2)), lt(std::log(0.5), std::log(10.0));
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const FluidParams p = gas(k % 2 ? 1.4 : 2.0);
    const double rho = std::exp(lr(rng)), S = entropy(rho, std::exp(lt(rng)), p);
    const double hr = 1e-5 * rho, hs = 1e-5 * std::max(1.0, std::abs(S));
    const double fr = (pressure_potential_rho_s(rho + hr, S, p) - pressure_potential_rho_s(rho - hr, S, p)) / (2 * hr);
    const double fs = (pressure_potential_rho_s(rho, S + hs, p) - pressure_potential_rho_s(rho, S - hs, p)) / (2 * hs);
    const double dr = dP_drho(rho, S, p), ds = dP_dS(rho, S, p);
    worst = std::max(worst, std::abs(fr - dr) / std::max(std::abs(dr), pressure_potential_rho_s(rho, S, p) / rho));
    worst = std::max(worst, std::abs(fs - ds) / std::abs(ds));
  }
  EXPECT_LE(worst, 1e-6);
}

TEST(AbsoluteTemperature, EqualsDPdSAndClosedForm) {
  EXPECT_DOUBLE_EQ(absolute_temperature(1.0, 0.0, gas(2.0)), 1.0);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ur(1e-3, 50.0), ut(0.5, 20.0);
  for (int k = 0; k < 10000; ++k) {
    const FluidParams p = gas(1.4, 0.8);
    const double rho = ur(rng), theta = ut(rng);
    const double S = entropy(rho, theta, p);
    const double vt = absolute_temperature(rho, S, p);
    ASSERT_GT(vt, 0.0);
    ASSERT_EQ(vt, dP_dS(rho, S, p));
    ASSERT_NEAR(vt, p.a * std::pow(rho, p.gamma - 1.0) * std::pow(theta, p.gamma), 1e-12 * vt);
  }
}

TEST(Thermo, ChangeOfVariablesConsistency) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> lr(std::log(1e-3), std::log(1e3)), lt(std::log(0.5), std::log(100.0));
  for (int k = 0; k < 10000; ++k) {
    const FluidParams p = gas(k % 3 == 0 ? 1.4 : k % 3 == 1 ? 2.0 : 5.0 / 3.0);
    const double rho = std::exp(lr(rng)), theta = std::exp(lt(rng));
    const double want = p.a * std::pow(rho * theta, p.gamma);
    ASSERT_NEAR(pressure_rho_s(rho, entropy(rho, theta, p), p), want, 1e-12 * want);
  }
}

TEST(Thermo, HessianMatchesFiniteDifferencesAndIsPositive) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> ur(0.1, 10.0), ut(0.5, 10.0);
  const FluidParams p = gas(1.4);
  for (int k = 0; k < 1000; ++k) {
    const double rho = ur(rng), S = entropy(rho, ut(rng), p);
    const Hessian2 h = potential_hessian(rho, S, p);
    const double hr = 1e-5 * rho, hs = 1e-5 * std::max(1.0, std::abs(S));
    const double frr = (dP_drho(rho + hr, S, p) - dP_drho(rho - hr, S, p)) / (2 * hr);
    const double fss = (dP_dS(rho, S + hs, p) - dP_dS(rho, S - hs, p)) / (2 * hs);
    const double frs = (dP_drho(rho, S + hs, p) - dP_drho(rho, S - hs, p)) / (2 * hs);
    const double scale = std::abs(h.rr) + std::abs(h.ss) + std::abs(h.rs);
    ASSERT_NEAR(frr, h.rr, 1e-6 * scale);
    ASSERT_NEAR(fss, h.ss, 1e-6 * scale);
    ASSERT_NEAR(frs, h.rs, 1e-6 * scale);
    ASSERT_GT(h.min_eigenvalue(), 0.0);
  }
}

TEST(Thermo, StrongConvexityOnCompactBox) {
  const FluidParams p = gas(1.4);
  double lo = INFINITY;
  for (double rho = 0.5; rho <= 2.0; rho += 0.05)
    for (double theta = 0.5; theta <= 2.0; theta += 0.05)
      lo = std::min(lo, potential_hessian(rho, entropy(rho, theta, p), p).min_eigenvalue());
  EXPECT_GT(lo, 1e-3);
}

TEST(ThermoPoint, SelfConsistent) {
  const FluidParams p = gas(1.4);
  const ThermoPoint a(1.5, 2.0, p);
  EXPECT_EQ(a.S(), entropy(1.5, 2.0, p));
  const ThermoPoint b = ThermoPoint::from_entropy(1.5, a.S(), p);
  EXPECT_NEAR(b.theta(), 2.0, 1e-14);
  EXPECT_THROW(ThermoPoint(1.0, 0.1, p), DomainError);
}

TEST(SoundSpeed, MatchesPressureDerivative) {
  const FluidParams p = gas(1.4);
  const double rho = 1.3, theta = 0.9;
  const double c = sound_speed(rho, theta, p);
  EXPECT_NEAR(c * c, p.gamma * pressure(rho * theta, p) / rho, 1e-14);
}
