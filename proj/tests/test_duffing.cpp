#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "solitons/duffing.hpp"

using namespace solitons;

TEST(DuffingOracle, HarmonicLimit) {
  // a = -1, b = 0: f'' = -f.
  const double pi = std::numbers::pi;
  const auto tr = duffing_oracle(-1, 0, 1, 0, pi, 1e-12, {pi / 2});
  EXPECT_NEAR(tr.f.back(), -1.0, 1e-9);
  EXPECT_NEAR(duffing_value_at(tr, pi / 2), 0.0, 1e-9);
  EXPECT_EQ(tr.xi.back(), pi);
}

TEST(DuffingOracle, MatchesSechSoliton) {
  // a = 1, b = 2: f = sech(xi), f(0) = 1, f'(0) = 0.
  const auto tr = duffing_oracle(1, 2, 1, 0, 2, 1e-12, {0.5, 1.0});
  EXPECT_NEAR(duffing_value_at(tr, 0.5), 1 / std::cosh(0.5), 1e-8);
  EXPECT_NEAR(duffing_value_at(tr, 1.0), 1 / std::cosh(1.0), 1e-8);
  EXPECT_NEAR(tr.f.back(), 1 / std::cosh(2.0), 1e-8);
  const auto back = duffing_oracle(1, 2, 1, 0, -2, 1e-12);
  EXPECT_NEAR(back.f.back(), 1 / std::cosh(2.0), 1e-8);
}

TEST(DuffingOracle, EnergyDriftSmall) {
  const auto tr = duffing_oracle(1, 3, 1, 0, 20, 1e-12);
  EXPECT_LE(tr.max_energy_drift, 1e-9);
}

TEST(DuffingOracle, TimeReversal) {
  const auto fwd = duffing_oracle(-0.5, 1.5, 0.3, 0.8, 5, 1e-12);
  const auto rev = duffing_oracle(-0.5, 1.5, fwd.f.back(), -fwd.df.back(), 5, 1e-12);
  EXPECT_NEAR(rev.f.back(), 0.3, 1e-7);
  EXPECT_NEAR(rev.df.back(), -0.8, 1e-7);
}

TEST(DuffingOracle, BlowUpAndBadTolerance) {
  EXPECT_THROW(duffing_oracle(1, -1, 1, 1, 50, 1e-10), DivergenceError);
  EXPECT_THROW(duffing_oracle(1, 1, 1, 0, 1, 1e-3), DomainError);
  EXPECT_THROW(duffing_oracle(1, 1, 1, 0, 1, 1e-14), DomainError);
  EXPECT_THROW(duffing_value_at(duffing_oracle(1, 1, 1, 0, 1, 1e-10), 0.123), DomainError);
}
