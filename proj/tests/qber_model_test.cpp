#include "uqkd/qber_model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "uqkd/constants.hpp"
#include "uqkd/errors.hpp"

using namespace uqkd;

namespace {

ReceiverSpec table1_receiver(double fov_deg, double gate) {
  ReceiverSpec rx;
  rx.fov = deg_to_rad(fov_deg);
  rx.gate_time = gate;
  return rx;
}

}  // namespace

TEST(Irradiance, DepthDecay) {
  EnvironmentSpec env;
  env.depth = 0.0;
  EXPECT_EQ(irradiance_at_depth(env), 1e-3);
  EXPECT_NEAR(irradiance_at_depth(EnvironmentSpec{}), 3.3546262790251187e-07, 1e-21);
  EnvironmentSpec clear{1e-3, 0.0, 250.0};
  EXPECT_EQ(irradiance_at_depth(clear), 1e-3);
}

TEST(Background, ZeroFovOrGate) {
  EXPECT_EQ(background_count(table1_receiver(0.0, 9e-12), {}, 532e-9), 0.0);
  EXPECT_EQ(background_count(table1_receiver(27.0, 0.0), {}, 532e-9), 0.0);
}

TEST(Background, TableOneDefaults) {
  // Frozen from an independent evaluation of pi R A lambda dlambda (1 - cos fov) gate / (2 h c).
  EXPECT_NEAR(background_count(table1_receiver(27.0, 9e-12), {}, 532e-9), 1.3047072061521664e-09,
              1e-12 * 1.3e-9);
}

TEST(Background, LinearInEachFactor) {
  const EnvironmentSpec env;
  const ReceiverSpec rx = table1_receiver(35.0, 19e-12);
  const double base = background_count(rx, env, 532e-9);
  auto rx2 = rx;
  rx2.gate_time *= 2;
  EXPECT_NEAR(background_count(rx2, env, 532e-9), 2 * base, 1e-15 * base);
  rx2 = rx;
  rx2.filter_width *= 3;
  EXPECT_NEAR(background_count(rx2, env, 532e-9), 3 * base, 1e-15 * base);
  rx2 = rx;
  rx2.aperture_diameter *= std::sqrt(2.0);  // doubles the area
  EXPECT_NEAR(background_count(rx2, env, 532e-9), 2 * base, 1e-14 * base);
  auto env2 = env;
  env2.surface_irradiance *= 5;
  EXPECT_NEAR(background_count(rx, env2, 532e-9), 5 * base, 1e-15 * base);
}

TEST(Noise, DarkCountsPerBit) {
  const auto budget = noise_budget(table1_receiver(27.0, 9e-12), {}, 532e-9, 1e-9);
  EXPECT_NEAR(budget.dark, 6e-8, 1e-22);
  EXPECT_NEAR(budget.noise, 6.065235360307609e-08, 1e-20);
  EXPECT_EQ(budget.noise, budget.dark + budget.background / 2.0);
}

TEST(Noise, NoBackgroundMeansDarkOnly) {
  EnvironmentSpec dark_sea{0.0, 0.08, 100.0};
  const auto budget = noise_budget(table1_receiver(27.0, 9e-12), dark_sea, 532e-9, 3e-9);
  EXPECT_EQ(budget.background, 0.0);
  EXPECT_EQ(budget.noise, budget.dark);
}

TEST(Noise, DoublingGateDoublesBackgroundOnly) {
  const auto a = noise_budget(table1_receiver(27.0, 9e-12), {}, 532e-9, 1e-9);
  const auto b = noise_budget(table1_receiver(27.0, 18e-12), {}, 532e-9, 1e-9);
  EXPECT_NEAR(b.background, 2 * a.background, 1e-15 * a.background);
  EXPECT_EQ(b.dark, a.dark);
}

TEST(Noise, GateWindowSwitch) {
  auto rx = table1_receiver(27.0, 9e-12);
  rx.dark_count_window = DarkCountWindow::Gate;
  EXPECT_NEAR(noise_budget(rx, {}, 532e-9, 1e-9).dark, 60 * 9e-12, 1e-24);
  EXPECT_THROW(noise_budget(rx, {}, 532e-9, 0.0), DomainError);
}

TEST(Qber, Limits) {
  EXPECT_EQ(qber(0.3, 1.0, {0.0, 0.0, 0.0}), 0.0);
  EXPECT_EQ(qber(0.0, 1.0, {1e-9, 1e-8, 1.05e-8}), 0.5);
  EXPECT_THROW(qber(0.0, 1.0, {0.0, 0.0, 0.0}), DomainError);
  EXPECT_THROW(qber(1.5, 1.0, {0.0, 0.0, 1e-8}), DomainError);
}

TEST(Qber, BoundedAndMonotone) {
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10'000; ++i) {
    const double g = u(gen);
    const double n = 1e-6 * u(gen) + 1e-12;
    const double q = qber(g, 1.0, {0, 0, n});
    ASSERT_GE(q, 0.0);
    ASSERT_LE(q, 0.5);
    ASSERT_LE(q, qber(g, 1.0, {0, 0, n * 1.5}));
    ASSERT_GE(q, qber(std::min(1.0, g * 1.5 + 1e-9), 1.0, {0, 0, n}));
  }
}

TEST(Qber, SiftingFactor) {
  // n_N / (gamma/2 + 2 n_N) at gamma = 0.0124, default noise for 27 deg / 9 ps / 1 ns.
  const auto budget = noise_budget(table1_receiver(27.0, 9e-12), {}, 532e-9, 1e-9);
  const double expected = budget.noise / (0.0124 / 2 + 2 * budget.noise);
  EXPECT_DOUBLE_EQ(qber(0.0124, 1.0, budget), expected);
  EXPECT_NEAR(expected, 9.78e-6, 0.01e-6);
}
