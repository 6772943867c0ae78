#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "apnet/riemann.hpp"

using namespace apnet;

namespace {

// Right state with the requested velocity and an unrelated marker.
RoadState right_with_velocity(double v, double gamma) {
  const double w = v + 1.0;
  return {std::pow(1.0 / 0.8, 1.0 / gamma), w, 0.8};
}

}  // namespace

TEST(Riemann, ShockExample) {
  const RoadState left{0.5, 2.0, 1.0};
  const RoadState right = right_with_velocity(1.0, 1.0);
  ASSERT_NEAR(velocity(right, 1.0), 1.0, 1e-15);
  const auto sol = solve_riemann(left, right, 1.0);
  EXPECT_EQ(sol.wave1, WaveKind::Shock);
  EXPECT_NEAR(sol.middle.rho, 1.0, 1e-15);
  EXPECT_EQ(sol.middle.w, 2.0);
  EXPECT_EQ(sol.middle.c, 1.0);
  EXPECT_NEAR(sol.shock_speed, 0.5, 1e-15);
  EXPECT_NEAR(sol.contact_speed, 1.0, 1e-15);

  const RoadState mid = evaluate(sol, 0.75);
  EXPECT_NEAR(mid.rho, 1.0, 1e-15);
  EXPECT_EQ(mid.w, 2.0);
  EXPECT_EQ(evaluate(sol, -10.0), left);
  EXPECT_EQ(evaluate(sol, 1.0 + 1e-9), right);
}

TEST(Riemann, NoFirstWaveWhenVelocitiesMatch) {
  const RoadState left{0.5, 2.0, 1.0};
  const RoadState right{0.25, 1.75, 1.0};  // v = 1.5 on both sides
  const auto sol = solve_riemann(left, right, 1.0);
  EXPECT_EQ(sol.wave1, WaveKind::None);
  EXPECT_EQ(sol.middle, left);
  EXPECT_EQ(sol.contact_speed, 1.5);
  EXPECT_EQ(evaluate(sol, 1.49), left);
  EXPECT_EQ(evaluate(sol, 1.51), right);
}

TEST(Riemann, RarefactionExample) {
  const RoadState left{1.0, 2.0, 1.0};  // v = 1
  const RoadState right{0.5, 2.0, 1.0}; // v = 1.5
  const auto sol = solve_riemann(left, right, 1.0);
  EXPECT_EQ(sol.wave1, WaveKind::Rarefaction);
  EXPECT_NEAR(sol.middle.rho, 0.5, 1e-15);
  EXPECT_EQ(sol.fan_begin, 0.0);  // lambda1(left) = 1 - 1
  EXPECT_NEAR(sol.fan_end, 1.0, 1e-15);
  // Inside the fan rho(xi) = (w - xi) / (2 c).
  for (double xi : {0.1, 0.4, 0.9}) {
    const RoadState u = evaluate(sol, xi);
    EXPECT_NEAR(u.rho, (2.0 - xi) / 2.0, 1e-15);
    EXPECT_NEAR(eigenvalues(u, 1.0).lambda1, xi, 1e-14);
  }
}

TEST(Riemann, GammaTwoShock) {
  // Reference values from a 30-digit evaluation of the wave relations.
  const RoadState left{0.8, 3.0, 1.2};
  const RoadState right{1.0, 2.5, 1.0};
  const auto sol = solve_riemann(left, right, 2.0);
  EXPECT_EQ(sol.wave1, WaveKind::Shock);
  EXPECT_NEAR(sol.middle.rho, 1.11803398874989484820, 1e-14);
  EXPECT_NEAR(sol.shock_speed, -0.341312629199899054276, 1e-13);
}

TEST(Riemann, GammaTwoRarefaction) {
  const RoadState left{1.2, 3.0, 1.2};
  const RoadState right{0.2, 2.9, 1.0};
  const auto sol = solve_riemann(left, right, 2.0);
  EXPECT_EQ(sol.wave1, WaveKind::Rarefaction);
  EXPECT_NEAR(sol.middle.rho, 0.341565025531986612774, 1e-14);
  EXPECT_NEAR(sol.fan_begin, -2.184, 1e-13);
  EXPECT_NEAR(sol.fan_end, 2.58, 1e-13);
  const RoadState u = evaluate(sol, 0.198);
  EXPECT_NEAR(u.rho, 0.882232017857736408583, 1e-14);
  EXPECT_NEAR(velocity(u, 2.0), 2.066, 1e-13);
}

TEST(Riemann, VacuumIntermediate) {
  const RoadState left{0.4, 1.5, 1.125};
  const RoadState right{0.3, 2.0, 1.0};  // v+ = 1.7 > w- = 1.5
  const auto sol = solve_riemann(left, right, 1.0);
  EXPECT_EQ(sol.wave1, WaveKind::Rarefaction);
  EXPECT_EQ(sol.middle.rho, 0.0);
  EXPECT_EQ(sol.middle.w, 1.5);
  EXPECT_EQ(sol.fan_end, 1.7);
  EXPECT_EQ(evaluate(sol, 1.6).rho, 0.0);
}

TEST(Riemann, IntermediateStateMatchesSolve) {
  const RoadState left{0.8, 3.0, 1.2};
  const RoadState right{1.0, 2.5, 1.0};
  EXPECT_EQ(intermediate_state(left, right, 2.0), solve_riemann(left, right, 2.0).middle);
}

class RiemannProperties : public ::testing::TestWithParam<double> {};

TEST_P(RiemannProperties, RandomData) {
  const double gamma = GetParam();
  std::mt19937_64 rng(static_cast<std::uint64_t>(gamma * 1000));
  std::uniform_real_distribution<double> rho(0.0, 1.5), w(0.5, 4.0), c(0.5, 2.0);
  for (int k = 0; k < 2000; ++k) {
    const RoadState l{rho(rng), w(rng), c(rng)};
    const RoadState r{rho(rng), w(rng), c(rng)};
    const auto sol = solve_riemann(l, r, gamma);
    const double vl = velocity(l, gamma), vr = velocity(r, gamma);

    EXPECT_EQ(sol.middle.w, l.w);
    EXPECT_EQ(sol.middle.c, l.c);
    if (sol.middle.rho > 0.0) EXPECT_NEAR(velocity(sol.middle, gamma), vr, 1e-12 * (1.0 + std::abs(vr)));
    if (sol.wave1 == WaveKind::Shock) {
      EXPECT_LT(vr, vl);
      EXPECT_LE(sol.shock_speed, sol.contact_speed + 1e-12);
      // Rankine-Hugoniot for all three components.
      const Flux jump_f = flux(sol.middle, gamma) - flux(l, gamma);
      const ConservativeState jump_u = to_conservative(sol.middle) - to_conservative(l);
      const double s = sol.shock_speed;
      EXPECT_NEAR(jump_f.m0, s * jump_u.m0, 1e-12 * (1.0 + std::abs(jump_f.m0)));
      EXPECT_NEAR(jump_f.m1, s * jump_u.m1, 1e-11 * (1.0 + std::abs(jump_f.m1)));
      EXPECT_NEAR(jump_f.m2, s * jump_u.m2, 1e-11 * (1.0 + std::abs(jump_f.m2)));
    } else if (sol.wave1 == WaveKind::Rarefaction) {
      EXPECT_GT(vr, vl);
    }

    // Sampled profile: w, c two-valued, v monotone from v- to v+ and inside
    // the data hull.
    const double dir = vr >= vl ? 1.0 : -1.0;
    double prev_v = -1e300;
    const double lo = std::min(vl, vr), hi = std::max(vl, vr);
    for (int i = 0; i <= 200; ++i) {
      const double xi = -8.0 + 16.0 * i / 200.0;
      const RoadState u = evaluate(sol, xi);
      EXPECT_TRUE(u.w == l.w || u.w == r.w);
      EXPECT_TRUE(u.c == l.c || u.c == r.c);
      if (u.rho == 0.0 && u.w == l.w) continue;  // vacuum carries no velocity
      const double v = dir * velocity(u, gamma);
      EXPECT_GE(dir * v, lo - 1e-12);
      EXPECT_LE(dir * v, hi + 1e-12);
      EXPECT_GE(v, prev_v - 1e-12);
      prev_v = v;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Gammas, RiemannProperties, ::testing::Values(1.0, 1.5, 2.0, 3.0));
