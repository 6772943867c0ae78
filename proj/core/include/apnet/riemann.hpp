#pragma once

// Exact Riemann solver for the adapted-pressure system. The solution is a
// 1-wave (shock or rarefaction) from U- to an intermediate state with
// (w, c) of U- and v of U+, followed by a 2-3 contact moving with v+.

#include "apnet/model.hpp"

namespace apnet {

enum class WaveKind { None, Shock, Rarefaction };

const char* to_string(WaveKind kind);

struct RiemannSolution {
  RoadState left;
  RoadState right;
  RoadState middle;
  double gamma = 1.0;
  WaveKind wave1 = WaveKind::None;
  double shock_speed = 0.0;
  /// Rarefaction fan [fan_begin, fan_end] in xi = x / t.
  double fan_begin = 0.0;
  double fan_end = 0.0;
  double contact_speed = 0.0;

  /// Leftmost speed at which the solution departs from U-.
  double leftmost_speed() const;
};

/// |v+ - v-| at or below this value counts as no 1-wave.
inline constexpr double kWaveTieTolerance = 1e-12;

RiemannSolution solve_riemann(const RoadState& left, const RoadState& right, double gamma);

/// Self-similar solution at xi = x / t.
RoadState evaluate(const RiemannSolution& sol, double xi);

/// Only the intermediate state (cheaper than the full solve).
RoadState intermediate_state(const RoadState& left, const RoadState& right, double gamma);

}  // namespace apnet
