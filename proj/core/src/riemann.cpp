#include "apnet/riemann.hpp"

#include <cmath>

#include "apnet/coupling.hpp"

namespace apnet {

const char* to_string(WaveKind kind) {
  switch (kind) {
    case WaveKind::None: return "none";
    case WaveKind::Shock: return "shock";
    case WaveKind::Rarefaction: return "rarefaction";
  }
  return "unknown";
}

double RiemannSolution::leftmost_speed() const {
  switch (wave1) {
    case WaveKind::Shock: return shock_speed;
    case WaveKind::Rarefaction: return fan_begin;
    case WaveKind::None: break;
  }
  return contact_speed;
}

RoadState intermediate_state(const RoadState& left, const RoadState& right, double gamma) {
  return {tilde_density(left.w, left.c, right, gamma), left.w, left.c};
}

RiemannSolution solve_riemann(const RoadState& left, const RoadState& right, double gamma) {
  RiemannSolution sol;
  sol.left = left;
  sol.right = right;
  sol.gamma = gamma;
  sol.middle = intermediate_state(left, right, gamma);

  const double v_left = velocity(left, gamma);
  const double v_right = velocity(right, gamma);
  sol.contact_speed = v_right;

  if (std::abs(v_right - v_left) <= kWaveTieTolerance) {
    sol.wave1 = WaveKind::None;
    sol.middle = left;
    sol.shock_speed = sol.fan_begin = sol.fan_end = v_right;
    return sol;
  }

  if (v_right < v_left) {
    sol.wave1 = WaveKind::Shock;
    const double drho = sol.middle.rho - left.rho;
    if (std::abs(drho) > 0.0) {
      sol.shock_speed = (sol.middle.rho * v_right - left.rho * v_left) / drho;
    } else {
      sol.shock_speed = eigenvalues(left, gamma).lambda1;
    }
    sol.fan_begin = sol.fan_end = sol.shock_speed;
    return sol;
  }

  sol.wave1 = WaveKind::Rarefaction;
  sol.fan_begin = eigenvalues(left, gamma).lambda1;
  // A vacuum middle state has lambda1 = v+ (its velocity is that of U+).
  sol.fan_end = sol.middle.rho > 0.0 ? eigenvalues(sol.middle, gamma).lambda1 : v_right;
  sol.shock_speed = sol.fan_begin;
  return sol;
}

namespace {

// State inside the 1-fan: lambda1 = xi along w, c = const.
RoadState fan_state(const RiemannSolution& sol, double xi) {
  const RoadState& l = sol.left;
  const double base = (l.w - xi) / ((sol.gamma + 1.0) * l.c);
  double rho = 0.0;
  if (base > 0.0) rho = sol.gamma == 1.0 ? base : std::pow(base, 1.0 / sol.gamma);
  return {rho, l.w, l.c};
}

}  // namespace

RoadState evaluate(const RiemannSolution& sol, double xi) {
  if (xi > sol.contact_speed) return sol.right;
  switch (sol.wave1) {
    case WaveKind::None:
      return sol.left;
    case WaveKind::Shock:
      return xi < sol.shock_speed ? sol.left : sol.middle;
    case WaveKind::Rarefaction:
      if (xi <= sol.fan_begin) return sol.left;
      if (xi < sol.fan_end) return fan_state(sol, xi);
      return sol.middle;
  }
  return sol.middle;
}

}  // namespace apnet
