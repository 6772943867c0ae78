#include "apnet/model.hpp"

#include <cmath>
#include <sstream>

namespace apnet {

double PressureLaw::operator()(double rho) const { return pressure(rho, coefficient, exponent); }

void PressureLaw::validate() const {
  if (!(coefficient > 0.0) || !std::isfinite(coefficient)) {
    throw ValidationError("pressure coefficient must be positive");
  }
  if (!(exponent >= 1.0) || !std::isfinite(exponent)) {
    throw ValidationError("pressure exponent must be >= 1");
  }
}

double velocity(const RoadState& u, double gamma) { return u.w - pressure(u.rho, u.c, gamma); }

Flux flux(const RoadState& u, double gamma) {
  const double q = u.rho * velocity(u, gamma);
  return {q, u.w * q, u.c * q};
}

Eigenvalues eigenvalues(const RoadState& u, double gamma) {
  const double v = velocity(u, gamma);
  // p'(rho) rho = gamma c rho^gamma
  return {v - gamma * pressure(u.rho, u.c, gamma), v, v};
}

double critical_density(double w, double c, double gamma) {
  if (w <= 0.0) return 0.0;
  const double base = w / ((gamma + 1.0) * c);
  return gamma == 1.0 ? base : std::pow(base, 1.0 / gamma);
}

double max_flux(double w, double c, double gamma) {
  const double sigma = critical_density(w, c, gamma);
  return sigma * (w - pressure(sigma, c, gamma));
}

ConservativeState to_conservative(const RoadState& u) { return {u.rho, u.rho * u.w, u.rho * u.c}; }

RoadState from_conservative(const ConservativeState& y, double fallback_w, double fallback_c) {
  if (y.m0 < 0.0) {
    if (y.m0 > -kVacuumDensity) return {0.0, fallback_w, fallback_c};
    std::ostringstream msg;
    msg << "negative density " << y.m0 << " in conservative state";
    throw ValidationError(msg.str());
  }
  // Near vacuum the ratios m1/m0, m2/m0 are rounding noise; keep the mass.
  if (y.m0 <= kVacuumDensity) return {y.m0, fallback_w, fallback_c};
  return {y.m0, y.m1 / y.m0, y.m2 / y.m0};
}

void validate(const RoadState& u, double gamma) {
  if (!std::isfinite(u.rho) || !std::isfinite(u.w) || !std::isfinite(u.c)) {
    throw ValidationError("state has non-finite components");
  }
  if (!(gamma >= 1.0)) throw ValidationError("pressure exponent must be at least 1");
  if (u.rho < 0.0) throw ValidationError("state has negative density");
  if (!(u.c > 0.0)) throw ValidationError("state has non-positive pressure coefficient");
  if (!std::isfinite(velocity(u, gamma))) throw ValidationError("state velocity is not finite");
}

std::optional<std::string> velocity_warning(const RoadState& u, double gamma) {
  const double v = velocity(u, gamma);
  if (v >= 0.0) return std::nullopt;
  std::ostringstream msg;
  msg << "state (rho=" << u.rho << ", w=" << u.w << ", c=" << u.c << ") has negative velocity v=" << v;
  return msg.str();
}

bool is_vacuum(const RoadState& u) { return u.rho <= kVacuumDensity; }

}  // namespace apnet
