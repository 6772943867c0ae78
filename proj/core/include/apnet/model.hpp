#pragma once

// Pointwise quantities of the adapted-pressure ARZ system
//
//   d_t (rho, rho w, rho c) + d_x (rho v, rho w v, rho c v) = 0,
//   v = w - c rho^gamma.
//
// Everything here is a pure function of a single state.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace apnet {

/// Densities at or below this value are treated as vacuum.
inline constexpr double kVacuumDensity = 1e-10;

class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// p(rho) = coefficient * rho^exponent
struct PressureLaw {
  double coefficient = 1.0;
  double exponent = 1.0;

  double operator()(double rho) const;
  void validate() const;
};

/// Primitive traffic state. `c` is the transported pressure coefficient.
struct RoadState {
  double rho = 0.0;
  double w = 0.0;
  double c = 1.0;

  friend bool operator==(const RoadState&, const RoadState&) = default;
};

/// Conserved vector (rho, rho w, rho c). Also used for fluxes.
struct ConservativeState {
  double m0 = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;

  ConservativeState& operator+=(const ConservativeState& o) {
    m0 += o.m0;
    m1 += o.m1;
    m2 += o.m2;
    return *this;
  }
  ConservativeState& operator-=(const ConservativeState& o) {
    m0 -= o.m0;
    m1 -= o.m1;
    m2 -= o.m2;
    return *this;
  }
  friend ConservativeState operator+(ConservativeState a, const ConservativeState& b) { return a += b; }
  friend ConservativeState operator-(ConservativeState a, const ConservativeState& b) { return a -= b; }
  friend ConservativeState operator*(double s, const ConservativeState& a) {
    return {s * a.m0, s * a.m1, s * a.m2};
  }
  friend bool operator==(const ConservativeState&, const ConservativeState&) = default;
};

using Flux = ConservativeState;

struct Eigenvalues {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;
};

inline double pressure(double rho, double c, double gamma);

double velocity(const RoadState& u, double gamma);
Flux flux(const RoadState& u, double gamma);
Eigenvalues eigenvalues(const RoadState& u, double gamma);

/// Density maximizing rho (w - c rho^gamma). Returns 0 when w <= 0.
double critical_density(double w, double c, double gamma);

/// sigma (w - c sigma^gamma)
double max_flux(double w, double c, double gamma);

ConservativeState to_conservative(const RoadState& u);

/// At or below kVacuumDensity the density is kept and the fallback (w, c) are
/// carried along; tiny negative densities are clamped to 0.
RoadState from_conservative(const ConservativeState& y, double fallback_w, double fallback_c);

/// Throws ValidationError for rho < 0, c <= 0 or non-finite values.
void validate(const RoadState& u, double gamma);

/// Message for a valid state whose velocity is negative.
std::optional<std::string> velocity_warning(const RoadState& u, double gamma);

bool is_vacuum(const RoadState& u);

inline double pressure(double rho, double c, double gamma) {
  return gamma == 1.0 ? c * rho : c * std::pow(rho, gamma);
}

}  // namespace apnet
