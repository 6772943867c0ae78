#pragma once

// Single-road time steppers: transport-equilibrium (TE), plain Godunov for the
// adapted-pressure system, and Godunov for scalar LWR.

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "apnet/coupling.hpp"
#include "apnet/model.hpp"

namespace apnet {

/// Binary digit reversal of s in (0, 1); s >= 1.
double van_der_corput(std::uint64_t s);

/// The CFL limit (dt / dx) max |lambda| <= 1/2.
inline constexpr double kCflLimit = 0.5;

struct CflReport {
  bool ok = true;
  double ratio = 0.0;
  std::size_t worst_cell = 0;
};

CflReport check_cfl(double dt, double dx, std::span<const RoadState> cells, double gamma);
CflReport check_cfl_lwr(double dt, double dx, std::span<const double> rho, const LwrParams& params);

struct GridRoad {
  std::vector<RoadState> cells;
  double dx = 1.0;
  double gamma = 1.0;

  ConservativeState totals() const;
};

/// Data at one end of a road for a single step.
///
/// `mass_flux` is the flux granted by the junction or boundary at time t^s.
/// `ghost` is the reconstructed state outside the road. At the right end,
/// if the last cell changes during sampling the outflow is recomputed as the
/// Godunov flux against `ghost`, capped by `supply_cap`.
struct BoundaryCondition {
  RoadState ghost;
  double mass_flux = 0.0;
  double supply_cap = std::numeric_limits<double>::infinity();
};

struct RoadBoundary {
  BoundaryCondition left;
  BoundaryCondition right;

  /// Zero flux at both ends; ghosts copy the end cells.
  static RoadBoundary closed(const GridRoad& road);
};

/// Godunov flux (q, w_L q, c_L q) with q = min(D(left), S(rho_tilde)) >= 0.
Flux godunov_flux(const RoadState& left, const RoadState& right, double gamma);

/// Componentwise relative equality of conservative states, tolerance 1e-12.
bool same_conservative(const RoadState& a, const RoadState& b);

void godunov_step(GridRoad& road, double dt, const RoadBoundary& boundary);

/// One TE step using the van der Corput value alpha_{s+1}.
void te_step(GridRoad& road, std::uint64_t step_index, double dt, const RoadBoundary& boundary);

struct LwrRoad {
  std::vector<double> rho;
  double dx = 1.0;
  LwrParams params;

  double total() const;
};

double lwr_godunov_flux(double left, double right, const LwrParams& params);

/// `left_flux` and `right_flux` are the mass fluxes at the road ends.
void lwr_godunov_step(LwrRoad& road, double dt, double left_flux, double right_flux);

}  // namespace apnet
