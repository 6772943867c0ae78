#include "apnet/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "apnet/riemann.hpp"

namespace apnet {

namespace {

constexpr double kCflSlack = 1e-12;
constexpr double kContactTolerance = 1e-12;

[[noreturn]] void abort_on_cfl(const CflReport& report) {
  std::ostringstream msg;
  msg << "CFL violation: (dt/dx) max|lambda| = " << report.ratio << " > " << kCflLimit << " in cell "
      << report.worst_cell;
  throw NumericalError(msg.str());
}

bool close(double a, double b) {
  return std::abs(a - b) <= kContactTolerance * std::max(std::abs(a), std::abs(b));
}

Flux boundary_flux(double q, const RoadState& carrier) { return {q, carrier.w * q, carrier.c * q}; }

RoadState advance(const RoadState& u, const Flux& right, const Flux& left, double ratio) {
  ConservativeState y = to_conservative(u);
  y -= ratio * (right - left);
  return from_conservative(y, u.w, u.c);
}

}  // namespace

double van_der_corput(std::uint64_t s) {
  double value = 0.0;
  double scale = 0.5;
  while (s != 0) {
    if (s & 1U) value += scale;
    scale *= 0.5;
    s >>= 1U;
  }
  return value;
}

CflReport check_cfl(double dt, double dx, std::span<const RoadState> cells, double gamma) {
  CflReport report;
  for (std::size_t j = 0; j < cells.size(); ++j) {
    const auto ev = eigenvalues(cells[j], gamma);
    const double speed = std::max(std::abs(ev.lambda1), std::abs(ev.lambda2));
    const double ratio = dt / dx * speed;
    if (ratio > report.ratio) {
      report.ratio = ratio;
      report.worst_cell = j;
    }
  }
  report.ok = report.ratio <= kCflLimit + kCflSlack;
  return report;
}

CflReport check_cfl_lwr(double dt, double dx, std::span<const double> rho, const LwrParams& params) {
  CflReport report;
  for (std::size_t j = 0; j < rho.size(); ++j) {
    // d/drho (rho V(rho)) = v_max (1 - 2 rho / rho_max)
    const double speed = std::abs(params.v_max * (1.0 - 2.0 * rho[j] / params.rho_max));
    const double ratio = dt / dx * speed;
    if (ratio > report.ratio) {
      report.ratio = ratio;
      report.worst_cell = j;
    }
  }
  report.ok = report.ratio <= kCflLimit + kCflSlack;
  return report;
}

ConservativeState GridRoad::totals() const {
  ConservativeState sum;
  for (const auto& u : cells) sum += to_conservative(u);
  return sum;
}

RoadBoundary RoadBoundary::closed(const GridRoad& road) {
  RoadBoundary b;
  b.left.ghost = road.cells.front();
  b.right.ghost = road.cells.back();
  b.right.supply_cap = 0.0;
  return b;
}

Flux godunov_flux(const RoadState& left, const RoadState& right, double gamma) {
  const double rho_tilde = tilde_density(left.w, left.c, right, gamma);
  const double q = std::max(
      0.0, std::min(demand_ap(left.rho, left.w, left.c, gamma), supply_ap(rho_tilde, left.w, left.c, gamma)));
  return boundary_flux(q, left);
}

bool same_conservative(const RoadState& a, const RoadState& b) {
  const auto ya = to_conservative(a);
  const auto yb = to_conservative(b);
  return close(ya.m0, yb.m0) && close(ya.m1, yb.m1) && close(ya.m2, yb.m2);
}

void godunov_step(GridRoad& road, double dt, const RoadBoundary& boundary) {
  auto& u = road.cells;
  if (u.empty()) return;
  const auto cfl = check_cfl(dt, road.dx, u, road.gamma);
  if (!cfl.ok) abort_on_cfl(cfl);
  const double ratio = dt / road.dx;
  const std::size_t n = u.size();

  std::vector<Flux> interface(n + 1);
  interface[0] = boundary_flux(boundary.left.mass_flux, boundary.left.ghost);
  for (std::size_t j = 1; j < n; ++j) interface[j] = godunov_flux(u[j - 1], u[j], road.gamma);
  interface[n] = boundary_flux(boundary.right.mass_flux, u[n - 1]);

  for (std::size_t j = 0; j < n; ++j) u[j] = advance(u[j], interface[j + 1], interface[j], ratio);
}

void te_step(GridRoad& road, std::uint64_t step_index, double dt, const RoadBoundary& boundary) {
  auto& u = road.cells;
  if (u.empty()) return;
  const auto cfl = check_cfl(dt, road.dx, u, road.gamma);
  if (!cfl.ok) abort_on_cfl(cfl);
  const double ratio = dt / road.dx;
  const double gamma = road.gamma;
  const double alpha = van_der_corput(step_index + 1);
  const std::size_t n = u.size();

  auto upstream = [&](std::size_t j) -> const RoadState& { return j == 0 ? boundary.left.ghost : u[j - 1]; };

  // Stage 1: Glimm sampling of the contact entering each cell from the left.
  std::vector<RoadState> half(u);
  std::vector<bool> sampled(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    const double reach = ratio * velocity(u[j], gamma);
    if (alpha > 0.0 && alpha < reach) {
      half[j] = intermediate_state(upstream(j), u[j], gamma);
      sampled[j] = !(half[j] == u[j]);
    }
  }

  // Stage 2: left/right fluxes around each sampled cell.
  std::vector<RoadState> next(n);
  for (std::size_t j = 0; j < n; ++j) {
    Flux right_flux;
    if (j + 1 < n) {
      right_flux = godunov_flux(half[j], u[j + 1], gamma);
    } else if (!sampled[j]) {
      right_flux = boundary_flux(boundary.right.mass_flux, half[j]);
    } else {
      right_flux = godunov_flux(half[j], boundary.right.ghost, gamma);
      right_flux = boundary_flux(std::min(right_flux.m0, boundary.right.supply_cap), half[j]);
    }

    Flux left_flux;
    const RoadState& up = upstream(j);
    const bool no_contact = same_conservative(intermediate_state(up, half[j], gamma), half[j]);
    if (!no_contact) {
      left_flux = flux(half[j], gamma);
    } else if (j == 0) {
      left_flux = boundary_flux(boundary.left.mass_flux, boundary.left.ghost);
    } else {
      left_flux = godunov_flux(up, half[j], gamma);
    }

    next[j] = advance(half[j], right_flux, left_flux, ratio);
  }
  u = std::move(next);
}

double LwrRoad::total() const {
  double sum = 0.0;
  for (double r : rho) sum += r;
  return sum;
}

double lwr_godunov_flux(double left, double right, const LwrParams& params) {
  return std::max(0.0, std::min(demand_lwr(left, params), supply_lwr(right, params)));
}

void lwr_godunov_step(LwrRoad& road, double dt, double left_flux, double right_flux) {
  auto& rho = road.rho;
  if (rho.empty()) return;
  const auto cfl = check_cfl_lwr(dt, road.dx, rho, road.params);
  if (!cfl.ok) abort_on_cfl(cfl);
  const double ratio = dt / road.dx;
  const std::size_t n = rho.size();
  std::vector<double> interface(n + 1);
  interface[0] = left_flux;
  for (std::size_t j = 1; j < n; ++j) interface[j] = lwr_godunov_flux(rho[j - 1], rho[j], road.params);
  interface[n] = right_flux;
  for (std::size_t j = 0; j < n; ++j) {
    rho[j] = rho[j] - ratio * (interface[j + 1] - interface[j]);
    if (rho[j] < 0.0 && rho[j] > -kVacuumDensity) rho[j] = 0.0;
  }
}

}  // namespace apnet
