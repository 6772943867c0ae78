#pragma once

// Road network description: roads with piecewise-constant initial data,
// junctions, source/sink boundaries and run configuration.

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "apnet/coupling.hpp"
#include "apnet/model.hpp"

namespace apnet {

struct ProfileSegment {
  double from = 0.0;
  double to = 0.0;
  double rho = 0.0;
  double w = 0.0;
};

struct Road {
  int id = 0;
  double length = 1.0;
  int cells = 1;
  double c0 = 1.0;
  std::vector<ProfileSegment> profile;

  double dx() const { return length / static_cast<double>(cells); }
  /// Initial state in the segment containing x (right-closed segments, the
  /// first one also contains its left end).
  RoadState initial_state_at(double x) const;
  std::vector<RoadState> initial_cells() const;
  void validate() const;
};

enum class RoadEnd { Start, End };
enum class BoundaryType { InflowSeries, FreeOutflow };

struct SeriesPoint {
  double t = 0.0;
  double rho = 0.0;
  double w = 0.0;
};

/// Inflow boundaries feed a road start through a time series of ghost states
/// (the last point at or before t is used). Outflow boundaries absorb at a
/// road end with supply `supply` (infinite by default, 0 closes the road).
struct BoundarySpec {
  int road = 0;
  RoadEnd end = RoadEnd::Start;
  BoundaryType type = BoundaryType::InflowSeries;
  std::vector<SeriesPoint> series;
  double supply = std::numeric_limits<double>::infinity();

  SeriesPoint ghost_at(double t) const;
};

enum class Scheme { TransportEquilibrium, Godunov };
enum class Model { AdaptedPressure, Lwr };

const char* to_string(Scheme s);
const char* to_string(Model m);
std::optional<Scheme> parse_scheme(const std::string& s);
std::optional<Model> parse_model(const std::string& s);

struct TimeConfig {
  double horizon = 1.0;
  /// dt / dx
  double dt_ratio = 0.1;
  /// Record every k-th step (0 records only the initial and final states).
  int output_every = 0;
};

struct Network {
  std::string name;
  double gamma = 1.0;
  std::vector<Road> roads;
  std::vector<Junction> junctions;
  std::vector<BoundarySpec> boundaries;
  TimeConfig time;
  Scheme scheme = Scheme::TransportEquilibrium;
  Model model = Model::AdaptedPressure;

  /// Throws ValidationError; returns warnings for permitted but suspect data
  /// (negative initial velocities).
  std::vector<std::string> validate() const;

  const Road& road(int id) const;
  std::size_t road_index(int id) const;

  /// Re-grids every road so that dx is as close as possible to `dx`.
  void set_cell_size(double dx);
  double min_dx() const;
  double dt() const { return time.dt_ratio * min_dx(); }
};

}  // namespace apnet
