#pragma once

// Network driver: per step, junction coefficient updates, junction flux
// resolution, boundary reconstruction and one scheme step on every road.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "apnet/coupling.hpp"
#include "apnet/network.hpp"

namespace apnet {

/// Marker change threshold for recomputing a junction pressure coefficient.
inline constexpr double kAdaptionTolerance = 1e-9;

bool detect_adaption(double previous_w_bar, double new_w_bar, double tolerance = kAdaptionTolerance);

struct JunctionEvent {
  int junction_id = 0;
  int road_id = 0;  // outgoing road whose pressure changed
  std::size_t step = 0;
  double t_star = 0.0;
  double w_bar_old = 0.0;
  double w_bar_new = 0.0;
  double c_bar = 0.0;
  /// c_bar / c_{j,0}
  double coeff_ratio = 1.0;
  /// Shares and incoming markers the coefficient was computed from.
  std::vector<double> shares;
  std::vector<double> markers;
};

struct RoadField {
  int road_id = 0;
  double dx = 0.0;
  std::vector<RoadState> cells;
};

struct Snapshot {
  std::size_t step = 0;
  double t = 0.0;
  std::vector<RoadField> roads;  // sorted by road id

  const RoadField& road(int id) const;
};

struct ConservationDiagnostics {
  /// Max over steps and junctions of |sum q_in - sum q_out|.
  double max_mass_imbalance = 0.0;
  /// Max over steps and junctions of |sum w_i q_i - sum w_bar_j q_j|.
  double max_momentum_imbalance = 0.0;
  ConservativeState initial_totals;
  ConservativeState final_totals;
};

struct SimulationRecord {
  std::string network_name;
  Scheme scheme = Scheme::TransportEquilibrium;
  Model model = Model::AdaptedPressure;
  double gamma = 1.0;
  double dt = 0.0;
  std::size_t steps = 0;
  std::vector<Snapshot> snapshots;
  std::vector<JunctionEvent> events;
  ConservationDiagnostics diagnostics;
  std::vector<std::string> warnings;
  double runtime_seconds = 0.0;

  const Snapshot& final_snapshot() const { return snapshots.back(); }
  /// First adaption time of a junction, or +inf if it never adapted.
  double first_adaption(int junction_id) const;
};

/// Read-only view handed to a step observer after each completed step.
struct StepView {
  std::size_t step = 0;  // steps completed
  double t = 0.0;
  const std::vector<Road>* roads = nullptr;
  const std::vector<std::vector<RoadState>>* cells = nullptr;
  const std::vector<JunctionResolution>* resolutions = nullptr;
};

struct RunOptions {
  std::function<void(const StepView&)> observer;
};

/// Throws ValidationError for invalid networks and NumericalError on a CFL
/// violation.
SimulationRecord run(const Network& network, const RunOptions& options = {});

}  // namespace apnet
