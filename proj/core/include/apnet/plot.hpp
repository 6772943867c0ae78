#pragma once

// Plot emission: self-contained matplotlib scripts that read the CSV outputs.

#include <optional>
#include <string>
#include <vector>

#include "apnet/simulator.hpp"

namespace apnet {

enum class PlotKind { Profile, PressureComparison, Marker };

const char* to_string(PlotKind kind);
std::optional<PlotKind> parse_plot_kind(const std::string& s);

struct PlotOptions {
  std::string fields_csv = "fields.csv";
  std::string oracle_csv = "oracle.csv";
  /// Output time for profile and marker plots; negative selects the last one.
  double time = -1.0;
  /// Roads laid end to end for the marker plot; empty uses all roads by id.
  std::vector<int> chain;
  std::string image;  // defaults to "<kind>.png"
};

/// Throws ValidationError if the record lacks the data the plot needs
/// (no snapshots, unknown road in the chain, no snapshot at the time).
std::string emit_plot(const SimulationRecord& record, PlotKind kind, const PlotOptions& options = {});

/// Pressure comparison only needs the oracle table on disk.
std::string emit_pressure_plot(const PlotOptions& options = {});

}  // namespace apnet
