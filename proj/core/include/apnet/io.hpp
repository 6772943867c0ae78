#pragma once

// Scenario files (JSON) and result bundles (CSV + JSON summary).

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "apnet/network.hpp"
#include "apnet/oracle.hpp"
#include "apnet/simulator.hpp"

namespace apnet {

struct ParsedScenario {
  Network network;
  std::vector<std::string> warnings;
};

/// Parses and validates a scenario. Errors are ValidationError with a message
/// of the form "<origin>: <json path>: <problem>".
ParsedScenario parse_scenario_text(std::string_view text, const std::string& origin = "scenario");
ParsedScenario parse_scenario(const std::filesystem::path& path);

/// Serializes a network in the scenario schema (pretty-printed, stable key order).
std::string emit_scenario(const Network& network);

/// %.12g, with -0 printed as 0.
std::string format_number(double x);

std::string fields_csv(const SimulationRecord& record);
std::string events_csv(const SimulationRecord& record);
std::string summary_json(const SimulationRecord& record, const Network& network);
std::string oracle_csv(const HomogenizedPressureTable& table);

struct WrittenFiles {
  std::filesystem::path fields;
  std::filesystem::path events;
  std::filesystem::path summary;
};

/// Writes fields.csv, events.csv and summary.json into `dir` (created if
/// missing). Throws std::runtime_error on I/O failure.
WrittenFiles write_results(const SimulationRecord& record, const Network& network,
                           const std::filesystem::path& dir);

void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace apnet
