#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "apnet/io.hpp"
#include "json.hpp"

namespace apnet {

namespace {

using nlohmann::json;

// Numbers in the summary go through the same 12-digit rounding as the CSVs.
json rounded(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::stod(format_number(x));
}

void append_row(std::string& out, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out += ',';
    out += c;
    first = false;
  }
  out += '\n';
}

}  // namespace

std::string format_number(double x) {
  if (x == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string fields_csv(const SimulationRecord& record) {
  std::string out = "t,road_id,cell_index,x_center,rho,v,w,c\n";
  std::vector<const Snapshot*> snaps;
  for (const auto& s : record.snapshots) snaps.push_back(&s);
  std::stable_sort(snaps.begin(), snaps.end(), [](const Snapshot* a, const Snapshot* b) { return a->t < b->t; });
  for (const Snapshot* s : snaps) {
    const std::string t = format_number(s->t);
    for (const auto& road : s->roads) {
      const std::string id = std::to_string(road.road_id);
      for (std::size_t j = 0; j < road.cells.size(); ++j) {
        const RoadState& u = road.cells[j];
        append_row(out, {t, id, std::to_string(j), format_number((static_cast<double>(j) + 0.5) * road.dx),
                         format_number(u.rho), format_number(velocity(u, record.gamma)), format_number(u.w),
                         format_number(u.c)});
      }
    }
  }
  return out;
}

std::string events_csv(const SimulationRecord& record) {
  std::string out = "junction_id,t_star,w_bar_old,w_bar_new,coeff_ratio\n";
  std::vector<std::size_t> order(record.events.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ea = record.events[a];
    const auto& eb = record.events[b];
    if (ea.t_star != eb.t_star) return ea.t_star < eb.t_star;
    return ea.junction_id < eb.junction_id;
  });
  for (std::size_t k : order) {
    const auto& e = record.events[k];
    append_row(out, {std::to_string(e.junction_id), format_number(e.t_star), format_number(e.w_bar_old),
                     format_number(e.w_bar_new), format_number(e.coeff_ratio)});
  }
  return out;
}

std::string summary_json(const SimulationRecord& record, const Network& network) {
  json grid = json::array();
  for (const auto& road : network.roads) {
    grid.push_back({{"road_id", road.id}, {"cells", road.cells}, {"dx", rounded(road.dx())}});
  }
  const auto& d = record.diagnostics;
  json doc = {
      {"network", record.network_name},
      {"scheme", to_string(record.scheme)},
      {"model", to_string(record.model)},
      {"gamma", rounded(record.gamma)},
      {"dt", rounded(record.dt)},
      {"steps", record.steps},
      {"final_time", rounded(record.snapshots.empty() ? 0.0 : record.final_snapshot().t)},
      {"snapshots", record.snapshots.size()},
      {"events", record.events.size()},
      {"grid", grid},
      {"conservation",
       {{"max_junction_mass_imbalance", rounded(d.max_mass_imbalance)},
        {"max_junction_momentum_imbalance", rounded(d.max_momentum_imbalance)},
        {"initial_totals", {rounded(d.initial_totals.m0), rounded(d.initial_totals.m1), rounded(d.initial_totals.m2)}},
        {"final_totals", {rounded(d.final_totals.m0), rounded(d.final_totals.m1), rounded(d.final_totals.m2)}}}},
      {"warnings", record.warnings},
      {"runtime_seconds", rounded(record.runtime_seconds)},
  };
  return doc.dump(2) + "\n";
}

std::string oracle_csv(const HomogenizedPressureTable& table) {
  std::string out = "rho,p_star,p_star_star,p0,abs_error\n";
  const double c0 = table.mixture.c0;
  const double gamma = table.mixture.gamma;
  // Increasing rho reads more naturally in a plot.
  for (auto it = table.entries.rbegin(); it != table.entries.rend(); ++it) {
    const double pss = eval_pstarstar(table, it->rho);
    append_row(out, {format_number(it->rho), format_number(it->p_star), format_number(pss),
                     format_number(pressure(it->rho, c0, gamma)), format_number(std::abs(it->p_star - pss))});
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

WrittenFiles write_results(const SimulationRecord& record, const Network& network,
                           const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error(dir.string() + ": " + ec.message());
  WrittenFiles files{dir / "fields.csv", dir / "events.csv", dir / "summary.json"};
  write_text_file(files.fields, fields_csv(record));
  write_text_file(files.events, events_csv(record));
  write_text_file(files.summary, summary_json(record, network));
  return files;
}

}  // namespace apnet
