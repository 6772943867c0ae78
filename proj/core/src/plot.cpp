#include "apnet/plot.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "apnet/io.hpp"

namespace apnet {

namespace {

const Snapshot& pick_snapshot(const SimulationRecord& record, double t) {
  if (record.snapshots.empty()) throw ValidationError("plot: record holds no snapshots");
  if (t < 0.0) return record.final_snapshot();
  const Snapshot* best = &record.snapshots.front();
  for (const auto& s : record.snapshots) {
    if (std::abs(s.t - t) < std::abs(best->t - t)) best = &s;
  }
  if (std::abs(best->t - t) > 1e-9 * std::max(1.0, std::abs(t))) {
    throw ValidationError("plot: no snapshot at t = " + format_number(t));
  }
  return *best;
}

std::string image_name(const PlotOptions& o, PlotKind kind) {
  return o.image.empty() ? std::string(to_string(kind)) + ".png" : o.image;
}

const char* kPreamble =
    "#!/usr/bin/env python3\n"
    "import csv\n"
    "import os\n"
    "\n"
    "import matplotlib\n"
    "matplotlib.use(\"Agg\")\n"
    "import matplotlib.pyplot as plt\n"
    "\n"
    "HERE = os.path.dirname(os.path.abspath(__file__))\n"
    "\n"
    "\n"
    "def rows(name):\n"
    "    with open(os.path.join(HERE, name), newline=\"\") as f:\n"
    "        return list(csv.DictReader(f))\n"
    "\n"
    "\n";

}  // namespace

const char* to_string(PlotKind kind) {
  switch (kind) {
    case PlotKind::Profile: return "profile";
    case PlotKind::PressureComparison: return "pressure-comparison";
    case PlotKind::Marker: return "marker";
  }
  return "profile";
}

std::optional<PlotKind> parse_plot_kind(const std::string& s) {
  if (s == "profile") return PlotKind::Profile;
  if (s == "pressure-comparison") return PlotKind::PressureComparison;
  if (s == "marker") return PlotKind::Marker;
  return std::nullopt;
}

std::string emit_pressure_plot(const PlotOptions& o) {
  std::ostringstream s;
  s << kPreamble;
  s << "data = rows(\"" << o.oracle_csv << "\")\n"
    << "rho = [float(r[\"rho\"]) for r in data]\n"
    << "plt.plot(rho, [float(r[\"p_star\"]) for r in data], label=\"p* (homogenized)\")\n"
    << "plt.plot(rho, [float(r[\"p_star_star\"]) for r in data], \"--\", label=\"p** (approximation)\")\n"
    << "plt.plot(rho, [float(r[\"p0\"]) for r in data], \":\", label=\"p0 (initial)\")\n"
    << "plt.xlabel(\"rho\")\n"
    << "plt.ylabel(\"pressure\")\n"
    << "plt.legend()\n"
    << "plt.savefig(os.path.join(HERE, \"" << image_name(o, PlotKind::PressureComparison) << "\"), dpi=150)\n";
  return s.str();
}

std::string emit_plot(const SimulationRecord& record, PlotKind kind, const PlotOptions& o) {
  if (kind == PlotKind::PressureComparison) return emit_pressure_plot(o);
  const Snapshot& snap = pick_snapshot(record, o.time);
  std::ostringstream s;
  s << kPreamble;
  s << "T = " << format_number(snap.t) << "\n"
    << "data = [r for r in rows(\"" << o.fields_csv << "\") if abs(float(r[\"t\"]) - T) <= 1e-9 * max(1.0, T)]\n";

  if (kind == PlotKind::Profile) {
    s << "roads = sorted({int(r[\"road_id\"]) for r in data})\n"
      << "fig, axes = plt.subplots(len(roads), 1, sharex=True, squeeze=False, figsize=(6, 2 * len(roads)))\n"
      << "for ax, road in zip(axes[:, 0], roads):\n"
      << "    sel = [r for r in data if int(r[\"road_id\"]) == road]\n"
      << "    ax.plot([float(r[\"x_center\"]) for r in sel], [float(r[\"v\"]) for r in sel])\n"
      << "    ax.set_ylabel(\"v, road %d\" % road)\n"
      << "axes[-1, 0].set_xlabel(\"x\")\n"
      << "fig.suptitle(\"t = %g\" % T)\n";
  } else {
    std::vector<int> chain = o.chain;
    if (chain.empty()) {
      for (const auto& r : snap.roads) chain.push_back(r.road_id);
    }
    s << "chain = [";
    double offset = 0.0;
    std::ostringstream offsets;
    for (std::size_t k = 0; k < chain.size(); ++k) {
      const RoadField* field = nullptr;
      for (const auto& r : snap.roads) {
        if (r.road_id == chain[k]) field = &r;
      }
      if (!field) throw ValidationError("plot: marker chain references unknown road " + std::to_string(chain[k]));
      s << (k ? ", " : "") << chain[k];
      offsets << (k ? ", " : "") << format_number(offset);
      offset += field->dx * static_cast<double>(field->cells.size());
    }
    s << "]\n"
      << "offset = [" << offsets.str() << "]\n"
      << "fig, ax = plt.subplots(figsize=(8, 3))\n"
      << "for road, x0 in zip(chain, offset):\n"
      << "    sel = [r for r in data if int(r[\"road_id\"]) == road]\n"
      << "    ax.plot([x0 + float(r[\"x_center\"]) for r in sel], [float(r[\"w\"]) for r in sel], color=\"C0\")\n"
      << "    ax.axvline(x0, color=\"0.8\", lw=0.5)\n"
      << "ax.set_xlabel(\"chained x\")\n"
      << "ax.set_ylabel(\"w\")\n"
      << "ax.set_title(\"t = %g\" % T)\n";
  }
  s << "plt.tight_layout()\n"
    << "plt.savefig(os.path.join(HERE, \"" << image_name(o, kind) << "\"), dpi=150)\n";
  return s.str();
}

}  // namespace apnet
