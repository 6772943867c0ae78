#include "apnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace apnet {

namespace {

std::string road_label(int id) {
  std::ostringstream s;
  s << "road " << id;
  return s.str();
}

}  // namespace

RoadState Road::initial_state_at(double x) const {
  for (const auto& seg : profile) {
    if (x <= seg.to) return {seg.rho, seg.w, c0};
  }
  const auto& last = profile.back();
  return {last.rho, last.w, c0};
}

std::vector<RoadState> Road::initial_cells() const {
  std::vector<RoadState> out;
  out.reserve(static_cast<std::size_t>(cells));
  const double h = dx();
  for (int j = 0; j < cells; ++j) out.push_back(initial_state_at((j + 0.5) * h));
  return out;
}

void Road::validate() const {
  const std::string label = road_label(id);
  if (!(length > 0.0) || !std::isfinite(length)) throw ValidationError(label + ": length must be positive");
  if (cells < 1) throw ValidationError(label + ": needs at least one cell");
  if (!(c0 > 0.0)) throw ValidationError(label + ": c0 must be positive");
  if (profile.empty()) throw ValidationError(label + ": initial profile is empty");
  constexpr double kGap = 1e-9;
  if (std::abs(profile.front().from) > kGap * length) {
    throw ValidationError(label + ": initial profile must start at 0");
  }
  for (std::size_t k = 0; k < profile.size(); ++k) {
    const auto& seg = profile[k];
    if (!(seg.to > seg.from)) throw ValidationError(label + ": profile segment has non-positive length");
    if (k > 0 && std::abs(seg.from - profile[k - 1].to) > kGap * length) {
      throw ValidationError(label + ": profile segments leave a gap or overlap");
    }
    if (!(seg.rho >= 0.0)) throw ValidationError(label + ": negative initial density");
    if (!std::isfinite(seg.w)) throw ValidationError(label + ": initial marker is not finite");
  }
  if (std::abs(profile.back().to - length) > kGap * length) {
    throw ValidationError(label + ": initial profile must end at the road length");
  }
}

SeriesPoint BoundarySpec::ghost_at(double t) const {
  const SeriesPoint* chosen = &series.front();
  for (const auto& p : series) {
    if (p.t <= t) chosen = &p;
  }
  return *chosen;
}

const char* to_string(Scheme s) { return s == Scheme::Godunov ? "godunov" : "te"; }
const char* to_string(Model m) { return m == Model::Lwr ? "lwr" : "ap"; }

std::optional<Scheme> parse_scheme(const std::string& s) {
  if (s == "te") return Scheme::TransportEquilibrium;
  if (s == "godunov") return Scheme::Godunov;
  return std::nullopt;
}

std::optional<Model> parse_model(const std::string& s) {
  if (s == "ap") return Model::AdaptedPressure;
  if (s == "lwr") return Model::Lwr;
  return std::nullopt;
}

const Road& Network::road(int id) const { return roads[road_index(id)]; }

std::size_t Network::road_index(int id) const {
  for (std::size_t k = 0; k < roads.size(); ++k) {
    if (roads[k].id == id) return k;
  }
  throw ValidationError("unknown " + road_label(id));
}

void Network::set_cell_size(double dx) {
  if (!(dx > 0.0)) throw ValidationError("cell size must be positive");
  for (auto& r : roads) r.cells = std::max(1, static_cast<int>(std::lround(r.length / dx)));
}

double Network::min_dx() const {
  double h = std::numeric_limits<double>::infinity();
  for (const auto& r : roads) h = std::min(h, r.dx());
  return h;
}

std::vector<std::string> Network::validate() const {
  std::vector<std::string> warnings;
  if (roads.empty()) throw ValidationError("network has no roads");
  if (!(gamma >= 1.0)) throw ValidationError("gamma must be >= 1");
  if (!(time.horizon > 0.0)) throw ValidationError("time horizon must be positive");
  if (!(time.dt_ratio > 0.0)) throw ValidationError("dt/dx ratio must be positive");
  if (time.output_every < 0) throw ValidationError("output cadence must be non-negative");

  std::set<int> ids;
  for (const auto& r : roads) {
    if (!ids.insert(r.id).second) throw ValidationError("duplicate " + road_label(r.id));
    r.validate();
    for (const auto& seg : r.profile) {
      RoadState u{seg.rho, seg.w, r.c0};
      apnet::validate(u, gamma);
      if (auto msg = velocity_warning(u, gamma)) warnings.push_back(road_label(r.id) + ": " + *msg);
    }
  }

  // Every road start and end attaches to exactly one junction or boundary.
  std::map<int, int> starts, ends;
  std::set<int> junction_ids;
  for (const auto& j : junctions) {
    if (!junction_ids.insert(j.id).second) {
      std::ostringstream msg;
      msg << "duplicate junction " << j.id;
      throw ValidationError(msg.str());
    }
    j.validate();
    for (int id : j.incoming) {
      if (!ids.count(id)) {
        std::ostringstream msg;
        msg << "junction " << j.id << " references unknown road " << id;
        throw ValidationError(msg.str());
      }
      ++ends[id];
    }
    for (int id : j.outgoing) {
      if (!ids.count(id)) {
        std::ostringstream msg;
        msg << "junction " << j.id << " references unknown road " << id;
        throw ValidationError(msg.str());
      }
      ++starts[id];
    }
  }
  for (const auto& b : boundaries) {
    if (!ids.count(b.road)) throw ValidationError("boundary references unknown " + road_label(b.road));
    if (b.type == BoundaryType::InflowSeries) {
      if (b.end != RoadEnd::Start) throw ValidationError(road_label(b.road) + ": inflow boundary must sit at the road start");
      if (b.series.empty()) throw ValidationError(road_label(b.road) + ": inflow boundary has an empty series");
      for (std::size_t k = 0; k < b.series.size(); ++k) {
        const auto& p = b.series[k];
        if (k > 0 && !(p.t > b.series[k - 1].t)) {
          throw ValidationError(road_label(b.road) + ": inflow series times must increase");
        }
        RoadState u{p.rho, p.w, road(b.road).c0};
        apnet::validate(u, gamma);
        if (auto msg = velocity_warning(u, gamma)) warnings.push_back(road_label(b.road) + " inflow: " + *msg);
      }
      ++starts[b.road];
    } else {
      if (b.end != RoadEnd::End) throw ValidationError(road_label(b.road) + ": outflow boundary must sit at the road end");
      if (!(b.supply >= 0.0)) throw ValidationError(road_label(b.road) + ": outflow supply must be non-negative");
      ++ends[b.road];
    }
  }
  for (int id : ids) {
    if (starts[id] != 1) {
      throw ValidationError(road_label(id) + ": start must attach to exactly one junction or boundary");
    }
    if (ends[id] != 1) {
      throw ValidationError(road_label(id) + ": end must attach to exactly one junction or boundary");
    }
  }
  return warnings;
}

}  // namespace apnet
