#include "apnet/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "apnet/scheme.hpp"

namespace apnet {

bool detect_adaption(double previous_w_bar, double new_w_bar, double tolerance) {
  return std::abs(new_w_bar - previous_w_bar) > tolerance;
}

const RoadField& Snapshot::road(int id) const {
  for (const auto& r : roads) {
    if (r.road_id == id) return r;
  }
  throw ValidationError("snapshot has no road with the requested id");
}

double SimulationRecord::first_adaption(int junction_id) const {
  for (const auto& e : events) {
    if (e.junction_id == junction_id) return e.t_star;
  }
  return std::numeric_limits<double>::infinity();
}

namespace {

// Where each road end attaches.
struct Attachment {
  enum class Kind { Junction, Boundary } kind = Kind::Boundary;
  std::size_t index = 0;     // junction or boundary index
  std::size_t position = 0;  // position in the junction's incoming/outgoing list
};

struct Topology {
  std::vector<Attachment> start;
  std::vector<Attachment> end;
  std::vector<std::vector<std::size_t>> junction_in;   // road indices
  std::vector<std::vector<std::size_t>> junction_out;  // road indices
  std::vector<std::size_t> order;                      // road indices sorted by id
};

Topology build_topology(const Network& net) {
  Topology topo;
  topo.start.resize(net.roads.size());
  topo.end.resize(net.roads.size());
  for (std::size_t k = 0; k < net.junctions.size(); ++k) {
    const auto& jn = net.junctions[k];
    topo.junction_in.emplace_back();
    topo.junction_out.emplace_back();
    for (std::size_t i = 0; i < jn.incoming.size(); ++i) {
      const std::size_t r = net.road_index(jn.incoming[i]);
      topo.end[r] = {Attachment::Kind::Junction, k, i};
      topo.junction_in.back().push_back(r);
    }
    for (std::size_t j = 0; j < jn.outgoing.size(); ++j) {
      const std::size_t r = net.road_index(jn.outgoing[j]);
      topo.start[r] = {Attachment::Kind::Junction, k, j};
      topo.junction_out.back().push_back(r);
    }
  }
  for (std::size_t b = 0; b < net.boundaries.size(); ++b) {
    const std::size_t r = net.road_index(net.boundaries[b].road);
    if (net.boundaries[b].end == RoadEnd::Start) {
      topo.start[r] = {Attachment::Kind::Boundary, b, 0};
    } else {
      topo.end[r] = {Attachment::Kind::Boundary, b, 0};
    }
  }
  topo.order.resize(net.roads.size());
  std::iota(topo.order.begin(), topo.order.end(), std::size_t{0});
  std::sort(topo.order.begin(), topo.order.end(),
            [&](std::size_t a, std::size_t b) { return net.roads[a].id < net.roads[b].id; });
  return topo;
}

ConservativeState network_totals(const std::vector<std::vector<RoadState>>& cells, const Network& net) {
  ConservativeState sum;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    ConservativeState road;
    for (const auto& u : cells[k]) road += to_conservative(u);
    sum += net.roads[k].dx() * road;
  }
  return sum;
}

Snapshot make_snapshot(std::size_t step, double t, const Network& net, const Topology& topo,
                       const std::vector<std::vector<RoadState>>& cells) {
  Snapshot snap;
  snap.step = step;
  snap.t = t;
  for (std::size_t k : topo.order) snap.roads.push_back({net.roads[k].id, net.roads[k].dx(), cells[k]});
  return snap;
}

void track_balance(const JunctionResolution& res, std::span<const RoadState> incoming,
                   ConservationDiagnostics& diag) {
  double mass_in = 0.0, mass_out = 0.0, mom_in = 0.0, mom_out = 0.0;
  for (std::size_t i = 0; i < res.incoming_flux.size(); ++i) {
    mass_in += res.incoming_flux[i];
    if (!incoming.empty()) mom_in += incoming[i].w * res.incoming_flux[i];
  }
  for (std::size_t j = 0; j < res.outgoing_flux.size(); ++j) {
    mass_out += res.outgoing_flux[j];
    if (!res.w_bar.empty()) mom_out += res.w_bar[j] * res.outgoing_flux[j];
  }
  diag.max_mass_imbalance = std::max(diag.max_mass_imbalance, std::abs(mass_in - mass_out));
  if (!incoming.empty() && !res.w_bar.empty()) {
    diag.max_momentum_imbalance = std::max(diag.max_momentum_imbalance, std::abs(mom_in - mom_out));
  }
}

bool should_record(std::size_t completed, std::size_t total, int every) {
  if (completed == total) return true;
  return every > 0 && completed % static_cast<std::size_t>(every) == 0;
}

class ApRunner {
public:
  ApRunner(const Network& net, const RunOptions& options, SimulationRecord& record)
      : net_(net), options_(options), record_(record), topo_(build_topology(net)) {}

  void run() {
    const double dt = net_.dt();
    const auto steps = static_cast<std::size_t>(std::max(1L, std::lround(net_.time.horizon / dt)));
    record_.dt = dt;
    record_.steps = steps;

    for (const auto& road : net_.roads) roads_.push_back({road.initial_cells(), road.dx(), net_.gamma});
    std::vector<std::vector<RoadState>> cells = gather();
    record_.diagnostics.initial_totals = network_totals(cells, net_);
    record_.snapshots.push_back(make_snapshot(0, 0.0, net_, topo_, cells));

    init_junction_state();
    boundaries_.resize(roads_.size());
    for (std::size_t s = 0; s < steps; ++s) {
      const double t = static_cast<double>(s) * dt;
      resolve_junctions(s, t);
      apply_boundaries(t);
      for (std::size_t k = 0; k < roads_.size(); ++k) {
        if (net_.scheme == Scheme::TransportEquilibrium) {
          te_step(roads_[k], s, dt, boundaries_[k]);
        } else {
          godunov_step(roads_[k], dt, boundaries_[k]);
        }
      }
      const std::size_t completed = s + 1;
      const double t_next = static_cast<double>(completed) * dt;
      const bool record = should_record(completed, steps, net_.time.output_every);
      if (options_.observer || record) cells = gather();
      if (options_.observer) {
        StepView view{completed, t_next, &net_.roads, &cells, &resolutions_};
        options_.observer(view);
      }
      if (record) record_.snapshots.push_back(make_snapshot(completed, t_next, net_, topo_, cells));
    }
    record_.diagnostics.final_totals = network_totals(gather(), net_);
  }

private:
  std::vector<std::vector<RoadState>> gather() const {
    std::vector<std::vector<RoadState>> out;
    out.reserve(roads_.size());
    for (const auto& r : roads_) out.push_back(r.cells);
    return out;
  }

  void init_junction_state() {
    for (std::size_t k = 0; k < net_.junctions.size(); ++k) {
      std::vector<OutgoingReference> refs;
      std::vector<double> prev;
      for (std::size_t r : topo_.junction_out[k]) {
        const RoadState& first = roads_[r].cells.front();
        refs.push_back({first.w, net_.roads[r].c0});
        prev.push_back(first.w);
      }
      references_.push_back(std::move(refs));
      previous_w_bar_.push_back(std::move(prev));
    }
  }

  void resolve_junctions(std::size_t s, double t) {
    resolutions_.clear();
    for (std::size_t k = 0; k < net_.junctions.size(); ++k) {
      const Junction& jn = net_.junctions[k];
      std::vector<RoadState> in, out;
      std::vector<double> markers;
      for (std::size_t r : topo_.junction_in[k]) {
        in.push_back(roads_[r].cells.back());
        markers.push_back(in.back().w);
      }
      for (std::size_t r : topo_.junction_out[k]) out.push_back(roads_[r].cells.front());

      for (std::size_t j = 0; j < jn.n_out(); ++j) {
        const auto shares = jn.outgoing_shares(j);
        if (!shares) continue;  // nothing routed: keep the previous reference
        const double w_new = *homogenized_marker(*shares, markers);
        const Road& target = net_.roads[topo_.junction_out[k][j]];
        auto& ref = references_[k][j];
        double& prev = previous_w_bar_[k][j];
        if (jn.is_merge()) {
          const bool changed = detect_adaption(prev, w_new);
          if (s == 0 || changed) ref.c_bar = pressure_coefficient(*shares, markers, target.c0, net_.gamma);
          if (changed) {
            JunctionEvent e;
            e.junction_id = jn.id;
            e.road_id = target.id;
            e.step = s;
            e.t_star = t;
            e.w_bar_old = prev;
            e.w_bar_new = w_new;
            e.c_bar = ref.c_bar;
            e.coeff_ratio = ref.c_bar / target.c0;
            e.shares = *shares;
            e.markers = markers;
            record_.events.push_back(std::move(e));
          }
        } else {
          ref.c_bar = target.c0;
        }
        ref.w_bar = w_new;
        prev = w_new;
      }

      JunctionResolution res = resolve_junction(jn, in, out, references_[k], net_.gamma);
      track_balance(res, in, record_.diagnostics);

      for (std::size_t i = 0; i < jn.n_in(); ++i) {
        auto& bc = boundaries_[topo_.junction_in[k][i]].right;
        bc.mass_flux = res.incoming_flux[i];
        bc.ghost = boundary_state(res.incoming_flux[i], in[i].w, in[i].c, net_.gamma, BoundarySide::IncomingEnd);
        bc.supply_cap = std::numeric_limits<double>::infinity();
      }
      for (std::size_t j = 0; j < jn.n_out(); ++j) {
        auto& bc = boundaries_[topo_.junction_out[k][j]].left;
        const auto& ref = references_[k][j];
        bc.mass_flux = res.outgoing_flux[j];
        bc.ghost = boundary_state(res.outgoing_flux[j], ref.w_bar, ref.c_bar, net_.gamma, BoundarySide::OutgoingStart);
      }
      resolutions_.push_back(std::move(res));
    }
  }

  void apply_boundaries(double t) {
    for (std::size_t r = 0; r < roads_.size(); ++r) {
      const auto& cells = roads_[r].cells;
      if (topo_.start[r].kind == Attachment::Kind::Boundary) {
        const auto& spec = net_.boundaries[topo_.start[r].index];
        const SeriesPoint p = spec.ghost_at(t);
        auto& bc = boundaries_[r].left;
        bc.ghost = {p.rho, p.w, net_.roads[r].c0};
        bc.mass_flux = godunov_flux(bc.ghost, cells.front(), net_.gamma).m0;
      }
      if (topo_.end[r].kind == Attachment::Kind::Boundary) {
        const auto& spec = net_.boundaries[topo_.end[r].index];
        const RoadState& last = cells.back();
        auto& bc = boundaries_[r].right;
        bc.ghost = {0.0, last.w, last.c};
        bc.supply_cap = spec.supply;
        bc.mass_flux = std::min(std::max(0.0, demand_ap(last.rho, last.w, last.c, net_.gamma)), spec.supply);
      }
    }
  }

  const Network& net_;
  const RunOptions& options_;
  SimulationRecord& record_;
  Topology topo_;
  std::vector<GridRoad> roads_;
  std::vector<RoadBoundary> boundaries_;
  std::vector<std::vector<OutgoingReference>> references_;
  std::vector<std::vector<double>> previous_w_bar_;
  std::vector<JunctionResolution> resolutions_;
};

LwrParams lwr_params_for(const Road& road, double gamma) {
  const double w0 = road.profile.front().w;
  const double rho_max = gamma == 1.0 ? w0 / road.c0 : std::pow(w0 / road.c0, 1.0 / gamma);
  return {w0, rho_max};
}

class LwrRunner {
public:
  LwrRunner(const Network& net, const RunOptions& options, SimulationRecord& record)
      : net_(net), options_(options), record_(record), topo_(build_topology(net)) {}

  void run() {
    const double dt = net_.dt();
    const auto steps = static_cast<std::size_t>(std::max(1L, std::lround(net_.time.horizon / dt)));
    record_.dt = dt;
    record_.steps = steps;

    for (const auto& road : net_.roads) {
      LwrRoad lr;
      lr.dx = road.dx();
      lr.params = lwr_params_for(road, net_.gamma);
      for (const auto& u : road.initial_cells()) lr.rho.push_back(u.rho);
      roads_.push_back(std::move(lr));
    }
    auto cells = states();
    record_.diagnostics.initial_totals = network_totals(cells, net_);
    record_.snapshots.push_back(make_snapshot(0, 0.0, net_, topo_, cells));

    left_flux_.assign(roads_.size(), 0.0);
    right_flux_.assign(roads_.size(), 0.0);
    for (std::size_t s = 0; s < steps; ++s) {
      const double t = static_cast<double>(s) * dt;
      resolve_junctions();
      apply_boundaries(t);
      for (std::size_t k = 0; k < roads_.size(); ++k) {
        lwr_godunov_step(roads_[k], dt, left_flux_[k], right_flux_[k]);
      }
      const std::size_t completed = s + 1;
      const double t_next = static_cast<double>(completed) * dt;
      const bool record = should_record(completed, steps, net_.time.output_every);
      if (options_.observer || record) cells = states();
      if (options_.observer) {
        StepView view{completed, t_next, &net_.roads, &cells, &resolutions_};
        options_.observer(view);
      }
      if (record) record_.snapshots.push_back(make_snapshot(completed, t_next, net_, topo_, cells));
    }
    record_.diagnostics.final_totals = network_totals(states(), net_);
  }

private:
  // LWR states expressed in (rho, w, c) with the road's fixed marker.
  std::vector<std::vector<RoadState>> states() const {
    std::vector<std::vector<RoadState>> out;
    for (std::size_t k = 0; k < roads_.size(); ++k) {
      std::vector<RoadState> road;
      road.reserve(roads_[k].rho.size());
      for (double r : roads_[k].rho) road.push_back({r, roads_[k].params.v_max, net_.roads[k].c0});
      out.push_back(std::move(road));
    }
    return out;
  }

  void resolve_junctions() {
    resolutions_.clear();
    for (std::size_t k = 0; k < net_.junctions.size(); ++k) {
      const Junction& jn = net_.junctions[k];
      std::vector<double> in_rho, out_rho;
      std::vector<LwrParams> in_p, out_p;
      for (std::size_t r : topo_.junction_in[k]) {
        in_rho.push_back(roads_[r].rho.back());
        in_p.push_back(roads_[r].params);
      }
      for (std::size_t r : topo_.junction_out[k]) {
        out_rho.push_back(roads_[r].rho.front());
        out_p.push_back(roads_[r].params);
      }
      JunctionResolution res = resolve_junction_lwr(jn, in_rho, in_p, out_rho, out_p);
      track_balance(res, {}, record_.diagnostics);
      for (std::size_t i = 0; i < jn.n_in(); ++i) right_flux_[topo_.junction_in[k][i]] = res.incoming_flux[i];
      for (std::size_t j = 0; j < jn.n_out(); ++j) left_flux_[topo_.junction_out[k][j]] = res.outgoing_flux[j];
      resolutions_.push_back(std::move(res));
    }
  }

  void apply_boundaries(double t) {
    for (std::size_t r = 0; r < roads_.size(); ++r) {
      const auto& road = roads_[r];
      if (topo_.start[r].kind == Attachment::Kind::Boundary) {
        const SeriesPoint p = net_.boundaries[topo_.start[r].index].ghost_at(t);
        left_flux_[r] = lwr_godunov_flux(p.rho, road.rho.front(), road.params);
      }
      if (topo_.end[r].kind == Attachment::Kind::Boundary) {
        const double supply = net_.boundaries[topo_.end[r].index].supply;
        right_flux_[r] = std::min(demand_lwr(road.rho.back(), road.params), supply);
      }
    }
  }

  const Network& net_;
  const RunOptions& options_;
  SimulationRecord& record_;
  Topology topo_;
  std::vector<LwrRoad> roads_;
  std::vector<double> left_flux_;
  std::vector<double> right_flux_;
  std::vector<JunctionResolution> resolutions_;
};

}  // namespace

SimulationRecord run(const Network& network, const RunOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  SimulationRecord record;
  record.warnings = network.validate();
  record.network_name = network.name;
  record.scheme = network.scheme;
  record.model = network.model;
  record.gamma = network.gamma;

  if (network.model == Model::Lwr) {
    if (network.gamma != 1.0) throw ValidationError("the LWR baseline needs gamma = 1 (linear velocity law)");
    for (const auto& road : network.roads) {
      for (const auto& seg : road.profile) {
        if (seg.w != road.profile.front().w) {
          std::ostringstream msg;
          msg << "road " << road.id << ": LWR uses the marker of the first profile segment";
          record.warnings.push_back(msg.str());
          break;
        }
      }
    }
    LwrRunner(network, options, record).run();
  } else {
    ApRunner(network, options, record).run();
  }
  record.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return record;
}

}  // namespace apnet
