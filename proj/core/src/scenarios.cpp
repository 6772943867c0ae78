#include "apnet/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace apnet {

namespace {

Road uniform_road(int id, double length, double dx, const RoadState& u) {
  Road r;
  r.id = id;
  r.length = length;
  r.cells = std::max(1, static_cast<int>(std::lround(length / dx)));
  r.c0 = u.c;
  r.profile.push_back({0.0, length, u.rho, u.w});
  return r;
}

BoundarySpec inflow(int road, const RoadState& u) {
  BoundarySpec b;
  b.road = road;
  b.end = RoadEnd::Start;
  b.type = BoundaryType::InflowSeries;
  b.series.push_back({0.0, u.rho, u.w});
  return b;
}

BoundarySpec outflow(int road, double supply) {
  BoundarySpec b;
  b.road = road;
  b.end = RoadEnd::End;
  b.type = BoundaryType::FreeOutflow;
  b.supply = supply;
  return b;
}

}  // namespace

Network scenario_merge21(const Merge21Params& p) {
  if (!(p.beta >= 0.0 && p.beta <= 1.0)) throw ValidationError("merge21: beta must lie in [0, 1]");
  Network net;
  net.name = "merge21";
  net.gamma = p.gamma;
  net.roads = {uniform_road(1, p.length, p.dx, p.road1), uniform_road(2, p.length, p.dx, p.road2),
               uniform_road(3, p.length, p.dx, p.road3)};
  Junction jn;
  jn.id = 1;
  jn.incoming = {1, 2};
  jn.outgoing = {3};
  jn.priorities = {p.beta, 1.0 - p.beta};
  jn.distribution = {{1.0, 1.0}};
  net.junctions.push_back(jn);
  net.boundaries = {inflow(1, p.road1), inflow(2, p.road2),
                    outflow(3, std::numeric_limits<double>::infinity())};
  net.time = {p.horizon, p.dt_ratio, p.output_every};
  return net;
}

Network scenario_sequential(const SequentialParams& p) {
  if (p.n < 1) throw ValidationError("sequential: need at least one merge");
  if (!(p.beta > 0.0 && p.beta < 1.0)) {
    throw ValidationError("sequential: beta must lie strictly between 0 and 1");
  }
  if (!(p.a > 0.0) || !(p.b > 0.0)) throw ValidationError("sequential: markers a and b must be positive");
  Network net;
  net.name = p.congested ? "sequential-congested" : "sequential";
  net.gamma = p.gamma;
  for (int id = 0; id <= 2 * p.n; ++id) {
    RoadState u{p.rho, id == 0 ? p.b : p.a, p.c0};
    if (p.congested && id == p.n) u.rho = p.congested_rho;
    net.roads.push_back(uniform_road(id, p.length, p.dx, u));
  }
  for (int l = 1; l <= p.n; ++l) {
    Junction jn;
    jn.id = l;
    jn.incoming = {l - 1, p.n + l};
    jn.outgoing = {l};
    jn.priorities = {p.beta, 1.0 - p.beta};
    jn.distribution = {{1.0, 1.0}};
    net.junctions.push_back(jn);
  }
  net.boundaries.push_back(inflow(0, {p.rho, p.b, p.c0}));
  for (int l = 1; l <= p.n; ++l) net.boundaries.push_back(inflow(p.n + l, {p.rho, p.a, p.c0}));
  net.boundaries.push_back(outflow(p.n, p.congested ? 0.0 : std::numeric_limits<double>::infinity()));
  net.time = {p.horizon, p.dt_ratio, p.output_every};
  return net;
}

MergeChainReference merge_chain_reference(int n, double a, double b, double beta) {
  MergeChainReference ref;
  ref.w_bar.resize(static_cast<std::size_t>(n) + 1);
  ref.d.assign(static_cast<std::size_t>(n) + 1, 1.0);
  for (int l = 0; l <= n; ++l) {
    double sum = 0.0;
    for (int i = 0; i < l; ++i) sum += std::pow(beta, l - i - 1);
    ref.w_bar[static_cast<std::size_t>(l)] = std::pow(beta, l) * b + (1.0 - beta) * a * sum;
  }
  for (int l = 1; l <= n; ++l) {
    const double prev = ref.w_bar[static_cast<std::size_t>(l) - 1];
    ref.d[static_cast<std::size_t>(l)] = 1.0 + beta * (1.0 - beta) * (a - prev) * (a - prev) / (a * prev);
  }
  return ref;
}

}  // namespace apnet
