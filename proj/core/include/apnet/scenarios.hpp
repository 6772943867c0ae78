#pragma once

// Built-in networks: a single 2-1 merge and a chain of N merges fed by side
// roads, plus the closed-form marker/coefficient sequence along that chain.

#include <vector>

#include "apnet/network.hpp"

namespace apnet {

struct Merge21Params {
  RoadState road1{0.4, 2.0, 1.0};
  RoadState road2{0.5, 1.5, 1.0};
  RoadState road3{0.3, 2.0, 1.0};
  double beta = 0.5;
  double length = 1.0;
  double dx = 0.01;
  double dt_ratio = 0.1;
  double horizon = 0.12;
  double gamma = 1.0;
  int output_every = 0;
};

/// Roads 1 and 2 merge into road 3 at junction 1. Inflow boundaries repeat
/// the initial states; road 3 ends in a free outflow.
Network scenario_merge21(const Merge21Params& p);

struct SequentialParams {
  int n = 10;
  double a = 2.0;        // marker on every road but road 0
  double b = 1.0;        // marker on road 0
  double beta = 0.5;     // priority of the main-line road at every merge
  double rho = 0.3;      // initial density on every road
  double c0 = 1.0;
  double length = 0.5;
  double horizon = 12.0;
  double dx = 0.01;
  double dt_ratio = 0.25;
  double gamma = 1.0;
  int output_every = 0;
  /// Last main-line road starts at density `congested_rho` and its end is
  /// closed (zero outflow supply).
  bool congested = false;
  double congested_rho = 1.0;
};

/// Main line roads 0..N, side roads N+1..2N; junction l merges road l-1
/// (priority beta) and road N+l (priority 1-beta) into road l.
Network scenario_sequential(const SequentialParams& p);

struct MergeChainReference {
  /// w_bar[l] for l = 0..N (w_bar[0] = b)
  std::vector<double> w_bar;
  /// d[l] for l = 1..N stored at index l (d[0] unused, set to 1)
  std::vector<double> d;
};

/// w_bar_l = beta^l b + (1-beta) a sum_{i<l} beta^{l-i-1},
/// d_l = 1 + beta (1-beta) (a - w_bar_{l-1})^2 / (a w_bar_{l-1}).
MergeChainReference merge_chain_reference(int n, double a, double b, double beta);

}  // namespace apnet
