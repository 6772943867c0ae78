#pragma once

// Demand/supply functions and junction flux resolution.

#include <optional>
#include <span>
#include <vector>

#include "apnet/model.hpp"

namespace apnet {

/// Linear-velocity LWR closure V(rho) = v_max (1 - rho / rho_max).
struct LwrParams {
  double v_max = 1.0;
  double rho_max = 1.0;

  double speed(double rho) const;
  double flux(double rho) const;
  double critical_density() const { return 0.5 * rho_max; }
};

double demand_ap(double rho, double w, double c, double gamma);
double supply_ap(double rho, double w, double c, double gamma);

double demand_lwr(double rho, const LwrParams& p);
double supply_lwr(double rho, const LwrParams& p);

/// Sum of beta_i w_i. Empty when the shares sum to zero (no inflow).
std::optional<double> homogenized_marker(std::span<const double> beta, std::span<const double> w);

/// Approximate homogenized pressure coefficient
///   c_bar = c0 (sum_i beta_i w_i) (sum_l beta_l w_l^{-1/gamma})^gamma,
/// i.e. the coefficient for which c_bar rho^gamma meets the true homogenized
/// pressure at the stagnation point v = 0.
double pressure_coefficient(std::span<const double> beta, std::span<const double> w, double c0,
                            double gamma);

/// Density on the curve {w = w_ref, c = c_ref} with velocity v_downstream, or 0
/// if the curves do not intersect.
double tilde_density(double w_ref, double c_ref, double v_downstream, double gamma);

/// tilde_density against a full downstream state. When the downstream state
/// already lies on the reference curve the intersection is that state itself.
double tilde_density(double w_ref, double c_ref, const RoadState& downstream, double gamma);

enum class BoundarySide { OutgoingStart, IncomingEnd };

/// State with flux q on the curve (w_ref, c_ref): the free-flow root
/// (lambda1 >= 0) at the start of an outgoing road, the congested root
/// (lambda1 <= 0) at the end of an incoming road.
RoadState boundary_state(double q, double w_ref, double c_ref, double gamma, BoundarySide side);

/// Merge/diverge topology and traffic rules at a node.
struct Junction {
  int id = 0;
  std::vector<int> incoming;
  std::vector<int> outgoing;
  /// distribution[j][i] = alpha_ji, share of incoming i that goes to outgoing j.
  std::vector<std::vector<double>> distribution;
  std::vector<double> priorities;

  std::size_t n_in() const { return incoming.size(); }
  std::size_t n_out() const { return outgoing.size(); }
  bool is_merge() const { return incoming.size() >= 2; }

  /// Throws ValidationError naming the junction.
  void validate() const;

  /// beta_ij = alpha_ji beta_i / sum_l alpha_jl beta_l for outgoing j.
  /// Empty when no traffic is routed to j.
  std::optional<std::vector<double>> outgoing_shares(std::size_t j) const;

  /// sum_i alpha_ji beta_i
  double routed_priority(std::size_t j) const;
};

/// Marker and pressure coefficient imposed at the start of an outgoing road.
struct OutgoingReference {
  double w_bar = 0.0;
  double c_bar = 1.0;
};

struct JunctionResolution {
  double z = 0.0;
  std::vector<double> incoming_flux;
  std::vector<double> outgoing_flux;
  /// Per outgoing road, the (w_bar, c_bar) carried by the outgoing flux.
  std::vector<double> w_bar;
  std::vector<double> c_bar;
  /// Per outgoing road, incoming shares beta_ij (empty vector if no inflow).
  std::vector<std::vector<double>> shares;
  std::vector<double> demands;
  std::vector<double> supplies;
};

/// Maximal z with z beta_i <= D_i and z sum_i alpha_ji beta_i <= S_j. Negative
/// demands and supplies count as zero.
double max_junction_throughput(const Junction& junction, std::span<const double> demands,
                               std::span<const double> supplies);

/// Resolves the AP junction. `incoming` holds the last cell of each incoming
/// road, `outgoing` the first cell of each outgoing road and `reference` the
/// current (w_bar, c_bar) of each outgoing road.
JunctionResolution resolve_junction(const Junction& junction, std::span<const RoadState> incoming,
                                    std::span<const RoadState> outgoing,
                                    std::span<const OutgoingReference> reference, double gamma);

/// Same maximization with LWR demand/supply on scalar densities.
JunctionResolution resolve_junction_lwr(const Junction& junction, std::span<const double> incoming_rho,
                                        std::span<const LwrParams> incoming_params,
                                        std::span<const double> outgoing_rho,
                                        std::span<const LwrParams> outgoing_params);

}  // namespace apnet
