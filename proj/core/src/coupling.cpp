#include "apnet/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace apnet {

namespace {

constexpr double kShareTolerance = 1e-9;

std::string junction_label(const Junction& j) {
  std::ostringstream s;
  s << "junction " << j.id;
  return s.str();
}

// rho (w - c rho^gamma) - q, increasing on [0, sigma] and decreasing above.
double excess_flux(double rho, double q, double w, double c, double gamma) {
  return rho * (w - pressure(rho, c, gamma)) - q;
}

double excess_flux_derivative(double rho, double w, double c, double gamma) {
  return w - (gamma + 1.0) * pressure(rho, c, gamma);
}

// Safeguarded Newton on a bracket where excess_flux changes sign.
double bracketed_root(double lo, double hi, double q, double w, double c, double gamma) {
  constexpr int kMaxIterations = 200;
  constexpr double kTolerance = 1e-12;
  double f_lo = excess_flux(lo, q, w, c, gamma);
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < kMaxIterations; ++it) {
    const double f = excess_flux(x, q, w, c, gamma);
    if (f == 0.0) return x;
    if ((f < 0.0) == (f_lo < 0.0)) {
      lo = x;
      f_lo = f;
    } else {
      hi = x;
    }
    const double df = excess_flux_derivative(x, w, c, gamma);
    double next = df != 0.0 ? x - f / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= kTolerance && hi - lo <= 1e3 * kTolerance) return next;
    if (hi - lo <= kTolerance) return 0.5 * (lo + hi);
    x = next;
  }
  return x;
}

}  // namespace

double LwrParams::speed(double rho) const { return v_max - (v_max / rho_max) * rho; }

double LwrParams::flux(double rho) const { return rho * speed(rho); }

double demand_ap(double rho, double w, double c, double gamma) {
  if (w <= 0.0) return 0.0;
  const double sigma = critical_density(w, c, gamma);
  if (rho <= sigma) return rho * (w - pressure(rho, c, gamma));
  return sigma * (w - pressure(sigma, c, gamma));
}

double supply_ap(double rho, double w, double c, double gamma) {
  if (w <= 0.0) return 0.0;
  const double sigma = critical_density(w, c, gamma);
  if (rho <= sigma) return sigma * (w - pressure(sigma, c, gamma));
  return rho * (w - pressure(rho, c, gamma));
}

double demand_lwr(double rho, const LwrParams& p) {
  const double sigma = p.critical_density();
  return rho <= sigma ? p.flux(rho) : p.flux(sigma);
}

double supply_lwr(double rho, const LwrParams& p) {
  const double sigma = p.critical_density();
  return rho <= sigma ? p.flux(sigma) : p.flux(rho);
}

std::optional<double> homogenized_marker(std::span<const double> beta, std::span<const double> w) {
  if (beta.size() != w.size()) throw ValidationError("homogenized_marker: size mismatch");
  double total = 0.0;
  double marker = 0.0;
  for (std::size_t i = 0; i < beta.size(); ++i) {
    total += beta[i];
    marker += beta[i] * w[i];
  }
  if (total <= 0.0) return std::nullopt;
  return marker;
}

double pressure_coefficient(std::span<const double> beta, std::span<const double> w, double c0,
                            double gamma) {
  if (beta.size() != w.size() || beta.empty()) {
    throw ValidationError("pressure_coefficient: shares and markers must be non-empty and of equal size");
  }
  for (double wi : w) {
    if (!(wi > 0.0)) throw ValidationError("pressure_coefficient: markers must be positive");
  }
  // A mixture of identical markers (or a single active road) keeps the initial law.
  std::optional<double> common;
  bool uniform = true;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (beta[i] <= 0.0) continue;
    if (!common) {
      common = w[i];
    } else if (*common != w[i]) {
      uniform = false;
    }
  }
  if (uniform) return c0;

  double mean_marker = 0.0;
  double mean_root = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    mean_marker += beta[i] * w[i];
    mean_root += gamma == 1.0 ? beta[i] / w[i] : beta[i] / std::pow(w[i], 1.0 / gamma);
  }
  const double scale = gamma == 1.0 ? mean_root : std::pow(mean_root, gamma);
  return c0 * mean_marker * scale;
}

double tilde_density(double w_ref, double c_ref, double v_downstream, double gamma) {
  if (!(w_ref > v_downstream)) return 0.0;
  const double base = (w_ref - v_downstream) / c_ref;
  return gamma == 1.0 ? base : std::pow(base, 1.0 / gamma);
}

double tilde_density(double w_ref, double c_ref, const RoadState& downstream, double gamma) {
  if (downstream.w == w_ref && downstream.c == c_ref) return downstream.rho;
  return tilde_density(w_ref, c_ref, velocity(downstream, gamma), gamma);
}

RoadState boundary_state(double q, double w_ref, double c_ref, double gamma, BoundarySide side) {
  const double sigma = critical_density(w_ref, c_ref, gamma);
  const double q_max = sigma > 0.0 ? sigma * (w_ref - pressure(sigma, c_ref, gamma)) : 0.0;
  constexpr double kRelTol = 1e-10;
  if (q > q_max + kRelTol * std::max(1.0, q_max)) {
    std::ostringstream msg;
    msg << "boundary flux " << q << " exceeds maximal flux " << q_max << " for w=" << w_ref
        << ", c=" << c_ref;
    throw NumericalError(msg.str());
  }
  if (q >= q_max) return {sigma, w_ref, c_ref};
  if (w_ref <= 0.0) return {0.0, w_ref, c_ref};
  const double rho_jam = gamma == 1.0 ? w_ref / c_ref : std::pow(w_ref / c_ref, 1.0 / gamma);
  if (q <= 0.0) {
    return {side == BoundarySide::OutgoingStart ? 0.0 : rho_jam, w_ref, c_ref};
  }

  double rho = 0.0;
  if (gamma == 1.0) {
    const double half = w_ref / (2.0 * c_ref);
    const double disc = std::sqrt(std::max(0.0, half * half - q / c_ref));
    if (side == BoundarySide::OutgoingStart) {
      // Cancellation-free form of half - disc.
      rho = (q / c_ref) / (half + disc);
    } else {
      rho = half + disc;
    }
  } else if (side == BoundarySide::OutgoingStart) {
    rho = bracketed_root(0.0, sigma, q, w_ref, c_ref, gamma);
  } else {
    rho = bracketed_root(sigma, rho_jam, q, w_ref, c_ref, gamma);
  }
  return {rho, w_ref, c_ref};
}

void Junction::validate() const {
  if (incoming.empty() || outgoing.empty()) {
    throw ValidationError(junction_label(*this) + ": needs at least one incoming and one outgoing road");
  }
  if (priorities.size() != incoming.size()) {
    throw ValidationError(junction_label(*this) + ": priority vector size differs from incoming road count");
  }
  double total = 0.0;
  for (double b : priorities) {
    if (!(b >= 0.0) || b > 1.0) {
      throw ValidationError(junction_label(*this) + ": priorities must lie in [0, 1]");
    }
    total += b;
  }
  if (std::abs(total - 1.0) > kShareTolerance) {
    std::ostringstream msg;
    msg << junction_label(*this) << ": priorities sum to " << total << ", expected 1";
    throw ValidationError(msg.str());
  }
  if (distribution.size() != outgoing.size()) {
    throw ValidationError(junction_label(*this) + ": distribution matrix needs one row per outgoing road");
  }
  for (const auto& row : distribution) {
    if (row.size() != incoming.size()) {
      throw ValidationError(junction_label(*this) + ": distribution matrix needs one column per incoming road");
    }
    for (double a : row) {
      if (!(a >= 0.0) || a > 1.0) {
        throw ValidationError(junction_label(*this) + ": distribution entries must lie in [0, 1]");
      }
    }
  }
  for (std::size_t i = 0; i < incoming.size(); ++i) {
    double column = 0.0;
    for (const auto& row : distribution) column += row[i];
    if (std::abs(column - 1.0) > kShareTolerance) {
      std::ostringstream msg;
      msg << junction_label(*this) << ": distribution column for incoming road " << incoming[i]
          << " sums to " << column << ", expected 1";
      throw ValidationError(msg.str());
    }
  }
}

double Junction::routed_priority(std::size_t j) const {
  double a = 0.0;
  for (std::size_t i = 0; i < incoming.size(); ++i) a += distribution[j][i] * priorities[i];
  return a;
}

std::optional<std::vector<double>> Junction::outgoing_shares(std::size_t j) const {
  const double a = routed_priority(j);
  if (a <= 0.0) return std::nullopt;
  std::vector<double> shares(incoming.size());
  for (std::size_t i = 0; i < incoming.size(); ++i) shares[i] = distribution[j][i] * priorities[i] / a;
  return shares;
}

double max_junction_throughput(const Junction& junction, std::span<const double> demands,
                               std::span<const double> supplies) {
  double z = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < junction.n_in(); ++i) {
    const double b = junction.priorities[i];
    if (b <= 0.0) continue;
    z = std::min(z, std::max(0.0, demands[i]) / b);
  }
  for (std::size_t j = 0; j < junction.n_out(); ++j) {
    const double a = junction.routed_priority(j);
    if (a <= 0.0) continue;
    z = std::min(z, std::max(0.0, supplies[j]) / a);
  }
  if (!std::isfinite(z)) return 0.0;
  return std::max(0.0, z);
}

namespace {

void distribute(const Junction& junction, JunctionResolution& r) {
  r.incoming_flux.resize(junction.n_in());
  r.outgoing_flux.assign(junction.n_out(), 0.0);
  for (std::size_t i = 0; i < junction.n_in(); ++i) r.incoming_flux[i] = r.z * junction.priorities[i];
  for (std::size_t j = 0; j < junction.n_out(); ++j) {
    for (std::size_t i = 0; i < junction.n_in(); ++i) {
      r.outgoing_flux[j] += junction.distribution[j][i] * r.incoming_flux[i];
    }
  }
}

}  // namespace

JunctionResolution resolve_junction(const Junction& junction, std::span<const RoadState> incoming,
                                    std::span<const RoadState> outgoing,
                                    std::span<const OutgoingReference> reference, double gamma) {
  if (incoming.size() != junction.n_in() || outgoing.size() != junction.n_out() ||
      reference.size() != junction.n_out()) {
    throw ValidationError(junction_label(junction) + ": state count does not match topology");
  }
  JunctionResolution r;
  r.demands.resize(junction.n_in());
  r.supplies.resize(junction.n_out());
  for (std::size_t i = 0; i < junction.n_in(); ++i) {
    const RoadState& u = incoming[i];
    r.demands[i] = demand_ap(u.rho, u.w, u.c, gamma);
  }
  for (std::size_t j = 0; j < junction.n_out(); ++j) {
    const auto& ref = reference[j];
    const double rho_tilde = tilde_density(ref.w_bar, ref.c_bar, outgoing[j], gamma);
    r.supplies[j] = supply_ap(rho_tilde, ref.w_bar, ref.c_bar, gamma);
    r.w_bar.push_back(ref.w_bar);
    r.c_bar.push_back(ref.c_bar);
    auto shares = junction.outgoing_shares(j);
    r.shares.push_back(shares ? *shares : std::vector<double>{});
  }
  r.z = max_junction_throughput(junction, r.demands, r.supplies);
  distribute(junction, r);
  return r;
}

JunctionResolution resolve_junction_lwr(const Junction& junction, std::span<const double> incoming_rho,
                                        std::span<const LwrParams> incoming_params,
                                        std::span<const double> outgoing_rho,
                                        std::span<const LwrParams> outgoing_params) {
  if (incoming_rho.size() != junction.n_in() || outgoing_rho.size() != junction.n_out() ||
      incoming_params.size() != junction.n_in() || outgoing_params.size() != junction.n_out()) {
    throw ValidationError(junction_label(junction) + ": state count does not match topology");
  }
  JunctionResolution r;
  for (std::size_t i = 0; i < junction.n_in(); ++i) {
    r.demands.push_back(demand_lwr(incoming_rho[i], incoming_params[i]));
  }
  for (std::size_t j = 0; j < junction.n_out(); ++j) {
    r.supplies.push_back(supply_lwr(outgoing_rho[j], outgoing_params[j]));
    auto shares = junction.outgoing_shares(j);
    r.shares.push_back(shares ? *shares : std::vector<double>{});
  }
  r.z = max_junction_throughput(junction, r.demands, r.supplies);
  distribute(junction, r);
  return r;
}

}  // namespace apnet
