#include "apnet/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "apnet/coupling.hpp"
#include "apnet/model.hpp"

namespace apnet {

void MixtureSpec::validate() const {
  if (beta.empty() || beta.size() != w.size()) {
    throw ValidationError("mixture needs matching, non-empty share and marker lists");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < beta.size(); ++i) {
    if (!(beta[i] >= 0.0)) throw ValidationError("mixture shares must be non-negative");
    if (!(w[i] > 0.0)) throw ValidationError("mixture markers must be positive");
    total += beta[i];
  }
  if (std::abs(total - 1.0) > 1e-9) throw ValidationError("mixture shares must sum to 1");
  if (!(c0 > 0.0)) throw ValidationError("c0 must be positive");
  if (!(gamma >= 1.0)) throw ValidationError("gamma must be >= 1");
}

double MixtureSpec::w_bar() const { return *homogenized_marker(beta, w); }

double MixtureSpec::min_active_marker() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < beta.size(); ++i) {
    if (beta[i] > 0.0) m = std::min(m, w[i]);
  }
  return m;
}

double tau(double v, const MixtureSpec& mix) {
  if (v >= mix.min_active_marker()) {
    std::ostringstream msg;
    msg << "tau: velocity " << v << " reaches the smallest marker " << mix.min_active_marker();
    throw ValidationError(msg.str());
  }
  double t = 0.0;
  for (std::size_t i = 0; i < mix.beta.size(); ++i) {
    if (mix.beta[i] <= 0.0) continue;
    const double base = mix.c0 / (mix.w[i] - v);
    t += mix.beta[i] * (mix.gamma == 1.0 ? base : std::pow(base, 1.0 / mix.gamma));
  }
  return t;
}

HomogenizedPressureTable build_table(const MixtureSpec& mix, int grid_size) {
  mix.validate();
  if (grid_size < 2) throw ValidationError("oracle grid needs at least 2 points");
  HomogenizedPressureTable table;
  table.mixture = mix;
  table.w_bar = mix.w_bar();
  table.c_bar = pressure_coefficient(mix.beta, mix.w, mix.c0, mix.gamma);
  const double v_cap = (1.0 - 1e-6) * mix.min_active_marker();
  table.entries.reserve(static_cast<std::size_t>(grid_size));
  for (int k = 0; k < grid_size; ++k) {
    const double v = v_cap * static_cast<double>(k) / static_cast<double>(grid_size - 1);
    table.entries.push_back({v, 1.0 / tau(v, mix), table.w_bar - v});
  }
  return table;
}

double eval_pstar(const HomogenizedPressureTable& table, double rho) {
  const auto& e = table.entries;
  if (!(rho >= table.rho_min()) || rho > table.rho_max()) {
    std::ostringstream msg;
    msg << "density " << rho << " outside oracle range [" << table.rho_min() << ", " << table.rho_max() << "]";
    throw ValidationError(msg.str());
  }
  // Densities decrease along the table.
  auto it = std::lower_bound(e.begin(), e.end(), rho,
                             [](const PressureTableEntry& a, double r) { return a.rho > r; });
  if (it == e.end()) return e.back().p_star;
  if (it->rho == rho || it == e.begin()) return it->p_star;
  const auto& hi = *(it - 1);  // larger density
  const auto& lo = *it;
  const double t = (rho - lo.rho) / (hi.rho - lo.rho);
  return lo.p_star + t * (hi.p_star - lo.p_star);
}

double eval_pstarstar(const HomogenizedPressureTable& table, double rho) {
  return pressure(rho, table.c_bar, table.mixture.gamma);
}

}  // namespace apnet
