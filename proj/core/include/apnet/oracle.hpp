#pragma once

// Numerical homogenized pressure p* of a mixture of drivers, used to judge the
// closed-form approximation c_bar rho^gamma.
//
// For a mixture with shares beta_i and markers w_i entering a road whose
// initial pressure is c0 rho^gamma, the specific volume at speed v is
//
//   tau(v) = sum_i beta_i (c0 / (w_i - v))^(1/gamma),
//
// and p*(1 / tau(v)) = w_bar - v. The table samples this parametric curve.

#include <vector>

namespace apnet {

struct MixtureSpec {
  std::vector<double> beta;
  std::vector<double> w;
  double c0 = 1.0;
  double gamma = 1.0;

  void validate() const;
  double w_bar() const;
  /// Smallest marker among roads with a positive share.
  double min_active_marker() const;
};

double tau(double v, const MixtureSpec& mix);

struct PressureTableEntry {
  double v = 0.0;
  double rho = 0.0;
  double p_star = 0.0;
};

struct HomogenizedPressureTable {
  MixtureSpec mixture;
  double w_bar = 0.0;
  double c_bar = 0.0;
  /// Ordered by increasing v, i.e. decreasing rho.
  std::vector<PressureTableEntry> entries;

  double rho_max() const { return entries.front().rho; }
  double rho_min() const { return entries.back().rho; }
};

inline constexpr int kDefaultOracleGrid = 10001;

HomogenizedPressureTable build_table(const MixtureSpec& mix, int grid_size = kDefaultOracleGrid);

/// Piecewise-linear in rho between table nodes. Throws ValidationError outside
/// [rho_min, rho(0)].
double eval_pstar(const HomogenizedPressureTable& table, double rho);

/// The closed-form approximation c_bar rho^gamma.
double eval_pstarstar(const HomogenizedPressureTable& table, double rho);

}  // namespace apnet
