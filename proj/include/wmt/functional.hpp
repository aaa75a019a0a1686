#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "wmt/core.hpp"
#include "wmt/profile.hpp"

namespace wmt {

struct QuadratureConfig {
  /// Gauss-Legendre points per cell for the exponential integrand (>= 2).
  std::size_t nodes_per_cell = 8;
  /// Target bound on the discarded tail when a truncation point is chosen.
  double tail_tolerance = 1e-10;
  /// Hard cap on the truncation point.
  double t_max_cap = 400.0;
  /// Profiles with gamma_energy <= 1 + feasibility_tolerance count as feasible.
  double feasibility_tolerance = 1e-9;
  /// Compare against a half-order rule on every cell to fill truncation_bound.
  bool estimate_error = true;
};

struct FunctionalReport {
  double i_value = 0.0;
  double gamma_value = 0.0;
  /// Sum of per-cell |G_n - G_{n/2}| estimates; the constant tail is exact.
  double truncation_bound = 0.0;
  bool feasible = false;
  /// False when |psi_N|^{2 gamma} >= T_max, i.e. the analytic tail term
  /// e^{psi_N^{2 gamma} - T_max} is not small and T_max should grow.
  bool certified = true;
};

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(std::size_t n);

/// Per-cell coefficients c_i with Gamma(psi) = sum_i c_i (psi_{i+1} - psi_i)^2,
/// c_i = (t_{i+1}^{b+1} - t_i^{b+1}) / ((b+1)(1-b) h_i^2).
std::vector<double> energy_cell_weights(std::span<const double> grid, const WeightParams& p);

/// Gamma(psi) = int_0^inf |psi'|^2 t^beta / (1 - beta) dt, exact for
/// piecewise-linear psi.
double gamma_energy(const Profile1D& psi, const WeightParams& p);

/// Gamma restricted to [a, b] (b may be +infinity). Requires 0 <= a <= b.
double gamma_energy_between(const Profile1D& psi, const WeightParams& p, double a, double b);

/// Discretization of I(psi) = int_0^inf exp(|psi|^{2 gamma} - t) dt on a
/// fixed grid: Gauss-Legendre on each cell plus the exact constant tail
/// exp(|psi_N|^{2 gamma} - T_max). Caches the Gauss layout for repeated
/// evaluation on the same grid.
class DiscreteFunctional {
 public:
  DiscreteFunctional(std::span<const double> grid, const WeightParams& p, std::size_t nodes_per_cell = 8);

  std::size_t nodes() const { return grid_.size(); }
  std::span<const double> grid() const { return grid_; }
  double power() const { return power_; }

  double value(std::span<const double> values) const;
  /// Fills gradient[i] = dI/dpsi_i for every node (entry 0 included).
  double value_and_gradient(std::span<const double> values, std::span<double> gradient) const;
  /// I(to) - I(from), evaluated without cancellation.
  double increment(std::span<const double> from, std::span<const double> to) const;
  /// Integral over each cell, tail excluded.
  std::vector<double> cell_integrals(std::span<const double> values) const;
  /// exp(|psi_N|^{2 gamma} - T_max).
  double tail(std::span<const double> values) const;

 private:
  void interpolate(std::span<const double> values, std::span<double> out) const;

  std::vector<double> grid_;
  std::size_t per_cell_;
  double power_;
  std::vector<double> t_;
  std::vector<double> w_;
  std::vector<double> lambda_;
};

FunctionalReport functional_i(const Profile1D& psi, const WeightParams& p, const QuadratureConfig& q = {});

/// (int_0^a, int_a^inf) of the reduced integrand.
std::pair<double, double> split_functional_i(const Profile1D& psi, const WeightParams& p, double a,
                                             const QuadratureConfig& q = {});

/// J(u) = (1/|B|) int_B exp(alpha |u|^{2 gamma}) dx = 2 int_0^1 exp(...) r dr,
/// by Gauss quadrature in r on geometrically subdivided cells.
double functional_j(const RadialFunction& u, const WeightParams& p, const QuadratureConfig& q = {});

/// int_B |grad u|^2 |log|x||^beta dx = 2 pi int_0^1 u'(r)^2 |log r|^beta r dr.
double weighted_dirichlet_2d(const RadialFunction& u, const WeightParams& p);

struct TmaxChoice {
  double t_max = 0.0;
  bool certified = false;
};

/// Smallest T with exp((Gamma^gamma - 1) T) / (1 - Gamma^gamma) <= tail_tolerance,
/// from psi^{2 gamma}(t) <= Gamma^gamma t. Returns the cap, uncertified, when
/// Gamma >= 1 or the cap binds.
TmaxChoice choose_tmax(double psi_energy, const WeightParams& p, const QuadratureConfig& q = {});

}  // namespace wmt
