#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wmt/core.hpp"
#include "wmt/functional.hpp"
#include "wmt/profile.hpp"

namespace wmt {

struct OptimizerConfig {
  /// Optimization grid: make_graded_grid(t_max, cells, grading).
  std::size_t cells = 2048;
  /// 0 selects auto_grading(beta).
  double grading = 0.0;
  /// 0 selects choose_tmax(1, ...), which lands on the quadrature cap.
  double t_max = 0.0;
  QuadratureConfig quadrature;
  double step_init = 1.0;
  double backtrack_factor = 0.5;
  /// Sufficient-increase coefficient of the Armijo test.
  double armijo = 1e-4;
  /// Bound on the relative stationarity residual.
  double grad_tolerance = 1e-6;
  /// The line search gives up below this step.
  double min_step = 1e-10;
  std::size_t max_iters = 20000;
  /// Perturbed Moser starts used by the multi-start driver, on top of cc_phi.
  std::size_t restarts = 2;
  bool nonneg = true;
  std::uint64_t seed = 0;
};

struct OptimizationResult {
  Profile1D profile;
  double i_value = 0.0;
  double gamma_value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  /// |P grad I|_K / |grad I|_K, with K the Gamma metric and P the projection
  /// onto the tangent space of {Gamma = 1}: the sine of the angle between the
  /// Riemannian gradient and the normal direction.
  double stationarity_residual = 0.0;
  /// |P grad I|_K, unnormalized.
  double tangent_gradient_norm = 0.0;
  /// lambda in grad I = lambda grad Gamma at the final iterate.
  double multiplier = 0.0;
  /// I at the start and after every accepted step.
  std::vector<double> ascent_trace;
  std::string stop_reason;
};

/// min(4 / (1 - beta), 40). Near t = 0 maximizers behave like t^{1-beta},
/// so the first cells must shrink faster as beta grows; the cap keeps t_1
/// above the underflow range at N = 2048.
double auto_grading(const WeightParams& p);

std::vector<double> optimizer_grid(const OptimizerConfig& cfg, const WeightParams& p);

/// dI/dpsi_j of the discretized functional for the interior nodes
/// j = 1..N (entry j - 1); psi_0 is held at 0.
std::vector<double> discrete_gradient(const Profile1D& psi, const WeightParams& p, const QuadratureConfig& q = {});

/// Clamps negative values to 0 when nonneg is set, then scales to Gamma = 1.
/// Throws DegenerateInput if nothing is left to scale.
Profile1D project_feasible(const Profile1D& psi, const WeightParams& p, bool nonneg = true);

/// Riemannian gradient ascent on {Gamma = 1} with Armijo backtracking.
/// init is resampled onto the optimizer grid and projected first.
OptimizationResult maximize(const WeightParams& p, const OptimizerConfig& cfg, const Profile1D& init);

/// Start profiles for the multi-start driver: cc_phi, then cfg.restarts
/// perturbed Moser profiles drawn from cfg.seed.
std::vector<Profile1D> multistart_inits(const WeightParams& p, const OptimizerConfig& cfg, std::uint64_t stream = 0);

struct MultiStartResult {
  OptimizationResult best;
  std::size_t best_index = 0;
  std::vector<OptimizationResult> runs;
};

/// Runs maximize from every start in parallel. Best: highest i_value, then
/// lowest stationarity residual, then lowest start index.
MultiStartResult maximize_multistart(const WeightParams& p, const OptimizerConfig& cfg, std::uint64_t stream = 0);

struct SweepRow {
  double beta = 0.0;
  double gamma = 0.0;
  double alpha_beta = 0.0;
  double i_max = 0.0;
  double gamma_value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double stationarity_residual = 0.0;
  std::optional<double> crossing_a;
  /// Non-empty when this beta failed; the numeric fields are then NaN.
  std::string error;
};

SweepRow to_sweep_row(const WeightParams& p, const OptimizationResult& r);

/// One multi-start maximization per beta; beta index i uses stream i.
std::vector<SweepRow> beta_sweep(std::span<const double> betas, const OptimizerConfig& cfg);

}  // namespace wmt
