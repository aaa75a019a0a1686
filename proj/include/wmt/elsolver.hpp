#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wmt/core.hpp"
#include "wmt/profile.hpp"

namespace wmt {

struct ShootingConfig {
  /// Multiplier guess.
  double lambda_init = 30.0;
  /// Guess for c in psi ~ c t^{1-beta} / (1 - beta), i.e. flux t^beta psi' -> c.
  double slope_coeff_init = 0.3;
  double t_start = 1e-6;
  /// Relative tolerance of the stiff integrator; the absolute one is 1e-3 of it.
  double integrator_tolerance = 1e-10;
  double t_end = 60.0;
  /// Target for max(|flux(t_end)| / c, |Gamma - 1|).
  double outer_tolerance = 1e-10;
  std::size_t max_outer_iters = 200;
  /// Output profile grid: make_graded_grid(t_end, output_cells, output_grading).
  std::size_t output_cells = 4096;
  double output_grading = 3.0;
};

struct ShootingResult {
  Profile1D profile;
  double lambda = 0.0;
  double slope_coeff = 0.0;
  /// max |el_residual| over the output grid, power-law flux.
  double residual_norm = 0.0;
  /// Gamma and I accumulated along the trajectory (tail included in I).
  double gamma_value = 0.0;
  double i_value = 0.0;
  /// flux(t_end) / c and Gamma - 1 of the best shot.
  double flux_residual = 0.0;
  double energy_residual = 0.0;
  /// Flux t^beta psi' at the output nodes (entry 0 is the limit c).
  std::vector<double> flux;
  std::size_t outer_iterations = 0;
  bool converged = false;
  std::string diagnostic;
};

/// Discrete flux t^beta psi' on a cell.
enum class FluxForm {
  /// Cell average of t^beta times the slope; the form whose centred
  /// difference is the discrete stationarity condition of the optimizer.
  kCellAverage,
  /// (1 - beta) (psi_{i+1} - psi_i) / (t_{i+1}^{1-beta} - t_i^{1-beta}), exact for
  /// the near-origin behaviour c t^{1-beta} / (1 - beta) of smooth solutions.
  kPowerLaw,
};

/// Residual of (t^beta psi')' + (1/lambda) psi^{2 gamma - 1} e^{psi^{2 gamma} - t}
/// at interior nodes 1..N-1 (entry i - 1), by centred differences of the flux
/// across nodes. DomainError if psi_i <= 0 at an interior node or lambda <= 0.
std::vector<double> el_residual(const Profile1D& psi, double lambda, const WeightParams& p,
                                FluxForm form = FluxForm::kCellAverage);

/// Shooting from t_start on (lambda, c) with a Broyden outer solve for
/// flux(t_end) = 0 and Gamma = 1.
ShootingResult shoot(const ShootingConfig& cfg, const WeightParams& p);

/// (lambda, c) read off a constrained maximizer: lambda from the multiplier
/// and c from the first node past t = 1e-3.
ShootingConfig seed_from_profile(const Profile1D& psi, double multiplier, const WeightParams& p,
                                 ShootingConfig base = {});

}  // namespace wmt
