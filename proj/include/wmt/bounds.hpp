#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wmt/core.hpp"
#include "wmt/functional.hpp"
#include "wmt/profile.hpp"

namespace wmt {

struct HolderGrowth {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// lhs = psi(t) - psi(A), rhs = sqrt(Gamma on [A, t]) sqrt(t^{1-beta} - A^{1-beta}).
/// Requires 0 <= A <= t.
HolderGrowth holder_growth(const Profile1D& psi, const WeightParams& p, double a, double t);

/// e^{c^2 delta / 4 + 1}; c > 0, delta > 0.
double cc_tail_bound(double c, double delta);

/// e^{1-a} / (1 - gamma delta) * exp(P + gamma P delta / (1 - gamma delta)),
/// P = phi_at_a^{2 gamma}. Throws PreconditionViolation when gamma delta >= 1.
double weighted_tail_bound(double phi_at_a, double delta, double a, const WeightParams& p);

struct CrossingScan {
  std::optional<double> a;
  /// No sign change, but max g came within 1e-6 of zero.
  bool tangency_suspected = false;
  double max_g = 0.0;
};

/// First root of g(t) = |psi|^{2 gamma}(t) - t + 2 log t on [1, T_max]:
/// scan with step 1e-2, then bisection to |g| <= 1e-10. Returns a = 1 when
/// g(1) >= 0 already (only possible for Gamma > 1).
CrossingScan scan_crossing(const Profile1D& psi, const WeightParams& p);
std::optional<double> crossing_point(const Profile1D& psi, const WeightParams& p);

struct ConcentrationDiagnostics {
  std::optional<double> crossing_a;
  std::optional<double> tail_energy_delta;
  /// (P - a) + gamma delta P / (1 - gamma delta), P = psi^{2 gamma}(a);
  /// present only when gamma delta < 1.
  std::optional<double> k_quantity;
  double head_integral = 0.0;
  double tail_integral = 0.0;
  std::optional<double> tail_bound;
  std::optional<double> gamma_m;
  /// 1 - (1 - 2 log a / a)^{1/gamma}; present when Gamma <= 1 + kWqSlack
  /// (or the feasibility tolerance, if larger).
  std::optional<double> wq_bound;
  std::optional<bool> wq_holds;
  bool tangency_suspected = false;
};

/// Slack used for the wq flag. The Moser family attains equality.
inline constexpr double kWqSlack = 1e-6;

ConcentrationDiagnostics diagnose(const Profile1D& psi, const WeightParams& p, const QuadratureConfig& q = {});

struct EnvelopeTerms {
  double term_log = 0.0;
  double term_linear = 0.0;
};

/// With y = 2 log x / x:
///   term_linear = -2 log x + gamma x (1 - (1 - y)^{1/gamma}),
///   term_log    = log x (1 - (1 - y)^{1/gamma}).
/// DomainError unless 1 - y > 0; callers are expected to pass x > e.
EnvelopeTerms km_envelope(double x, const WeightParams& p);

/// 1 + e.
double concentration_level_cap();

/// Smallest scan point y0 on [0, 1/(mu - g)] past which
/// (1 + g y)^p <= 1 + mu^p y^p holds at every later scan point. Beyond
/// 1/(mu - g) the inequality holds since mu y >= 1 + g y.
/// Requires mu > g > 0, p > 1.
double growth_inequality_threshold(double mu, double g, double p);
bool growth_inequality_holds(double y, double mu, double g, double p);

/// Largest scan point x0 in (0, 1] such that (1 - x)^mu >= 1 - (mu + 1) x on (0, x0].
/// Requires mu > 0.
double power_inequality_threshold(double mu);
bool power_inequality_holds(double x, double mu);

/// int_a^inf e^{c phi(t) - t} dt for piecewise-linear phi with constant
/// tail, exact per cell.
double exp_linear_tail(const Profile1D& phi, double c, double a);

struct RandomProfileOptions {
  std::size_t cells = 256;
  double grading = 2.0;
  double t_max_min = 20.0;
  double t_max_max = 120.0;
  /// Target energy of the result (Gamma for the given beta).
  double energy = 1.0;
  bool nonneg = true;
};

/// Pseudo-random profile from one of several shape families (random walk,
/// ramps, perturbed Moser), scaled to the requested energy.
Profile1D random_profile(std::uint64_t seed, const WeightParams& p, const RandomProfileOptions& opt = {});

struct SuiteResult {
  std::string name;
  std::size_t trials = 0;
  std::size_t violations = 0;
  /// max over trials of observed / bound (or lhs / rhs).
  double worst_ratio = 0.0;
};

/// Randomized checks of the growth inequality, both tail bounds, the wq
/// energy bound and both elementary inequalities. Trial i of suite s draws
/// from seed_seq{seed, s, i}, so results do not depend on thread count.
std::vector<SuiteResult> run_bound_suites(std::size_t trials, std::uint64_t seed);

}  // namespace wmt
