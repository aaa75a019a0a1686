#pragma once

#include <cstddef>

#include "wmt/core.hpp"
#include "wmt/profile.hpp"

namespace wmt {

/// Sampling resolution for the closed-form families. The singular segment
/// next to t = 0 uses power grading; smooth segments are uniform.
struct GridSpec {
  std::size_t cells = 8192;
  /// Grading of the singular segment; 0 selects clamp(4 gamma, 10, 40), since
  /// t^{1-beta} needs ever smaller first cells as beta grows.
  double grading = 0.0;
  std::size_t plateau_cells = 16384;
  /// Length of the constant stretch kept after the last breakpoint.
  double tail_length = 40.0;
  std::size_t tail_cells = 64;
};

/// psi_k(t) = (t / sqrt k)^{1 - beta} on [0, k], k^{(1-beta)/2} beyond.
double moser_psi(double k, const WeightParams& p, double t);

/// Samples psi_k on a grid with t = k as a node. Requires k >= 1. Linear
/// cells overshoot the energy of t^{1-beta}: Gamma - 1 is about 1e-8 at
/// beta = 0.3 and 5e-7 at beta = 0.8.
Profile1D moser_profile(double k, const WeightParams& p, const GridSpec& spec = {});

/// 1 + k int_0^1 exp(k (t^2 - t)) dt. Requires k >= 1.
double moser_value(double k);

/// Piecewise f: t/2 on [0, 2], sqrt(t - 1) on [2, e^2 + 1], e beyond.
double carleson_chang_value(double t);
inline constexpr double kCcFirstBreak = 2.0;
/// e^2 + 1.
inline constexpr double kCcSecondBreak = 8.3890560989306504;

Profile1D carleson_chang_f(const GridSpec& spec = {});

/// phi = f^{1 - beta}.
Profile1D cc_phi(const WeightParams& p, const GridSpec& spec = {});

struct CcNorm {
  double i1 = 0.0;
  double i2 = 0.0;
  double total = 0.0;
};

/// Energy of phi split at t = 2: i1 = 2^{beta - 1} and
/// i2 = (1 - beta)/4 int_1^{e^2} (m + 1)^beta m^{-1-beta} dm.
CcNorm cc_weighted_norm(const WeightParams& p);

/// e + 2 e^{-1} int_0^1 e^{s^2} ds, the beta-free reduced value of phi.
double cc_reference_value();

/// functional_i(cc_phi(p)) - (1 + e).
double witness_margin(const WeightParams& p, const GridSpec& spec = {});

}  // namespace wmt
