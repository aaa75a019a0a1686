#pragma once

#include <numbers>

#include "wmt/profile.hpp"

namespace wmt {

/// Fixed constants of the weighted problem on the unit disc with weight
/// |log|x||^beta.
struct WeightParams {
  double beta = 0.0;
  /// 1 / (1 - beta).
  double gamma = 1.0;
  /// Critical exponent 2 (2 pi (1 - beta))^{1/(1-beta)}.
  double alpha_beta = 4.0 * std::numbers::pi;
  /// alpha_beta^{1/(2 gamma)}, the factor between u and the reduced profile.
  double reduced_scale = 3.5449077018110318;
};

/// Area of the unit disc.
inline constexpr double kDiscArea = std::numbers::pi;

/// Throws DomainError unless 0 <= beta < 1.
WeightParams make_weight_params(double beta);

/// psi(t) = alpha^{1/(2 gamma)} u(e^{-t/2}) on the nodes t_i = -2 log r_i.
Profile1D to_reduced(const RadialFunction& u, const WeightParams& p);

/// u(r) = alpha^{-1/(2 gamma)} psi(-2 log r) on the nodes r_i = e^{-t_i/2}.
/// Nodes whose radius rounds onto the previous one are dropped.
RadialFunction from_reduced(const Profile1D& psi, const WeightParams& p);

}  // namespace wmt
