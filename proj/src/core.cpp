#include "wmt/core.hpp"

#include <cmath>
#include <string>

#include "wmt/error.hpp"

namespace wmt {

WeightParams make_weight_params(double beta) {
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw DomainError("beta must lie in [0, 1), got " + std::to_string(beta));
  }
  WeightParams p;
  p.beta = beta;
  p.gamma = 1.0 / (1.0 - beta);
  // Work with log alpha: alpha underflows toward 0 quickly as beta -> 1.
  const double log_alpha = std::log(2.0) + p.gamma * std::log(2.0 * std::numbers::pi * (1.0 - beta));
  p.alpha_beta = std::exp(log_alpha);
  p.reduced_scale = std::exp(log_alpha / (2.0 * p.gamma));
  if (beta == 0.0) {
    p.gamma = 1.0;
    p.alpha_beta = 4.0 * std::numbers::pi;
    p.reduced_scale = std::sqrt(4.0 * std::numbers::pi);
  }
  return p;
}

Profile1D to_reduced(const RadialFunction& u, const WeightParams& p) {
  const auto radii = u.radii();
  const auto values = u.values();
  if (std::abs(values.front()) > 1e-12) {
    throw DomainError("to_reduced: u(1) must vanish");
  }
  std::vector<double> grid(radii.size());
  std::vector<double> psi(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    grid[i] = -2.0 * std::log(radii[i]);
    psi[i] = p.reduced_scale * values[i];
  }
  grid.front() = 0.0;
  psi.front() = 0.0;
  return Profile1D(std::move(grid), std::move(psi));
}

RadialFunction from_reduced(const Profile1D& psi, const WeightParams& p) {
  const auto grid = psi.grid();
  const auto values = psi.values();
  std::vector<double> radii{1.0};
  std::vector<double> u{0.0};
  radii.reserve(grid.size());
  u.reserve(grid.size());
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double r = std::exp(-0.5 * grid[i]);
    // Nodes with t below the spacing of doubles at r = 1 share a radius.
    if (!(r < radii.back())) continue;
    radii.push_back(r);
    u.push_back(values[i] / p.reduced_scale);
  }
  if (radii.size() < 2) throw DegenerateInput("from_reduced: grid collapses onto r = 1");
  return RadialFunction(std::move(radii), std::move(u));
}

}  // namespace wmt
