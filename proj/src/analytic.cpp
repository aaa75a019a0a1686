#include "wmt/analytic.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "wmt/error.hpp"
#include "wmt/functional.hpp"

namespace wmt {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;

constexpr double kE = std::numbers::e;

double kronrod(auto&& f, double a, double b) {
  return Kronrod::integrate(f, a, b, 4, 1e-14);
}

Profile1D sample(std::vector<double> grid, auto&& f) {
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = f(grid[i]);
  values[0] = 0.0;
  return Profile1D(std::move(grid), std::move(values));
}

double singular_grading(const GridSpec& spec, double gamma) {
  return spec.grading > 0.0 ? spec.grading : std::clamp(4.0 * gamma, 10.0, 40.0);
}

std::vector<double> cc_grid(const GridSpec& spec, double gamma) {
  const std::array<GridSegment, 3> segments{
      GridSegment{kCcFirstBreak, spec.cells, singular_grading(spec, gamma)},
      GridSegment{kCcSecondBreak, spec.plateau_cells, 1.0},
      GridSegment{kCcSecondBreak + spec.tail_length, spec.tail_cells, 1.0},
  };
  return make_segmented_grid(segments);
}

}  // namespace

double moser_psi(double k, const WeightParams& p, double t) {
  if (!(k >= 1.0)) throw DomainError("moser_psi: k must be >= 1");
  if (!(t >= 0.0)) throw DomainError("moser_psi: t must be >= 0");
  const double exponent = 1.0 - p.beta;
  if (t >= k) return std::pow(k, 0.5 * exponent);
  return std::pow(t / std::sqrt(k), exponent);
}

Profile1D moser_profile(double k, const WeightParams& p, const GridSpec& spec) {
  if (!(k >= 1.0)) throw DomainError("moser_profile: k must be >= 1");
  // The integrand exp(t^2/k - t) peaks at both ends of [0, k], each on a
  // unit scale, so the second half is uniform instead of graded.
  const std::array<GridSegment, 3> segments{
      GridSegment{0.5 * k, spec.cells, singular_grading(spec, p.gamma)},
      GridSegment{k, spec.cells / 2, 1.0},
      GridSegment{k + spec.tail_length, spec.tail_cells, 1.0},
  };
  return sample(make_segmented_grid(segments), [&](double t) { return moser_psi(k, p, t); });
}

double moser_value(double k) {
  if (!(k >= 1.0)) throw DomainError("moser_value: k must be >= 1");
  // t^2 - t is symmetric about 1/2; with v the distance to the nearer end,
  // k int_0^1 = 2k int_0^{1/2} exp(k (v^2 - v)) dv, mass within O(1/k) of 0.
  auto f = [k](double v) { return std::exp(k * (v * v - v)); };
  double sum = 0.0;
  double a = 0.0;
  double b = std::min(0.5, 1.0 / k);
  while (a < 0.5) {
    sum += kronrod(f, a, b);
    a = b;
    b = std::min(0.5, 2.0 * b);
  }
  return 1.0 + 2.0 * k * sum;
}

double carleson_chang_value(double t) {
  if (!(t >= 0.0)) throw DomainError("carleson_chang_value: t must be >= 0");
  if (t <= kCcFirstBreak) return 0.5 * t;
  if (t <= kCcSecondBreak) return std::sqrt(t - 1.0);
  return kE;
}

Profile1D carleson_chang_f(const GridSpec& spec) {
  return sample(cc_grid(spec, 1.0), [](double t) { return carleson_chang_value(t); });
}

Profile1D cc_phi(const WeightParams& p, const GridSpec& spec) {
  const double exponent = 1.0 - p.beta;
  return sample(cc_grid(spec, p.gamma), [&](double t) {
    const double f = carleson_chang_value(t);
    return p.beta == 0.0 ? f : std::pow(f, exponent);
  });
}

CcNorm cc_weighted_norm(const WeightParams& p) {
  CcNorm out;
  out.i1 = std::pow(2.0, p.beta - 1.0);
  const double b = p.beta;
  auto f = [b](double m) { return std::pow(m + 1.0, b) * std::pow(m, -1.0 - b); };
  out.i2 = (1.0 - b) / 4.0 * kronrod(f, 1.0, kE * kE);
  out.total = out.i1 + out.i2;
  return out;
}

double cc_reference_value() {
  auto f = [](double s) { return std::exp(s * s); };
  return kE + 2.0 / kE * kronrod(f, 0.0, 1.0);
}

double witness_margin(const WeightParams& p, const GridSpec& spec) {
  return functional_i(cc_phi(p, spec), p).i_value - (1.0 + kE);
}

}  // namespace wmt
