#include <cmath>

#include "wmt/simd/kernels.hpp"

namespace wmt::simd::scalar {

namespace {

double abs_pow(double a, double p) { return a == 0.0 ? 0.0 : std::pow(a, p); }

}  // namespace

double exp_power_sum(std::span<const double> psi, std::span<const double> t,
                     std::span<const double> w, double p, std::span<double> terms,
                     std::span<double> slopes) {
  const bool want_terms = !terms.empty();
  const bool want_slopes = !slopes.empty();
  double sum = 0.0;
  for (std::size_t q = 0; q < psi.size(); ++q) {
    const double a = std::abs(psi[q]);
    const double power = abs_pow(a, p);
    const double term = w[q] * std::exp(power - t[q]);
    sum += term;
    if (want_terms) terms[q] = term;
    if (want_slopes) {
      const double d = a == 0.0 ? 0.0 : p * (power / a) * term;
      slopes[q] = std::signbit(psi[q]) ? -d : d;
    }
  }
  return sum;
}

double exp_power_increment(std::span<const double> psi, std::span<const double> delta,
                           std::span<const double> t, std::span<const double> w, double p) {
  double sum = 0.0;
  for (std::size_t q = 0; q < psi.size(); ++q) {
    const double a = std::abs(psi[q]);
    const double power = abs_pow(a, p);
    const double ratio = psi[q] == 0.0 ? 0.0 : delta[q] / psi[q];
    double dpower;
    if (psi[q] != 0.0 && ratio > -0.5) {
      dpower = power * std::expm1(p * std::log1p(ratio));
    } else {
      dpower = abs_pow(std::abs(psi[q] + delta[q]), p) - power;
    }
    sum += w[q] * std::exp(power - t[q]) * std::expm1(dpower);
  }
  return sum;
}

}  // namespace wmt::simd::scalar
