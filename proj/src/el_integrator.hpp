#pragma once

// Stiff integration of the reduced Euler-Lagrange system. Kept free of
// C++20 library features: this file is shared with el_integrator.cpp, which
// is built as C++17 because the uBLAS shipped with Boost 1.74 (required by
// odeint's Rosenbrock stepper) still calls std::allocator::construct.

#include <array>
#include <vector>

namespace wmt::detail {

struct ReducedSystem {
  double beta;
  double gamma;
  double lambda;
};

struct IntegratorRun {
  bool ok = false;
  /// (psi, flux, Gamma, I) at the final time.
  std::array<double, 4> end{};
  /// psi and flux at each requested time, when times were given.
  std::vector<double> psi;
  std::vector<double> flux;
};

/// Integrates (psi, F, G, I) from `start` at t0 to t1. With a non-empty
/// `times` (sorted, times[0] == t0, last == t1) psi and flux are recorded
/// there. ok = false if the exponent exceeds the overflow guard.
IntegratorRun integrate_reduced(const ReducedSystem& sys, const std::array<double, 4>& start, double t0,
                                double t1, double rtol, double atol, const std::vector<double>& times);

}  // namespace wmt::detail
