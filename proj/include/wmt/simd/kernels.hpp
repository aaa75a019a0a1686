#pragma once

// Data-parallel inner loops of the reduced functional. Every kernel has a
// scalar reference implementation and, on x86-64, an AVX2/FMA variant; the
// variant is chosen once at runtime (CPU detection, overridable through the
// WMT_SIMD environment variable or force_isa()).
//
// All kernels work on Gauss-point arrays of equal length: profile values
// psi, abscissae t and weights w. The exponent is p = 2 gamma >= 2 and the
// power is taken on |psi|, so the integrand is even in psi.

#include <span>
#include <string_view>

namespace wmt::simd {

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);
Isa active_isa();
/// Throws std::runtime_error when the ISA is not available on this CPU/build.
void force_isa(Isa isa);

/// sum_q w_q exp(|psi_q|^p - t_q).
/// If `terms` is non-empty it receives w_q exp(|psi_q|^p - t_q).
/// If `slopes` is non-empty it receives w_q p |psi_q|^{p-1} sgn(psi_q) exp(|psi_q|^p - t_q).
double exp_power_sum(std::span<const double> psi, std::span<const double> t,
                     std::span<const double> w, double p, std::span<double> terms,
                     std::span<double> slopes);

/// sum_q w_q exp(|psi_q|^p - t_q) expm1(|psi_q + delta_q|^p - |psi_q|^p),
/// i.e. the change of the sum above when psi moves by delta, evaluated
/// without cancellation.
double exp_power_increment(std::span<const double> psi, std::span<const double> delta,
                           std::span<const double> t, std::span<const double> w, double p);

/// Explicit entry points, used by the equivalence tests.
namespace scalar {
double exp_power_sum(std::span<const double> psi, std::span<const double> t,
                     std::span<const double> w, double p, std::span<double> terms,
                     std::span<double> slopes);
double exp_power_increment(std::span<const double> psi, std::span<const double> delta,
                           std::span<const double> t, std::span<const double> w, double p);
}  // namespace scalar

namespace avx2 {
double exp_power_sum(std::span<const double> psi, std::span<const double> t,
                     std::span<const double> w, double p, std::span<double> terms,
                     std::span<double> slopes);
double exp_power_increment(std::span<const double> psi, std::span<const double> delta,
                           std::span<const double> t, std::span<const double> w, double p);
}  // namespace avx2

}  // namespace wmt::simd
