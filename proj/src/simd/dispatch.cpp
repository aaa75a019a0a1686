#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "wmt/simd/kernels.hpp"

namespace wmt::simd {

namespace {

bool cpu_has_avx2_fma() {
#if defined(WMT_HAVE_AVX2_KERNELS) && (defined(__x86_64__) || defined(_M_X64))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa detect() {
  const bool avx2 = cpu_has_avx2_fma();
  if (const char* env = std::getenv("WMT_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Isa::kScalar;
    if (v == "avx2" && avx2) return Isa::kAvx2;
  }
  return avx2 ? Isa::kAvx2 : Isa::kScalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) { return isa == Isa::kScalar || cpu_has_avx2_fma(); }

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw std::runtime_error("SIMD variant '" + std::string(isa_name(isa)) + "' is not available");
  }
  current().store(isa, std::memory_order_relaxed);
}

double exp_power_sum(std::span<const double> psi, std::span<const double> t,
                     std::span<const double> w, double p, std::span<double> terms,
                     std::span<double> slopes) {
#if defined(WMT_HAVE_AVX2_KERNELS)
  if (active_isa() == Isa::kAvx2) return avx2::exp_power_sum(psi, t, w, p, terms, slopes);
#endif
  return scalar::exp_power_sum(psi, t, w, p, terms, slopes);
}

double exp_power_increment(std::span<const double> psi, std::span<const double> delta,
                           std::span<const double> t, std::span<const double> w, double p) {
#if defined(WMT_HAVE_AVX2_KERNELS)
  if (active_isa() == Isa::kAvx2) return avx2::exp_power_increment(psi, delta, t, w, p);
#endif
  return scalar::exp_power_increment(psi, delta, t, w, p);
}

#if !defined(WMT_HAVE_AVX2_KERNELS)
namespace avx2 {
double exp_power_sum(std::span<const double> psi, std::span<const double> t,
                     std::span<const double> w, double p, std::span<double> terms,
                     std::span<double> slopes) {
  return scalar::exp_power_sum(psi, t, w, p, terms, slopes);
}
double exp_power_increment(std::span<const double> psi, std::span<const double> delta,
                           std::span<const double> t, std::span<const double> w, double p) {
  return scalar::exp_power_increment(psi, delta, t, w, p);
}
}  // namespace avx2
#endif

}  // namespace wmt::simd
