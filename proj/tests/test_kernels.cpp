#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "wmt/simd/kernels.hpp"

using namespace wmt;

namespace {

struct Batch {
  std::vector<double> psi, delta, t, w;
};

Batch make_batch(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Batch b;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 60.0 * u(rng);
    // Keep |psi|^p - t in a range where exp neither overflows nor is
    // entirely negligible, and include negative psi.
    const double psi = (u(rng) < 0.2 ? -1.0 : 1.0) * std::pow(t * (0.2 + u(rng)), 1.0 / p);
    b.t.push_back(t);
    b.psi.push_back(psi);
    b.delta.push_back(1e-3 * (u(rng) - 0.5) * (i % 7 == 0 ? 1e-9 : 1.0));
    b.w.push_back(u(rng));
  }
  return b;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("scalar kernel matches a direct loop") {
    for (double p : {2.0, 2.0 / 0.7, 5.0}) {
      const auto b = make_batch(101, p, 11);
      double direct = 0.0;
      for (std::size_t i = 0; i < b.t.size(); ++i) direct += b.w[i] * std::exp(std::pow(std::abs(b.psi[i]), p) - b.t[i]);
      std::vector<double> terms(b.t.size()), slopes(b.t.size());
      const double s = simd::scalar::exp_power_sum(b.psi, b.t, b.w, p, terms, slopes);
      CHECK(rel(s, direct) < 1e-13);
      const std::size_t i = 17;
      const double a = std::abs(b.psi[i]);
      const double expect_slope = b.w[i] * p * std::pow(a, p - 1) * (b.psi[i] < 0 ? -1.0 : 1.0) *
                                  std::exp(std::pow(a, p) - b.t[i]);
      CHECK(rel(slopes[i], expect_slope) < 1e-13);
    }
  }

  TEST_CASE("increment equals the difference of sums") {
    const double p = 2.0 / 0.6;
    const auto b = make_batch(64, p, 5);
    std::vector<double> moved(b.psi);
    for (std::size_t i = 0; i < moved.size(); ++i) moved[i] += b.delta[i];
    const double before = simd::scalar::exp_power_sum(b.psi, b.t, b.w, p, {}, {});
    const double after = simd::scalar::exp_power_sum(moved, b.t, b.w, p, {}, {});
    const double inc = simd::scalar::exp_power_increment(b.psi, b.delta, b.t, b.w, p);
    CHECK(std::abs(inc - (after - before)) < 1e-12 * std::abs(before));
    // The increment stays accurate where the difference cancels.
    const std::vector<double> tiny(b.psi.size(), 1e-14);
    const double inc_tiny = simd::scalar::exp_power_increment(b.psi, tiny, b.t, b.w, p);
    std::vector<double> slopes(b.psi.size());
    simd::scalar::exp_power_sum(b.psi, b.t, b.w, p, {}, slopes);
    double lin = 0.0;
    for (double s : slopes) lin += s * 1e-14;
    CHECK(rel(inc_tiny, lin) < 1e-6);
  }

  TEST_CASE("avx2 variant is equivalent to the scalar reference") {
    if (!simd::isa_available(simd::Isa::kAvx2)) {
      MESSAGE("AVX2 kernels unavailable on this machine or build; equivalence not exercised");
      CHECK_THROWS(simd::force_isa(simd::Isa::kAvx2));
      return;
    }
    for (double p : {2.0, 2.0 / 0.7, 2.5, 20.0}) {
      CAPTURE(p);
      // Lengths that are not multiples of the vector width exercise the remainders.
      for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 1001u}) {
        CAPTURE(n);
        const auto b = make_batch(n, p, 100 + n);
        std::vector<double> ts(n), ss(n), tv(n), sv(n);
        const double s = simd::scalar::exp_power_sum(b.psi, b.t, b.w, p, ts, ss);
        const double v = simd::avx2::exp_power_sum(b.psi, b.t, b.w, p, tv, sv);
        CHECK(rel(v, s) < 1e-13);
        for (std::size_t i = 0; i < n; ++i) {
          CHECK(rel(tv[i], ts[i]) < 1e-13);
          CHECK(rel(sv[i], ss[i]) < 1e-13);
        }
        const double is = simd::scalar::exp_power_increment(b.psi, b.delta, b.t, b.w, p);
        const double iv = simd::avx2::exp_power_increment(b.psi, b.delta, b.t, b.w, p);
        CHECK(std::abs(iv - is) <= 1e-12 * std::abs(is) + 1e-300);
      }
    }
  }

  TEST_CASE("dispatch can be forced") {
    const auto before = simd::active_isa();
    simd::force_isa(simd::Isa::kScalar);
    CHECK(simd::active_isa() == simd::Isa::kScalar);
    CHECK(simd::isa_name(simd::Isa::kScalar) == "scalar");
    simd::force_isa(before);
    CHECK(simd::active_isa() == before);
  }
}
