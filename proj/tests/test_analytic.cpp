#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "wmt/analytic.hpp"
#include "wmt/error.hpp"
#include "wmt/functional.hpp"

using namespace wmt;

// Values produced by the oracles in oracles.hpp (and cross-checked with a
// 50-digit mpmath evaluation), frozen so regressions show up as exact diffs.
namespace frozen {
constexpr double kWitness = 3.79444084228458;
constexpr double kMoser1 = 1.848872767004;
constexpr double kMoser10 = 3.562921404435;
constexpr double kMoser100 = 3.042681488486;
constexpr double kMoser1e4 = 3.000400240240;
constexpr double kCcTotal03 = 1.0042902;
constexpr double kCcTotal07 = 1.0045904;
}  // namespace frozen

TEST_SUITE("analytic") {
  TEST_CASE("oracles reproduce the frozen values") {
    CHECK(oracle::witness_value_series() == doctest::Approx(frozen::kWitness).epsilon(1e-13));
    CHECK(oracle::moser_closed_form(1.0) == doctest::Approx(frozen::kMoser1).epsilon(1e-11));
    CHECK(oracle::moser_closed_form(10.0) == doctest::Approx(frozen::kMoser10).epsilon(1e-11));
    CHECK(oracle::moser_closed_form(100.0) == doctest::Approx(frozen::kMoser100).epsilon(1e-11));
    CHECK(oracle::moser_closed_form(1e4) == doctest::Approx(frozen::kMoser1e4).epsilon(1e-11));
    CHECK(0.5 + oracle::cc_i2(0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::pow(2.0, -0.7) + oracle::cc_i2(0.3) == doctest::Approx(frozen::kCcTotal03).epsilon(1e-7));
  }

  TEST_CASE("moser_value against the oracles") {
    CHECK(moser_value(1.0) == doctest::Approx(frozen::kMoser1).epsilon(1e-12));
    CHECK(moser_value(10.0) == doctest::Approx(frozen::kMoser10).epsilon(1e-12));
    CHECK(moser_value(100.0) == doctest::Approx(frozen::kMoser100).epsilon(1e-12));
    CHECK(moser_value(1e4) == doctest::Approx(frozen::kMoser1e4).epsilon(1e-12));
    for (double k : {3.0, 47.0, 512.0, 2e3}) CHECK(moser_value(k) == doctest::Approx(oracle::moser_closed_form(k)).epsilon(1e-12));
    CHECK_THROWS_AS(moser_value(0.5), DomainError);
  }

  TEST_CASE("moser_value follows the endpoint expansion for large k") {
    for (double k : {1e3, 1e4, 1e5}) {
      CAPTURE(k);
      CHECK(std::abs(moser_value(k) - oracle::moser_laplace(k)) < 5000.0 / std::pow(k, 4.0) + 1e-12);
    }
    CHECK(std::abs(moser_value(1e4) - 3.0) <= 0.05);
  }

  TEST_CASE("moser_value stays above 1 + 1/e") {
    for (int k = 1; k <= 1000; ++k) CHECK(moser_value(k) > 1.0 + 1.0 / std::numbers::e);
  }

  TEST_CASE("Moser profiles have unit energy and reproduce the closed form") {
    for (double b : {0.0, 0.3, 0.7}) {
      const auto p = make_weight_params(b);
      for (double k : {1.0, 10.0, 100.0}) {
        CAPTURE(b);
        CAPTURE(k);
        const auto psi = moser_profile(k, p);
        const auto r = functional_i(psi, p);
        CHECK(std::abs(r.gamma_value - 1.0) <= 1e-6);
        CHECK(std::abs(r.i_value - moser_value(k)) <= 1e-6);
        CHECK(psi.eval(k) == doctest::Approx(std::pow(k, (1.0 - b) / 2.0)).epsilon(1e-14));
        CHECK(moser_psi(k, p, k / 4) == doctest::Approx(std::pow(k / 4 / std::sqrt(k), 1.0 - b)));
      }
    }
    CHECK_THROWS_AS(moser_profile(0.9, make_weight_params(0.0)), DomainError);
  }

  TEST_CASE("witness profile shape") {
    CHECK(carleson_chang_value(0.0) == 0.0);
    CHECK(carleson_chang_value(1.0) == 0.5);
    CHECK(carleson_chang_value(2.0) == 1.0);
    CHECK(carleson_chang_value(5.0) == doctest::Approx(2.0));
    CHECK(carleson_chang_value(kCcSecondBreak) == doctest::Approx(std::numbers::e));
    CHECK(carleson_chang_value(100.0) == doctest::Approx(std::numbers::e));
    CHECK(kCcSecondBreak == doctest::Approx(std::exp(2.0) + 1.0).epsilon(1e-16));
    const auto p = make_weight_params(0.4);
    const auto phi = cc_phi(p);
    CHECK(phi.eval(5.0) == doctest::Approx(std::pow(2.0, 0.6)).epsilon(1e-8));
    CHECK(phi.last_value() == doctest::Approx(std::pow(std::numbers::e, 0.6)).epsilon(1e-14));
  }

  TEST_CASE("witness energy split") {
    // Past beta ~ 0.85 linear cells cannot follow t^{1-beta} at t -> 0 and the
    // sampled energy drifts above the exact split.
    for (double b = 0.0; b < 0.86; b += 0.07) {
      CAPTURE(b);
      const auto p = make_weight_params(b);
      const auto n = cc_weighted_norm(p);
      CHECK(n.i1 == doctest::Approx(std::pow(2.0, b - 1.0)).epsilon(1e-14));
      CHECK(n.i2 == doctest::Approx(oracle::cc_i2(b)).epsilon(1e-10));
      CHECK(n.total == doctest::Approx(n.i1 + n.i2).epsilon(1e-15));
      // The sampled profile carries the same energy.
      CHECK(gamma_energy(cc_phi(p), p) == doctest::Approx(n.total).epsilon(1e-6));
    }
    CHECK(std::abs(cc_weighted_norm(make_weight_params(0.0)).total - 1.0) <= 1e-12);
  }

  TEST_CASE("witness energy exceeds one for positive beta") {
    // (m + 1)^beta m^{-1-beta} = ((m + 1)/m)^beta / m grows with beta, and so
    // does the split total; the witness is only feasible after rescaling.
    CHECK(cc_weighted_norm(make_weight_params(0.3)).total == doctest::Approx(frozen::kCcTotal03).epsilon(1e-7));
    CHECK(cc_weighted_norm(make_weight_params(0.7)).total == doctest::Approx(frozen::kCcTotal07).epsilon(1e-7));
    for (double b : {0.01, 0.2, 0.5, 0.9, 0.99}) CHECK(cc_weighted_norm(make_weight_params(b)).total > 1.0);
  }

  TEST_CASE("witness margin over 1 + e") {
    for (double b : {0.0, 0.2, 0.4, 0.6, 0.8}) {
      const auto p = make_weight_params(b);
      const double m = witness_margin(p);
      CHECK(m >= 0.07);
      CHECK(m == doctest::Approx(frozen::kWitness - 1.0 - std::numbers::e).epsilon(1e-6));
    }
  }
}
