#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "wmt/analytic.hpp"
#include "wmt/bounds.hpp"
#include "wmt/error.hpp"
#include "wmt/functional.hpp"

using namespace wmt;

namespace {

Profile1D random_walk(std::uint64_t seed, std::size_t cells, double t_max, double scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto grid = make_graded_grid(t_max, cells, 2.0);
  std::vector<double> v(grid.size(), 0.0);
  for (std::size_t i = 1; i < v.size(); ++i) v[i] = v[i - 1] + scale * (u(rng) - 0.3) * std::sqrt(grid[i] - grid[i - 1]);
  return Profile1D(grid, v);
}

}  // namespace

TEST_SUITE("functional") {
  TEST_CASE("Gauss-Legendre is exact to degree 2n - 1") {
    for (std::size_t n : {2u, 4u, 8u, 16u}) {
      const auto g = gauss_legendre(n);
      double wsum = 0.0;
      for (double w : g.weights) wsum += w;
      CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
      const int deg = static_cast<int>(2 * n - 2);
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += g.weights[i] * std::pow(g.nodes[i], deg);
      CHECK(s == doctest::Approx(2.0 / (deg + 1)).epsilon(1e-13));
    }
  }

  TEST_CASE("zero profile has I = 1 and no energy") {
    const auto p = make_weight_params(0.5);
    const Profile1D zero(make_graded_grid(30.0, 64, 2.0), std::vector<double>(65, 0.0));
    const auto r = functional_i(zero, p);
    CHECK(r.i_value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.gamma_value == 0.0);
    CHECK(r.feasible);
    CHECK(r.certified);
  }

  TEST_CASE("energy of a linear profile is exact") {
    for (double b : {0.0, 0.3, 0.8}) {
      const auto p = make_weight_params(b);
      const double a = 0.3, T = 7.0;
      const auto grid = make_graded_grid(T, 32, 3.0);
      std::vector<double> v;
      for (double t : grid) v.push_back(a * t);
      const Profile1D psi(grid, v);
      const double exact = a * a * std::pow(T, b + 1.0) / ((b + 1.0) * (1.0 - b));
      CHECK(gamma_energy(psi, p) == doctest::Approx(exact).epsilon(1e-13));
      const auto c = energy_cell_weights(grid, p);
      double s = 0.0;
      for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * std::pow(v[i + 1] - v[i], 2);
      CHECK(s == doctest::Approx(exact).epsilon(1e-13));
      // Oracle: direct integral of a^2 t^b / (1 - b) on [1, 5].
      const double part = oracle::simpson([&](double t) { return a * a * std::pow(t, b) / (1.0 - b); }, 1.0, 5.0);
      CHECK(gamma_energy_between(psi, p, 1.0, 5.0) == doctest::Approx(part).epsilon(1e-11));
    }
  }

  TEST_CASE("energy restricted to pieces adds up") {
    const auto p = make_weight_params(0.4);
    const auto psi = random_walk(9, 128, 50.0, 0.5);
    const double total = gamma_energy(psi, p);
    for (double a : {0.0, 0.37, 3.0, 49.9, 50.0, 80.0}) {
      CAPTURE(a);
      const double s = gamma_energy_between(psi, p, 0.0, a) + gamma_energy_between(psi, p, a, INFINITY);
      CHECK(s == doctest::Approx(total).epsilon(1e-12));
    }
    CHECK_THROWS_AS(gamma_energy_between(psi, p, 2.0, 1.0), DomainError);
  }

  TEST_CASE("I matches an adaptive quadrature oracle") {
    for (double b : {0.0, 0.5}) {
      const auto p = make_weight_params(b);
      RandomProfileOptions o;
      o.cells = 64;
      const auto psi = random_profile(21, p, o);
      const auto grid = psi.grid();
      auto f = [&](double t) { return std::exp(std::pow(std::abs(psi.eval(t)), 2.0 * p.gamma) - t); };
      const double body = oracle::simpson_pieces(f, grid, 1e-13);
      const double tail = std::exp(std::pow(std::abs(psi.last_value()), 2.0 * p.gamma) - psi.t_max());
      const auto r = functional_i(psi, p);
      CHECK(r.i_value == doctest::Approx(body + tail).epsilon(1e-10));
      CHECK(r.truncation_bound >= 0.0);
      CHECK(r.truncation_bound < 1e-6);
    }
  }

  TEST_CASE("I is even in psi") {
    const auto p = make_weight_params(0.2);
    const auto psi = random_walk(4, 64, 30.0, 0.4);
    CHECK(functional_i(psi.scaled(-1.0), p).i_value == doctest::Approx(functional_i(psi, p).i_value).epsilon(1e-15));
  }

  TEST_CASE("witness profile value is independent of beta") {
    const double ref = oracle::witness_value_series();
    CHECK(cc_reference_value() == doctest::Approx(ref).epsilon(1e-15));
    CHECK(oracle::witness_value_quadrature() == doctest::Approx(ref).epsilon(1e-13));
    for (double b : {0.0, 0.25, 0.5, 0.75, 0.8}) {
      const auto p = make_weight_params(b);
      CHECK(std::abs(functional_i(cc_phi(p), p).i_value - ref) < 1e-6);
    }
    const auto p = make_weight_params(0.9);
    CHECK(std::abs(functional_i(cc_phi(p), p).i_value - ref) < 5e-6);
  }

  TEST_CASE("discrete gradient matches finite differences") {
    const auto p = make_weight_params(0.3);
    const auto psi = random_walk(8, 32, 20.0, 0.4);
    const DiscreteFunctional fn(psi.grid(), p);
    std::vector<double> g(psi.nodes());
    const double v = fn.value_and_gradient(psi.values(), g);
    CHECK(v == doctest::Approx(fn.value(psi.values())).epsilon(1e-15));
    const auto fd = oracle::fd_gradient([&](std::span<const double> x) { return fn.value(x); }, psi.values(), 1e-6);
    for (std::size_t i = 1; i < g.size(); ++i) {
      CAPTURE(i);
      CHECK(std::abs(g[i] - fd[i]) <= 1e-7 * std::max(1.0, std::abs(fd[i])));
    }
  }

  TEST_CASE("increment agrees with the difference of values") {
    const auto p = make_weight_params(0.6);
    const auto psi = random_walk(12, 64, 30.0, 0.2);
    const DiscreteFunctional fn(psi.grid(), p);
    std::vector<double> to(psi.values().begin(), psi.values().end());
    for (std::size_t i = 1; i < to.size(); ++i) to[i] += 1e-3 * std::sin(0.1 * static_cast<double>(i));
    const double inc = fn.increment(psi.values(), to);
    CHECK(inc == doctest::Approx(fn.value(to) - fn.value(psi.values())).epsilon(1e-9));
    CHECK(fn.increment(psi.values(), psi.values()) == 0.0);
  }

  TEST_CASE("split at a point sums to the whole") {
    const auto p = make_weight_params(0.3);
    const auto psi = cc_phi(p);
    const double whole = functional_i(psi, p).i_value;
    for (double a : {0.5, 2.0, 3.14159, 20.0, 1000.0}) {
      const auto [head, tail] = split_functional_i(psi, p, a);
      CHECK(head + tail == doctest::Approx(whole).epsilon(1e-12));
      CHECK(head >= 0.0);
      CHECK(tail >= 0.0);
    }
  }

  TEST_CASE("disc functional J equals the reduced I") {
    for (double b : {0.0, 0.4}) {
      const auto p = make_weight_params(b);
      const auto psi = random_walk(31, 64, 40.0, 0.3);
      const auto u = from_reduced(psi, p);
      CHECK(functional_j(u, p) == doctest::Approx(functional_i(psi, p).i_value).epsilon(1e-9));
    }
  }

  TEST_CASE("weighted Dirichlet energy on the disc equals Gamma") {
    for (double b : {0.0, 0.3, 0.7}) {
      CAPTURE(b);
      const auto p = make_weight_params(b);
      const auto psi = random_walk(77, 64, 30.0, 0.5);
      CHECK(weighted_dirichlet_2d(from_reduced(psi, p), p) == doctest::Approx(gamma_energy(psi, p)).epsilon(1e-8));
    }
  }

  TEST_CASE("feasibility and certification flags") {
    const auto p = make_weight_params(0.0);
    const auto psi = moser_profile(4.0, p);
    CHECK(functional_i(psi, p).feasible);
    CHECK_FALSE(functional_i(psi.scaled(1.01), p).feasible);
    // psi_N^2 = 25 > T_max = 10: the constant tail is not small.
    const Profile1D steep({0.0, 10.0}, {0.0, 5.0});
    CHECK_FALSE(functional_i(steep, p).certified);
    QuadratureConfig q;
    q.nodes_per_cell = 1;
    CHECK_THROWS_AS(functional_i(psi, p, q), DomainError);
  }

  TEST_CASE("truncation point bounds the discarded tail") {
    const auto p = make_weight_params(0.3);
    for (double e : {0.2, 0.5, 0.9}) {
      const auto c = choose_tmax(e, p);
      REQUIRE(c.certified);
      const double rate = 1.0 - std::pow(e, p.gamma);
      CHECK(std::exp(-rate * c.t_max) / rate <= 1.0000001e-10);
    }
    CHECK_FALSE(choose_tmax(1.0, p).certified);
    CHECK(choose_tmax(1.0, p).t_max == QuadratureConfig{}.t_max_cap);
    CHECK_THROWS_AS(choose_tmax(-1.0, p), DomainError);
  }
}
