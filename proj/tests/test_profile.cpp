#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "wmt/error.hpp"
#include "wmt/profile.hpp"

using namespace wmt;

TEST_SUITE("profile") {
  TEST_CASE("construction enforces the invariants") {
    CHECK_NOTHROW(Profile1D({0.0, 1.0}, {0.0, 2.0}));
    CHECK_THROWS_AS(Profile1D({0.0}, {0.0}), InvalidProfile);
    CHECK_THROWS_AS(Profile1D({0.0, 1.0}, {0.0}), InvalidProfile);
    CHECK_THROWS_AS(Profile1D({0.1, 1.0}, {0.0, 1.0}), InvalidProfile);
    CHECK_THROWS_AS(Profile1D({0.0, 1.0}, {0.5, 1.0}), InvalidProfile);
    CHECK_THROWS_AS(Profile1D({0.0, 1.0, 1.0}, {0.0, 1.0, 2.0}), InvalidProfile);
    CHECK_THROWS_AS(Profile1D({0.0, 2.0, 1.0}, {0.0, 1.0, 2.0}), InvalidProfile);
    CHECK_THROWS_AS(Profile1D({0.0, 1.0}, {0.0, std::nan("")}), InvalidProfile);
    CHECK_THROWS_AS(Profile1D({0.0, INFINITY}, {0.0, 1.0}), InvalidProfile);
  }

  TEST_CASE("evaluation is linear between nodes and constant past the end") {
    const Profile1D psi({0.0, 1.0, 3.0}, {0.0, 2.0, 1.0});
    CHECK(psi.eval(0.0) == 0.0);
    CHECK(psi.eval(0.25) == doctest::Approx(0.5));
    CHECK(psi.eval(2.0) == doctest::Approx(1.5));
    CHECK(psi.eval(3.0) == 1.0);
    CHECK(psi.eval(1e6) == 1.0);
    CHECK_THROWS_AS(psi.eval(-1e-300), DomainError);
    CHECK(psi.derivative_on_cell(1) == doctest::Approx(-0.5));
    CHECK_THROWS_AS(psi.derivative_on_cell(2), std::out_of_range);
    CHECK(psi.locate(0.0) == 0);
    CHECK(psi.locate(1.0) == 1);
    CHECK(psi.locate(3.0) == 1);
  }

  TEST_CASE("with_node keeps the function and adds the node") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> t{0.0}, v{0.0};
    for (int i = 1; i <= 40; ++i) {
      t.push_back(t.back() + 0.1 + u(rng));
      v.push_back(u(rng));
    }
    const Profile1D psi(t, v);
    for (int rep = 0; rep < 50; ++rep) {
      const double at = u(rng) * psi.t_max();
      const auto refined = psi.with_node(at);
      CHECK(refined.nodes() == psi.nodes() + 1);
      for (int k = 0; k < 20; ++k) {
        const double s = u(rng) * (psi.t_max() + 2.0);
        CHECK(refined.eval(s) == doctest::Approx(psi.eval(s)).epsilon(1e-13));
      }
    }
    CHECK(psi.with_node(t[5]).nodes() == psi.nodes());
    CHECK(psi.with_node(psi.t_max() + 1.0).nodes() == psi.nodes());
  }

  TEST_CASE("scaling multiplies the values") {
    const Profile1D psi({0.0, 1.0, 3.0}, {0.0, 2.0, 1.0});
    const auto s = psi.scaled(-0.5);
    CHECK(s.values()[1] == -1.0);
    CHECK(s.grid()[2] == 3.0);
  }

  TEST_CASE("graded grids") {
    const auto g = make_graded_grid(100.0, 64, 3.0);
    REQUIRE(g.size() == 65);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 100.0);
    CHECK(g[32] == doctest::Approx(12.5));
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
    CHECK_THROWS_AS(make_graded_grid(0.0, 64, 2.0), DomainError);
    CHECK_THROWS_AS(make_graded_grid(1.0, 8, 2.0), DomainError);
    CHECK_THROWS_AS(make_graded_grid(1.0, 64, 0.5), DomainError);
  }

  TEST_CASE("segmented grids put every breakpoint on a node") {
    const std::vector<GridSegment> segs{{2.0, 16, 4.0}, {5.0, 10, 1.0}, {9.0, 4, 1.0}};
    const auto g = make_segmented_grid(segs);
    CHECK(g.size() == 31);
    CHECK(g[16] == 2.0);
    CHECK(g[26] == 5.0);
    CHECK(g[27] == doctest::Approx(6.0));
    CHECK(g.back() == 9.0);
    CHECK(g[1] == doctest::Approx(2.0 * std::pow(1.0 / 16.0, 4.0)));
    const std::vector<GridSegment> bad{{2.0, 4, 1.0}, {1.0, 4, 1.0}};
    CHECK_THROWS_AS(make_segmented_grid(bad), DomainError);
  }

  TEST_CASE("radial functions interpolate linearly in log r") {
    const RadialFunction u({1.0, std::exp(-1.0), std::exp(-3.0)}, {0.0, 1.0, 2.0});
    CHECK(u.eval(1.0) == 0.0);
    CHECK(u.eval(std::exp(-0.5)) == doctest::Approx(0.5));
    CHECK(u.eval(std::exp(-2.0)) == doctest::Approx(1.5));
    CHECK(u.eval(0.0) == 2.0);
    CHECK_THROWS_AS(u.eval(1.5), DomainError);
    CHECK_THROWS_AS(RadialFunction({0.9, 0.5}, {0.0, 1.0}), InvalidProfile);
    CHECK_THROWS_AS(RadialFunction({1.0, 1.0}, {0.0, 1.0}), InvalidProfile);
    CHECK_THROWS_AS(RadialFunction({1.0, 0.0}, {0.0, 1.0}), InvalidProfile);
  }
}
