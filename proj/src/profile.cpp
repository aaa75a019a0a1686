#include "wmt/profile.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "wmt/error.hpp"

namespace wmt {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw InvalidProfile(what);
}

}  // namespace

Profile1D::Profile1D(std::vector<double> grid, std::vector<double> values, TailRule tail)
    : grid_(std::move(grid)), values_(std::move(values)), tail_(tail) {
  require(grid_.size() >= 2, "profile needs at least two nodes");
  require(grid_.size() == values_.size(), "grid and values differ in length");
  require(grid_.front() == 0.0, "profile grid must start at t = 0");
  require(values_.front() == 0.0, "profile must satisfy psi(0) = 0");
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    require(std::isfinite(grid_[i]) && std::isfinite(values_[i]), "profile entries must be finite");
    if (i > 0) require(grid_[i] > grid_[i - 1], "profile grid must be strictly increasing");
  }
}

std::size_t Profile1D::locate(double t) const {
  if (t >= grid_.back()) return cells() - 1;
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
  return static_cast<std::size_t>(it - grid_.begin()) - 1;
}

double Profile1D::eval(double t) const {
  if (!(t >= 0.0)) throw DomainError("Profile1D::eval: t must be >= 0");
  if (t >= grid_.back()) return values_.back();
  const std::size_t i = locate(t);
  const double t0 = grid_[i];
  const double t1 = grid_[i + 1];
  if (t == t0) return values_[i];
  const double s = (t - t0) / (t1 - t0);
  return values_[i] + s * (values_[i + 1] - values_[i]);
}

double Profile1D::derivative_on_cell(std::size_t i) const {
  if (i >= cells()) throw std::out_of_range("derivative_on_cell: index " + std::to_string(i));
  return (values_[i + 1] - values_[i]) / (grid_[i + 1] - grid_[i]);
}

Profile1D Profile1D::with_node(double t) const {
  if (!(t > 0.0) || t >= grid_.back()) return *this;
  const auto it = std::lower_bound(grid_.begin(), grid_.end(), t);
  if (*it == t) return *this;
  const auto pos = static_cast<std::size_t>(it - grid_.begin());
  const double v = eval(t);
  std::vector<double> g = grid_;
  std::vector<double> v2 = values_;
  g.insert(g.begin() + static_cast<std::ptrdiff_t>(pos), t);
  v2.insert(v2.begin() + static_cast<std::ptrdiff_t>(pos), v);
  return Profile1D(std::move(g), std::move(v2), tail_);
}

Profile1D Profile1D::scaled(double factor) const {
  std::vector<double> v = values_;
  for (double& x : v) x *= factor;
  return Profile1D(grid_, std::move(v), tail_);
}

RadialFunction::RadialFunction(std::vector<double> radii, std::vector<double> values)
    : radii_(std::move(radii)), values_(std::move(values)) {
  require(radii_.size() >= 2, "radial function needs at least two radii");
  require(radii_.size() == values_.size(), "radii and values differ in length");
  require(radii_.front() == 1.0, "radial samples must start at r = 1");
  for (std::size_t i = 0; i < radii_.size(); ++i) {
    require(std::isfinite(values_[i]), "radial values must be finite");
    require(radii_[i] > 0.0 && radii_[i] <= 1.0, "radii must lie in (0, 1]");
    if (i > 0) require(radii_[i] < radii_[i - 1], "radii must be strictly decreasing");
  }
}

double RadialFunction::eval(double r) const {
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("RadialFunction::eval: r must lie in [0, 1]");
  if (r <= radii_.back()) return values_.back();
  if (r == 1.0) return values_.front();
  // radii_ is decreasing: find the first node with radius <= r.
  const auto it = std::lower_bound(radii_.begin(), radii_.end(), r, std::greater<>());
  const auto j = static_cast<std::size_t>(it - radii_.begin());
  if (radii_[j] == r) return values_[j];
  const std::size_t i = j - 1;
  const double s = std::log(r / radii_[i]) / std::log(radii_[j] / radii_[i]);
  return values_[i] + s * (values_[j] - values_[i]);
}

std::vector<double> make_graded_grid(double t_max, std::size_t cells, double grading) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw DomainError("make_graded_grid: T_max must be > 0");
  if (cells < 16) throw DomainError("make_graded_grid: need at least 16 cells");
  if (!(grading >= 1.0)) throw DomainError("make_graded_grid: grading must be >= 1");
  std::vector<double> grid(cells + 1);
  const auto n = static_cast<double>(cells);
  for (std::size_t i = 0; i <= cells; ++i) {
    grid[i] = t_max * std::pow(static_cast<double>(i) / n, grading);
  }
  grid.front() = 0.0;
  grid.back() = t_max;
  return grid;
}

std::vector<double> make_segmented_grid(std::span<const GridSegment> segments) {
  if (segments.empty()) throw DomainError("make_segmented_grid: no segments");
  std::vector<double> grid{0.0};
  double start = 0.0;
  for (const auto& seg : segments) {
    if (!(seg.end > start)) throw DomainError("make_segmented_grid: segment ends must increase");
    if (seg.cells == 0) throw DomainError("make_segmented_grid: empty segment");
    if (!(seg.grading >= 1.0)) throw DomainError("make_segmented_grid: grading must be >= 1");
    const double len = seg.end - start;
    const auto n = static_cast<double>(seg.cells);
    for (std::size_t i = 1; i < seg.cells; ++i) {
      grid.push_back(start + len * std::pow(static_cast<double>(i) / n, seg.grading));
    }
    grid.push_back(seg.end);
    start = seg.end;
  }
  return grid;
}

}  // namespace wmt
