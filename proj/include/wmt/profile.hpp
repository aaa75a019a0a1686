#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wmt {

enum class TailRule { kConstantEqualToLastValue };

/// Reduced radial profile psi on a node set 0 = t_0 < ... < t_N = T_max,
/// piecewise linear between nodes and constant (= psi_N) beyond T_max.
/// psi_0 = 0 holds exactly.
class Profile1D {
 public:
  /// Throws InvalidProfile when the grid/value invariants fail.
  Profile1D(std::vector<double> grid, std::vector<double> values,
            TailRule tail = TailRule::kConstantEqualToLastValue);

  std::span<const double> grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  TailRule tail() const { return tail_; }

  std::size_t cells() const { return grid_.size() - 1; }
  std::size_t nodes() const { return grid_.size(); }
  double t_max() const { return grid_.back(); }
  double last_value() const { return values_.back(); }

  /// Throws DomainError for t < 0.
  double eval(double t) const;
  /// Slope on [t_i, t_{i+1}]; std::out_of_range for i >= cells().
  double derivative_on_cell(std::size_t i) const;

  /// Index of the cell containing t (cells() - 1 for t == T_max).
  std::size_t locate(double t) const;

  /// Same function with an extra node at t (no-op if t is already a node or
  /// t >= T_max).
  Profile1D with_node(double t) const;

  Profile1D scaled(double factor) const;

  friend bool operator==(const Profile1D&, const Profile1D&) = default;

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
  TailRule tail_;
};

/// Radial samples u(r_i) with 1 = r_0 > r_1 > ... > r_N > 0 and u(1) = 0.
/// Between nodes u is linear in log r; on [0, r_N] it is constant.
class RadialFunction {
 public:
  RadialFunction(std::vector<double> radii, std::vector<double> values);

  std::span<const double> radii() const { return radii_; }
  std::span<const double> values() const { return values_; }
  std::size_t cells() const { return radii_.size() - 1; }

  /// r in [0, 1]; DomainError otherwise.
  double eval(double r) const;

 private:
  std::vector<double> radii_;
  std::vector<double> values_;
};

/// t_i = T_max (i/N)^grading, i = 0..N. Requires T_max > 0, N >= 16,
/// grading >= 1.
std::vector<double> make_graded_grid(double t_max, std::size_t cells, double grading);

/// Concatenates graded grids over consecutive segments [b_j, b_{j+1}]
/// (b_0 = 0). Each segment uses its own cell count and grading measured from
/// the segment start, so every breakpoint is a node.
struct GridSegment {
  double end;
  std::size_t cells;
  double grading = 1.0;
};
std::vector<double> make_segmented_grid(std::span<const GridSegment> segments);

}  // namespace wmt
