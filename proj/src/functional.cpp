#include "wmt/functional.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "wmt/error.hpp"
#include "wmt/simd/kernels.hpp"

namespace wmt {

namespace {

double abs_pow(double a, double p) { return a == 0.0 ? 0.0 : std::pow(a, p); }

// Antiderivative of t^beta / (1 - beta).
double weight_primitive(double t, const WeightParams& p) {
  return std::pow(t, p.beta + 1.0) / ((p.beta + 1.0) * (1.0 - p.beta));
}

// Splits [lo, hi] (0 < lo < hi) into geometric pieces with ratio <= 1.25.
template <typename F>
double integrate_geometric(double lo, double hi, const GaussRule& rule, F&& f) {
  const auto pieces = static_cast<std::size_t>(std::ceil(std::log(hi / lo) / std::log(1.25)));
  const std::size_t m = pieces == 0 ? 1 : pieces;
  const double ratio = std::pow(hi / lo, 1.0 / static_cast<double>(m));
  double sum = 0.0;
  double a = lo;
  for (std::size_t j = 0; j < m; ++j) {
    const double b = (j + 1 == m) ? hi : a * ratio;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      sum += half * rule.weights[k] * f(mid + half * rule.nodes[k]);
    }
    a = b;
  }
  return sum;
}

// Pieces of [lo, 1] refined geometrically toward r = 1, where |log r|^beta
// has an integrable endpoint singularity in its derivative.
template <typename F>
double integrate_toward_one(double lo, const GaussRule& rule, F&& f) {
  double sum = 0.0;
  double gap = 1.0 - lo;
  double a = lo;
  for (int level = 0; level < 60; ++level) {
    const double b = 1.0 - 0.5 * gap;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      sum += half * rule.weights[k] * f(mid + half * rule.nodes[k]);
    }
    a = b;
    gap *= 0.5;
  }
  return sum;
}

}  // namespace

GaussRule gauss_legendre(std::size_t n) {
  if (n == 0) throw DomainError("gauss_legendre: n must be positive");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const auto nd = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const auto kd = static_cast<double>(k);
        const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = nd * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

std::vector<double> energy_cell_weights(std::span<const double> grid, const WeightParams& p) {
  std::vector<double> c(grid.size() - 1);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double h = grid[i + 1] - grid[i];
    c[i] = (weight_primitive(grid[i + 1], p) - weight_primitive(grid[i], p)) / (h * h);
  }
  return c;
}

double gamma_energy(const Profile1D& psi, const WeightParams& p) {
  const auto grid = psi.grid();
  const auto v = psi.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < psi.cells(); ++i) {
    const double h = grid[i + 1] - grid[i];
    const double d = v[i + 1] - v[i];
    sum += d * d / (h * h) * (weight_primitive(grid[i + 1], p) - weight_primitive(grid[i], p));
  }
  return sum;
}

double gamma_energy_between(const Profile1D& psi, const WeightParams& p, double a, double b) {
  if (!(a >= 0.0) || !(b >= a)) throw DomainError("gamma_energy_between: need 0 <= a <= b");
  const auto grid = psi.grid();
  double sum = 0.0;
  for (std::size_t i = 0; i < psi.cells(); ++i) {
    const double lo = std::max(grid[i], a);
    const double hi = std::min(grid[i + 1], b);
    if (hi <= lo) continue;
    const double s = psi.derivative_on_cell(i);
    sum += s * s * (weight_primitive(hi, p) - weight_primitive(lo, p));
  }
  return sum;
}

DiscreteFunctional::DiscreteFunctional(std::span<const double> grid, const WeightParams& p,
                                       std::size_t nodes_per_cell)
    : grid_(grid.begin(), grid.end()), per_cell_(nodes_per_cell), power_(2.0 * p.gamma) {
  if (grid_.size() < 2) throw DomainError("DiscreteFunctional: grid needs two nodes");
  if (per_cell_ < 1) throw DomainError("DiscreteFunctional: need at least one point per cell");
  const GaussRule rule = gauss_legendre(per_cell_);
  const std::size_t cells = grid_.size() - 1;
  t_.resize(cells * per_cell_);
  w_.resize(cells * per_cell_);
  lambda_.resize(per_cell_);
  for (std::size_t k = 0; k < per_cell_; ++k) lambda_[k] = 0.5 * (1.0 + rule.nodes[k]);
  for (std::size_t i = 0; i < cells; ++i) {
    const double mid = 0.5 * (grid_[i] + grid_[i + 1]);
    const double half = 0.5 * (grid_[i + 1] - grid_[i]);
    for (std::size_t k = 0; k < per_cell_; ++k) {
      t_[i * per_cell_ + k] = mid + half * rule.nodes[k];
      w_[i * per_cell_ + k] = half * rule.weights[k];
    }
  }
}

void DiscreteFunctional::interpolate(std::span<const double> values, std::span<double> out) const {
  const std::size_t cells = grid_.size() - 1;
  for (std::size_t i = 0; i < cells; ++i) {
    const double a = values[i];
    const double b = values[i + 1];
    for (std::size_t k = 0; k < per_cell_; ++k) {
      const double l = lambda_[k];
      out[i * per_cell_ + k] = (1.0 - l) * a + l * b;
    }
  }
}

double DiscreteFunctional::tail(std::span<const double> values) const {
  return std::exp(abs_pow(std::abs(values.back()), power_) - grid_.back());
}

double DiscreteFunctional::value(std::span<const double> values) const {
  std::vector<double> psi(t_.size());
  interpolate(values, psi);
  return simd::exp_power_sum(psi, t_, w_, power_, {}, {}) + tail(values);
}

double DiscreteFunctional::value_and_gradient(std::span<const double> values,
                                              std::span<double> gradient) const {
  if (gradient.size() != grid_.size()) throw std::invalid_argument("gradient size mismatch");
  std::vector<double> psi(t_.size());
  std::vector<double> slopes(t_.size());
  interpolate(values, psi);
  const double sum = simd::exp_power_sum(psi, t_, w_, power_, {}, slopes);
  std::fill(gradient.begin(), gradient.end(), 0.0);
  const std::size_t cells = grid_.size() - 1;
  for (std::size_t i = 0; i < cells; ++i) {
    double left = 0.0;
    double right = 0.0;
    for (std::size_t k = 0; k < per_cell_; ++k) {
      const double s = slopes[i * per_cell_ + k];
      left += (1.0 - lambda_[k]) * s;
      right += lambda_[k] * s;
    }
    gradient[i] += left;
    gradient[i + 1] += right;
  }
  const double last = values.back();
  const double a = std::abs(last);
  const double tail_value = tail(values);
  if (a != 0.0) {
    const double d = power_ * abs_pow(a, power_ - 1.0) * tail_value;
    gradient.back() += std::signbit(last) ? -d : d;
  }
  return sum + tail_value;
}

double DiscreteFunctional::increment(std::span<const double> from, std::span<const double> to) const {
  std::vector<double> delta_nodes(from.size());
  for (std::size_t i = 0; i < from.size(); ++i) delta_nodes[i] = to[i] - from[i];
  std::vector<double> psi(t_.size());
  std::vector<double> delta(t_.size());
  interpolate(from, psi);
  interpolate(delta_nodes, delta);
  const double body = simd::exp_power_increment(psi, delta, t_, w_, power_);

  const double tail_t = grid_.back();
  const std::array<double, 1> last_psi{from.back()};
  const std::array<double, 1> last_delta{delta_nodes.back()};
  const std::array<double, 1> last_t{tail_t};
  const std::array<double, 1> unit{1.0};
  return body + simd::scalar::exp_power_increment(last_psi, last_delta, last_t, unit, power_);
}

std::vector<double> DiscreteFunctional::cell_integrals(std::span<const double> values) const {
  std::vector<double> psi(t_.size());
  std::vector<double> terms(t_.size());
  interpolate(values, psi);
  simd::exp_power_sum(psi, t_, w_, power_, terms, {});
  const std::size_t cells = grid_.size() - 1;
  std::vector<double> out(cells, 0.0);
  for (std::size_t i = 0; i < cells; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < per_cell_; ++k) s += terms[i * per_cell_ + k];
    out[i] = s;
  }
  return out;
}

FunctionalReport functional_i(const Profile1D& psi, const WeightParams& p, const QuadratureConfig& q) {
  if (q.nodes_per_cell < 2) throw DomainError("functional_i: nodes_per_cell must be >= 2");
  const DiscreteFunctional full(psi.grid(), p, q.nodes_per_cell);
  const auto values = psi.values();
  FunctionalReport report;
  const double tail = full.tail(values);
  double bound = 0.0;
  if (q.estimate_error) {
    const auto fine = full.cell_integrals(values);
    const DiscreteFunctional coarse(psi.grid(), p, q.nodes_per_cell / 2);
    const auto rough = coarse.cell_integrals(values);
    double sum = 0.0;
    for (std::size_t i = 0; i < fine.size(); ++i) {
      sum += fine[i];
      bound += std::abs(fine[i] - rough[i]);
    }
    report.i_value = sum + tail;
  } else {
    report.i_value = full.value(values);
  }
  report.gamma_value = gamma_energy(psi, p);
  report.truncation_bound = bound;
  report.feasible = report.gamma_value <= 1.0 + q.feasibility_tolerance;
  report.certified = abs_pow(std::abs(psi.last_value()), 2.0 * p.gamma) < psi.t_max();
  return report;
}

std::pair<double, double> split_functional_i(const Profile1D& psi, const WeightParams& p, double a,
                                             const QuadratureConfig& q) {
  if (!(a >= 0.0)) throw DomainError("split_functional_i: a must be >= 0");
  const double power_n = abs_pow(std::abs(psi.last_value()), 2.0 * p.gamma);
  if (a >= psi.t_max()) {
    const DiscreteFunctional df(psi.grid(), p, q.nodes_per_cell);
    double body = 0.0;
    for (double c : df.cell_integrals(psi.values())) body += c;
    const double e_n = std::exp(power_n);
    const double beyond = e_n * (std::exp(-psi.t_max()) - std::exp(-a));
    return {body + beyond, std::exp(power_n - a)};
  }
  const Profile1D split = psi.with_node(a);
  const DiscreteFunctional df(split.grid(), p, q.nodes_per_cell);
  const auto cells = df.cell_integrals(split.values());
  const auto grid = split.grid();
  double head = 0.0;
  double tail = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (grid[i + 1] <= a) {
      head += cells[i];
    } else {
      tail += cells[i];
    }
  }
  tail += df.tail(split.values());
  return {head, tail};
}

double functional_j(const RadialFunction& u, const WeightParams& p, const QuadratureConfig& q) {
  const GaussRule rule = gauss_legendre(std::max<std::size_t>(q.nodes_per_cell, 8));
  const auto radii = u.radii();
  const auto values = u.values();
  const double power = 2.0 * p.gamma;
  const double scale = p.reduced_scale;
  double sum = 0.0;
  for (std::size_t i = 0; i < u.cells(); ++i) {
    const double hi = radii[i];
    const double lo = radii[i + 1];
    const double log_hi = std::log(hi);
    const double log_span = std::log(lo) - log_hi;
    const double u0 = values[i];
    const double du = values[i + 1] - values[i];
    auto integrand = [&](double r) {
      const double uu = u0 + du * (std::log(r) - log_hi) / log_span;
      return 2.0 * r * std::exp(abs_pow(scale * std::abs(uu), power));
    };
    sum += integrate_geometric(lo, hi, rule, integrand);
  }
  const double r_last = radii.back();
  sum += r_last * r_last * std::exp(abs_pow(scale * std::abs(values.back()), power));
  return sum;
}

double weighted_dirichlet_2d(const RadialFunction& u, const WeightParams& p) {
  const GaussRule rule = gauss_legendre(16);
  const auto radii = u.radii();
  const auto values = u.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < u.cells(); ++i) {
    const double hi = radii[i];
    const double lo = radii[i + 1];
    // u is linear in log r on the cell, so u'(r) = slope / r.
    const double slope = (values[i + 1] - values[i]) / (std::log(lo) - std::log(hi));
    if (slope == 0.0) continue;
    auto integrand = [&](double r) {
      const double lg = std::abs(std::log(r));
      const double w = p.beta == 0.0 ? 1.0 : std::pow(lg, p.beta);
      return slope * slope * w / r;
    };
    const double part = (i == 0 && p.beta != 0.0) ? integrate_toward_one(lo, rule, integrand)
                                                  : integrate_geometric(lo, hi, rule, integrand);
    sum += 2.0 * std::numbers::pi * part;
  }
  return sum;
}

TmaxChoice choose_tmax(double psi_energy, const WeightParams& p, const QuadratureConfig& q) {
  if (!(psi_energy >= 0.0)) throw DomainError("choose_tmax: energy must be >= 0");
  if (psi_energy >= 1.0) return {q.t_max_cap, false};
  const double rate = 1.0 - std::pow(psi_energy, p.gamma);
  const double t = (std::log(1.0 / rate) + std::log(1.0 / q.tail_tolerance)) / rate;
  if (t > q.t_max_cap) return {q.t_max_cap, false};
  return {t, true};
}

}  // namespace wmt
