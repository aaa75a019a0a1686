#include "wmt/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "wmt/analytic.hpp"
#include "wmt/bounds.hpp"
#include "wmt/error.hpp"
#include "wmt/parallel.hpp"

namespace wmt {

namespace {

// State in increment coordinates D_j = psi_{j+1} - psi_j, where Gamma is the
// diagonal form sum_j c_j D_j^2.
std::vector<double> cumulative(std::span<const double> d) {
  std::vector<double> psi(d.size() + 1, 0.0);
  for (std::size_t j = 0; j < d.size(); ++j) psi[j + 1] = psi[j] + d[j];
  return psi;
}

void normalize(std::vector<double>& d, std::span<const double> c) {
  long double energy = 0.0L;
  for (std::size_t j = 0; j < d.size(); ++j) {
    energy += static_cast<long double>(c[j]) * d[j] * d[j];
  }
  const long double inv = 1.0L / std::sqrt(energy);
  for (double& x : d) x = static_cast<double>(x * inv);
}

struct Tangent {
  std::vector<double> direction;  // gt / mu
  double mu = 0.0;               // <D, dI/dD>
  double tangent_norm = 0.0;     // |gt|_K
  double gradient_norm = 0.0;    // |gk|_K
};

Tangent tangent_step(std::span<const double> d, std::span<const double> c, std::span<const double> nodal) {
  const std::size_t n = d.size();
  std::vector<double> gd(n);
  double run = 0.0;
  for (std::size_t j = n; j-- > 0;) {
    run += nodal[j + 1];
    gd[j] = run;
  }
  Tangent out;
  long double mu = 0.0L;
  long double gk2 = 0.0L;
  for (std::size_t j = 0; j < n; ++j) {
    mu += static_cast<long double>(d[j]) * gd[j];
    gk2 += static_cast<long double>(gd[j]) * gd[j] / c[j];
  }
  out.mu = static_cast<double>(mu);
  out.gradient_norm = static_cast<double>(std::sqrt(gk2));
  out.direction.resize(n);
  long double gt2 = 0.0L;
  for (std::size_t j = 0; j < n; ++j) {
    const double gt = gd[j] / c[j] - out.mu * d[j];
    gt2 += static_cast<long double>(c[j]) * gt * gt;
    out.direction[j] = gt / out.mu;
  }
  out.tangent_norm = static_cast<double>(std::sqrt(gt2));
  return out;
}

std::vector<double> resample(const Profile1D& init, std::span<const double> grid) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = init.eval(grid[i]);
  v[0] = 0.0;
  return v;
}

bool better(const OptimizationResult& a, const OptimizationResult& b) {
  if (a.i_value != b.i_value) return a.i_value > b.i_value;
  return a.stationarity_residual < b.stationarity_residual;
}

}  // namespace

double auto_grading(const WeightParams& p) { return std::min(4.0 * p.gamma, 40.0); }

std::vector<double> optimizer_grid(const OptimizerConfig& cfg, const WeightParams& p) {
  const double t_max = cfg.t_max > 0.0 ? cfg.t_max : choose_tmax(1.0, p, cfg.quadrature).t_max;
  return make_graded_grid(t_max, cfg.cells, cfg.grading > 0.0 ? cfg.grading : auto_grading(p));
}

std::vector<double> discrete_gradient(const Profile1D& psi, const WeightParams& p, const QuadratureConfig& q) {
  const DiscreteFunctional fn(psi.grid(), p, q.nodes_per_cell);
  std::vector<double> g(psi.nodes());
  fn.value_and_gradient(psi.values(), g);
  return std::vector<double>(g.begin() + 1, g.end());
}

Profile1D project_feasible(const Profile1D& psi, const WeightParams& p, bool nonneg) {
  std::vector<double> v(psi.values().begin(), psi.values().end());
  if (nonneg) {
    for (double& x : v) x = std::max(x, 0.0);
  }
  const Profile1D clamped(std::vector<double>(psi.grid().begin(), psi.grid().end()), std::move(v), psi.tail());
  const double energy = gamma_energy(clamped, p);
  if (!(energy > 0.0)) throw DegenerateInput("project_feasible: profile has zero energy");
  return clamped.scaled(1.0 / std::sqrt(energy));
}

OptimizationResult maximize(const WeightParams& p, const OptimizerConfig& cfg, const Profile1D& init) {
  if (!(cfg.step_init > 0.0) || !(cfg.backtrack_factor > 0.0 && cfg.backtrack_factor < 1.0) ||
      !(cfg.armijo > 0.0) || !(cfg.grad_tolerance > 0.0) || !(cfg.min_step > 0.0)) {
    throw DomainError("maximize: invalid optimizer configuration");
  }
  const std::vector<double> grid = optimizer_grid(cfg, p);
  const std::vector<double> c = energy_cell_weights(grid, p);
  const DiscreteFunctional fn(grid, p, cfg.quadrature.nodes_per_cell);
  const std::size_t n = c.size();

  std::vector<double> start = resample(init, grid);
  if (cfg.nonneg) {
    for (double& x : start) x = std::max(x, 0.0);
  }
  std::vector<double> d(n);
  for (std::size_t j = 0; j < n; ++j) d[j] = start[j + 1] - start[j];
  long double e0 = 0.0L;
  for (std::size_t j = 0; j < n; ++j) e0 += static_cast<long double>(c[j]) * d[j] * d[j];
  if (!(e0 > 0.0L)) throw DegenerateInput("maximize: initial profile has zero energy");
  normalize(d, c);

  std::vector<double> psi = cumulative(d);
  std::vector<double> nodal(n + 1);
  double trace_value = fn.value_and_gradient(psi, nodal);

  OptimizationResult result{Profile1D(grid, psi), 0.0, 0.0, 0, false, 0.0, 0.0, 0.0, {}, {}};
  result.ascent_trace.push_back(trace_value);
  Tangent tan = tangent_step(d, c, nodal);

  std::vector<double> trial_d(n);
  std::vector<double> trial_psi;
  std::size_t it = 0;
  result.stop_reason = "max_iters";
  for (; it < cfg.max_iters; ++it) {
    if (!(tan.mu > 0.0)) {
      result.stop_reason = "zero_gradient";
      break;
    }
    if (tan.tangent_norm <= cfg.grad_tolerance * tan.gradient_norm) {
      result.stop_reason = "converged";
      break;
    }
    const double predicted = tan.tangent_norm * tan.tangent_norm / tan.mu;
    double step = cfg.step_init;
    bool accepted = false;
    double gain = 0.0;
    while (step >= cfg.min_step) {
      for (std::size_t j = 0; j < n; ++j) trial_d[j] = d[j] + step * tan.direction[j];
      if (cfg.nonneg) {
        trial_psi = cumulative(trial_d);
        if (std::any_of(trial_psi.begin(), trial_psi.end(), [](double x) { return x < 0.0; })) {
          for (double& x : trial_psi) x = std::max(x, 0.0);
          for (std::size_t j = 0; j < n; ++j) trial_d[j] = trial_psi[j + 1] - trial_psi[j];
        }
      }
      normalize(trial_d, c);
      trial_psi = cumulative(trial_d);
      gain = fn.increment(psi, trial_psi);
      if (gain >= cfg.armijo * step * predicted) {
        accepted = true;
        break;
      }
      step *= cfg.backtrack_factor;
    }
    if (!accepted) {
      result.stop_reason = "line_search_stalled";
      break;
    }
    d.swap(trial_d);
    psi.swap(trial_psi);
    fn.value_and_gradient(psi, nodal);
    trace_value += gain;
    result.ascent_trace.push_back(trace_value);
    tan = tangent_step(d, c, nodal);
  }

  result.iterations = it;
  result.profile = Profile1D(grid, psi);
  const FunctionalReport report = functional_i(result.profile, p, cfg.quadrature);
  result.i_value = report.i_value;
  result.gamma_value = report.gamma_value;
  result.tangent_gradient_norm = tan.tangent_norm;
  result.stationarity_residual = tan.gradient_norm > 0.0 ? tan.tangent_norm / tan.gradient_norm : 0.0;
  result.multiplier = 0.5 * tan.mu;
  result.converged = result.stationarity_residual <= cfg.grad_tolerance;
  return result;
}

std::vector<Profile1D> multistart_inits(const WeightParams& p, const OptimizerConfig& cfg, std::uint64_t stream) {
  std::vector<Profile1D> inits;
  GridSpec spec;
  inits.push_back(cc_phi(p, spec));
  const std::vector<double> grid = optimizer_grid(cfg, p);
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(r)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double k = 2.0 + 18.0 * unit(rng);
    const double amp = 0.3 * unit(rng);
    const double freq = 0.2 + unit(rng);
    const double phase = 2.0 * std::numbers::pi * unit(rng);
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      v[i] = moser_psi(k, p, grid[i]) * (1.0 + amp * std::sin(freq * grid[i] + phase));
    }
    v[0] = 0.0;
    inits.emplace_back(grid, std::move(v));
  }
  return inits;
}

MultiStartResult maximize_multistart(const WeightParams& p, const OptimizerConfig& cfg, std::uint64_t stream) {
  const std::vector<Profile1D> inits = multistart_inits(p, cfg, stream);
  std::vector<std::optional<OptimizationResult>> slots(inits.size());
  parallel_for(inits.size(), [&](std::size_t i) { slots[i] = maximize(p, cfg, inits[i]); });
  std::size_t best = 0;
  for (std::size_t i = 1; i < slots.size(); ++i) {
    if (better(*slots[i], *slots[best])) best = i;
  }
  MultiStartResult out{*slots[best], best, {}};
  for (auto& s : slots) out.runs.push_back(std::move(*s));
  return out;
}

SweepRow to_sweep_row(const WeightParams& p, const OptimizationResult& r) {
  SweepRow row;
  row.beta = p.beta;
  row.gamma = p.gamma;
  row.alpha_beta = p.alpha_beta;
  row.i_max = r.i_value;
  row.gamma_value = r.gamma_value;
  row.iterations = r.iterations;
  row.converged = r.converged;
  row.stationarity_residual = r.stationarity_residual;
  row.crossing_a = crossing_point(r.profile, p);
  return row;
}

std::vector<SweepRow> beta_sweep(std::span<const double> betas, const OptimizerConfig& cfg) {
  std::vector<SweepRow> rows(betas.size());
  // Starts inside each beta already run in parallel; betas are sequential.
  for (std::size_t i = 0; i < betas.size(); ++i) {
    SweepRow& row = rows[i];
    row.beta = betas[i];
    try {
      const WeightParams p = make_weight_params(betas[i]);
      row = to_sweep_row(p, maximize_multistart(p, cfg, i).best);
    } catch (const std::exception& e) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.gamma = row.alpha_beta = row.i_max = row.gamma_value = row.stationarity_residual = nan;
      row.error = e.what();
    }
  }
  return rows;
}

}  // namespace wmt
