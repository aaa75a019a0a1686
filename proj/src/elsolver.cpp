#include "wmt/elsolver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>

#include "el_integrator.hpp"
#include "wmt/error.hpp"

namespace wmt {

namespace {

std::array<double, 4> initial_state(double c, const ShootingConfig& cfg, const WeightParams& p) {
  const double e = 1.0 - p.beta;
  const double ts = cfg.t_start;
  return {c * std::pow(ts, e) / e, c, c * c * std::pow(ts, e) / (e * e), ts};
}

detail::IntegratorRun integrate(double lambda, double c, const ShootingConfig& cfg, const WeightParams& p,
                                const std::vector<double>& times) {
  const detail::ReducedSystem sys{p.beta, p.gamma, lambda};
  const double rtol = cfg.integrator_tolerance;
  return detail::integrate_reduced(sys, initial_state(c, cfg, p), cfg.t_start, cfg.t_end, rtol, 1e-3 * rtol,
                                   times);
}

using Vec2 = std::array<double, 2>;

std::optional<Vec2> residual(const Vec2& x, const ShootingConfig& cfg, const WeightParams& p) {
  const double lambda = std::exp(x[0]);
  const double c = std::exp(x[1]);
  const auto shot = integrate(lambda, c, cfg, p, {});
  if (!shot.ok) return std::nullopt;
  return Vec2{shot.end[1] / c, shot.end[2] - 1.0};
}

double norm_inf(const Vec2& r) { return std::max(std::abs(r[0]), std::abs(r[1])); }
double norm2(const Vec2& r) { return std::hypot(r[0], r[1]); }

// Forward-difference Jacobian; nullopt if a perturbed shot fails.
std::optional<std::array<Vec2, 2>> fd_jacobian(const Vec2& x, const Vec2& r, const ShootingConfig& cfg,
                                               const WeightParams& p) {
  std::array<Vec2, 2> j{};  // j[row][col]
  for (int k = 0; k < 2; ++k) {
    Vec2 xk = x;
    const double h = 1e-6;
    xk[k] += h;
    const auto rk = residual(xk, cfg, p);
    if (!rk) return std::nullopt;
    j[0][k] = ((*rk)[0] - r[0]) / h;
    j[1][k] = ((*rk)[1] - r[1]) / h;
  }
  return j;
}

}  // namespace

std::vector<double> el_residual(const Profile1D& psi, double lambda, const WeightParams& p, FluxForm form) {
  if (!(lambda > 0.0)) throw DomainError("el_residual: lambda must be > 0");
  const auto t = psi.grid();
  const auto v = psi.values();
  const std::size_t n = psi.cells();
  const double b1 = p.beta + 1.0;
  const double e = 1.0 - p.beta;
  std::vector<double> flux(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dv = v[i + 1] - v[i];
    if (form == FluxForm::kCellAverage) {
      const double h = t[i + 1] - t[i];
      flux[i] = (std::pow(t[i + 1], b1) - std::pow(t[i], b1)) / (b1 * h) * dv / h;
    } else {
      flux[i] = e * dv / (std::pow(t[i + 1], e) - std::pow(t[i], e));
    }
  }
  const double power = 2.0 * p.gamma;
  std::vector<double> out;
  out.reserve(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    if (!(v[i] > 0.0)) throw DomainError("el_residual: profile must be positive at interior nodes");
    const double source = std::pow(v[i], power - 1.0) * std::exp(std::pow(v[i], power) - t[i]);
    out.push_back((flux[i] - flux[i - 1]) / (0.5 * (t[i + 1] - t[i - 1])) + source / lambda);
  }
  return out;
}

ShootingResult shoot(const ShootingConfig& cfg, const WeightParams& p) {
  if (!(cfg.lambda_init > 0.0) || !(cfg.slope_coeff_init > 0.0) || !(cfg.t_start > 0.0) ||
      !(cfg.t_end > cfg.t_start) || !(cfg.integrator_tolerance > 0.0)) {
    throw DomainError("shoot: invalid configuration");
  }
  Vec2 x{std::log(cfg.lambda_init), std::log(cfg.slope_coeff_init)};
  std::optional<Vec2> r = residual(x, cfg, p);
  std::string diagnostic;
  // Pull c down until the first shot survives; large c blows up.
  for (int k = 0; k < 30 && !r; ++k) {
    x[1] -= 0.2;
    r = residual(x, cfg, p);
  }
  Vec2 best_x = x;
  Vec2 best_r{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  std::size_t iters = 0;
  bool converged = false;
  if (!r) {
    diagnostic = "every initial shot overflowed";
  } else {
    best_r = *r;
    auto jac = fd_jacobian(x, *r, cfg, p);
    bool fresh = true;
    for (; iters < cfg.max_outer_iters; ++iters) {
      if (norm_inf(*r) <= cfg.outer_tolerance) {
        converged = true;
        break;
      }
      if (!jac) {
        diagnostic = "finite-difference Jacobian shot overflowed";
        break;
      }
      const auto& j = *jac;
      const double det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
      if (!(std::abs(det) > 0.0) || !std::isfinite(det)) {
        if (fresh) {
          diagnostic = "singular outer Jacobian";
          break;
        }
        jac = fd_jacobian(x, *r, cfg, p);
        fresh = true;
        continue;
      }
      Vec2 dx{-(j[1][1] * (*r)[0] - j[0][1] * (*r)[1]) / det, -(-j[1][0] * (*r)[0] + j[0][0] * (*r)[1]) / det};
      const double len = std::max(std::abs(dx[0]), std::abs(dx[1]));
      if (len > 0.5) {
        dx[0] *= 0.5 / len;
        dx[1] *= 0.5 / len;
      }
      std::optional<Vec2> r_new;
      Vec2 x_new = x;
      double scale = 1.0;
      for (int ls = 0; ls < 12; ++ls) {
        x_new = {x[0] + scale * dx[0], x[1] + scale * dx[1]};
        r_new = residual(x_new, cfg, p);
        if (r_new && norm2(*r_new) < norm2(*r)) break;
        r_new.reset();
        scale *= 0.5;
      }
      if (!r_new) {
        if (fresh) {
          diagnostic = "outer line search failed";
          break;
        }
        jac = fd_jacobian(x, *r, cfg, p);
        fresh = true;
        continue;
      }
      // Broyden rank-one update.
      const Vec2 s{x_new[0] - x[0], x_new[1] - x[1]};
      const Vec2 y{(*r_new)[0] - (*r)[0], (*r_new)[1] - (*r)[1]};
      const double ss = s[0] * s[0] + s[1] * s[1];
      auto& jm = *jac;
      for (int row = 0; row < 2; ++row) {
        const double miss = y[row] - (jm[row][0] * s[0] + jm[row][1] * s[1]);
        jm[row][0] += miss * s[0] / ss;
        jm[row][1] += miss * s[1] / ss;
      }
      fresh = false;
      x = x_new;
      r = r_new;
      if (norm_inf(*r) < norm_inf(best_r)) {
        best_r = *r;
        best_x = x;
      }
    }
    if (norm_inf(*r) < norm_inf(best_r) || converged) {
      best_r = *r;
      best_x = x;
    }
    if (!converged && diagnostic.empty()) diagnostic = "outer iteration limit reached";
  }

  const double lambda = std::exp(best_x[0]);
  const double c = std::exp(best_x[1]);
  std::vector<double> grid = make_graded_grid(cfg.t_end, cfg.output_cells, cfg.output_grading);
  std::vector<double> times{cfg.t_start};
  for (double t : grid) {
    if (t > cfg.t_start) times.push_back(t);
  }
  const double e = 1.0 - p.beta;
  std::vector<double> values(grid.size());
  std::vector<double> flux(grid.size(), c);
  detail::IntegratorRun shot;
  if (std::isfinite(best_r[0])) shot = integrate(lambda, c, cfg, p, times);
  const std::size_t below = grid.size() - (times.size() - 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i < below || !shot.ok) {
      values[i] = c * std::pow(grid[i], e) / e;
    } else {
      values[i] = shot.psi[i - below + 1];
      flux[i] = shot.flux[i - below + 1];
    }
  }
  values[0] = 0.0;

  ShootingResult out{Profile1D(grid, values), lambda, c, 0.0, 0.0, 0.0, best_r[0], best_r[1], flux, iters,
                     converged, diagnostic};
  if (shot.ok) {
    out.gamma_value = shot.end[2];
    const double tail_exponent = std::pow(std::max(shot.end[0], 0.0), 2.0 * p.gamma) - cfg.t_end;
    out.i_value = shot.end[3] + std::exp(tail_exponent);
    try {
      const auto res = el_residual(out.profile, lambda, p, FluxForm::kPowerLaw);
      double m = 0.0;
      for (double v : res) m = std::max(m, std::abs(v));
      out.residual_norm = m;
    } catch (const DomainError&) {
      out.residual_norm = std::numeric_limits<double>::infinity();
    }
  } else {
    out.residual_norm = std::numeric_limits<double>::infinity();
    out.converged = false;
  }
  return out;
}

ShootingConfig seed_from_profile(const Profile1D& psi, double multiplier, const WeightParams& p, ShootingConfig base) {
  const auto t = psi.grid();
  const auto v = psi.values();
  const double e = 1.0 - p.beta;
  // First node past 1e-3: far enough from 0 that the discrete slope is
  // meaningful, close enough that psi still follows c t^{1-beta} / (1 - beta).
  std::size_t i = 1;
  while (i + 1 < t.size() && t[i] < 1e-3) ++i;
  base.lambda_init = multiplier;
  base.slope_coeff_init = e * v[i] / std::pow(t[i], e);
  return base;
}

}  // namespace wmt
