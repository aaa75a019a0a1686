#include "wmt/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "wmt/analytic.hpp"
#include "wmt/error.hpp"
#include "wmt/parallel.hpp"

namespace wmt {

namespace {

constexpr double kScanStep = 1e-2;
constexpr double kRootTolerance = 1e-10;
constexpr double kTangencyWindow = 1e-6;

double abs_pow(double a, double p) { return a == 0.0 ? 0.0 : std::pow(a, p); }

// expm1(x) / x with the removable singularity filled in.
double exprel(double x) { return std::abs(x) < 1e-300 ? 1.0 : std::expm1(x) / x; }

// g(t) = |psi|^{2 gamma}(t) - t + 2 log t, walking cells forward.
class CrossingFunction {
 public:
  CrossingFunction(const Profile1D& psi, const WeightParams& p) : psi_(psi), power_(2.0 * p.gamma) {}

  double operator()(double t) {
    const auto grid = psi_.grid();
    double v;
    if (t >= psi_.t_max()) {
      v = psi_.last_value();
    } else {
      if (t < grid[cell_] || t > grid[cell_ + 1]) cell_ = psi_.locate(t);
      while (t > grid[cell_ + 1]) ++cell_;
      const auto vals = psi_.values();
      const double l = (t - grid[cell_]) / (grid[cell_ + 1] - grid[cell_]);
      v = (1.0 - l) * vals[cell_] + l * vals[cell_ + 1];
    }
    return abs_pow(std::abs(v), power_) - t + 2.0 * std::log(t);
  }

 private:
  const Profile1D& psi_;
  double power_;
  std::size_t cell_ = 0;
};

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t suite, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(suite), static_cast<std::uint32_t>(trial)};
  return std::mt19937_64(seq);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

struct TrialOutcome {
  bool violated = false;
  double ratio = 0.0;
};

}  // namespace

HolderGrowth holder_growth(const Profile1D& psi, const WeightParams& p, double a, double t) {
  if (!(a >= 0.0)) throw DomainError("holder_growth: A must be >= 0");
  if (!(t >= a)) throw DomainError("holder_growth: need A <= t");
  HolderGrowth out;
  out.lhs = psi.eval(t) - psi.eval(a);
  const double energy = gamma_energy_between(psi, p, a, t);
  const double e = 1.0 - p.beta;
  out.rhs = std::sqrt(energy) * std::sqrt(std::pow(t, e) - std::pow(a, e));
  return out;
}

double cc_tail_bound(double c, double delta) {
  if (!(c > 0.0)) throw DomainError("cc_tail_bound: c must be > 0");
  if (!(delta > 0.0)) throw DomainError("cc_tail_bound: delta must be > 0");
  return std::exp(c * c * delta / 4.0 + 1.0);
}

double weighted_tail_bound(double phi_at_a, double delta, double a, const WeightParams& p) {
  if (!(a > 0.0)) throw DomainError("weighted_tail_bound: a must be > 0");
  if (!(phi_at_a >= 0.0)) throw DomainError("weighted_tail_bound: phi(a) must be >= 0");
  if (!(delta >= 0.0)) throw DomainError("weighted_tail_bound: delta must be >= 0");
  const double rest = 1.0 - p.gamma * delta;
  if (!(rest > 0.0)) throw PreconditionViolation("weighted_tail_bound: requires gamma * delta < 1");
  const double P = abs_pow(phi_at_a, 2.0 * p.gamma);
  return std::exp(1.0 - a + P + p.gamma * P * delta / rest) / rest;
}

CrossingScan scan_crossing(const Profile1D& psi, const WeightParams& p) {
  CrossingScan out;
  CrossingFunction g(psi, p);
  const double end = std::max(psi.t_max(), 2.0);
  double lo = 1.0;
  double g_lo = g(lo);
  out.max_g = g_lo;
  if (g_lo >= 0.0) {
    out.a = 1.0;
    return out;
  }
  const auto steps = static_cast<std::size_t>(std::ceil((end - 1.0) / kScanStep));
  for (std::size_t j = 1; j <= steps; ++j) {
    const double hi = std::min(end, 1.0 + static_cast<double>(j) * kScanStep);
    const double g_hi = g(hi);
    out.max_g = std::max(out.max_g, g_hi);
    if (g_hi >= 0.0) {
      double a = lo;
      double b = hi;
      double m = hi;
      double g_m = g_hi;
      for (int it = 0; it < 200 && std::abs(g_m) > kRootTolerance; ++it) {
        m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        g_m = g(m);
        if (g_m < 0.0) {
          a = m;
        } else {
          b = m;
        }
      }
      out.a = m;
      return out;
    }
    lo = hi;
    g_lo = g_hi;
  }
  out.tangency_suspected = out.max_g > -kTangencyWindow;
  return out;
}

std::optional<double> crossing_point(const Profile1D& psi, const WeightParams& p) {
  return scan_crossing(psi, p).a;
}

ConcentrationDiagnostics diagnose(const Profile1D& psi, const WeightParams& p, const QuadratureConfig& q) {
  ConcentrationDiagnostics d;
  const CrossingScan scan = scan_crossing(psi, p);
  d.tangency_suspected = scan.tangency_suspected;
  if (!scan.a) {
    d.head_integral = functional_i(psi, p, q).i_value;
    d.tail_integral = 0.0;
    return d;
  }
  const double a = *scan.a;
  d.crossing_a = a;
  const double delta = gamma_energy_between(psi, p, a, std::numeric_limits<double>::infinity());
  d.tail_energy_delta = delta;
  const auto [head, tail] = split_functional_i(psi, p, a, q);
  d.head_integral = head;
  d.tail_integral = tail;
  const double rest = 1.0 - p.gamma * delta;
  d.gamma_m = rest;
  const double phi_a = psi.eval(a);
  if (rest > 0.0) {
    const double P = abs_pow(std::abs(phi_a), 2.0 * p.gamma);
    d.k_quantity = (P - a) + p.gamma * delta * P / rest;
    if (phi_a >= 0.0) d.tail_bound = weighted_tail_bound(phi_a, delta, a, p);
  }
  if (gamma_energy(psi, p) <= 1.0 + std::max(q.feasibility_tolerance, kWqSlack) && a > 1.0) {
    const double y = 2.0 * std::log(a) / a;
    if (y < 1.0) {
      const double bound = -std::expm1(std::log1p(-y) / p.gamma);
      d.wq_bound = bound;
      d.wq_holds = delta <= bound + kWqSlack;
    }
  }
  return d;
}

EnvelopeTerms km_envelope(double x, const WeightParams& p) {
  if (!(x > 0.0)) throw DomainError("km_envelope: x must be > 0");
  const double lx = std::log(x);
  const double y = 2.0 * lx / x;
  if (!(1.0 - y > 0.0)) throw DomainError("km_envelope: requires 1 - 2 log x / x > 0");
  // 1 - (1 - y)^{1/gamma} without cancellation.
  const double gap = -std::expm1(std::log1p(-y) / p.gamma);
  EnvelopeTerms out;
  out.term_log = lx * gap;
  if (p.gamma == 1.0) {
    out.term_linear = 0.0;
  } else {
    // gamma x (gap - y / gamma); gap - y/gamma = O(y^2), so expand for small y.
    double diff;
    if (y < 1e-3) {
      const double r = 1.0 / p.gamma;
      // 1 - (1-y)^r = r y + r(1-r)/2 y^2 + r(1-r)(2-r)/6 y^3 + ...
      double term = r * y;
      diff = 0.0;
      for (int n = 1; n < 12; ++n) {
        term *= (static_cast<double>(n) - r) / static_cast<double>(n + 1) * y;
        diff += term;
      }
    } else {
      diff = gap - y / p.gamma;
    }
    out.term_linear = p.gamma * x * diff;
  }
  return out;
}

double concentration_level_cap() { return 1.0 + std::numbers::e; }

double growth_inequality_threshold(double mu, double g, double p) {
  if (!(g > 0.0) || !(mu > g)) throw DomainError("growth_inequality_threshold: need mu > g > 0");
  if (!(p > 1.0)) throw DomainError("growth_inequality_threshold: need p > 1");
  const double end = 1.0 / (mu - g);
  constexpr std::size_t kSteps = 10000;
  double threshold = 0.0;
  for (std::size_t j = 0; j <= kSteps; ++j) {
    const double y = end * static_cast<double>(j) / static_cast<double>(kSteps);
    if (!growth_inequality_holds(y, mu, g, p)) {
      threshold = end * static_cast<double>(j + 1) / static_cast<double>(kSteps);
    }
  }
  return std::min(threshold, end);
}

bool growth_inequality_holds(double y, double mu, double g, double p) {
  const double lhs = std::pow(1.0 + g * y, p);
  const double rhs = 1.0 + std::pow(mu * y, p);
  return lhs <= rhs * (1.0 + 1e-13);
}

double power_inequality_threshold(double mu) {
  if (!(mu > 0.0)) throw DomainError("power_inequality_threshold: need mu > 0");
  constexpr std::size_t kSteps = 10000;
  double threshold = 0.0;
  for (std::size_t j = 1; j <= kSteps; ++j) {
    const double x = static_cast<double>(j) / static_cast<double>(kSteps);
    if (!power_inequality_holds(x, mu)) break;
    threshold = x;
  }
  return threshold;
}

bool power_inequality_holds(double x, double mu) {
  const double lhs = std::pow(1.0 - x, mu);
  const double rhs = 1.0 - (mu + 1.0) * x;
  return lhs >= rhs - 1e-15;
}

double exp_linear_tail(const Profile1D& phi, double c, double a) {
  if (!(a >= 0.0)) throw DomainError("exp_linear_tail: a must be >= 0");
  const auto grid = phi.grid();
  double sum = 0.0;
  for (std::size_t i = 0; i < phi.cells(); ++i) {
    const double lo = std::max(grid[i], a);
    const double hi = grid[i + 1];
    if (hi <= lo) continue;
    const double slope = c * phi.derivative_on_cell(i) - 1.0;
    const double width = hi - lo;
    sum += std::exp(c * phi.eval(lo) - lo) * width * exprel(slope * width);
  }
  sum += std::exp(c * phi.last_value() - std::max(a, phi.t_max()));
  return sum;
}

Profile1D random_profile(std::uint64_t seed, const WeightParams& p, const RandomProfileOptions& opt) {
  std::mt19937_64 rng(seed);
  const double t_max = uniform(rng, opt.t_max_min, opt.t_max_max);
  std::vector<double> grid = make_graded_grid(t_max, opt.cells, opt.grading);
  std::vector<double> values(grid.size(), 0.0);
  const int kind = std::uniform_int_distribution<int>(0, 2)(rng);
  if (kind == 0) {
    std::normal_distribution<double> normal;
    const double decay = uniform(rng, 2.0, t_max);
    for (std::size_t i = 1; i < grid.size(); ++i) {
      double s = normal(rng) * std::exp(-0.5 * (grid[i] + grid[i - 1]) / decay);
      if (opt.nonneg) s = std::abs(s);
      values[i] = values[i - 1] + s * (grid[i] - grid[i - 1]);
    }
  } else if (kind == 1) {
    const int ramps = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int m = 0; m < ramps; ++m) {
      const double amp = opt.nonneg ? uniform(rng, 0.0, 1.0) : uniform(rng, -1.0, 1.0);
      const double start = uniform(rng, 0.0, 0.5 * t_max);
      const double width = uniform(rng, 0.1, 0.5 * t_max);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        values[i] += amp * std::clamp((grid[i] - start) / width, 0.0, 1.0);
      }
    }
  } else {
    const double k = uniform(rng, 1.0, t_max);
    const double wobble = opt.nonneg ? uniform(rng, 0.0, 0.2) : uniform(rng, 0.0, 1.5);
    const double freq = uniform(rng, 0.1, 3.0);
    const double shift = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      values[i] = moser_psi(k, p, grid[i]) * (1.0 + wobble * std::sin(freq * grid[i] + shift));
    }
  }
  values[0] = 0.0;
  Profile1D raw(grid, values);
  double energy = gamma_energy(raw, p);
  if (!(energy > 0.0)) {
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = grid[i] / t_max;
    raw = Profile1D(grid, values);
    energy = gamma_energy(raw, p);
  }
  return raw.scaled(std::sqrt(opt.energy / energy));
}

std::vector<SuiteResult> run_bound_suites(std::size_t trials, std::uint64_t seed) {
  using Trial = TrialOutcome (*)(std::mt19937_64&);

  const Trial holder = [](std::mt19937_64& rng) {
    const WeightParams p = make_weight_params(uniform(rng, 0.0, 0.95));
    RandomProfileOptions opt;
    opt.nonneg = uniform(rng, 0.0, 1.0) < 0.5;
    opt.energy = uniform(rng, 0.01, 2.0);
    const Profile1D psi = random_profile(rng(), p, opt);
    double a = uniform(rng, 0.0, 1.1 * psi.t_max());
    double t = uniform(rng, 0.0, 1.1 * psi.t_max());
    if (a > t) std::swap(a, t);
    const HolderGrowth h = holder_growth(psi, p, a, t);
    TrialOutcome out;
    out.violated = h.lhs > h.rhs + 1e-12 * (1.0 + std::abs(h.rhs));
    out.ratio = h.rhs > 0.0 ? h.lhs / h.rhs : 0.0;
    return out;
  };

  const Trial cc = [](std::mt19937_64& rng) {
    const WeightParams p = make_weight_params(0.0);
    const double delta = uniform(rng, 0.01, 2.0);
    RandomProfileOptions opt;
    opt.nonneg = uniform(rng, 0.0, 1.0) < 0.5;
    opt.energy = delta * uniform(rng, 0.5, 1.0);
    const Profile1D phi = random_profile(rng(), p, opt);
    const double c = uniform(rng, 0.1, 5.0);
    const double a = uniform(rng, 0.0, 50.0);
    const double observed = exp_linear_tail(phi, c, a);
    const double bound = cc_tail_bound(c, delta);
    return TrialOutcome{observed > bound * (1.0 + 1e-12), observed / bound};
  };

  const Trial weighted = [](std::mt19937_64& rng) {
    const WeightParams p = make_weight_params(uniform(rng, 0.0, 0.9));
    RandomProfileOptions opt;
    opt.energy = uniform(rng, 0.3, 1.0);
    const Profile1D psi = random_profile(rng(), p, opt);
    const double inf = std::numeric_limits<double>::infinity();
    double a = uniform(rng, 0.05, psi.t_max());
    double delta = gamma_energy_between(psi, p, a, inf);
    while (p.gamma * delta >= 1.0) {
      a = 0.5 * (a + psi.t_max());
      delta = gamma_energy_between(psi, p, a, inf);
    }
    QuadratureConfig q;
    q.estimate_error = false;
    const double observed = split_functional_i(psi, p, a, q).second;
    const double bound = weighted_tail_bound(psi.eval(a), delta, a, p);
    return TrialOutcome{observed > bound * (1.0 + 1e-9), observed / bound};
  };

  const Trial wq = [](std::mt19937_64& rng) {
    const WeightParams p = make_weight_params(uniform(rng, 0.0, 0.9));
    const double k = std::exp(uniform(rng, std::log(4.0), std::log(400.0)));
    GridSpec spec;
    spec.cells = 1024;
    spec.tail_cells = 16;
    Profile1D base = moser_profile(k, p, spec);
    const double eps = uniform(rng, 0.0, 0.3);
    const double start = uniform(rng, 0.0, k);
    const double width = uniform(rng, 0.5, k);
    std::vector<double> v(base.values().begin(), base.values().end());
    const auto grid = base.grid();
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] += eps * std::clamp((grid[i] - start) / width, 0.0, 1.0);
    }
    Profile1D psi(std::vector<double>(grid.begin(), grid.end()), v);
    psi = psi.scaled(1.0 / std::sqrt(gamma_energy(psi, p)));
    if (!crossing_point(psi, p)) psi = base.scaled(1.0 / std::sqrt(gamma_energy(base, p)));
    const ConcentrationDiagnostics d = diagnose(psi, p);
    TrialOutcome out;
    if (!d.wq_holds) {
      out.violated = true;
      return out;
    }
    out.violated = !*d.wq_holds;
    out.ratio = *d.wq_bound > 0.0 ? *d.tail_energy_delta / *d.wq_bound : 0.0;
    return out;
  };

  const Trial growth = [](std::mt19937_64& rng) {
    const double g = uniform(rng, 0.05, 5.0);
    const double mu = g * (1.0 + uniform(rng, 0.01, 2.0));
    const double pw = uniform(rng, 1.0 + 1e-6, 4.0);
    const double y0 = growth_inequality_threshold(mu, g, pw);
    const double end = 1.0 / (mu - g);
    const double y = uniform(rng, 0.0, 1.0) < 0.5 ? uniform(rng, y0, end) : end * (1.0 + uniform(rng, 0.0, 10.0));
    const double lhs = std::pow(1.0 + g * y, pw);
    const double rhs = 1.0 + std::pow(mu * y, pw);
    return TrialOutcome{!growth_inequality_holds(y, mu, g, pw), lhs / rhs};
  };

  const Trial power = [](std::mt19937_64& rng) {
    const double mu = uniform(rng, 1e-6, 5.0);
    const double x0 = power_inequality_threshold(mu);
    const double x = uniform(rng, 0.0, 1.0) * x0;
    const double rhs = 1.0 - (mu + 1.0) * x;
    const double lhs = std::pow(1.0 - x, mu);
    TrialOutcome out;
    out.violated = x0 <= 0.0 || !power_inequality_holds(x, mu);
    out.ratio = lhs > 0.0 ? rhs / lhs : 0.0;
    return out;
  };

  const std::vector<std::pair<std::string, Trial>> suites{
      {"holder_growth", holder},      {"cc_tail_bound", cc},           {"weighted_tail_bound", weighted},
      {"wq_energy_bound", wq},        {"growth_inequality", growth},   {"power_inequality", power},
  };

  std::vector<SuiteResult> results;
  for (std::size_t s = 0; s < suites.size(); ++s) {
    std::vector<TrialOutcome> outcomes(trials);
    const Trial fn = suites[s].second;
    parallel_for(trials, [&](std::size_t i) {
      auto rng = trial_rng(seed, s, i);
      outcomes[i] = fn(rng);
    });
    SuiteResult r;
    r.name = suites[s].first;
    r.trials = trials;
    for (const auto& o : outcomes) {
      if (o.violated) ++r.violations;
      r.worst_ratio = std::max(r.worst_ratio, o.ratio);
    }
    results.push_back(r);
  }
  return results;
}

}  // namespace wmt
