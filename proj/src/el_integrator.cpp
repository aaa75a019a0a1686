#include "el_integrator.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <boost/numeric/ublas/matrix.hpp>
#include <boost/numeric/ublas/vector.hpp>
#include <cmath>
#include <utility>

namespace wmt::detail {

namespace {

namespace odeint = boost::numeric::odeint;
using State = boost::numeric::ublas::vector<double>;
using Matrix = boost::numeric::ublas::matrix<double>;

constexpr double kExponentGuard = 700.0;

struct BlowUp {};

double abs_pow(double a, double p) {
  if (a == 0.0) return p == 0.0 ? 1.0 : 0.0;
  return std::pow(a, p);
}

// State (psi, F = t^beta psi', G = accumulated Gamma, I = accumulated
// integral, tau = t). Time is carried as a component so the system is
// autonomous: odeint's rosenbrock4 in Boost 1.74 loses accuracy on
// explicitly time-dependent right-hand sides.
struct Rhs {
  ReducedSystem s;

  double exponential(double pp, double t) const {
    const double x = abs_pow(pp, 2.0 * s.gamma) - t;
    if (x > kExponentGuard) throw BlowUp{};
    return std::exp(x);
  }

  void operator()(const State& y, State& dy, double /*t*/) const {
    const double t = y[4];
    const double pp = std::max(y[0], 0.0);
    const double e = exponential(pp, t);
    const double tw = s.beta == 0.0 ? 1.0 : std::pow(t, -s.beta);
    dy[0] = y[1] * tw;
    dy[1] = -abs_pow(pp, 2.0 * s.gamma - 1.0) * e / s.lambda;
    dy[2] = y[1] * y[1] * tw / (1.0 - s.beta);
    dy[3] = e;
    dy[4] = 1.0;
  }
};

struct Jac {
  ReducedSystem s;

  void operator()(const State& y, Matrix& j, const double& /*t*/, State& dfdt) const {
    const double t = y[4];
    const double pp = std::max(y[0], 0.0);
    const Rhs f{s};
    const double e = f.exponential(pp, t);
    const double tw = s.beta == 0.0 ? 1.0 : std::pow(t, -s.beta);
    const double dtw = -s.beta * tw / t;
    const double p = 2.0 * s.gamma;
    const double source = abs_pow(pp, p - 1.0) * e;
    const double dsource = y[0] > 0.0 ? ((p - 1.0) * abs_pow(pp, p - 2.0) + p * abs_pow(pp, 2.0 * p - 2.0)) * e : 0.0;
    j.clear();
    j(0, 1) = tw;
    j(0, 4) = y[1] * dtw;
    j(1, 0) = -dsource / s.lambda;
    j(1, 4) = source / s.lambda;
    j(2, 1) = 2.0 * y[1] * tw / (1.0 - s.beta);
    j(2, 4) = y[1] * y[1] * dtw / (1.0 - s.beta);
    j(3, 0) = y[0] > 0.0 ? p * abs_pow(pp, p - 1.0) * e : 0.0;
    j(3, 4) = -e;
    for (std::size_t k = 0; k < 5; ++k) dfdt[k] = 0.0;
  }
};

}  // namespace

IntegratorRun integrate_reduced(const ReducedSystem& sys, const std::array<double, 4>& start, double t0,
                                double t1, double rtol, double atol, const std::vector<double>& times) {
  IntegratorRun run;
  State y(5);
  for (int k = 0; k < 4; ++k) y[k] = start[k];
  y[4] = t0;
  const double dt = 1e-3 * t0;
  try {
    auto stepper = odeint::make_controlled(atol, rtol, odeint::rosenbrock4<double>());
    auto system = std::make_pair(Rhs{sys}, Jac{sys});
    if (times.empty()) {
      odeint::integrate_adaptive(stepper, system, y, t0, t1, dt);
    } else {
      odeint::integrate_times(stepper, system, y, times.begin(), times.end(), dt, [&run](const State& s, double) {
        run.psi.push_back(s[0]);
        run.flux.push_back(s[1]);
      });
    }
  } catch (const BlowUp&) {
    return run;
  }
  for (int k = 0; k < 4; ++k) run.end[k] = y[k];
  run.ok = std::isfinite(y[0]) && std::isfinite(y[1]) && std::isfinite(y[2]) && std::isfinite(y[3]);
  return run;
}

}  // namespace wmt::detail
