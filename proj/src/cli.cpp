#include "wmt/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wmt/analytic.hpp"
#include "wmt/bounds.hpp"
#include "wmt/core.hpp"
#include "wmt/elsolver.hpp"
#include "wmt/error.hpp"
#include "wmt/functional.hpp"
#include "wmt/io.hpp"
#include "wmt/optimizer.hpp"
#include "wmt/version.hpp"

namespace wmt::cli {

namespace {

using io::json;

struct Common {
  double beta = 0.0;
  std::string betas;
  std::string out;
  std::uint64_t seed = 0;
};

const CLI::Validator kBetaRange = CLI::Validator(
    [](std::string& s) -> std::string {
      double b = 0.0;
      try {
        std::size_t pos = 0;
        b = std::stod(s, &pos);
        if (pos != s.size()) return "beta must be a number";
      } catch (const std::exception&) {
        return "beta must be a number";
      }
      if (!(b >= 0.0 && b < 1.0)) return "beta must lie in [0, 1)";
      return {};
    },
    "in [0,1)", "BETA");

std::vector<double> beta_list(const Common& c) {
  if (c.betas.empty()) return {c.beta};
  std::vector<double> v;
  try {
    v = parse_range(c.betas);
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError("--betas", e.what());
  }
  for (double b : v) {
    if (!(b >= 0.0 && b < 1.0)) throw CLI::ValidationError("--betas", "every beta must lie in [0, 1)");
  }
  return v;
}

class Emitter {
 public:
  Emitter(std::string subcommand, const Common& c, std::ostream& out)
      : subcommand_(std::move(subcommand)), common_(c), out_(out) {}

  json& parameters() { return params_; }

  void emit(const std::string& text) {
    if (common_.out.empty()) {
      out_ << text;
      return;
    }
    const std::filesystem::path path(common_.out);
    io::write_text(path, text);
    io::RunManifest m;
    m.subcommand = subcommand_;
    m.parameters = params_;
    m.seed = common_.seed;
    m.tool_version = kVersion;
    m.timestamp = io::utc_timestamp();
    m.outputs = {path.string()};
    io::write_text(path.string() + ".manifest.json", io::dump(io::manifest_to_json(m)));
    out_ << "wrote " << path.string() << "\n";
  }

 private:
  std::string subcommand_;
  const Common& common_;
  std::ostream& out_;
  json params_ = json::object();
};

std::string kv(const std::string& key, double v) { return key + "=" + io::format_double(v) + "\n"; }

io::ProfileDocument load_profile(const std::string& path) {
  const std::string text = io::read_text(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidProfile(path + ": " + e.what());
  }
  return io::profile_from_json(j);
}

void add_common(CLI::App* sub, Common& c, bool with_betas, bool with_seed) {
  sub->add_option("--beta", c.beta, "Weight exponent")->check(kBetaRange)->capture_default_str();
  if (with_betas) sub->add_option("--betas", c.betas, "Beta range lo:hi:step (overrides --beta)");
  if (with_seed) sub->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
  sub->add_option("--out", c.out, "Write the result to this path plus <path>.manifest.json");
}

struct OptimizeFlags {
  std::size_t grid = 2048;
  double grading = 0.0;
  double tmax = 0.0;
  std::size_t restarts = 2;
  std::size_t max_iters = 20000;
  double tolerance = 1e-6;
};

void add_optimizer_flags(CLI::App* sub, OptimizeFlags& f) {
  sub->add_option("--grid", f.grid, "Optimizer cells")->check(CLI::Range(std::size_t{16}, std::size_t{1} << 22))
      ->capture_default_str();
  sub->add_option("--grading", f.grading, "Grid grading exponent (0 = min(4/(1-beta), 40))")->check(CLI::Range(0.0, 40.0))->capture_default_str();
  sub->add_option("--tmax", f.tmax, "Grid end (0 = automatic)")->check(CLI::NonNegativeNumber)->capture_default_str();
  sub->add_option("--restarts", f.restarts, "Perturbed Moser starts besides cc_phi")->capture_default_str();
  sub->add_option("--max-iters", f.max_iters, "Iteration cap per start")->capture_default_str();
  sub->add_option("--tolerance", f.tolerance, "Relative stationarity tolerance")->check(CLI::PositiveNumber)
      ->capture_default_str();
}

OptimizerConfig optimizer_config(const OptimizeFlags& f, std::uint64_t seed) {
  OptimizerConfig cfg;
  cfg.cells = f.grid;
  cfg.grading = f.grading;
  cfg.t_max = f.tmax;
  cfg.restarts = f.restarts;
  cfg.max_iters = f.max_iters;
  cfg.grad_tolerance = f.tolerance;
  cfg.seed = seed;
  return cfg;
}

json optimizer_params(const OptimizeFlags& f) {
  return json{{"grid", f.grid},         {"grading", f.grading},   {"tmax", f.tmax},
              {"restarts", f.restarts}, {"max_iters", f.max_iters}, {"tolerance", f.tolerance}};
}

}  // namespace

std::vector<double> parse_range(const std::string& spec) {
  auto number = [&](const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad number in range: '" + s + "'");
    }
    if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument("bad number in range: '" + s + "'");
    return v;
  };
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() == 1) return {number(parts[0])};
  if (parts.size() != 3) throw std::invalid_argument("range must be lo:hi:step");
  const double lo = number(parts[0]);
  const double hi = number(parts[1]);
  const double step = number(parts[2]);
  if (!(step > 0.0)) throw std::invalid_argument("range step must be > 0");
  if (hi < lo) throw std::invalid_argument("range end below start");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (count > 100000) throw std::invalid_argument("range too long");
  std::vector<double> v(count);
  // Round to 12 significant digits so 0:0.9:0.3 yields 0.3, not 0.30000000000000004.
  for (std::size_t i = 0; i < count; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", lo + static_cast<double>(i) * step);
    v[i] = std::strtod(buf, nullptr);
  }
  return v;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical tools for the weighted Moser-Trudinger extremal problem on the unit disc", "wmt"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Common common;
  OptimizeFlags opt_flags;
  std::function<void()> action;

  // params
  auto* params = app.add_subcommand("params", "Constants gamma, alpha_beta and the reduced scale");
  add_common(params, common, true, false);
  params->callback([&] {
    action = [&] {
      Emitter e("params", common, out);
      e.parameters() = {{"beta", common.beta}, {"betas", common.betas}};
      std::string text;
      if (common.betas.empty()) {
        const auto p = make_weight_params(common.beta);
        text = kv("beta", p.beta) + kv("gamma", p.gamma) + kv("alpha_beta", p.alpha_beta) +
               kv("reduced_scale", p.reduced_scale);
      } else {
        text = "beta,gamma,alpha_beta,reduced_scale\n";
        for (double b : beta_list(common)) {
          const auto p = make_weight_params(b);
          text += io::format_double(p.beta) + "," + io::format_double(p.gamma) + "," +
                  io::format_double(p.alpha_beta) + "," + io::format_double(p.reduced_scale) + "\n";
        }
      }
      e.emit(text);
    };
  });

  // eval
  std::string profile_path;
  std::optional<double> beta_override;
  auto* eval = app.add_subcommand("eval", "I, Gamma and J of a profile file");
  eval->add_option("--profile", profile_path, "Profile JSON")->required();
  eval->add_option("--beta", beta_override, "Override the beta stored in the file")->check(kBetaRange);
  eval->add_option("--out", common.out, "Write the result to this path plus <path>.manifest.json");
  bool eval_infeasible = false;
  eval->callback([&] {
    action = [&] {
      const auto doc = load_profile(profile_path);
      const auto p = make_weight_params(beta_override.value_or(doc.beta));
      const auto report = functional_i(doc.profile, p);
      const auto u = from_reduced(doc.profile, p);
      json j = io::report_to_json(report);
      j["beta"] = p.beta;
      j["certified"] = report.certified;
      j["j"] = functional_j(u, p);
      j["dirichlet_2d"] = weighted_dirichlet_2d(u, p);
      Emitter e("eval", common, out);
      e.parameters() = {{"profile", profile_path}, {"beta", p.beta}};
      e.emit(io::dump(j));
      eval_infeasible = !report.feasible;
    };
  });

  // moser
  std::vector<double> ks{1.0, 10.0, 100.0};
  std::size_t moser_cells = GridSpec{}.cells;
  auto* moser = app.add_subcommand("moser", "Moser family: closed form against quadrature");
  add_common(moser, common, false, false);
  moser->add_option("--k", ks, "k values (comma separated)")->delimiter(',')->check(CLI::Range(1.0, 1e8))
      ->capture_default_str();
  moser->add_option("--grid", moser_cells, "Cells of the graded segment")->check(CLI::Range(std::size_t{16}, std::size_t{1} << 22))
      ->capture_default_str();
  moser->callback([&] {
    action = [&] {
      const auto p = make_weight_params(common.beta);
      GridSpec spec;
      spec.cells = moser_cells;
      std::string text = "k,closed_form,quadrature,abs_diff,gamma_value\n";
      for (double k : ks) {
        const double closed = moser_value(k);
        const auto r = functional_i(moser_profile(k, p, spec), p);
        text += io::format_double(k) + "," + io::format_double(closed) + "," + io::format_double(r.i_value) + "," +
                io::format_double(std::abs(closed - r.i_value)) + "," + io::format_double(r.gamma_value) + "\n";
      }
      Emitter e("moser", common, out);
      e.parameters() = {{"beta", common.beta}, {"k", ks}, {"grid", moser_cells}};
      e.emit(text);
    };
  });

  // ccfun
  auto* ccfun = app.add_subcommand("ccfun", "Witness profile: value, margin over 1 + e and energy split");
  add_common(ccfun, common, true, false);
  ccfun->callback([&] {
    action = [&] {
      const double ref = cc_reference_value();
      auto row = [&](double b) {
        const auto p = make_weight_params(b);
        const auto r = functional_i(cc_phi(p), p);
        const auto n = cc_weighted_norm(p);
        return std::vector<double>{b, r.i_value, ref, r.i_value - concentration_level_cap(), n.i1, n.i2, n.total};
      };
      std::string text;
      if (common.betas.empty()) {
        const auto v = row(common.beta);
        text = kv("beta", v[0]) + kv("i_value", v[1]) + kv("reference", v[2]) + kv("margin", v[3]) + kv("i1", v[4]) +
               kv("i2", v[5]) + kv("total", v[6]) + "total_le_one=" + (v[6] <= 1.0 ? "true" : "false") + "\n";
      } else {
        text = "beta,i_value,reference,margin,i1,i2,total,total_le_one\n";
        for (double b : beta_list(common)) {
          const auto v = row(b);
          for (double x : v) text += io::format_double(x) + ",";
          text += v[6] <= 1.0 ? "true\n" : "false\n";
        }
      }
      Emitter e("ccfun", common, out);
      e.parameters() = {{"beta", common.beta}, {"betas", common.betas}};
      e.emit(text);
    };
  });

  // bounds
  std::size_t trials = 1000;
  auto* bounds = app.add_subcommand("bounds", "Randomized property suites for the bounds");
  bounds->add_option("--trials", trials, "Instances per suite")->check(CLI::Range(std::size_t{1}, std::size_t{10000000}))
      ->capture_default_str();
  bounds->add_option("--seed", common.seed, "RNG seed")->capture_default_str();
  bounds->add_option("--out", common.out, "Write the result to this path plus <path>.manifest.json");
  bounds->callback([&] {
    action = [&] {
      std::string text = "suite,trials,violations,worst_ratio\n";
      for (const auto& s : run_bound_suites(trials, common.seed)) {
        text += s.name + "," + std::to_string(s.trials) + "," + std::to_string(s.violations) + "," +
                io::format_double(s.worst_ratio) + "\n";
      }
      Emitter e("bounds", common, out);
      e.parameters() = {{"trials", trials}};
      e.emit(text);
    };
  });

  // diagnose
  std::optional<double> diag_k;
  auto* diag = app.add_subcommand("diagnose", "Concentration diagnostics of a profile file or a Moser profile");
  add_common(diag, common, false, false);
  auto* diag_profile = diag->add_option("--profile", profile_path, "Profile JSON (its beta is used)");
  diag->add_option("--k", diag_k, "Use moser_profile(k) instead of a file")->check(CLI::Range(1.0, 1e8))->excludes(diag_profile);
  diag->callback([&] {
    action = [&] {
      if (profile_path.empty() && !diag_k) throw CLI::RequiredError("--profile or --k");
      WeightParams p;
      std::optional<Profile1D> psi;
      if (diag_k) {
        p = make_weight_params(common.beta);
        psi = moser_profile(*diag_k, p);
      } else {
        auto doc = load_profile(profile_path);
        p = make_weight_params(doc.beta);
        psi = std::move(doc.profile);
      }
      json j = io::diagnostics_to_json(diagnose(*psi, p));
      j["beta"] = p.beta;
      Emitter e("diagnose", common, out);
      e.parameters() = {{"beta", p.beta}, {"profile", profile_path}, {"k", diag_k ? json(*diag_k) : json(nullptr)}};
      e.emit(io::dump(j));
    };
  });

  // optimize
  auto* optimize = app.add_subcommand("optimize", "Constrained maximization of I on {Gamma = 1}");
  add_common(optimize, common, false, true);
  add_optimizer_flags(optimize, opt_flags);
  optimize->add_option("--profile", profile_path, "Start from this profile (single run) instead of the multi-start set");
  bool not_converged = false;
  optimize->callback([&] {
    action = [&] {
      const auto p = make_weight_params(common.beta);
      const auto cfg = optimizer_config(opt_flags, common.seed);
      OptimizationResult r = [&] {
        if (!profile_path.empty()) return maximize(p, cfg, load_profile(profile_path).profile);
        return maximize_multistart(p, cfg).best;
      }();
      Emitter e("optimize", common, out);
      e.parameters() = optimizer_params(opt_flags);
      e.parameters()["beta"] = common.beta;
      e.parameters()["profile"] = profile_path;
      e.emit(io::dump(io::optimization_to_json(r, p)));
      not_converged = !r.converged;
    };
  });

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Multi-start maximization over a beta range, as CSV");
  sweep->add_option("--betas", common.betas, "Beta range lo:hi:step")->required();
  sweep->add_option("--seed", common.seed, "RNG seed")->capture_default_str();
  sweep->add_option("--out", common.out, "Write the result to this path plus <path>.manifest.json");
  add_optimizer_flags(sweep, opt_flags);
  sweep->callback([&] {
    action = [&] {
      const auto betas = beta_list(common);
      const auto rows = beta_sweep(betas, optimizer_config(opt_flags, common.seed));
      Emitter e("sweep", common, out);
      e.parameters() = optimizer_params(opt_flags);
      e.parameters()["betas"] = common.betas;
      e.emit(io::sweep_csv(rows));
      for (const auto& row : rows) not_converged = not_converged || !row.converged || !row.error.empty();
    };
  });

  // elshoot
  std::optional<double> lambda_seed;
  std::optional<double> c_seed;
  ShootingConfig shoot_cfg;
  auto* elshoot = app.add_subcommand("elshoot", "Euler-Lagrange shooting for the radial maximizer");
  add_common(elshoot, common, false, false);
  elshoot->add_option("--lambda", lambda_seed, "Multiplier guess")->check(CLI::PositiveNumber);
  elshoot->add_option("--c", c_seed, "Guess for the flux at the origin")->check(CLI::PositiveNumber);
  elshoot->add_option("--profile", profile_path, "Seed from an optimize result (uses its multiplier)");
  elshoot->add_option("--tend", shoot_cfg.t_end, "Integration end")->check(CLI::Range(5.0, 700.0))->capture_default_str();
  elshoot->add_option("--out-cells", shoot_cfg.output_cells, "Output profile cells")->check(CLI::Range(std::size_t{16}, std::size_t{1} << 22))
      ->capture_default_str();
  add_optimizer_flags(elshoot, opt_flags);
  elshoot->callback([&] {
    action = [&] {
      const auto p = make_weight_params(common.beta);
      ShootingConfig cfg = shoot_cfg;
      std::string seed_source = "flags";
      if (!lambda_seed || !c_seed) {
        if (!profile_path.empty()) {
          const std::string text = io::read_text(profile_path);
          json j;
          try {
            j = json::parse(text);
          } catch (const json::exception& e) {
            throw InvalidProfile(profile_path + ": " + e.what());
          }
          const auto doc = io::profile_from_json(j);
          if (!j.contains("multiplier") || !j["multiplier"].is_number()) {
            throw InvalidProfile(profile_path + ": no multiplier; pass --lambda");
          }
          cfg = seed_from_profile(doc.profile, j["multiplier"].get<double>(), p, cfg);
          seed_source = "profile";
        } else {
          OptimizerConfig ocfg = optimizer_config(opt_flags, common.seed);
          const auto r = maximize(p, ocfg, cc_phi(p));
          cfg = seed_from_profile(r.profile, r.multiplier, p, cfg);
          seed_source = "optimizer";
        }
      }
      if (lambda_seed) cfg.lambda_init = *lambda_seed;
      if (c_seed) cfg.slope_coeff_init = *c_seed;
      const auto r = shoot(cfg, p);
      Emitter e("elshoot", common, out);
      e.parameters() = {{"beta", common.beta},        {"lambda_init", cfg.lambda_init},
                        {"c_init", cfg.slope_coeff_init}, {"seed_source", seed_source},
                        {"t_end", cfg.t_end},          {"output_cells", cfg.output_cells},
                        {"profile", profile_path}};
      e.emit(io::dump(io::shooting_to_json(r, common.beta)));
      not_converged = !r.converged;
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kArgumentError;
  }

  try {
    if (action) action();
  } catch (const CLI::Error& e) {
    err << "wmt: " << e.what() << "\n";
    return kArgumentError;
  } catch (const std::invalid_argument& e) {
    // InvalidProfile and DegenerateInput land here too.
    err << "wmt: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "wmt: " << e.what() << "\n";
    return kInvalidInput;
  }
  if (eval_infeasible) {
    err << "wmt: profile is infeasible (Gamma > 1)\n";
    return kInvalidInput;
  }
  if (not_converged) {
    err << "wmt: did not converge\n";
    return kNonConvergence;
  }
  return kOk;
}

}  // namespace wmt::cli
