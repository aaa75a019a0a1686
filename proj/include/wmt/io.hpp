#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "wmt/bounds.hpp"
#include "wmt/elsolver.hpp"
#include "wmt/functional.hpp"
#include "wmt/optimizer.hpp"
#include "wmt/profile.hpp"

namespace wmt::io {

using nlohmann::json;

/// Shortest decimal form that round-trips is used inside JSON; CSV and plain
/// text use 17 significant digits via format_double. Both are locale-free.
std::string format_double(double v);

struct ProfileDocument {
  double beta = 0.0;
  Profile1D profile;
};

/// {"beta", "grid", "values", "tail": "constant"}.
json profile_to_json(const Profile1D& psi, double beta);
/// Extra keys are ignored. Throws InvalidProfile on a malformed document or
/// when the profile invariants fail.
ProfileDocument profile_from_json(const json& j);

/// {"i", "gamma", "trunc", "feasible"}.
json report_to_json(const FunctionalReport& r);
FunctionalReport report_from_json(const json& j);

/// Field names of ConcentrationDiagnostics; absent values are null.
json diagnostics_to_json(const ConcentrationDiagnostics& d);
ConcentrationDiagnostics diagnostics_from_json(const json& j);

/// Profile document plus {"lambda", "residual"} and the remaining shot data.
json shooting_to_json(const ShootingResult& r, double beta);

json optimization_to_json(const OptimizationResult& r, const WeightParams& p);

struct RunManifest {
  std::string subcommand;
  json parameters = json::object();
  std::uint64_t seed = 0;
  std::string tool_version;
  std::string timestamp;
  std::vector<std::string> outputs;
};
json manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const json& j);
/// UTC, ISO 8601.
std::string utc_timestamp();

/// Header plus one line per row. Optional crossing_a and failed rows print
/// as empty / "nan".
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_sweep_csv(const std::string& text);
inline constexpr const char* kSweepHeader =
    "beta,gamma,alpha_beta,i_max,gamma_value,iterations,converged,stationarity_residual,crossing_a";

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
/// Pretty-printed with a trailing newline.
std::string dump(const json& j);

}  // namespace wmt::io
