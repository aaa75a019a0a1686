#include "wmt/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "wmt/error.hpp"

namespace wmt::io {

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("bad number in CSV: " + s);
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

json profile_to_json(const Profile1D& psi, double beta) {
  json j;
  j["beta"] = beta;
  j["grid"] = std::vector<double>(psi.grid().begin(), psi.grid().end());
  j["values"] = std::vector<double>(psi.values().begin(), psi.values().end());
  j["tail"] = "constant";
  return j;
}

ProfileDocument profile_from_json(const json& j) {
  try {
    if (!j.is_object()) throw InvalidProfile("profile document must be a JSON object");
    for (const char* key : {"beta", "grid", "values", "tail"}) {
      if (!j.contains(key)) throw InvalidProfile(std::string("profile document lacks \"") + key + "\"");
    }
    if (j.at("tail") != "constant") throw InvalidProfile("profile tail must be \"constant\"");
    const double beta = j.at("beta").get<double>();
    auto grid = j.at("grid").get<std::vector<double>>();
    auto values = j.at("values").get<std::vector<double>>();
    return ProfileDocument{beta, Profile1D(std::move(grid), std::move(values))};
  } catch (const json::exception& e) {
    throw InvalidProfile(std::string("malformed profile document: ") + e.what());
  }
}

json report_to_json(const FunctionalReport& r) {
  return json{{"i", r.i_value}, {"gamma", r.gamma_value}, {"trunc", r.truncation_bound}, {"feasible", r.feasible}};
}

FunctionalReport report_from_json(const json& j) {
  FunctionalReport r;
  r.i_value = j.at("i").get<double>();
  r.gamma_value = j.at("gamma").get<double>();
  r.truncation_bound = j.at("trunc").get<double>();
  r.feasible = j.at("feasible").get<bool>();
  return r;
}

json diagnostics_to_json(const ConcentrationDiagnostics& d) {
  json j;
  j["crossing_a"] = optional_number(d.crossing_a);
  j["tail_energy_delta"] = optional_number(d.tail_energy_delta);
  j["k_quantity"] = optional_number(d.k_quantity);
  j["head_integral"] = d.head_integral;
  j["tail_integral"] = d.tail_integral;
  j["tail_bound"] = optional_number(d.tail_bound);
  j["gamma_m"] = optional_number(d.gamma_m);
  j["wq_bound"] = optional_number(d.wq_bound);
  j["wq_holds"] = d.wq_holds ? json(*d.wq_holds) : json(nullptr);
  j["tangency_suspected"] = d.tangency_suspected;
  return j;
}

ConcentrationDiagnostics diagnostics_from_json(const json& j) {
  ConcentrationDiagnostics d;
  d.crossing_a = read_optional(j, "crossing_a");
  d.tail_energy_delta = read_optional(j, "tail_energy_delta");
  d.k_quantity = read_optional(j, "k_quantity");
  d.head_integral = j.at("head_integral").get<double>();
  d.tail_integral = j.at("tail_integral").get<double>();
  d.tail_bound = read_optional(j, "tail_bound");
  d.gamma_m = read_optional(j, "gamma_m");
  d.wq_bound = read_optional(j, "wq_bound");
  if (j.contains("wq_holds") && !j.at("wq_holds").is_null()) d.wq_holds = j.at("wq_holds").get<bool>();
  d.tangency_suspected = j.value("tangency_suspected", false);
  return d;
}

json shooting_to_json(const ShootingResult& r, double beta) {
  json j = profile_to_json(r.profile, beta);
  j["lambda"] = r.lambda;
  j["residual"] = r.residual_norm;
  j["slope_coeff"] = r.slope_coeff;
  j["gamma_value"] = r.gamma_value;
  j["i_value"] = r.i_value;
  j["flux_residual"] = r.flux_residual;
  j["energy_residual"] = r.energy_residual;
  j["outer_iterations"] = r.outer_iterations;
  j["converged"] = r.converged;
  j["diagnostic"] = r.diagnostic;
  return j;
}

json optimization_to_json(const OptimizationResult& r, const WeightParams& p) {
  json j = profile_to_json(r.profile, p.beta);
  j["i_value"] = r.i_value;
  j["gamma_value"] = r.gamma_value;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["stationarity_residual"] = r.stationarity_residual;
  j["tangent_gradient_norm"] = r.tangent_gradient_norm;
  j["multiplier"] = r.multiplier;
  j["stop_reason"] = r.stop_reason;
  j["ascent_trace"] = r.ascent_trace;
  return j;
}

json manifest_to_json(const RunManifest& m) {
  return json{{"subcommand", m.subcommand}, {"parameters", m.parameters}, {"seed", m.seed},
              {"tool_version", m.tool_version}, {"timestamp", m.timestamp}, {"outputs", m.outputs}};
}

RunManifest manifest_from_json(const json& j) {
  RunManifest m;
  m.subcommand = j.at("subcommand").get<std::string>();
  m.parameters = j.at("parameters");
  m.seed = j.at("seed").get<std::uint64_t>();
  m.tool_version = j.at("tool_version").get<std::string>();
  m.timestamp = j.at("timestamp").get<std::string>();
  m.outputs = j.at("outputs").get<std::vector<std::string>>();
  return m;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = kSweepHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += format_double(r.beta) + ',' + format_double(r.gamma) + ',' + format_double(r.alpha_beta) + ',' +
           format_double(r.i_max) + ',' + format_double(r.gamma_value) + ',' + std::to_string(r.iterations) + ',' +
           (r.converged ? "true" : "false") + ',' + format_double(r.stationarity_residual) + ',' +
           (r.crossing_a ? format_double(*r.crossing_a) : std::string()) + '\n';
  }
  return out;
}

std::vector<SweepRow> parse_sweep_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kSweepHeader) throw std::invalid_argument("sweep CSV: bad header");
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 9) throw std::invalid_argument("sweep CSV: expected 9 fields");
    SweepRow r;
    r.beta = parse_double(f[0]);
    r.gamma = parse_double(f[1]);
    r.alpha_beta = parse_double(f[2]);
    r.i_max = parse_double(f[3]);
    r.gamma_value = parse_double(f[4]);
    r.iterations = std::stoull(f[5]);
    r.converged = f[6] == "true";
    r.stationarity_residual = parse_double(f[7]);
    if (!f[8].empty()) r.crossing_a = parse_double(f[8]);
    rows.push_back(r);
  }
  return rows;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace wmt::io
