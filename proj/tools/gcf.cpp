// gcf: flow runs, shrinker shooting, identity verification and the inequality scan.
//
// Exit status: 0 success, 1 contract or I/O error, 2 verification failure.

#include "gcf/bodies.hpp"
#include "gcf/error.hpp"
#include "gcf/flow.hpp"
#include "gcf/identities.hpp"
#include "gcf/inequality.hpp"
#include "gcf/io.hpp"
#include "gcf/shrinker.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitContract = 1;
constexpr int kExitVerification = 2;

// Flag values collected by CLI11, applied over the config file afterwards.
using FlagValues = std::map<std::string, std::string>;

std::string dashed(std::string key) {
  for (char& c : key) {
    if (c == '_') c = '-';
  }
  return key;
}

void add_key(CLI::App* app, FlagValues& values, const std::string& key, const std::string& help) {
  app->add_option_function<std::string>(
      "--" + dashed(key), [&values, key](const std::string& v) { values[key] = v; }, help);
}

void add_common(CLI::App* app, FlagValues& values, std::string& config_path) {
  app->add_option("--config", config_path, "key=value config file; flags override it");
  add_key(app, values, "out_dir", "output directory (created if missing)");
  add_key(app, values, "seed", "seed of the single random generator");
  add_key(app, values, "resolution", "N (n = 1) or N_phi x N_theta (n = 2)");
  add_key(app, values, "alpha", "curvature exponent");
  add_key(app, values, "n", "dimension of the hypersurface (1 or 2)");
}

gcf::RunConfig resolve(const std::string& subcommand, const std::string& config_path,
                       const FlagValues& values) {
  gcf::RunConfig cfg = config_path.empty() ? gcf::RunConfig{} : gcf::parse_config_file(config_path);
  for (const auto& [key, value] : values) gcf::set_option(cfg, key, value, "--" + dashed(key));
  cfg.subcommand = subcommand;
  fs::create_directories(cfg.out_dir);
  return cfg;
}

json manifest(const gcf::RunConfig& cfg) {
  json j;
  j["subcommand"] = cfg.subcommand;
  j["seed"] = cfg.seed;
  j["options"] = cfg.options;
  return j;
}

void write_json(const fs::path& path, const json& j) { gcf::write_text(path, j.dump(2) + "\n"); }

int cmd_flow(const gcf::RunConfig& cfg) {
  const gcf::FlowConfig fc = gcf::flow_config(cfg);
  const fs::path out(cfg.out_dir);
  auto on_snapshot = [&](const gcf::FlowState& s) {
    gcf::emit_snapshot(out / gcf::snapshot_name(s.step), {s.body, fc.alpha, s.time});
  };
  const gcf::FlowResult res = gcf::run(fc, on_snapshot);
  gcf::emit_series(out / "series.csv", res.records);
  gcf::emit_snapshot(out / "final.json", {res.final_state.body, fc.alpha, res.final_state.time});

  json j = manifest(cfg);
  j["stop_reason"] = res.stop_reason;
  j["converged"] = res.converged;
  j["steps"] = res.final_state.step;
  j["time"] = res.final_state.time;
  j["scale"] = res.final_state.scale;
  j["radii_ratio"] = gcf::radii_ratio(res.final_state.body);
  write_json(out / "run.json", j);

  const auto& last = res.records.back();
  std::printf("stop=%s steps=%ld t=%.6g ratio-1=%.3e residual=%.3e\n", res.stop_reason.c_str(),
              res.final_state.step, res.final_state.time, last.lambda_ratio - 1.0,
              last.residual_max);
  return kExitOk;
}

int cmd_shrinker(const gcf::RunConfig& cfg) {
  if (cfg.get_long("n", 1) != 1) throw gcf::ContractError("n: the shooting solver is n = 1 only");
  const double alpha = cfg.get_double("alpha", 1.0 / 3.0);
  const auto res = cfg.has("resolution") ? gcf::parse_resolution(cfg.get("resolution", ""))
                                         : std::vector<int>{256};
  if (res.size() != 1) throw gcf::ContractError("resolution: expected one count for n = 1");
  const fs::path out(cfg.out_dir);
  json j = manifest(cfg);

  if (cfg.has("h0")) {
    const auto sol = gcf::solve_shrinker_ode_n1(alpha, cfg.get_double("h0", 1.0), 0.0, res[0]);
    j["closed"] = sol.closed;
    j["closure_defect"] = sol.closure_defect;
    if (sol.closed) {
      j["residual"] = sol.residual;
      j["richardson_error"] = sol.richardson_error;
      gcf::emit_snapshot(out / "shrinker.json", {sol.body, alpha, std::nullopt});
    }
    write_json(out / "run.json", j);
    std::printf("closed=%s closure_defect=%.3e\n", sol.closed ? "yes" : "no", sol.closure_defect);
    return kExitOk;
  }

  const double lo = cfg.get_double("h0_min", 1.01);
  const double hi = cfg.get_double("h0_max", 3.0);
  if (!(lo < hi)) throw gcf::ContractError("h0_min must be below h0_max");
  const auto rows =
      gcf::shooting_sweep(alpha, lo, hi, static_cast<int>(cfg.get_long("samples", 200)), res[0]);
  gcf::write_text(out / "sweep.csv", gcf::format_sweep(rows));
  int closed = 0;
  for (const auto& r : rows) closed += r.status == "closed";
  j["closed_count"] = closed;
  write_json(out / "run.json", j);
  std::printf("%zu samples, %d closed\n", rows.size(), closed);
  return kExitOk;
}

int cmd_verify(const gcf::RunConfig& cfg) {
  const std::string which = cfg.get("case", "sphere");
  std::vector<gcf::BodyCase> cases;
  std::vector<gcf::Identity> ids = gcf::all_identities();
  if (which == "random") {
    const auto res = cfg.has("resolution") ? gcf::parse_resolution(cfg.get("resolution", ""))
                                           : std::vector<int>{48, 96};
    if (res.size() != 2) throw gcf::ContractError("resolution: random bodies need n = 2");
    cases = gcf::fuzz_cases(cfg.seed, static_cast<int>(cfg.get_long("bodies", 100)), res);
    ids = gcf::fuzz_identities();
  } else {
    const std::string prefix = which == "sphere"    ? "unit-sphere"
                               : which == "ellipse" ? "ellipse"
                                                    : "ode-shrinker";
    for (auto& c : gcf::standard_cases()) {
      if (c.name.rfind(prefix, 0) == 0) cases.push_back(std::move(c));
    }
  }
  const auto reports = gcf::run_suite(cases, ids);
  gcf::write_text(fs::path(cfg.out_dir) / "identities.json", gcf::identity_reports_json(reports));
  write_json(fs::path(cfg.out_dir) / "run.json", manifest(cfg));
  std::fputs(gcf::format_table(reports).c_str(), stdout);
  for (const auto& r : reports) {
    if (!r.passed) return kExitVerification;
  }
  return kExitOk;
}

int cmd_ineq(const gcf::RunConfig& cfg) {
  gcf::ScanOptions opt;
  opt.n_max = static_cast<int>(cfg.get_long("n_max", opt.n_max));
  opt.alpha_samples = static_cast<int>(cfg.get_long("alpha_samples", opt.alpha_samples));
  opt.theta_samples = static_cast<int>(cfg.get_long("theta_samples", opt.theta_samples));
  opt.theta_max = cfg.get_double("theta_max", opt.theta_max);
  const auto summary = gcf::scan_inequalities(opt);

  std::string csv =
      "n,max_form_discrepancy,min_J_margin,min_I1,I1_zero,I1_zero_expected,min_y,passed\n";
  bool ok = true;
  std::printf("%3s %12s %12s %12s %12s %12s  %s\n", "n", "form", "J_margin", "min_I1", "I1_zero",
              "min_y", "verdict");
  for (const auto& d : summary.dims) {
    const auto v = gcf::judge(d);
    ok = ok && v.all();
    csv += std::to_string(d.n) + "," + gcf::format_double(d.max_form_discrepancy) + "," +
           gcf::format_double(d.min_J_margin) + "," + gcf::format_double(d.min_I1) + "," +
           gcf::format_double(d.I1_zero) + "," + gcf::format_double(d.I1_zero_expected) + "," +
           gcf::format_double(d.min_y) + "," + (v.all() ? "true" : "false") + "\n";
    std::printf("%3d %12.3e %12.3e %12.3e %12.9f %12.3e  %s\n", d.n, d.max_form_discrepancy,
                d.min_J_margin, d.min_I1, d.I1_zero, d.min_y, v.all() ? "pass" : "FAIL");
  }
  const fs::path out(cfg.out_dir);
  gcf::write_text(out / "ineq.csv", csv);
  gcf::write_text(out / "ineq.json", gcf::scan_summary_json(summary));
  write_json(out / "run.json", manifest(cfg));
  return ok ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gauss curvature flow and shrinker laboratory"};
  app.require_subcommand(1);
  std::string config_path;
  FlagValues values;

  auto* flow = app.add_subcommand("flow", "run the normalized flow and record diagnostics");
  add_common(flow, values, config_path);
  add_key(flow, values, "cfl", "fraction of the stable time step, in (0, 1]");
  add_key(flow, values, "normalization", "fixed-volume|none");
  add_key(flow, values, "recenter", "translate to the Steiner point when rescaling (true|false)");
  add_key(flow, values, "tolerance", "stop once lambda_max/lambda_min - 1 is below this");
  add_key(flow, values, "max_steps", "step cap");
  add_key(flow, values, "min_volume", "stop an unnormalized flow below this volume");
  add_key(flow, values, "record_every", "diagnostics cadence in steps");
  add_key(flow, values, "snapshot_every", "snapshot cadence in steps, 0 for none");
  add_key(flow, values, "initial", "sphere|ellipsoid|perturbed|random");
  add_key(flow, values, "axes", "ellipsoid semi-axes a,b[,c]");
  add_key(flow, values, "radius", "sphere radius");
  add_key(flow, values, "harmonics", "coefficients of the perturbed start, comma separated");

  auto* shrinker = app.add_subcommand("shrinker", "shoot n = 1 shrinkers from h(0) = h0");
  add_common(shrinker, values, config_path);
  add_key(shrinker, values, "h0", "single shot from this h(0)");
  add_key(shrinker, values, "h0_min", "sweep lower end");
  add_key(shrinker, values, "h0_max", "sweep upper end");
  add_key(shrinker, values, "samples", "sweep sample count");

  auto* verify = app.add_subcommand("verify", "identity residuals and convergence orders");
  add_common(verify, values, config_path);
  add_key(verify, values, "case", "sphere|ellipse|random|ode-shrinker");
  add_key(verify, values, "bodies", "number of random bodies");

  auto* ineq = app.add_subcommand("ineq", "scan I1, J, and y over the parameter grid");
  add_common(ineq, values, config_path);
  add_key(ineq, values, "n_max", "scan dimensions 1..n_max");
  add_key(ineq, values, "alpha_samples", "exponent samples per dimension");
  add_key(ineq, values, "theta_samples", "curvature-ratio samples per exponent");
  add_key(ineq, values, "theta_max", "largest curvature ratio");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitContract;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    const gcf::RunConfig cfg = resolve(name, config_path, values);
    if (name == "flow") return cmd_flow(cfg);
    if (name == "shrinker") return cmd_shrinker(cfg);
    if (name == "verify") return cmd_verify(cfg);
    return cmd_ineq(cfg);
  } catch (const gcf::Error& e) {
    std::fprintf(stderr, "gcf: %s\n", e.what());
    return kExitContract;
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "gcf: %s\n", e.what());
    return kExitContract;
  }
}
