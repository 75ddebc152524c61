#include "gcf/io.hpp"

#include "gcf/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

namespace gcf {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

double to_double(const std::string& v, const std::string& context) {
  const std::string t = trim(v);
  char* end = nullptr;
  errno = 0;
  const double d = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || (errno == ERANGE && std::abs(d) > 1.0) || !std::isfinite(d)) {
    throw ContractError(context + ": '" + v + "' is not a finite number");
  }
  return d;
}

long to_long(const std::string& v, const std::string& context) {
  const std::string t = trim(v);
  char* end = nullptr;
  errno = 0;
  const long x = std::strtol(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) {
    throw ContractError(context + ": '" + v + "' is not an integer");
  }
  return x;
}

void require(bool ok, const std::string& context, const std::string& what) {
  if (!ok) throw ContractError(context + ": " + what);
}

void check_choice(const std::string& v, std::initializer_list<const char*> choices,
                  const std::string& context) {
  for (const char* c : choices) {
    if (v == c) return;
  }
  std::string list;
  for (const char* c : choices) list += std::string(list.empty() ? "" : "|") + c;
  throw ContractError(context + ": '" + v + "' is not one of " + list);
}

std::string json_number(double v) {
  if (!std::isfinite(v)) return "null";
  return format_double(v);
}

}  // namespace

std::string RunConfig::get(const std::string& key, const std::string& fallback) const {
  const auto it = options.find(key);
  return it == options.end() ? fallback : it->second;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  return has(key) ? to_double(options.at(key), key) : fallback;
}

long RunConfig::get_long(const std::string& key, long fallback) const {
  return has(key) ? to_long(options.at(key), key) : fallback;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "n",         "alpha",         "resolution",   "cfl",        "normalization",
      "recenter",  "tolerance",     "max_steps",    "min_volume", "record_every",
      "snapshot_every", "initial",  "axes",         "radius",     "harmonics",
      "seed",      "out_dir",       "case",         "bodies",     "h0",
      "h0_min",    "h0_max",        "samples",      "n_max",      "alpha_samples",
      "theta_samples", "theta_max"};
  return keys;
}

std::vector<int> parse_resolution(const std::string& text) {
  std::string t = text;
  std::replace(t.begin(), t.end(), 'x', ',');
  std::replace(t.begin(), t.end(), 'X', ',');
  std::vector<int> out;
  for (const auto& part : split(t, ',')) {
    const long v = to_long(part, "resolution");
    require(v >= 16 && v <= 1 << 16, "resolution", "each axis needs between 16 and 65536 nodes");
    out.push_back(static_cast<int>(v));
  }
  require(out.size() == 1 || out.size() == 2, "resolution", "expected one or two counts");
  return out;
}

void validate_option(const std::string& key, const std::string& value, const std::string& ctx) {
  const auto& keys = config_keys();
  require(std::find(keys.begin(), keys.end(), key) != keys.end(), ctx, "unknown key '" + key + "'");
  const std::string c = ctx + ": " + key;
  if (key == "n") {
    const long v = to_long(value, c);
    require(v == 1 || v == 2, c, "unsupported dimension " + value);
  } else if (key == "alpha" || key == "radius" || key == "tolerance" || key == "min_volume" ||
             key == "h0" || key == "h0_min" || key == "h0_max" || key == "theta_max") {
    require(to_double(value, c) > 0.0, c, "must be positive, got " + value);
  } else if (key == "cfl") {
    const double v = to_double(value, c);
    require(v > 0.0 && v <= 1.0, c, "must lie in (0, 1], got " + value);
  } else if (key == "resolution") {
    parse_resolution(value);
  } else if (key == "normalization") {
    check_choice(value, {"none", "fixed-volume"}, c);
  } else if (key == "recenter") {
    check_choice(value, {"true", "false"}, c);
  } else if (key == "initial") {
    check_choice(value, {"sphere", "ellipsoid", "perturbed", "random"}, c);
  } else if (key == "case") {
    check_choice(value, {"sphere", "ellipse", "random", "ode-shrinker"}, c);
  } else if (key == "max_steps" || key == "snapshot_every") {
    require(to_long(value, c) >= 0, c, "must be nonnegative, got " + value);
  } else if (key == "record_every" || key == "bodies" || key == "samples" || key == "n_max" ||
             key == "alpha_samples" || key == "theta_samples") {
    require(to_long(value, c) >= 1, c, "must be at least 1, got " + value);
  } else if (key == "seed") {
    const std::string t = trim(value);
    char* end = nullptr;
    errno = 0;
    std::strtoull(t.c_str(), &end, 10);
    require(!t.empty() && t[0] != '-' && end == t.c_str() + t.size() && errno != ERANGE, c,
            "must be an unsigned 64-bit integer, got " + value);
  } else if (key == "axes") {
    const auto parts = split(value, ',');
    require(parts.size() == 2 || parts.size() == 3, c, "expected 2 or 3 semi-axes");
    for (const auto& p : parts) require(to_double(p, c) > 0.0, c, "semi-axes must be positive");
  } else if (key == "harmonics") {
    for (const auto& p : split(value, ',')) to_double(p, c);
  } else if (key == "out_dir") {
    require(!trim(value).empty(), c, "must not be empty");
  }
}

void set_option(RunConfig& config, const std::string& key, const std::string& value,
                const std::string& context) {
  const std::string v = trim(value);
  validate_option(key, v, context);
  config.options[key] = v;
  if (key == "seed") config.seed = std::strtoull(v.c_str(), nullptr, 10);
  if (key == "out_dir") config.out_dir = v;
}

RunConfig parse_config(std::string_view text, const std::string& source) {
  RunConfig cfg;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string ctx = source + ":" + std::to_string(line_no);
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ctx, "malformed line '" + line + "' (expected key=value)");
    const std::string key = trim(line.substr(0, eq));
    require(!key.empty(), ctx, "missing key");
    set_option(cfg, key, line.substr(eq + 1), ctx);
  }
  return cfg;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ContractError("cannot read config '" + path.string() + "': " + std::strerror(errno));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

FlowConfig flow_config(const RunConfig& rc) {
  FlowConfig c;
  c.n = static_cast<int>(rc.get_long("n", 2));
  c.alpha = rc.get_double("alpha", 1.0);
  c.resolution = rc.has("resolution") ? parse_resolution(rc.get("resolution", ""))
                                      : (c.n == 1 ? std::vector<int>{256} : std::vector<int>{48, 96});
  if (static_cast<int>(c.resolution.size()) != c.n) {
    throw ContractError("resolution: expected " + std::to_string(c.n) + " count(s) for n = " +
                        std::to_string(c.n));
  }
  c.cfl = rc.get_double("cfl", 0.9);
  c.normalization = rc.get("normalization", "fixed-volume") == "none" ? Normalization::None
                                                                      : Normalization::FixedVolume;
  c.recenter = rc.get("recenter", "true") == "true";
  c.roundness_tolerance = rc.get_double("tolerance", 0.0);
  c.max_steps = rc.get_long("max_steps", 1000000);
  c.min_volume = rc.get_double("min_volume", 1e-8);
  c.record_every = rc.get_long("record_every", 1000);
  c.snapshot_every = rc.get_long("snapshot_every", 0);
  c.seed = rc.seed;
  const std::string init = rc.get("initial", c.n == 1 ? "perturbed" : "ellipsoid");
  c.initial = init == "sphere"      ? InitialBody::Sphere
              : init == "ellipsoid" ? InitialBody::Ellipsoid
              : init == "random"    ? InitialBody::Random
                                    : InitialBody::Perturbed;
  if (rc.has("axes")) {
    const auto parts = split(rc.get("axes", ""), ',');
    c.axes = {to_double(parts[0], "axes"), to_double(parts[1], "axes"),
              parts.size() > 2 ? to_double(parts[2], "axes") : 1.0};
  }
  c.radius = rc.get_double("radius", 1.0);
  if (rc.has("harmonics")) {
    for (const auto& p : split(rc.get("harmonics", ""), ',')) c.harmonics.push_back(to_double(p, "harmonics"));
  } else if (c.n == 1) {
    // cos 2 theta and cos 3 theta with amplitudes 0.3 and 0.1.
    c.harmonics = {0.0, 0.0, 0.3, 0.0, 0.1, 0.0};
  } else {
    c.harmonics = {0.0, 0.0, 0.0, 0.1, 0.0, 0.0, 0.2, 0.1};
  }
  return c;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_series(const std::vector<DiagnosticsRecord>& records) {
  if (records.empty()) throw ContractError("cannot emit an empty record list");
  std::string out(kSeriesHeader);
  out += '\n';
  for (const auto& r : records) {
    out += std::to_string(r.step);
    for (double v : {r.t, r.volume, r.k_min, r.k_max, r.lambda_ratio, r.lambda_max, r.residual_max,
                     r.f_max, r.w_max, r.umbilicity_at_fmax, r.grad_x_norm2_at_fmax}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing: " + std::strerror(errno));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw Error("write to '" + path.string() + "' failed: " + std::strerror(errno));
}

void emit_series(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& records) {
  write_text(path, format_series(records));
}

std::vector<DiagnosticsRecord> parse_series(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kSeriesHeader) throw ContractError("bad series header");
  std::vector<DiagnosticsRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 12) throw ContractError("series row has " + std::to_string(f.size()) + " fields");
    DiagnosticsRecord r;
    r.step = to_long(f[0], "step");
    double* dst[] = {&r.t, &r.k_min, &r.k_max, &r.lambda_ratio, &r.lambda_max, &r.residual_max,
                     &r.f_max, &r.w_max, &r.umbilicity_at_fmax, &r.grad_x_norm2_at_fmax};
    r.t = to_double(f[1], "t");
    r.volume = to_double(f[2], "volume");
    for (int i = 1; i < 10; ++i) *dst[i] = to_double(f[i + 2], "series");
    out.push_back(r);
  }
  return out;
}

std::string format_snapshot(const Snapshot& snap) {
  const SphereGrid& grid = snap.body.grid;
  std::string out = "{\"version\":\"";
  out += kSnapshotVersion;
  out += "\",\"n\":" + std::to_string(grid.dim()) + ",\"grid\":{\"shape\":[";
  if (grid.dim() == 1) {
    out += std::to_string(grid.n_longitude()) + "],\"offsets\":[0]}";
  } else {
    out += std::to_string(grid.n_colatitude()) + "," + std::to_string(grid.n_longitude()) +
           "],\"offsets\":[0.5,0]}";
  }
  out += ",\"h\":[";
  for (std::size_t k = 0; k < snap.body.h.size(); ++k) {
    if (k) out += ',';
    out += json_number(snap.body.h[k]);
  }
  out += ']';
  if (snap.alpha) out += ",\"alpha\":" + json_number(*snap.alpha);
  if (snap.time) out += ",\"time\":" + json_number(*snap.time);
  out += "}\n";
  return out;
}

void emit_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
  write_text(path, format_snapshot(snap));
}

Snapshot parse_snapshot(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ContractError(std::string("snapshot is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("version").get<std::string>() != kSnapshotVersion) {
      throw ContractError("unsupported snapshot version");
    }
    const int n = j.at("n").get<int>();
    const auto shape = j.at("grid").at("shape").get<std::vector<int>>();
    const auto offsets = j.at("grid").at("offsets").get<std::vector<double>>();
    const std::vector<double> expected = n == 1 ? std::vector<double>{0.0}
                                                : std::vector<double>{0.5, 0.0};
    if (offsets != expected) throw ContractError("unsupported grid offsets");
    Snapshot s{make_support(build_grid(n, shape), j.at("h").get<std::vector<double>>()), {}, {}};
    if (j.contains("alpha")) s.alpha = j.at("alpha").get<double>();
    if (j.contains("time")) s.time = j.at("time").get<double>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ContractError(std::string("malformed snapshot: ") + e.what());
  }
}

Snapshot load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "': " + std::strerror(errno));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_snapshot(ss.str());
}

std::string snapshot_name(long step) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snapshot_%06ld.json", step);
  return buf;
}

std::string format_sweep(const std::vector<SweepRow>& rows) {
  std::string out = "h0,closure_defect,residual,status\n";
  for (const auto& r : rows) {
    out += format_double(r.h0) + "," + format_double(r.closure_defect) + "," +
           format_double(r.residual) + "," + r.status + "\n";
  }
  return out;
}

std::string identity_reports_json(const std::vector<IdentityReport>& reports) {
  std::string out = "[\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    out += "  {\"identity\":\"" + std::string(identity_name(r.id)) + "\",\"body\":\"" + r.body +
           "\",\"alpha\":" + json_number(r.alpha) + ",\"resolutions\":[";
    for (std::size_t k = 0; k < r.resolutions.size(); ++k) {
      out += k ? ",[" : "[";
      for (std::size_t a = 0; a < r.resolutions[k].size(); ++a) {
        out += (a ? "," : "") + std::to_string(r.resolutions[k][a]);
      }
      out += "]";
    }
    out += "],\"residuals\":[";
    for (std::size_t k = 0; k < r.residuals.size(); ++k) {
      out += (k ? "," : "") + json_number(r.residuals[k]);
    }
    out += "],\"order\":" + json_number(r.order) + ",\"threshold\":" + json_number(r.threshold) +
           ",\"applicable\":" + (r.applicable ? "true" : "false") +
           ",\"passed\":" + (r.passed ? "true" : "false") + "}";
    out += i + 1 < reports.size() ? ",\n" : "\n";
  }
  out += "]\n";
  return out;
}

std::string scan_summary_json(const ScanSummary& s) {
  std::string out = "{\"max_form_discrepancy\":" + json_number(s.max_form_discrepancy) +
                    ",\"min_J_margin\":" + json_number(s.min_J_margin) + ",\"dims\":[\n";
  for (std::size_t i = 0; i < s.dims.size(); ++i) {
    const auto& d = s.dims[i];
    out += "  {\"n\":" + std::to_string(d.n) +
           ",\"max_form_discrepancy\":" + json_number(d.max_form_discrepancy) +
           ",\"min_J_margin\":" + json_number(d.min_J_margin) +
           ",\"min_I1\":" + json_number(d.min_I1) + ",\"I1_zero_location\":" + json_number(d.I1_zero) +
           ",\"I1_zero_expected\":" + json_number(d.I1_zero_expected) +
           ",\"min_y\":" + json_number(d.min_y) + ",\"y_lower\":\"" +
           std::to_string(d.certificate.lower_num) + "/" + std::to_string(d.certificate.lower_den) +
           "\",\"y_upper\":\"" + std::to_string(d.certificate.upper_num) + "/" +
           std::to_string(d.certificate.upper_den) +
           "\",\"y_endpoints_match\":" + (d.certificate.endpoints_match ? "true" : "false") +
           ",\"y_nonnegative\":" + (d.certificate.nonnegative ? "true" : "false") + "}";
    out += i + 1 < s.dims.size() ? ",\n" : "\n";
  }
  out += "]}\n";
  return out;
}

}  // namespace gcf
