#pragma once

#include "gcf/flow.hpp"
#include "gcf/identities.hpp"
#include "gcf/inequality.hpp"
#include "gcf/shrinker.hpp"
#include "gcf/support.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gcf {

/// Validated key=value options for one subcommand.
struct RunConfig {
  std::string subcommand;
  std::map<std::string, std::string> options;
  std::string out_dir = ".";
  std::uint64_t seed = 1;

  bool has(const std::string& key) const { return options.count(key) != 0; }
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key, long fallback) const;
};

/// Keys accepted in config files and as flags.
const std::vector<std::string>& config_keys();

/// Checks `key` is known and `value` is in range; throws ContractError naming `context`.
void validate_option(const std::string& key, const std::string& value, const std::string& context);

/// Parses "key=value" lines; '#' starts a comment. Errors name the source and line.
RunConfig parse_config(std::string_view text, const std::string& source = "<config>");
RunConfig parse_config_file(const std::filesystem::path& path);

/// Sets one option (later calls win), with the same validation as parse_config.
void set_option(RunConfig& config, const std::string& key, const std::string& value,
                const std::string& context);

/// Parses "N" or "A x B" (also "AxB" or "A,B") into per-axis counts.
std::vector<int> parse_resolution(const std::string& text);

/// FlowConfig from options: n, alpha, resolution, cfl, normalization, recenter, tolerance,
/// max_steps, min_volume, record_every, snapshot_every, initial, axes, radius, harmonics.
FlowConfig flow_config(const RunConfig& config);

/// Decimal with 17 significant digits.
std::string format_double(double v);

inline constexpr std::string_view kSeriesHeader =
    "step,t,volume,K_min,K_max,lambda_ratio,Lambda_max,residual_max,f_max,w_max,"
    "umbilicity_at_fmax,gradF2_at_fmax";

std::string format_series(const std::vector<DiagnosticsRecord>& records);
void emit_series(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& records);
std::vector<DiagnosticsRecord> parse_series(std::string_view text);

struct Snapshot {
  SupportField body;
  std::optional<double> alpha;
  std::optional<double> time;
};

inline constexpr std::string_view kSnapshotVersion = "gcf-snapshot-1";

std::string format_snapshot(const Snapshot& snap);
void emit_snapshot(const std::filesystem::path& path, const Snapshot& snap);
Snapshot parse_snapshot(std::string_view text);
Snapshot load_snapshot(const std::filesystem::path& path);

/// "snapshot_%06d.json".
std::string snapshot_name(long step);

std::string format_sweep(const std::vector<SweepRow>& rows);
std::string identity_reports_json(const std::vector<IdentityReport>& reports);
std::string scan_summary_json(const ScanSummary& summary);

/// Writes text with LF line endings, throwing Error with the OS message on failure.
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace gcf
