#pragma once

// Command layer behind tools/transpin: JSON run configuration, spin-map CSV
// export, observable reports and the verification catalogue.

#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "transpin/constants.hpp"
#include "transpin/mode_fields.hpp"
#include "transpin/spin_dynamics.hpp"

namespace transpin::cli {

using nlohmann::json;

enum class ModeKind { Guided, Surface };

struct RunConfig {
  ModeKind kind = ModeKind::Guided;
  UnitSystem units = UnitSystem::SI;
  GuidedModeSpec guided;
  SurfaceWaveSpec surface;
  int nx = 41;
  int ny = 41;
  std::string output;  // empty or "-" writes to stdout
  SpinCombination combination = SpinCombination::Sum;
  bool paper_figures = false;
};

/// Parses JSON text. Syntax errors become ConfigError naming the last key read
/// before the failure.
json parse_config_text(std::string_view text);

/// Reads and parses a config file. Throws IoError when it cannot be read.
json load_config_file(const std::string& path);

struct FlagOverride {
  std::string flag;  // kebab-case, without leading dashes
  std::string value;
};

/// Kebab-case flag names accepted by apply_overrides.
const std::vector<std::string>& override_flags();

/// Writes flag values into the document at the key they mirror. Shared names
/// (omega, family, direction, n-quanta) land in the section of the active mode.
void apply_overrides(json& doc, const std::vector<FlagOverride>& overrides);

/// Validates the document and resolves frequency and amplitude. Every error
/// is a ConfigError whose message starts with the offending key.
RunConfig config_from_json(const json& doc);

struct SpinMapRow {
  double x = 0.0;
  double y = 0.0;
  Vec3 s = Vec3::Zero();
  double magnitude = 0.0;
};

/// nx*ny samples of the analytic spin density in y-major order. Guided modes
/// cover [0,a]x[0,b] at z = 0; surface waves cover [0, 5/kappa]^2.
std::vector<SpinMapRow> spin_map(const RunConfig& cfg, bool parallel = true);

/// Shortest decimal string that reads back to the same binary64 value.
std::string format_double(double v);

std::string spin_map_csv(const std::vector<SpinMapRow>& rows);

/// Writes content to path, or to `out` when path is empty or "-".
/// Throws IoError on failure.
void write_output(const std::string& path, const std::string& content, std::ostream& out);

json report_json(const RunConfig& cfg);

json commutator_table_json();

struct CheckResult {
  std::string name;
  double expected = 0.0;
  double actual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct CheckDefinition {
  std::string name;
  std::function<std::vector<CheckResult>()> run;
};

/// Full catalogue. Names are slash-separated, led by the suite:
/// guided/, surface/, algebra/, resolution/.
const std::vector<CheckDefinition>& check_catalogue();

/// Runs every catalogue entry whose name contains `filter` (all when empty).
std::vector<CheckResult> run_checks(std::string_view filter);

/// Pass/fail table followed by one detail line per failure.
void print_check_table(const std::vector<CheckResult>& results, std::ostream& out);

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kConfigError = 1, kIoError = 2, kVerifyFailed = 3 };

}  // namespace transpin::cli
