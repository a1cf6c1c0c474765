#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twisim/sim.hpp"

namespace twisim::cli {

enum ExitCode : int { kOk = 0, kIoFailure = 1, kValidationFailure = 2 };

inline constexpr const char* kSeedEnvVar = "TWI_SIM_SEED";

std::string csv_header();

// Long-format CSV: one row per (run, tick), sorted by (run_id, tick); floating
// values printed with 9 significant digits.
void write_csv(std::ostream& out, std::span<const SweepRow> rows);

// Comma-separated list parsing for --snr-a and --seeds. Empty lists, empty
// items and malformed numbers throw ConfigError naming `option`.
std::vector<double> parse_number_list(std::string_view text, const std::string& option);
std::vector<std::uint64_t> parse_seed_list(std::string_view text, const std::string& option);

// Parses a TWI_SIM_SEED-style override; nullopt when unset or empty.
std::optional<std::uint64_t> seed_override(const char* env_value);

int cmd_run(const std::filesystem::path& config_path, const std::filesystem::path& out_path,
            std::ostream& log);

int cmd_sweep(const std::filesystem::path& config_path, std::span<const double> snr_audio_db,
              std::span<const std::uint64_t> seeds, const std::filesystem::path& out_path,
              int jobs, std::ostream& log);

struct OracleCheck {
  std::string name;
  double estimate = 0.0;
  double closed_form = 0.0;
  double rel_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct ValidationReport {
  std::vector<OracleCheck> checks;
  std::vector<std::string> warnings;
  bool passed() const;
};

inline constexpr std::int64_t kValidationSamples = 100'000;
inline constexpr double kValidationTolerance = 0.01;

// Monte Carlo oracles of the delay law, the TWI optimizers and the stream
// totals against their closed forms.
ValidationReport validate_config(const RunConfig& config);

int cmd_validate(const std::filesystem::path& config_path, std::ostream& log);

}  // namespace twisim::cli
