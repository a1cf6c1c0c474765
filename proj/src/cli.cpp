#include "twisim/cli.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "twisim/config.hpp"
#include "twisim/errors.hpp"

namespace twisim::cli {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

RunConfig load_with_override(const std::filesystem::path& path) {
  RunConfig config = load_config(path);
  if (auto seed = seed_override(std::getenv(kSeedEnvVar))) config.seed = *seed;
  return config;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("error while writing " + path.string());
}

// Runs `body`, mapping the error taxonomy onto exit codes.
template <typename Body>
int guarded(std::ostream& log, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const DomainError& e) {
    log << "validation error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const IoError& e) {
    log << "I/O error: " << e.what() << "\n";
    return kIoFailure;
  }
}

void print_warnings(std::ostream& log, const SweepRow& row) {
  for (const std::string& w : row.metrics.warnings) {
    log << "warning (run " << row.run_id << "): " << w << "\n";
  }
}

OracleCheck make_check(std::string name, double estimate, double closed, double tolerance) {
  OracleCheck c{std::move(name), estimate, closed, std::fabs(estimate - closed) / closed,
                tolerance, false};
  c.passed = c.rel_error <= tolerance;
  return c;
}

}  // namespace

std::string csv_header() {
  return "run_id,seed,gamma_a_db,gamma_v_db,eps_a,eps_v,twi_variant,tw_s,tick,latency_s,"
         "k_avail_mean,avail_a_mean,avail_v_mean,accuracy,baseline_ref,baseline_latency_s,"
         "t_a_mean_s,t_v_mean_s,t_min_mean_s";
}

void write_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << csv_header() << "\n";
  for (const SweepRow& row : rows) {
    const RunConfig& c = row.config;
    const RunMetrics& m = row.metrics;
    const std::string prefix =
        std::to_string(row.run_id) + "," + std::to_string(c.seed) + "," +
        num(c.channels[0].snr_db) + "," + num(c.channels[1].snr_db) + "," +
        num(c.channels[0].outage_prob) + "," + num(c.channels[1].outage_prob) + "," +
        std::string(c.twi.name()) + "," + num(m.tw) + ",";
    const std::string suffix = std::string(to_string(c.reference)) + "," +
                               num(m.baseline_latency.mean) + "," + num(m.t_audio.mean) + "," +
                               num(m.t_visual.mean) + "," + num(m.t_min.mean);
    for (const TickRecord& t : m.ticks) {
      out << prefix << t.tick << "," << num(t.latency) << "," << num(t.k_avail_mean) << ","
          << num(t.avail_audio_mean) << "," << num(t.avail_visual_mean) << ","
          << num(t.accuracy) << "," << suffix << "\n";
    }
  }
}

namespace {

std::vector<std::string> split_items(std::string_view text, const std::string& option) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    const std::string_view item = text.substr(start, comma == std::string_view::npos
                                                         ? std::string_view::npos
                                                         : comma - start);
    if (item.empty()) throw ConfigError(option, "empty list item");
    items.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return items;
}

}  // namespace

std::vector<double> parse_number_list(std::string_view text, const std::string& option) {
  std::vector<double> values;
  for (const std::string& item : split_items(text, option)) {
    double v = 0.0;
    const auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc{} || end != item.data() + item.size() || !std::isfinite(v)) {
      throw ConfigError(option, "not a number: '" + item + "'");
    }
    values.push_back(v);
  }
  return values;
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text, const std::string& option) {
  std::vector<std::uint64_t> values;
  for (const std::string& item : split_items(text, option)) {
    std::uint64_t v = 0;
    const auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc{} || end != item.data() + item.size()) {
      throw ConfigError(option, "not an unsigned 64-bit integer: '" + item + "'");
    }
    values.push_back(v);
  }
  return values;
}

std::optional<std::uint64_t> seed_override(const char* env_value) {
  if (env_value == nullptr || *env_value == '\0') return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env_value, &end, 10);
  if (errno != 0 || *end != '\0' || env_value[0] == '-') {
    throw ConfigError(kSeedEnvVar, "expected an unsigned 64-bit integer");
  }
  return static_cast<std::uint64_t>(v);
}

int cmd_run(const std::filesystem::path& config_path, const std::filesystem::path& out_path,
            std::ostream& log) {
  return guarded(log, [&] {
    const RunConfig config = load_with_override(config_path);
    const std::vector<double> snr{config.channels[0].snr_db};
    const std::vector<std::uint64_t> seeds{config.seed};
    const std::vector<SweepRow> rows = sweep(config, snr, seeds, 1);
    std::ostringstream csv;
    write_csv(csv, rows);
    write_file(out_path, csv.str());
    print_warnings(log, rows.front());
    return static_cast<int>(kOk);
  });
}

int cmd_sweep(const std::filesystem::path& config_path, std::span<const double> snr_audio_db,
              std::span<const std::uint64_t> seeds, const std::filesystem::path& out_path,
              int jobs, std::ostream& log) {
  return guarded(log, [&] {
    if (snr_audio_db.empty()) throw ConfigError("--snr-a", "at least one SNR value is required");
    if (seeds.empty()) throw ConfigError("--seeds", "at least one seed is required");
    if (jobs < 1) throw ConfigError("--jobs", "must be >= 1");
    const RunConfig config = load_with_override(config_path);
    const std::vector<SweepRow> rows = sweep(config, snr_audio_db, seeds, jobs);
    std::ostringstream csv;
    write_csv(csv, rows);
    write_file(out_path, csv.str());
    for (const SweepRow& row : rows) print_warnings(log, row);
    return static_cast<int>(kOk);
  });
}

bool ValidationReport::passed() const {
  for (const OracleCheck& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

ValidationReport validate_config(const RunConfig& config) {
  config.validate();
  ValidationReport report;
  const PerModality<ChannelProfile> channels = config.channel_profiles();
  RandomStream rng(derive_seed(config.seed, 0, kNoModality, StreamPurpose::kOracle));
  const std::int64_t n = kValidationSamples;

  for (Modality m : kModalities) {
    const auto s = index_of(m);
    const double gamma = channels[s].mean_tx_time(config.profiles[s]);
    double sum = 0.0;
    for (std::int64_t t = 0; t < n; ++t) sum += sample_delay(channels[s], gamma, rng).delay;
    report.checks.push_back(make_check("delay_mean." + std::string(to_string(m)),
                                       sum / static_cast<double>(n),
                                       delay_mean(channels[s], gamma), kValidationTolerance));
  }

  for (const TwiVariant& v : {TwiVariant::pamo(), TwiVariant::tomo()}) {
    report.checks.push_back(make_check(
        "twi." + std::string(v.name()), monte_carlo_twi(v, config.profiles, channels, n, rng),
        optimize_twi(v, config.profiles, channels), kValidationTolerance));
  }

  // Whole-observation totals; each observation draws N_s packets, so 10^4
  // observations already exceed 10^5 delay samples per stream.
  const std::int64_t observations = n / 10;
  PerModality<double> totals{};
  double t_min_sum = 0.0;
  for (std::int64_t i = 1; i <= observations; ++i) {
    PerModality<double> t{};
    for (Modality m : kModalities) {
      const auto s = index_of(m);
      t[s] = total_stream_time(config.profiles[s], channels[s], i, rng);
      totals[s] += t[s];
    }
    t_min_sum += min_end_to_end(t[0], t[1]);
  }
  for (Modality m : kModalities) {
    const auto s = index_of(m);
    const double closed = static_cast<double>(config.profiles[s].packets_per_observation()) *
                          delay_mean(channels[s], channels[s].mean_tx_time(config.profiles[s]));
    report.checks.push_back(make_check("stream_total." + std::string(to_string(m)),
                                       totals[s] / static_cast<double>(observations), closed,
                                       kValidationTolerance));
  }

  const double t_min_mean = t_min_sum / static_cast<double>(observations);
  const double tw = optimize_twi(config.twi, config.profiles, channels);
  if (!(tw < t_min_mean / 10.0)) {
    report.warnings.push_back("T_W (" + std::string(config.twi.name()) + ") = " + num(tw) +
                              " s is not much smaller than E[T_min] = " + num(t_min_mean) + " s");
  }
  return report;
}

int cmd_validate(const std::filesystem::path& config_path, std::ostream& log) {
  return guarded(log, [&] {
    const RunConfig config = load_with_override(config_path);
    const ValidationReport report = validate_config(config);
    for (const OracleCheck& c : report.checks) {
      log << (c.passed ? "PASS " : "FAIL ") << c.name << " estimate=" << num(c.estimate)
          << " closed_form=" << num(c.closed_form) << " rel_error=" << num(c.rel_error)
          << " tolerance=" << num(c.tolerance) << "\n";
    }
    for (const std::string& w : report.warnings) log << "WARN " << w << "\n";
    return static_cast<int>(report.passed() ? kOk : kValidationFailure);
  });
}

}  // namespace twisim::cli
