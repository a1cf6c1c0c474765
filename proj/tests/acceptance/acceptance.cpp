// Acceptance checks: one line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <unistd.h>
#include <sstream>
#include <string>
#include <vector>

#include "twisim/channel.hpp"
#include "twisim/cli.hpp"
#include "twisim/config.hpp"
#include "twisim/sim.hpp"
#include "twisim/twi.hpp"
#include "wrapper_properties.hpp"

using namespace twisim;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double time_limit_s;  // 0: no limit
  std::function<Outcome()> body;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double rel(double got, double want) { return std::fabs(got - want) / std::fabs(want); }

Outcome delay_law() {
  const ChannelProfile ch(1.0, 1.0, 0.5);
  RandomStream rng(derive_seed(1, 0, kNoModality, StreamPurpose::kOracle));
  constexpr int n = 100000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = sample_delay(ch, 1.0, rng).delay;
    sum += d;
    sq += d * d;
  }
  const double mean = sum / n;
  const double var = (sq - n * mean * mean) / (n - 1);
  const bool ok = rel(mean, 2.0) < 0.01 && rel(var, 2.0) < 0.02;
  return {ok, "mean " + fmt("%.5f", mean) + " (rel " + fmt("%.2e", rel(mean, 2.0)) +
                  ", tol 1%), variance " + fmt("%.5f", var) + " (rel " +
                  fmt("%.2e", rel(var, 2.0)) + ", tol 2%)"};
}

Outcome twi_closed_forms() {
  const RunConfig c = audio_visual_setup();
  const auto ch = c.channel_profiles();
  const double pamo = optimize_twi(TwiVariant::pamo(), c.profiles, ch);
  const double tomo = optimize_twi(TwiVariant::tomo(), c.profiles, ch);
  RandomStream rng(derive_seed(1, 0, kNoModality, StreamPurpose::kOracle));
  const double pamo_mc = monte_carlo_twi(TwiVariant::pamo(), c.profiles, ch, 100000, rng);
  const double tomo_mc = monte_carlo_twi(TwiVariant::tomo(), c.profiles, ch, 100000, rng);
  // Quoted to 5 significant digits: 3.1702e-2 s and 0.62403 s, matched to one
  // unit in the last quoted digit.
  const bool ok = std::fabs(pamo - 3.1702e-2) <= 1e-6 && std::fabs(tomo - 0.62403) <= 1e-5 &&
                  rel(pamo_mc, pamo) < 0.01 && rel(tomo_mc, tomo) < 0.01;
  return {ok, "PaMo " + fmt("%.6e", pamo) + " s (MC rel " + fmt("%.2e", rel(pamo_mc, pamo)) +
                  "), ToMo " + fmt("%.6f", tomo) + " s (MC rel " +
                  fmt("%.2e", rel(tomo_mc, tomo)) + "), MC tol 1%"};
}

Outcome packet_counts() {
  const auto p = audio_visual_setup().profiles;
  const bool ok = p[0].packets_per_observation() == 500 && p[1].packets_per_observation() == 160 &&
                  p[0].packets_per_token() == 50 && p[1].packets_per_token() == 16 &&
                  p[0].samples_per_packet() == Rational(320) &&
                  p[1].samples_per_packet() == Rational(1);
  std::ostringstream os;
  os << "(N_a, N_v, N_a^k, N_v^k, S_a^p, S_v^p) = (" << p[0].packets_per_observation() << ", "
     << p[1].packets_per_observation() << ", " << p[0].packets_per_token() << ", "
     << p[1].packets_per_token() << ", " << to_double(p[0].samples_per_packet()) << ", "
     << to_double(p[1].samples_per_packet()) << ")";
  return {ok, os.str()};
}

Outcome stream_totals() {
  RunConfig c = audio_visual_setup();
  c.n_observations = 10000;
  const RunMetrics m = run(c);
  const double ta = m.t_audio.mean, tv = m.t_visual.mean, tmin = m.t_min.mean;
  const bool ok = rel(ta, 6.2403) < 0.01 && rel(tv, 5.0723) < 0.01 && tmin < std::min(ta, tv);
  return {ok, "E[T_a] " + fmt("%.4f", ta) + " s (rel " + fmt("%.2e", rel(ta, 6.2403)) +
                  "), E[T_v] " + fmt("%.4f", tv) + " s (rel " + fmt("%.2e", rel(tv, 5.0723)) +
                  "), E[T_min] " + fmt("%.4f", tmin) + " s"};
}

Outcome wrapper_properties() {
  test::ReplayStats stats;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    if (std::string f = test::check_replay(seed, &stats); !f.empty()) return {false, f};
    // 10 subsets per seed: 1000 random packet subsets in total.
    if (std::string f = test::check_completion_equivalence(seed, 10); !f.empty()) {
      return {false, f};
    }
  }
  std::ostringstream os;
  os << "100 seeds, " << stats.ticks << " ticks, " << stats.predictions << " predictions, "
     << stats.finalized << " finalizations, " << stats.duplicates_rejected
     << " duplicates rejected, 1000 subsets vs union oracle";
  return {true, os.str()};
}

Outcome dominance() {
  RunConfig c = audio_visual_setup();
  c.n_observations = 1000;
  std::ostringstream os;
  bool ok = true;
  for (auto variant : {TwiVariant::tomo(), TwiVariant::pamo()}) {
    c.twi = variant;
    const RunMetrics m = run(c);
    std::int64_t le = 0, early = 0, strict = 0;
    for (const ObservationRecord& r : m.observations) {
      if (r.first_prediction_latency <= r.baseline_completion) ++le;
      if (r.first_token_ready < r.baseline_completion) {
        ++early;
        if (r.first_prediction_latency < r.baseline_completion) ++strict;
      }
    }
    const double frac = static_cast<double>(le) / static_cast<double>(m.observations.size());
    ok = ok && frac >= 0.99 && strict == early;
    os << variant.name() << ": first prediction <= baseline in " << fmt("%.1f", 100 * frac)
       << "%, strictly earlier in " << strict << "/" << early << " early-token realizations; ";
  }
  std::string s = os.str();
  s.resize(s.size() - 2);
  return {ok, s};
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / ("twisim_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path cfg = fs::path(TWISIM_CONFIG_DIR) / "audio_visual.json";
  std::ostringstream log;
  const int a = cli::cmd_run(cfg, dir / "a.csv", log);
  const int b = cli::cmd_run(cfg, dir / "b.csv", log);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };
  const std::string x = slurp(dir / "a.csv"), y = slurp(dir / "b.csv");
  fs::remove_all(dir);
  const bool ok = a == 0 && b == 0 && !x.empty() && x == y;
  return {ok, std::to_string(x.size()) + " bytes, identical: " + (x == y ? "yes" : "no")};
}

Outcome surrogate_calibration() {
  const SurrogateBackend backend(audio_visual_setup().surrogate);
  RandomStream rng(derive_seed(1, 0, kNoModality, StreamPurpose::kBackend));
  constexpr int n = 100000;
  const std::vector<AvailabilityPair> full(n, AvailabilityPair{1.0, 1.0});
  int correct = 0;
  for (const TokenOutcome& o : backend.predict(full, rng)) correct += o.correct ? 1 : 0;
  const double acc = static_cast<double>(correct) / n;
  const double half = 2.576 * std::sqrt(0.672 * 0.328 / n);
  bool ok = std::fabs(acc - 0.672) <= half;

  int monotone = 0;
  RunConfig c = audio_visual_setup();
  c.n_observations = 300;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    c.seed = seed;
    const RunMetrics m = run(c);
    bool up = !m.ticks.empty();
    for (std::size_t k = 1; k < m.ticks.size(); ++k) {
      up = up && m.ticks[k].latency > m.ticks[k - 1].latency &&
           m.ticks[k].accuracy >= m.ticks[k - 1].accuracy;
    }
    monotone += up ? 1 : 0;
  }
  ok = ok && monotone == 20;
  return {ok, "accuracy " + fmt("%.5f", acc) + " in [" + fmt("%.5f", 0.672 - half) + ", " +
                  fmt("%.5f", 0.672 + half) + "], monotone curves " + std::to_string(monotone) +
                  "/20 seeds"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"delay-law fidelity", 1.0, delay_law},
      {"TWI closed forms", 5.0, twi_closed_forms},
      {"packet/token counts", 0.0, packet_counts},
      {"stream totals", 30.0, stream_totals},
      {"wrapper state-machine properties", 60.0, wrapper_properties},
      {"non-blocking dominance", 60.0, dominance},
      {"determinism", 0.0, determinism},
      {"surrogate calibration", 0.0, surrogate_calibration},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.time_limit_s <= 0.0 || secs < c.time_limit_s;
    const bool passed = o.passed && in_time;
    failures += passed ? 0 : 1;
    std::printf("%s  %-34s %s [%.2f s%s]\n", passed ? "PASS" : "FAIL", c.name.c_str(),
                o.detail.c_str(), secs,
                c.time_limit_s > 0.0 ? (", limit " + fmt("%g", c.time_limit_s) + " s").c_str() : "");
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
