#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "twisim/backend.hpp"
#include "twisim/baseline.hpp"
#include "twisim/channel.hpp"
#include "twisim/source_model.hpp"
#include "twisim/twi.hpp"
#include "twisim/wrapper.hpp"

namespace twisim {

struct ChannelSettings {
  double bandwidth_hz = 1.0;
  double snr_db = 0.0;
  double outage_prob = 0.5;

  ChannelProfile profile() const {
    return ChannelProfile::from_db(bandwidth_hz, snr_db, outage_prob);
  }
};

struct RunConfig {
  RunConfig(PerModality<ModalityProfile> profiles, PerModality<ChannelSettings> channels)
      : profiles(std::move(profiles)), channels(channels) {}

  PerModality<ModalityProfile> profiles;
  PerModality<ChannelSettings> channels;
  TwiVariant twi = TwiVariant::pamo();
  ReferencePolicy reference = ReferencePolicy::kOracleFastest;
  SurrogateParams surrogate;
  std::int64_t n_observations = 1;
  std::uint64_t seed = 0;
  ReceptionMode reception = ReceptionMode::kVerbatim;
  PointerMode pointer_mode = PointerMode::kMax;

  PerModality<ChannelProfile> channel_profiles() const {
    return {channels[0].profile(), channels[1].profile()};
  }
  // Throws DomainError on any inconsistency.
  void validate() const;
};

// 16 kHz / 16-bit audio in 5120-bit packets over a 1.08 MHz link, 16 fps
// 224x224 RGB frames (one frame per packet) over a 100 MHz link, 10 s
// observations of ten 1 s tokens, both links at 0 dB and 50 % outage.
RunConfig audio_visual_setup();

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  friend bool operator==(const Estimate&, const Estimate&) = default;
};

Estimate estimate(std::span<const double> values);

// Latencies are relative to the observation start (i-1) T_video unless noted.
struct ObservationRecord {
  std::int64_t observation = 0;
  double t_audio = 0.0;  // total transmission times
  double t_visual = 0.0;
  double t_min = 0.0;
  Modality baseline_reference = Modality::kAudio;
  double baseline_latency = 0.0;     // T_{i,ref}, transmission only
  double baseline_completion = 0.0;  // last reference packet received
  double baseline_accuracy = 0.0;
  double first_token_ready = 0.0;    // earliest reception completing any token
  double first_prediction_latency = 0.0;
  PerModality<double> modality_complete_latency{};  // first tick with all K tokens
  double completion_latency = 0.0;                  // finalization tick
  std::int64_t packets_ingested = 0;
  std::int64_t packets_pruned = 0;
  std::int64_t packets_dropped = 0;  // removed at finalization without pruning
  double min_ingest_lag = 0.0;       // tick time minus reception time
  double max_ingest_lag = 0.0;

  friend bool operator==(const ObservationRecord&, const ObservationRecord&) = default;
};

// One point of the accuracy-latency curve: the m-th tick after each
// observation's start, averaged over observations. An observation contributes
// chance accuracy before its first prediction and its final prediction after
// finalization; tokens beyond k_avail count at chance.
struct TickRecord {
  std::int64_t tick = 0;
  double latency = 0.0;
  double k_avail_mean = 0.0;
  double avail_audio_mean = 0.0;
  double avail_visual_mean = 0.0;
  double accuracy = 0.0;  // expected per-token accuracy

  friend bool operator==(const TickRecord&, const TickRecord&) = default;
};

struct RunMetrics {
  double tw = 0.0;
  std::vector<TickRecord> ticks;
  std::vector<ObservationRecord> observations;

  Estimate t_audio;
  Estimate t_visual;
  Estimate t_min;
  Estimate baseline_latency;
  Estimate baseline_completion;
  Estimate baseline_accuracy;
  Estimate first_prediction_latency;
  Estimate completion_latency;

  // Fraction of sampled per-token predictions that were correct.
  double sampled_token_accuracy = 0.0;
  std::int64_t predicted_tokens = 0;
  std::int64_t wrapper_ticks = 0;
  std::vector<std::string> warnings;

  friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

// Simulates n_observations back-to-back observations: draws delays, replays
// receptions through the TWI-clocked wrapper and evaluates the baseline on the
// same realization. Deterministic in config.seed.
RunMetrics run(const RunConfig& config);

struct SweepRow {
  std::int64_t run_id = 0;
  RunConfig config;
  RunMetrics metrics;
};

// One run per (audio SNR, seed) pair, SNR-major. Each run uses its seed as the
// master seed, so every SNR sees the same uniforms (common random numbers).
// `jobs` > 1 executes runs on worker threads; output order is unaffected.
std::vector<SweepRow> sweep(const RunConfig& base, std::span<const double> snr_audio_db,
                            std::span<const std::uint64_t> seeds, int jobs = 1);

}  // namespace twisim
