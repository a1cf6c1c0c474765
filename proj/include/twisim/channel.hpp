#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "twisim/random.hpp"
#include "twisim/source_model.hpp"

namespace twisim {

double snr_db_to_linear(double snr_db);

// W log2(1 - snr ln(1 - eps)), bits/second.
double effective_rate(double bandwidth_hz, double mean_snr, double outage_prob);

// Gamma = L / eta.
double mean_tx_time(double packet_bits, double rate_bps);

// Wireless link of one modality: Rayleigh block fading, erasure with outage
// probability eps, unlimited retransmissions.
class ChannelProfile {
 public:
  ChannelProfile(double bandwidth_hz, double mean_snr, double outage_prob);
  static ChannelProfile from_db(double bandwidth_hz, double snr_db, double outage_prob);

  double bandwidth() const { return bandwidth_; }
  double mean_snr() const { return mean_snr_; }
  double outage_prob() const { return outage_prob_; }
  double effective_rate() const { return rate_; }
  // Mean per-attempt transmission time of a packet of `profile`.
  double mean_tx_time(const ModalityProfile& profile) const {
    return twisim::mean_tx_time(static_cast<double>(profile.packet_bits()), rate_);
  }

 private:
  double bandwidth_;
  double mean_snr_;
  double outage_prob_;
  double rate_;
};

struct DelayDraw {
  std::int64_t attempts = 1;
  double delay = 0.0;  // attempts * Gamma
};

// Number of transmissions until success, geometric with success probability
// 1 - eps, by inversion of a single open uniform: 1 + floor(ln U / ln eps).
std::int64_t sample_attempts(double outage_prob, RandomStream& rng);
DelayDraw sample_delay(const ChannelProfile& channel, double mean_tx_time, RandomStream& rng);

double delay_mean(const ChannelProfile& channel, double mean_tx_time);
double delay_variance(const ChannelProfile& channel, double mean_tx_time);

enum class ReceptionMode {
  // t(j) = (i-1) T_video + D_s + sum_{j'<=j} T^{j'}
  kVerbatim,
  // t(j) = max(t(j-1), (i-1) T_video + j D_s) + T^j; a packet never leaves
  // before it has been acquired.
  kCausal,
};

// Per-observation delay realization of one stream.
struct StreamRealization {
  double mean_tx_time = 0.0;            // Gamma_s
  std::vector<std::int64_t> attempts;   // R per packet
  std::vector<double> rx_times;         // reception timestamps, seconds
  double total_tx_time = 0.0;           // T_{i,s} = sum of packet delays

  // Sum of the delays of packets 1..j (1-based).
  double cumulative_delay(std::size_t j) const;

 private:
  friend StreamRealization realize_stream(const ModalityProfile&, std::int64_t, double,
                                          std::span<const std::int64_t>, ReceptionMode);
  std::vector<std::int64_t> cumulative_attempts_;
};

// Builds the reception timeline from given attempt counts (one per packet).
StreamRealization realize_stream(const ModalityProfile& profile, std::int64_t observation,
                                 double mean_tx_time, std::span<const std::int64_t> attempts,
                                 ReceptionMode mode);

// Draws N_s delays from `rng` and builds the timeline.
StreamRealization draw_stream(const ModalityProfile& profile, const ChannelProfile& channel,
                              std::int64_t observation, RandomStream& rng,
                              ReceptionMode mode = ReceptionMode::kVerbatim);

std::vector<double> reception_times(const ModalityProfile& profile,
                                    const ChannelProfile& channel, std::int64_t observation,
                                    RandomStream& rng,
                                    ReceptionMode mode = ReceptionMode::kVerbatim);

// Pure transmission time of a whole observation of one stream.
double total_stream_time(const ModalityProfile& profile, const ChannelProfile& channel,
                         std::int64_t observation, RandomStream& rng);

double min_end_to_end(double total_audio, double total_visual);

}  // namespace twisim
