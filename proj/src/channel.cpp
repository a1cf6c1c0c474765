#include "twisim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "twisim/errors.hpp"

namespace twisim {

double snr_db_to_linear(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

double effective_rate(double bandwidth_hz, double mean_snr, double outage_prob) {
  if (!(bandwidth_hz > 0.0)) throw DomainError("bandwidth must be positive");
  if (!(mean_snr > 0.0)) throw DomainError("mean SNR must be positive");
  if (!(outage_prob > 0.0 && outage_prob < 1.0)) {
    throw DomainError("outage probability must lie in (0, 1)");
  }
  // log1p keeps precision for tiny eps where -ln(1-eps) ~ eps.
  return bandwidth_hz * std::log1p(-mean_snr * std::log1p(-outage_prob)) / std::log(2.0);
}

double mean_tx_time(double packet_bits, double rate_bps) {
  if (!(packet_bits > 0.0)) throw DomainError("packet size must be positive");
  if (!(rate_bps > 0.0)) throw DomainError("rate must be positive");
  return packet_bits / rate_bps;
}

ChannelProfile::ChannelProfile(double bandwidth_hz, double mean_snr, double outage_prob)
    : bandwidth_(bandwidth_hz),
      mean_snr_(mean_snr),
      outage_prob_(outage_prob),
      rate_(twisim::effective_rate(bandwidth_hz, mean_snr, outage_prob)) {}

ChannelProfile ChannelProfile::from_db(double bandwidth_hz, double snr_db, double outage_prob) {
  return ChannelProfile(bandwidth_hz, snr_db_to_linear(snr_db), outage_prob);
}

std::int64_t sample_attempts(double outage_prob, RandomStream& rng) {
  const double u = rng.uniform_open();
  return 1 + static_cast<std::int64_t>(std::floor(std::log(u) / std::log(outage_prob)));
}

DelayDraw sample_delay(const ChannelProfile& channel, double mean_tx_time, RandomStream& rng) {
  const std::int64_t r = sample_attempts(channel.outage_prob(), rng);
  return {r, static_cast<double>(r) * mean_tx_time};
}

double delay_mean(const ChannelProfile& channel, double mean_tx_time) {
  return mean_tx_time / (1.0 - channel.outage_prob());
}

double delay_variance(const ChannelProfile& channel, double mean_tx_time) {
  const double eps = channel.outage_prob();
  return eps * mean_tx_time * mean_tx_time / ((1.0 - eps) * (1.0 - eps));
}

double StreamRealization::cumulative_delay(std::size_t j) const {
  if (j == 0) return 0.0;
  return static_cast<double>(cumulative_attempts_.at(j - 1)) * mean_tx_time;
}

StreamRealization realize_stream(const ModalityProfile& profile, std::int64_t observation,
                                 double mean_tx_time, std::span<const std::int64_t> attempts,
                                 ReceptionMode mode) {
  if (observation < 1) throw DomainError("observation index must be >= 1");
  if (static_cast<std::int64_t>(attempts.size()) != profile.packets_per_observation()) {
    throw DomainError("one attempt count per packet is required");
  }
  StreamRealization s;
  s.mean_tx_time = mean_tx_time;
  s.attempts.assign(attempts.begin(), attempts.end());
  s.rx_times.reserve(attempts.size());
  s.cumulative_attempts_.reserve(attempts.size());

  const Rational origin = profile.video_duration() * (observation - 1);
  const double first_packet_end = to_double(origin + profile.packet_duration());
  std::int64_t cumulative = 0;
  double previous = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < attempts.size(); ++n) {
    if (attempts[n] < 1) throw DomainError("attempt counts must be >= 1");
    cumulative += attempts[n];
    s.cumulative_attempts_.push_back(cumulative);
    double t = 0.0;
    if (mode == ReceptionMode::kVerbatim) {
      t = first_packet_end + static_cast<double>(cumulative) * mean_tx_time;
    } else {
      const auto j = static_cast<std::int64_t>(n + 1);
      const double acquired = to_double(origin + profile.packet_duration() * j);
      t = std::max(previous, acquired) + static_cast<double>(attempts[n]) * mean_tx_time;
    }
    s.rx_times.push_back(t);
    previous = t;
  }
  s.total_tx_time = static_cast<double>(cumulative) * mean_tx_time;
  return s;
}

StreamRealization draw_stream(const ModalityProfile& profile, const ChannelProfile& channel,
                              std::int64_t observation, RandomStream& rng, ReceptionMode mode) {
  std::vector<std::int64_t> attempts(static_cast<std::size_t>(profile.packets_per_observation()));
  for (auto& r : attempts) r = sample_attempts(channel.outage_prob(), rng);
  return realize_stream(profile, observation, channel.mean_tx_time(profile), attempts, mode);
}

std::vector<double> reception_times(const ModalityProfile& profile,
                                    const ChannelProfile& channel, std::int64_t observation,
                                    RandomStream& rng, ReceptionMode mode) {
  return draw_stream(profile, channel, observation, rng, mode).rx_times;
}

double total_stream_time(const ModalityProfile& profile, const ChannelProfile& channel,
                         std::int64_t observation, RandomStream& rng) {
  return draw_stream(profile, channel, observation, rng).total_tx_time;
}

double min_end_to_end(double total_audio, double total_visual) {
  return std::min(total_audio, total_visual);
}

}  // namespace twisim
