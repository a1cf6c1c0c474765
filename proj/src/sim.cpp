#include "twisim/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <map>
#include <queue>
#include <thread>

#include "twisim/errors.hpp"

namespace twisim {
namespace {

struct ReceptionEvent {
  double rx_time;
  std::int64_t observation;
  Modality modality;
  std::int64_t index;

  // Min-heap order on (rx_time, observation, modality, index).
  bool operator>(const ReceptionEvent& o) const {
    if (rx_time != o.rx_time) return rx_time > o.rx_time;
    if (observation != o.observation) return observation > o.observation;
    if (modality != o.modality) return modality > o.modality;
    return index > o.index;
  }
};

struct Snapshot {
  double k_avail = 0.0;
  double avail_audio = 0.0;
  double avail_visual = 0.0;
  double accuracy = 0.0;
};

struct BinSums {
  double k_avail = 0.0;
  double avail_audio = 0.0;
  double avail_visual = 0.0;
  double accuracy = 0.0;

  void add(const Snapshot& s) {
    k_avail += s.k_avail;
    avail_audio += s.avail_audio;
    avail_visual += s.avail_visual;
    accuracy += s.accuracy;
  }
};

// Per-observation bookkeeping while the observation is in flight.
struct LiveObservation {
  ObservationRecord record;
  double origin = 0.0;
  std::int64_t first_bin_tick = 0;  // first global tick at or after origin
  std::vector<Snapshot> bins;
  bool predicted = false;
  PerModality<bool> modality_done{};
  RandomStream backend_rng{0};
  bool lag_seen = false;
};

double tick_time(std::int64_t n, double tw) { return static_cast<double>(n) * tw; }

// Smallest n with n * tw >= t.
std::int64_t first_tick_at_or_after(double t, double tw) {
  auto n = static_cast<std::int64_t>(std::ceil(t / tw));
  while (tick_time(n, tw) < t) ++n;
  while (n > 0 && tick_time(n - 1, tw) >= t) --n;
  return n;
}

double expected_accuracy(const TickReport& report, std::int64_t tokens, double chance) {
  double sum = 0.0;
  std::int64_t predicted = 0;
  if (report.prediction) {
    for (const TokenPrediction& t : report.prediction->tokens) sum += t.outcome.confidence;
    predicted = static_cast<std::int64_t>(report.prediction->tokens.size());
  }
  sum += static_cast<double>(tokens - predicted) * chance;
  return sum / static_cast<double>(tokens);
}

}  // namespace

void RunConfig::validate() const {
  if (profiles[0].modality() != Modality::kAudio || profiles[1].modality() != Modality::kVisual) {
    throw DomainError("profiles must be ordered (audio, visual)");
  }
  if (profiles[0].video_duration() != profiles[1].video_duration() ||
      profiles[0].token_duration() != profiles[1].token_duration()) {
    throw DomainError("audio and visual profiles must share video and token durations");
  }
  if (n_observations < 1) throw DomainError("n_observations must be >= 1");
  surrogate.validate();
  (void)channel_profiles();  // throws on invalid channel parameters
}

RunConfig audio_visual_setup() {
  const Rational video(10);
  const Rational token(1);
  PerModality<ModalityProfile> profiles{
      ModalityProfile(Modality::kAudio, Rational(16000), 16, 5120, video, token),
      ModalityProfile(Modality::kVisual, Rational(16), 8 * 224 * 224 * 3, 8 * 224 * 224 * 3,
                      video, token)};
  PerModality<ChannelSettings> channels{ChannelSettings{1.08e6, 0.0, 0.5},
                                        ChannelSettings{100e6, 0.0, 0.5}};
  RunConfig config(std::move(profiles), channels);
  config.twi = TwiVariant::tomo();
  config.surrogate = SurrogateParams{1.0 / 29.0, 0.672, 0.7, 0.3};
  config.n_observations = 1000;
  config.seed = 1;
  return config;
}

Estimate estimate(std::span<const double> values) {
  Estimate e;
  if (values.empty()) return e;
  const auto n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  e.mean = sum / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - e.mean) * (v - e.mean);
    e.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return e;
}

RunMetrics run(const RunConfig& config) {
  config.validate();
  const PerModality<ChannelProfile> channels = config.channel_profiles();
  const SurrogateBackend backend(config.surrogate);
  const std::int64_t tokens = config.profiles[0].tokens_per_observation();
  const double chance = backend.chance_level();
  const double video = to_double(config.profiles[0].video_duration());

  RunMetrics metrics;
  metrics.tw = optimize_twi(config.twi, config.profiles, channels);
  const double tw = metrics.tw;

  Wrapper wrapper(config.profiles, config.pointer_mode);
  std::priority_queue<ReceptionEvent, std::vector<ReceptionEvent>, std::greater<>> events;
  std::map<std::int64_t, LiveObservation> live;
  metrics.observations.resize(static_cast<std::size_t>(config.n_observations));

  // Curve accumulators. An observation finalized at bin M adds its snapshots to
  // bins 0..M and its final snapshot to every later bin through `tail`.
  std::vector<BinSums> bin_sums;
  std::vector<BinSums> tail;
  std::int64_t max_bin = 0;
  double origin_offset_sum = 0.0;

  std::int64_t correct_tokens = 0;
  std::int64_t next_observation = 1;
  std::int64_t finalized = 0;

  auto spawn = [&](std::int64_t i) {
    LiveObservation obs;
    obs.origin = video * static_cast<double>(i - 1);
    obs.first_bin_tick = first_tick_at_or_after(obs.origin, tw);
    obs.backend_rng = RandomStream(derive_seed(config.seed, static_cast<std::uint64_t>(i),
                                               kNoModality, StreamPurpose::kBackend));
    origin_offset_sum += tick_time(obs.first_bin_tick, tw) - obs.origin;

    PerModality<StreamRealization> streams;
    for (Modality m : kModalities) {
      const auto s = index_of(m);
      RandomStream rng(derive_seed(config.seed, static_cast<std::uint64_t>(i),
                                   static_cast<std::uint32_t>(s), StreamPurpose::kChannel));
      streams[s] = draw_stream(config.profiles[s], channels[s], i, rng, config.reception);
      for (std::size_t n = 0; n < streams[s].rx_times.size(); ++n) {
        events.push({streams[s].rx_times[n], i, m, static_cast<std::int64_t>(n + 1)});
      }
    }

    ObservationRecord& r = obs.record;
    r.observation = i;
    r.t_audio = streams[0].total_tx_time;
    r.t_visual = streams[1].total_tx_time;
    r.t_min = min_end_to_end(r.t_audio, r.t_visual);

    RandomStream baseline_rng(derive_seed(config.seed, static_cast<std::uint64_t>(i),
                                          kNoModality, StreamPurpose::kBaseline));
    const BaselineResult base =
        baseline_run(config.reference, config.profiles, streams, i, backend, baseline_rng);
    r.baseline_reference = base.reference;
    r.baseline_latency = base.latency;
    r.baseline_completion = streams[index_of(base.reference)].rx_times.back() - obs.origin;
    r.baseline_accuracy = base.expected_accuracy;

    double first_token = std::numeric_limits<double>::infinity();
    for (Modality m : kModalities) {
      const auto s = index_of(m);
      for (std::int64_t k = 1; k <= tokens; ++k) {
        const auto [first, last] = config.profiles[s].packets_of_token(k);
        double ready = 0.0;
        for (std::int64_t j = first; j <= last; ++j) {
          ready = std::max(ready, streams[s].rx_times[static_cast<std::size_t>(j - 1)]);
        }
        first_token = std::min(first_token, ready);
      }
    }
    r.first_token_ready = first_token - obs.origin;
    live.emplace(i, std::move(obs));
  };

  auto record_bin = [&](LiveObservation& obs, std::int64_t bin, const Snapshot& snap) {
    const Snapshot carry = obs.bins.empty() ? Snapshot{0.0, 0.0, 0.0, chance} : obs.bins.back();
    while (static_cast<std::int64_t>(obs.bins.size()) < bin) obs.bins.push_back(carry);
    if (static_cast<std::int64_t>(obs.bins.size()) == bin) {
      obs.bins.push_back(snap);
    } else {
      obs.bins[static_cast<std::size_t>(bin)] = snap;
    }
  };

  auto retire = [&](std::int64_t i) {
    LiveObservation& obs = live.at(i);
    const Wrapper::Counters c = wrapper.counters(i);
    obs.record.packets_ingested = c.ingested;
    obs.record.packets_pruned = c.pruned;
    obs.record.packets_dropped = c.dropped_at_finalization;

    const auto last = static_cast<std::int64_t>(obs.bins.size()) - 1;
    max_bin = std::max(max_bin, last);
    if (static_cast<std::int64_t>(bin_sums.size()) <= last + 1) {
      bin_sums.resize(static_cast<std::size_t>(last + 2));
      tail.resize(static_cast<std::size_t>(last + 2));
    }
    for (std::size_t b = 0; b < obs.bins.size(); ++b) bin_sums[b].add(obs.bins[b]);
    tail[static_cast<std::size_t>(last + 1)].add(obs.bins.back());

    metrics.observations[static_cast<std::size_t>(i - 1)] = obs.record;
    live.erase(i);
    ++finalized;
  };

  std::int64_t n = 0;
  while (finalized < config.n_observations) {
    const double tau = tick_time(n, tw);
    while (next_observation <= config.n_observations &&
           video * static_cast<double>(next_observation - 1) <= tau) {
      spawn(next_observation++);
    }
    while (!events.empty() && events.top().rx_time <= tau) {
      const ReceptionEvent e = events.top();
      events.pop();
      const ModalityProfile& prof = config.profiles[index_of(e.modality)];
      wrapper.ingest(make_packet(prof, e.observation, e.index), e.rx_time);
      LiveObservation& obs = live.at(e.observation);
      const double lag = tau - e.rx_time;
      if (!obs.lag_seen) {
        obs.record.min_ingest_lag = obs.record.max_ingest_lag = lag;
        obs.lag_seen = true;
      } else {
        obs.record.min_ingest_lag = std::min(obs.record.min_ingest_lag, lag);
        obs.record.max_ingest_lag = std::max(obs.record.max_ingest_lag, lag);
      }
    }

    const std::int64_t active = wrapper.control().active_observation;
    auto it = live.find(active);
    if (it != live.end() && wrapper.pending_observations() > 0) {
      LiveObservation& obs = it->second;
      const TickReport report = wrapper.tick(tau, backend, obs.backend_rng);
      ++metrics.wrapper_ticks;
      const double rel = tau - obs.origin;

      Snapshot snap;
      snap.k_avail = static_cast<double>(report.control.k_avail);
      snap.avail_audio = report.mean_availability[0];
      snap.avail_visual = report.mean_availability[1];
      snap.accuracy = expected_accuracy(report, tokens, chance);
      record_bin(obs, n - obs.first_bin_tick, snap);

      if (report.prediction) {
        for (const TokenPrediction& t : report.prediction->tokens) {
          correct_tokens += t.outcome.correct ? 1 : 0;
        }
        metrics.predicted_tokens += static_cast<std::int64_t>(report.prediction->tokens.size());
        if (!obs.predicted) {
          obs.record.first_prediction_latency = rel;
          obs.predicted = true;
        }
      }
      for (Modality m : kModalities) {
        const auto s = index_of(m);
        if (!obs.modality_done[s] && report.control.k_full[s] == tokens) {
          obs.record.modality_complete_latency[s] = rel;
          obs.modality_done[s] = true;
        }
      }
      if (report.finalized) {
        obs.record.completion_latency = rel;
        retire(active);
      }
    }

    // Skip idle ticks: nothing buffered means nothing can change before the
    // next reception or the next observation start.
    std::int64_t next = n + 1;
    if (wrapper.pending_observations() == 0) {
      double wake = std::numeric_limits<double>::infinity();
      if (!events.empty()) wake = events.top().rx_time;
      if (next_observation <= config.n_observations) {
        wake = std::min(wake, video * static_cast<double>(next_observation - 1));
      }
      if (std::isfinite(wake)) next = std::max(next, first_tick_at_or_after(wake, tw));
    }
    n = next;
  }

  // Curve assembly.
  const auto count = static_cast<double>(config.n_observations);
  const double offset_mean = origin_offset_sum / count;
  BinSums carried;
  metrics.ticks.reserve(static_cast<std::size_t>(max_bin + 1));
  for (std::int64_t b = 0; b <= max_bin; ++b) {
    const auto idx = static_cast<std::size_t>(b);
    carried.k_avail += tail[idx].k_avail;
    carried.avail_audio += tail[idx].avail_audio;
    carried.avail_visual += tail[idx].avail_visual;
    carried.accuracy += tail[idx].accuracy;
    TickRecord t;
    t.tick = b;
    t.latency = static_cast<double>(b) * tw + offset_mean;
    t.k_avail_mean = (bin_sums[idx].k_avail + carried.k_avail) / count;
    t.avail_audio_mean = (bin_sums[idx].avail_audio + carried.avail_audio) / count;
    t.avail_visual_mean = (bin_sums[idx].avail_visual + carried.avail_visual) / count;
    t.accuracy = (bin_sums[idx].accuracy + carried.accuracy) / count;
    metrics.ticks.push_back(t);
  }

  auto collect = [&](auto field) {
    std::vector<double> v;
    v.reserve(metrics.observations.size());
    for (const ObservationRecord& r : metrics.observations) v.push_back(field(r));
    return estimate(v);
  };
  metrics.t_audio = collect([](const ObservationRecord& r) { return r.t_audio; });
  metrics.t_visual = collect([](const ObservationRecord& r) { return r.t_visual; });
  metrics.t_min = collect([](const ObservationRecord& r) { return r.t_min; });
  metrics.baseline_latency = collect([](const ObservationRecord& r) { return r.baseline_latency; });
  metrics.baseline_completion =
      collect([](const ObservationRecord& r) { return r.baseline_completion; });
  metrics.baseline_accuracy = collect([](const ObservationRecord& r) { return r.baseline_accuracy; });
  metrics.first_prediction_latency =
      collect([](const ObservationRecord& r) { return r.first_prediction_latency; });
  metrics.completion_latency =
      collect([](const ObservationRecord& r) { return r.completion_latency; });
  metrics.sampled_token_accuracy =
      metrics.predicted_tokens > 0
          ? static_cast<double>(correct_tokens) / static_cast<double>(metrics.predicted_tokens)
          : 0.0;

  if (!(tw < metrics.t_min.mean / 10.0)) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "T_W = %.6g s is not much smaller than the mean T_min = %.6g s (T_W >= T_min/10)",
                  tw, metrics.t_min.mean);
    metrics.warnings.emplace_back(buf);
  }
  return metrics;
}

std::vector<SweepRow> sweep(const RunConfig& base, std::span<const double> snr_audio_db,
                            std::span<const std::uint64_t> seeds, int jobs) {
  if (snr_audio_db.empty()) throw DomainError("sweep needs at least one audio SNR");
  if (seeds.empty()) throw DomainError("sweep needs at least one seed");

  std::vector<SweepRow> rows;
  rows.reserve(snr_audio_db.size() * seeds.size());
  for (double snr : snr_audio_db) {
    for (std::uint64_t seed : seeds) {
      RunConfig config = base;
      config.channels[index_of(Modality::kAudio)].snr_db = snr;
      config.seed = seed;
      config.validate();
      rows.push_back(SweepRow{static_cast<std::int64_t>(rows.size()), std::move(config), {}});
    }
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(rows.size());
  auto worker = [&] {
    for (std::size_t r = next++; r < rows.size(); r = next++) {
      try {
        rows[r].metrics = run(rows[r].config);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::clamp(jobs, 1, 64));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(threads, rows.size()); ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

}  // namespace twisim
