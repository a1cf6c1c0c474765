#include "twisim/wrapper.hpp"

#include <string>

#include "twisim/errors.hpp"

namespace twisim {

Wrapper::Wrapper(PerModality<ModalityProfile> profiles, PointerMode pointer_mode)
    : profiles_(std::move(profiles)),
      pointer_mode_(pointer_mode),
      tokens_(profiles_[0].tokens_per_observation()) {
  if (profiles_[0].modality() != Modality::kAudio ||
      profiles_[1].modality() != Modality::kVisual) {
    throw DomainError("profiles must be ordered (audio, visual)");
  }
  if (profiles_[0].video_duration() != profiles_[1].video_duration() ||
      profiles_[0].token_duration() != profiles_[1].token_duration()) {
    throw DomainError("modalities must share observation and token durations");
  }
}

Wrapper::ObservationProgress& Wrapper::progress_for(std::int64_t observation) {
  auto it = progress_.find(observation);
  if (it != progress_.end()) return it->second;
  ObservationProgress obs;
  obs.control.active_observation = observation;
  for (Modality m : kModalities) {
    const ModalityProfile& prof = profiles_[index_of(m)];
    ModalityProgress& p = obs.modality[index_of(m)];
    p.received.assign(static_cast<std::size_t>(prof.packets_per_observation()), false);
    p.covered.assign(static_cast<std::size_t>(tokens_), Rational(0));
    p.token_buffer.assign(static_cast<std::size_t>(tokens_), std::nullopt);
  }
  return progress_.emplace(observation, std::move(obs)).first->second;
}

const Wrapper::ObservationProgress* Wrapper::find_progress(std::int64_t observation) const {
  auto it = progress_.find(observation);
  return it == progress_.end() ? nullptr : &it->second;
}

void Wrapper::refresh_active() {
  if (progress_.empty()) {
    control_ = ControlState{};
    control_.active_observation = next_expected_;
    return;
  }
  control_ = progress_.begin()->second.control;
}

void Wrapper::ingest(const Packet& packet, double rx_time) {
  const auto s = index_of(packet.modality);
  const ModalityProfile& prof = profiles_[s];
  if (packet.observation < 1) throw DomainError("observation index must be >= 1");
  if (packet.index < 1 || packet.index > prof.packets_per_observation()) {
    throw DomainError("packet index " + std::to_string(packet.index) + " out of range");
  }
  const std::string key = std::string(to_string(packet.modality)) + " packet (" +
                          std::to_string(packet.observation) + ", " +
                          std::to_string(packet.index) + ")";
  if (finalized_.contains(packet.observation)) {
    throw DuplicatePacketError(key + " belongs to a finalized observation");
  }
  ObservationProgress& obs = progress_for(packet.observation);
  ModalityProgress& p = obs.modality[s];
  const auto slot = static_cast<std::size_t>(packet.index - 1);
  if (p.received[slot]) throw DuplicatePacketError(key + " already received");

  p.received[slot] = true;
  p.unassembled.push_back(packet.index);
  buffers_[s].emplace(PacketKey{packet.observation, packet.index},
                      BufferedPacket{packet, rx_time});
  ++counters_[packet.observation].ingested;
  refresh_active();
}

void Wrapper::assemble(ObservationProgress& obs) {
  for (Modality m : kModalities) {
    const ModalityProfile& prof = profiles_[index_of(m)];
    ModalityProgress& p = obs.modality[index_of(m)];
    for (std::int64_t j : p.unassembled) {
      // Packets never overlap each other, so coverage is additive.
      const SampleRange range = prof.packet_samples(j);
      const auto [first, last] = prof.tokens_of_packet(j);
      for (std::int64_t k = first; k <= last; ++k) {
        p.covered[static_cast<std::size_t>(k - 1)] += overlap_measure(range, prof.token_samples(k));
      }
    }
    p.unassembled.clear();
  }
}

TokenAvailability Wrapper::token_state(Modality m, const ModalityProgress& p,
                                       std::int64_t k) const {
  const Rational per_token(profiles_[index_of(m)].samples_per_token());
  const Rational& c = p.covered[static_cast<std::size_t>(k - 1)];
  return {to_double(c / per_token), c == per_token};
}

TokenAvailability Wrapper::assemble_token(Modality m, std::int64_t k) {
  if (k < 1 || k > tokens_) throw DomainError("token index out of range");
  auto it = progress_.find(control_.active_observation);
  if (it == progress_.end()) return {};
  assemble(it->second);
  return token_state(m, it->second.modality[index_of(m)], k);
}

void Wrapper::update_pointers() {
  auto it = progress_.find(control_.active_observation);
  if (it == progress_.end()) return;
  ObservationProgress& obs = it->second;
  for (Modality m : kModalities) {
    const auto s = index_of(m);
    const ModalityProgress& p = obs.modality[s];
    std::int64_t prefix = 0;
    std::int64_t full = 0;
    bool contiguous = true;
    for (std::int64_t k = 1; k <= tokens_; ++k) {
      const bool done = token_state(m, p, k).complete;
      if (done) ++full;
      contiguous = contiguous && done;
      if (contiguous) prefix = k;
    }
    obs.control.k_curr[s] = prefix;
    obs.control.k_full[s] = full;
  }
  const auto [ka, kv] = obs.control.k_curr;
  obs.control.k_avail = pointer_mode_ == PointerMode::kMax ? std::max(ka, kv) : std::min(ka, kv);
  control_ = obs.control;
}

std::int64_t Wrapper::migrate(ObservationProgress& obs, double tau) {
  std::int64_t moved = 0;
  for (Modality m : kModalities) {
    ModalityProgress& p = obs.modality[index_of(m)];
    for (std::int64_t k = 1; k <= tokens_; ++k) {
      auto& slot = p.token_buffer[static_cast<std::size_t>(k - 1)];
      if (!slot && token_state(m, p, k).complete) {
        slot = CompletedTokenRecord{tau, 1.0};
        ++moved;
      }
    }
  }
  return moved;
}

std::int64_t Wrapper::prune() {
  const std::int64_t i = control_.active_observation;
  auto it = progress_.find(i);
  if (it == progress_.end()) return 0;
  const ObservationProgress& obs = it->second;
  std::int64_t removed = 0;
  for (Modality m : kModalities) {
    const auto s = index_of(m);
    const ModalityProfile& prof = profiles_[s];
    auto& buffer = buffers_[s];
    auto pos = buffer.lower_bound(PacketKey{i, 0});
    while (pos != buffer.end() && pos->first.first == i) {
      const auto [first, last] = prof.tokens_of_packet(pos->first.second);
      bool done = true;
      for (std::int64_t k = first; k <= last && done; ++k) {
        done = obs.modality[s].token_buffer[static_cast<std::size_t>(k - 1)].has_value();
      }
      if (done) {
        pos = buffer.erase(pos);
        ++removed;
      } else {
        ++pos;
      }
    }
  }
  counters_[i].pruned += removed;
  return removed;
}

bool Wrapper::all_complete(const ObservationProgress& obs) const {
  return obs.control.k_full[0] == tokens_ && obs.control.k_full[1] == tokens_;
}

void Wrapper::finalize(std::int64_t observation) {
  for (auto& buffer : buffers_) {
    auto pos = buffer.lower_bound(PacketKey{observation, 0});
    while (pos != buffer.end() && pos->first.first == observation) {
      pos = buffer.erase(pos);
      ++counters_[observation].dropped_at_finalization;
    }
  }
  progress_.erase(observation);
  finalized_.insert(observation);
  next_expected_ = std::max(next_expected_, observation + 1);
  refresh_active();
}

TickReport Wrapper::tick(double tau, const InferenceBackend& backend, RandomStream& rng) {
  if (tau < last_tick_) throw DomainError("ticks must be non-decreasing");
  last_tick_ = tau;

  TickReport report;
  auto it = progress_.find(control_.active_observation);
  if (it == progress_.end()) {
    report.control = control_;
    return report;
  }
  const std::int64_t i = it->first;
  ObservationProgress& obs = it->second;
  report.observation = i;

  assemble(obs);
  update_pointers();
  report.control = obs.control;

  for (Modality m : kModalities) {
    double sum = 0.0;
    for (std::int64_t k = 1; k <= tokens_; ++k) {
      sum += token_state(m, obs.modality[index_of(m)], k).fraction;
    }
    report.mean_availability[index_of(m)] = sum / static_cast<double>(tokens_);
  }

  const std::int64_t k_avail = obs.control.k_avail;
  if (k_avail >= 1) {
    std::vector<AvailabilityPair> inputs;
    inputs.reserve(static_cast<std::size_t>(k_avail));
    for (std::int64_t k = 1; k <= k_avail; ++k) {
      PerModality<double> f{};
      for (Modality m : kModalities) {
        const ModalityProgress& p = obs.modality[index_of(m)];
        const auto& slot = p.token_buffer[static_cast<std::size_t>(k - 1)];
        f[index_of(m)] = slot ? slot->availability : token_state(m, p, k).fraction;
      }
      inputs.push_back({f[0], f[1]});
    }
    const std::vector<TokenOutcome> outcomes = backend.predict(inputs, rng);
    if (outcomes.size() != inputs.size()) {
      throw std::runtime_error("backend returned a prediction count different from k_avail");
    }
    PredictionRecord record{i, tau, k_avail, {}};
    record.tokens.reserve(inputs.size());
    for (std::size_t n = 0; n < inputs.size(); ++n) {
      record.tokens.push_back({static_cast<std::int64_t>(n + 1), inputs[n], outcomes[n]});
    }
    report.prediction = std::move(record);
  }

  if (migrate(obs, tau) > 0) report.packets_pruned = prune();

  if (all_complete(obs)) {
    finalize(i);
    report.finalized = true;
  }
  return report;
}

std::size_t Wrapper::buffered_packets(Modality m) const { return buffers_[index_of(m)].size(); }

std::size_t Wrapper::buffered_packets(Modality m, std::int64_t observation) const {
  const auto& buffer = buffers_[index_of(m)];
  std::size_t n = 0;
  for (auto pos = buffer.lower_bound(PacketKey{observation, 0});
       pos != buffer.end() && pos->first.first == observation; ++pos) {
    ++n;
  }
  return n;
}

TokenAvailability Wrapper::availability(Modality m, std::int64_t observation,
                                        std::int64_t k) const {
  if (k < 1 || k > tokens_) throw DomainError("token index out of range");
  if (finalized_.contains(observation)) return {1.0, true};
  const ObservationProgress* obs = find_progress(observation);
  if (obs == nullptr) return {};
  return token_state(m, obs->modality[index_of(m)], k);
}

std::optional<CompletedTokenRecord> Wrapper::token_slot(Modality m, std::int64_t observation,
                                                        std::int64_t k) const {
  if (k < 1 || k > tokens_) throw DomainError("token index out of range");
  const ObservationProgress* obs = find_progress(observation);
  if (obs == nullptr) return std::nullopt;
  return obs->modality[index_of(m)].token_buffer[static_cast<std::size_t>(k - 1)];
}

Wrapper::Counters Wrapper::counters(std::int64_t observation) const {
  auto it = counters_.find(observation);
  return it == counters_.end() ? Counters{} : it->second;
}

}  // namespace twisim
