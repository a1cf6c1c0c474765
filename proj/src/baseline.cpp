#include "twisim/baseline.hpp"

#include "twisim/errors.hpp"

namespace twisim {

std::string_view to_string(ReferencePolicy policy) {
  switch (policy) {
    case ReferencePolicy::kAudio: return "audio";
    case ReferencePolicy::kVisual: return "visual";
    case ReferencePolicy::kOracleFastest: return "oracle";
  }
  return "unknown";
}

Modality reference_modality(ReferencePolicy policy, double total_audio, double total_visual) {
  switch (policy) {
    case ReferencePolicy::kAudio: return Modality::kAudio;
    case ReferencePolicy::kVisual: return Modality::kVisual;
    case ReferencePolicy::kOracleFastest:
      return total_visual < total_audio ? Modality::kVisual : Modality::kAudio;
  }
  return Modality::kAudio;
}

double baseline_latency(ReferencePolicy policy, double total_audio, double total_visual) {
  return reference_modality(policy, total_audio, total_visual) == Modality::kAudio
             ? total_audio
             : total_visual;
}

BaselineResult baseline_run(ReferencePolicy policy, const PerModality<ModalityProfile>& profiles,
                            const PerModality<StreamRealization>& streams,
                            std::int64_t observation, const InferenceBackend& backend,
                            RandomStream& rng) {
  BaselineResult result;
  result.reference = reference_modality(policy, streams[0].total_tx_time, streams[1].total_tx_time);
  result.latency = streams[index_of(result.reference)].total_tx_time;

  const std::int64_t tokens = profiles[0].tokens_per_observation();
  const Modality other = result.reference == Modality::kAudio ? Modality::kVisual : Modality::kAudio;
  const ModalityProfile& other_profile = profiles[index_of(other)];
  const StreamRealization& other_stream = streams[index_of(other)];
  if (static_cast<std::int64_t>(other_stream.rx_times.size()) !=
      other_profile.packets_per_observation()) {
    throw DomainError("stream realization does not match its profile");
  }

  std::vector<Rational> covered(static_cast<std::size_t>(tokens), Rational(0));
  for (std::int64_t j = 1; j <= other_profile.packets_per_observation(); ++j) {
    if (other_stream.cumulative_delay(static_cast<std::size_t>(j)) > result.latency) break;
    const SampleRange range = other_profile.packet_samples(j);
    const auto [first, last] = other_profile.tokens_of_packet(j);
    for (std::int64_t k = first; k <= last; ++k) {
      covered[static_cast<std::size_t>(k - 1)] += overlap_measure(range, other_profile.token_samples(k));
    }
  }

  std::vector<AvailabilityPair> inputs(static_cast<std::size_t>(tokens));
  const Rational per_token(other_profile.samples_per_token());
  for (std::size_t n = 0; n < inputs.size(); ++n) {
    const double f = to_double(covered[n] / per_token);
    inputs[n] = result.reference == Modality::kAudio ? AvailabilityPair{1.0, f}
                                                     : AvailabilityPair{f, 1.0};
  }
  const std::vector<TokenOutcome> outcomes = backend.predict(inputs, rng);

  result.prediction = PredictionRecord{observation, result.latency, tokens, {}};
  double confidence = 0.0;
  for (std::size_t n = 0; n < inputs.size(); ++n) {
    result.prediction.tokens.push_back({static_cast<std::int64_t>(n + 1), inputs[n], outcomes[n]});
    confidence += outcomes[n].confidence;
  }
  result.expected_accuracy = confidence / static_cast<double>(tokens);
  return result;
}

}  // namespace twisim
