#pragma once

#include <string_view>
#include <vector>

#include "twisim/backend.hpp"
#include "twisim/channel.hpp"
#include "twisim/random.hpp"
#include "twisim/source_model.hpp"
#include "twisim/wrapper.hpp"

namespace twisim {

// Reference-modality wrapper: inference waits for one stream to be fully
// received. kOracleFastest picks, per realization, whichever stream finished
// first (ties go to audio).
enum class ReferencePolicy { kAudio, kVisual, kOracleFastest };

std::string_view to_string(ReferencePolicy policy);

Modality reference_modality(ReferencePolicy policy, double total_audio, double total_visual);

// Total transmission time of the reference stream.
double baseline_latency(ReferencePolicy policy, double total_audio, double total_visual);

struct BaselineResult {
  Modality reference = Modality::kAudio;
  double latency = 0.0;  // T_{i,ref}, transmission time only
  PredictionRecord prediction;  // all K tokens
  double expected_accuracy = 0.0;  // mean per-token correctness probability
};

// One full-observation prediction. The reference modality enters with
// availability 1; the other with the sample coverage of its packets whose
// cumulative delay does not exceed the reference total.
BaselineResult baseline_run(ReferencePolicy policy, const PerModality<ModalityProfile>& profiles,
                            const PerModality<StreamRealization>& streams,
                            std::int64_t observation, const InferenceBackend& backend,
                            RandomStream& rng);

}  // namespace twisim
