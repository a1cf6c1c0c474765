#pragma once

#include <filesystem>
#include <string_view>

#include "twisim/sim.hpp"

namespace twisim {

// Parses a JSON run configuration:
//
//   {
//     "modality": {"audio":  {"sample_rate_hz": 16000, "bits_per_sample": 16,
//                             "packet_bits": 5120},
//                  "visual": {...}},
//     "channel":  {"audio":  {"bandwidth_hz": 1.08e6, "snr_db": 0, "outage_prob": 0.5},
//                  "visual": {...}},
//     "source":   {"video_duration_s": 10, "token_duration_s": 1},
//     "wrapper":  {"twi_variant": "pamo|tomo|fixed", "fixed_tw_s": 0.5,
//                  "pointer_mode": "max|min", "causal_mode": false},
//     "baseline": {"reference": "audio|visual|oracle"},
//     "surrogate": {"p_floor": 0.0345, "p_full": 0.672, "w_a": 0.7, "w_v": 0.3},
//     "run":      {"n_observations": 1000, "seed": 1}
//   }
//
// fixed_tw_s is required only for the fixed variant; pointer_mode, causal_mode
// and p_floor are optional. Unknown keys are rejected. Throws ConfigError
// naming the offending key.
RunConfig parse_config(std::string_view json_text);

// Throws IoError when the file cannot be read, ConfigError when it is invalid.
RunConfig load_config(const std::filesystem::path& path);

}  // namespace twisim
