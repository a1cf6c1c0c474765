#pragma once

#include "twisim/sim.hpp"

namespace twisim::test {

inline PerModality<ModalityProfile> av_profiles() { return audio_visual_setup().profiles; }
inline PerModality<ChannelProfile> av_channels() {
  return audio_visual_setup().channel_profiles();
}

// 3 samples per packet at 10 Hz: D = 0.3 s, tokens of 0.5 s, 1 s observations.
inline ModalityProfile straddling_profile(Modality m = Modality::kAudio) {
  return ModalityProfile(m, Rational(10), 1, 3, Rational(1), Rational(1, 2));
}

}  // namespace twisim::test
