#pragma once

#include <cstdint>
#include <random>

namespace twisim {

enum class StreamPurpose : std::uint32_t {
  kChannel = 1,
  kBackend = 2,
  kBaseline = 3,
  kOracle = 4,
};

// Derives the seed of an independent sub-stream.
//
// The words (master_lo, master_hi, observation_lo, observation_hi, modality,
// purpose) are fed to std::seed_seq, whose mixing algorithm is fixed by the
// C++ standard, and the first two generated 32-bit words form the sub-seed.
// Sub-streams therefore depend only on their own coordinates: adding
// observations to a run never perturbs the draws of earlier ones.
inline constexpr std::uint32_t kNoModality = 2;

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t observation,
                          std::uint32_t modality, StreamPurpose purpose);

// A seeded random stream (mt19937_64) exposing the open-interval uniform used
// by the inverse-CDF samplers. Both the engine and the bit-to-double mapping are
// fully specified, so streams are reproducible across standard libraries.
class RandomStream {
 public:
  using result_type = std::mt19937_64::result_type;

  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  // Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform_open() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace twisim
