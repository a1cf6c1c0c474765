#include "twisim/random.hpp"

#include <array>

namespace twisim {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t observation,
                          std::uint32_t modality, StreamPurpose purpose) {
  std::seed_seq seq{static_cast<std::uint32_t>(master),
                    static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(observation),
                    static_cast<std::uint32_t>(observation >> 32),
                    modality,
                    static_cast<std::uint32_t>(purpose)};
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  return (static_cast<std::uint64_t>(words[1]) << 32) | words[0];
}

}  // namespace twisim
