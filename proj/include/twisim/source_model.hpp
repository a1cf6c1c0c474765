#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

namespace twisim {

using Rational = boost::rational<std::int64_t>;

enum class Modality : std::uint8_t { kAudio = 0, kVisual = 1 };

inline constexpr std::array<Modality, 2> kModalities = {Modality::kAudio,
                                                        Modality::kVisual};

constexpr std::size_t index_of(Modality m) { return static_cast<std::size_t>(m); }

// One value per modality, indexed by index_of(Modality).
template <typename T>
using PerModality = std::array<T, 2>;
std::string_view to_string(Modality m);

// Exact rational approximation of a decimal configuration value. Throws
// DomainError when no rational with a denominator below 10^9 reproduces `x`
// to 1e-12 relative precision.
Rational rational_from_double(double x);

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

// Half-open interval [lo, hi) of per-observation sample indices.
struct SampleRange {
  Rational lo;
  Rational hi;

  Rational length() const { return hi - lo; }
  friend bool operator==(const SampleRange&, const SampleRange&) = default;
};

// Measure of the intersection of two half-open ranges (0 when disjoint).
Rational overlap_measure(const SampleRange& a, const SampleRange& b);

// Acquisition and packetization parameters of one modality plus the counts
// derived from them. Construction validates every invariant; a constructed
// profile is always consistent.
class ModalityProfile {
 public:
  ModalityProfile(Modality modality, Rational sample_rate_hz,
                  std::int64_t bits_per_sample, std::int64_t packet_bits,
                  Rational video_duration_s, Rational token_duration_s);

  Modality modality() const { return modality_; }
  const Rational& sample_rate() const { return sample_rate_; }
  std::int64_t bits_per_sample() const { return bits_per_sample_; }
  std::int64_t packet_bits() const { return packet_bits_; }
  const Rational& video_duration() const { return video_duration_; }
  const Rational& token_duration() const { return token_duration_; }

  // D_s = L_s / (B_s R_s), seconds of signal carried by one packet.
  const Rational& packet_duration() const { return packet_duration_; }
  double packet_duration_s() const { return to_double(packet_duration_); }
  // L_s / B_s; may be fractional.
  const Rational& samples_per_packet() const { return samples_per_packet_; }
  std::int64_t packets_per_observation() const { return packets_per_observation_; }
  std::int64_t packets_per_token() const { return packets_per_token_; }
  std::int64_t samples_per_token() const { return samples_per_token_; }
  std::int64_t tokens_per_observation() const { return tokens_per_observation_; }

  SampleRange packet_samples(std::int64_t j) const;
  SampleRange token_samples(std::int64_t k) const;

  // Inclusive [first, last] token indices intersecting packet j. Zero padding
  // past the end of the observation is attributed to the last token.
  std::pair<std::int64_t, std::int64_t> tokens_of_packet(std::int64_t j) const;
  // Inclusive [first, last] packet indices intersecting token k.
  std::pair<std::int64_t, std::int64_t> packets_of_token(std::int64_t k) const;

  friend bool operator==(const ModalityProfile&, const ModalityProfile&) = default;

 private:
  void check_packet_index(std::int64_t j) const;
  void check_token_index(std::int64_t k) const;

  Modality modality_;
  Rational sample_rate_;
  std::int64_t bits_per_sample_;
  std::int64_t packet_bits_;
  Rational video_duration_;
  Rational token_duration_;

  Rational packet_duration_;
  Rational samples_per_packet_;
  std::int64_t packets_per_observation_ = 0;
  std::int64_t packets_per_token_ = 0;
  std::int64_t samples_per_token_ = 0;
  std::int64_t tokens_per_observation_ = 0;
};

// Transmission unit. Payload contents are never materialized.
struct Packet {
  Modality modality = Modality::kAudio;
  std::int64_t observation = 1;  // i, 1-based
  std::int64_t index = 1;        // j, 1-based within the observation
  double pts_end = 0.0;          // seconds on the physical timeline
  SampleRange samples;
  std::int64_t payload_bits = 0;
};

// (i-1) T_video + j D_s
double packet_end_time(const ModalityProfile& profile, std::int64_t i, std::int64_t j);
// (i-1) T_video + k T_k
double token_end_time(const ModalityProfile& profile, std::int64_t i, std::int64_t k);

Packet make_packet(const ModalityProfile& profile, std::int64_t i, std::int64_t j);
std::vector<Packet> generate_observation_packets(const ModalityProfile& profile,
                                                 std::int64_t i);

bool packet_token_overlap(const ModalityProfile& profile, std::int64_t j, std::int64_t k);

}  // namespace twisim
