#include "twisim/source_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "twisim/errors.hpp"

namespace twisim {
namespace {

// Floor/ceil for non-negative rationals.
std::int64_t floor_of(const Rational& r) { return r.numerator() / r.denominator(); }

std::int64_t ceil_of(const Rational& r) {
  return (r.numerator() + r.denominator() - 1) / r.denominator();
}

bool is_integral(const Rational& r) { return r.denominator() == 1; }

}  // namespace

std::string_view to_string(Modality m) {
  return m == Modality::kAudio ? "audio" : "visual";
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x) || std::fabs(x) > 9.0e15) {
    throw DomainError("value " + std::to_string(x) + " is not representable as a rational");
  }
  // Continued-fraction convergents h/k of x.
  const double tol = 1e-12 * std::max(1.0, std::fabs(x));
  std::int64_t h_prev = 1, h = static_cast<std::int64_t>(std::floor(x));
  std::int64_t k_prev = 0, k = 1;
  double frac = x - std::floor(x);
  while (std::fabs(x - static_cast<double>(h) / static_cast<double>(k)) > tol) {
    if (frac <= 0.0) break;
    const double inv = 1.0 / frac;
    const auto a = static_cast<std::int64_t>(std::floor(inv));
    frac = inv - std::floor(inv);
    const std::int64_t h_next = a * h + h_prev;
    const std::int64_t k_next = a * k + k_prev;
    if (k_next > 1'000'000'000) {
      throw DomainError("value " + std::to_string(x) +
                        " has no exact rational form with a small denominator");
    }
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
  }
  return Rational(h, k);
}

Rational overlap_measure(const SampleRange& a, const SampleRange& b) {
  const Rational lo = std::max(a.lo, b.lo);
  const Rational hi = std::min(a.hi, b.hi);
  return hi > lo ? hi - lo : Rational(0);
}

ModalityProfile::ModalityProfile(Modality modality, Rational sample_rate_hz,
                                 std::int64_t bits_per_sample, std::int64_t packet_bits,
                                 Rational video_duration_s, Rational token_duration_s)
    : modality_(modality),
      sample_rate_(sample_rate_hz),
      bits_per_sample_(bits_per_sample),
      packet_bits_(packet_bits),
      video_duration_(video_duration_s),
      token_duration_(token_duration_s) {
  const std::string name(to_string(modality));
  if (sample_rate_ <= 0) throw DomainError(name + ": sample rate must be positive");
  if (bits_per_sample_ <= 0) throw DomainError(name + ": bits per sample must be positive");
  if (packet_bits_ <= 0) throw DomainError(name + ": packet bits must be positive");
  if (video_duration_ <= 0) throw DomainError(name + ": video duration must be positive");
  if (token_duration_ <= 0) throw DomainError(name + ": token duration must be positive");

  const Rational tokens = video_duration_ / token_duration_;
  if (!is_integral(tokens)) {
    throw DomainError(name + ": video duration is not an integer multiple of the token duration");
  }
  const Rational token_samples = sample_rate_ * token_duration_;
  if (!is_integral(token_samples)) {
    throw DomainError(name + ": samples per token (R_s T_k) is not integral");
  }

  packet_duration_ = Rational(packet_bits_) / (Rational(bits_per_sample_) * sample_rate_);
  samples_per_packet_ = Rational(packet_bits_, bits_per_sample_);
  packets_per_observation_ = ceil_of(video_duration_ / packet_duration_);
  packets_per_token_ = ceil_of(token_duration_ / packet_duration_);
  samples_per_token_ = token_samples.numerator();
  tokens_per_observation_ = tokens.numerator();
}

void ModalityProfile::check_packet_index(std::int64_t j) const {
  if (j < 1 || j > packets_per_observation_) {
    throw DomainError("packet index " + std::to_string(j) + " outside [1, " +
                      std::to_string(packets_per_observation_) + "]");
  }
}

void ModalityProfile::check_token_index(std::int64_t k) const {
  if (k < 1 || k > tokens_per_observation_) {
    throw DomainError("token index " + std::to_string(k) + " outside [1, " +
                      std::to_string(tokens_per_observation_) + "]");
  }
}

SampleRange ModalityProfile::packet_samples(std::int64_t j) const {
  check_packet_index(j);
  return {samples_per_packet_ * (j - 1), samples_per_packet_ * j};
}

SampleRange ModalityProfile::token_samples(std::int64_t k) const {
  check_token_index(k);
  return {Rational(samples_per_token_ * (k - 1)), Rational(samples_per_token_ * k)};
}

std::pair<std::int64_t, std::int64_t> ModalityProfile::tokens_of_packet(std::int64_t j) const {
  const SampleRange r = packet_samples(j);
  const Rational s(samples_per_token_);
  const std::int64_t first = std::min(floor_of(r.lo / s) + 1, tokens_per_observation_);
  const std::int64_t last = std::min(ceil_of(r.hi / s), tokens_per_observation_);
  return {first, last};
}

std::pair<std::int64_t, std::int64_t> ModalityProfile::packets_of_token(std::int64_t k) const {
  const SampleRange r = token_samples(k);
  const std::int64_t first = floor_of(r.lo / samples_per_packet_) + 1;
  const std::int64_t last = std::min(ceil_of(r.hi / samples_per_packet_), packets_per_observation_);
  return {first, last};
}

double packet_end_time(const ModalityProfile& profile, std::int64_t i, std::int64_t j) {
  if (i < 1) throw DomainError("observation index must be >= 1");
  if (j < 1 || j > profile.packets_per_observation()) {
    throw DomainError("packet index " + std::to_string(j) + " out of range");
  }
  return to_double(profile.video_duration() * (i - 1) + profile.packet_duration() * j);
}

double token_end_time(const ModalityProfile& profile, std::int64_t i, std::int64_t k) {
  if (i < 1) throw DomainError("observation index must be >= 1");
  if (k < 1 || k > profile.tokens_per_observation()) {
    throw DomainError("token index " + std::to_string(k) + " out of range");
  }
  return to_double(profile.video_duration() * (i - 1) + profile.token_duration() * k);
}

Packet make_packet(const ModalityProfile& profile, std::int64_t i, std::int64_t j) {
  return Packet{profile.modality(), i, j, packet_end_time(profile, i, j),
                profile.packet_samples(j), profile.packet_bits()};
}

std::vector<Packet> generate_observation_packets(const ModalityProfile& profile,
                                                 std::int64_t i) {
  std::vector<Packet> packets;
  packets.reserve(static_cast<std::size_t>(profile.packets_per_observation()));
  for (std::int64_t j = 1; j <= profile.packets_per_observation(); ++j) {
    packets.push_back(make_packet(profile, i, j));
  }
  return packets;
}

bool packet_token_overlap(const ModalityProfile& profile, std::int64_t j, std::int64_t k) {
  const auto [first, last] = profile.tokens_of_packet(j);
  if (k < 1 || k > profile.tokens_per_observation()) {
    throw DomainError("token index " + std::to_string(k) + " out of range");
  }
  return first <= k && k <= last;
}

}  // namespace twisim
