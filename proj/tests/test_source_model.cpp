#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "twisim/errors.hpp"
#include "twisim/source_model.hpp"

using namespace twisim;
using twisim::test::av_profiles;
using twisim::test::straddling_profile;

TEST_CASE("audio-visual setup derives the expected counts") {
  const auto p = av_profiles();
  const ModalityProfile& a = p[0];
  const ModalityProfile& v = p[1];
  CHECK(a.packets_per_observation() == 500);
  CHECK(v.packets_per_observation() == 160);
  CHECK(a.packets_per_token() == 50);
  CHECK(v.packets_per_token() == 16);
  CHECK(a.samples_per_packet() == Rational(320));
  CHECK(v.samples_per_packet() == Rational(1));
  CHECK(a.packet_duration() == Rational(1, 50));
  CHECK(v.packet_duration() == Rational(1, 16));
  CHECK(a.samples_per_token() == 16000);
  CHECK(v.samples_per_token() == 16);
  CHECK(a.tokens_per_observation() == 10);
}

TEST_CASE("packet_end_time") {
  const auto p = av_profiles();
  CHECK(packet_end_time(p[0], 1, 1) == doctest::Approx(0.020).epsilon(1e-15));
  CHECK(packet_end_time(p[0], 1, 500) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(packet_end_time(p[1], 2, 16) == doctest::Approx(11.0).epsilon(1e-15));
  CHECK_THROWS_AS(packet_end_time(p[0], 1, 0), DomainError);
  CHECK_THROWS_AS(packet_end_time(p[0], 1, 501), DomainError);
  CHECK_THROWS_AS(packet_end_time(p[0], 0, 1), DomainError);
}

TEST_CASE("packet_end_time is strictly increasing in j and i") {
  const auto p = av_profiles();
  for (const ModalityProfile& prof : p) {
    double prev = 0.0;
    for (std::int64_t i = 1; i <= 3; ++i) {
      for (std::int64_t j = 1; j <= prof.packets_per_observation(); ++j) {
        const double t = packet_end_time(prof, i, j);
        REQUIRE(t > prev);
        prev = t;
      }
    }
  }
}

TEST_CASE("token_end_time") {
  const auto p = av_profiles();
  CHECK(token_end_time(p[0], 1, 1) == 1.0);
  CHECK(token_end_time(p[0], 1, 10) == 10.0);
  CHECK(token_end_time(p[0], 3, 4) == 24.0);
  CHECK_THROWS_AS(token_end_time(p[0], 1, 11), DomainError);
  CHECK_THROWS_AS(token_end_time(p[0], 1, 0), DomainError);
}

TEST_CASE("generate_observation_packets") {
  const auto p = av_profiles();
  const auto audio = generate_observation_packets(p[0], 1);
  REQUIRE(audio.size() == 500);
  CHECK(audio.back().pts_end == doctest::Approx(10.0));
  CHECK(audio.front().payload_bits == 5120);

  const auto visual = generate_observation_packets(p[1], 1);
  REQUIRE(visual.size() == 160);
  for (const Packet& pk : visual) CHECK(pk.samples.length() == Rational(1));

  SUBCASE("zero-padded final packet") {
    const ModalityProfile prof = straddling_profile();
    const auto packets = generate_observation_packets(prof, 1);
    REQUIRE(packets.size() == 4);
    // The last packet covers 0.9-1.2 s; only 0.1 s (1 sample) of it is signal.
    const SampleRange observation{Rational(0), Rational(10)};
    CHECK(overlap_measure(packets.back().samples, observation) == Rational(1));
    CHECK(packets.back().samples.length() == Rational(3));
    CHECK(packets.back().payload_bits == 3);
  }
}

TEST_CASE("packet_token_overlap") {
  const auto p = av_profiles();
  CHECK(packet_token_overlap(p[0], 50, 1));
  CHECK_FALSE(packet_token_overlap(p[0], 51, 1));
  CHECK(packet_token_overlap(p[0], 1, 1));
  const ModalityProfile s = straddling_profile();
  CHECK(packet_token_overlap(s, 2, 1));
  CHECK(packet_token_overlap(s, 2, 2));
  CHECK(packet_token_overlap(s, 4, 2));
  CHECK_FALSE(packet_token_overlap(s, 3, 1));
}

TEST_CASE("profile construction rejects invalid parameters") {
  CHECK_THROWS_AS(ModalityProfile(Modality::kAudio, Rational(10), 1, 3, Rational(1), Rational(3, 10)),
                  DomainError);  // K = 10/3
  CHECK_THROWS_AS(ModalityProfile(Modality::kAudio, Rational(15), 1, 3, Rational(1), Rational(1, 10)),
                  DomainError);  // R T_k = 1.5 samples
  CHECK_THROWS_AS(ModalityProfile(Modality::kAudio, Rational(0), 1, 3, Rational(1), Rational(1)),
                  DomainError);
  CHECK_THROWS_AS(ModalityProfile(Modality::kAudio, Rational(10), 0, 3, Rational(1), Rational(1)),
                  DomainError);
  CHECK_THROWS_AS(ModalityProfile(Modality::kAudio, Rational(10), 1, -3, Rational(1), Rational(1)),
                  DomainError);
}

TEST_CASE("rational_from_double") {
  CHECK(rational_from_double(0.3) == Rational(3, 10));
  CHECK(rational_from_double(16000) == Rational(16000));
  CHECK(rational_from_double(0.0625) == Rational(1, 16));
  CHECK(rational_from_double(1.0 / 3.0) == Rational(1, 3));
  CHECK_THROWS_AS(rational_from_double(std::nan("")), DomainError);
}

// Random profiles: tiling, count consistency and overlap vs sample ranges.
TEST_CASE("packetization properties over random profiles") {
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<int> rate(1, 40), bits(1, 8), packet(1, 50), tokens(1, 5),
      token_den(1, 4);
  int checked = 0;
  while (checked < 300) {
    const Rational t_k(1, token_den(gen));
    const Rational r(rate(gen));
    if ((r * t_k).denominator() != 1) continue;
    const std::int64_t b = bits(gen);
    const ModalityProfile prof(Modality::kVisual, r, b, packet(gen), t_k * tokens(gen), t_k);
    ++checked;

    // Tiling of [0, N S^p).
    Rational cursor(0);
    for (std::int64_t j = 1; j <= prof.packets_per_observation(); ++j) {
      const SampleRange s = prof.packet_samples(j);
      REQUIRE(s.lo == cursor);
      REQUIRE(s.hi > s.lo);
      cursor = s.hi;
    }
    CHECK(cursor == prof.samples_per_packet() * prof.packets_per_observation());
    const Rational d = prof.packet_duration();
    CHECK(d * prof.packets_per_observation() >= prof.video_duration());
    CHECK(d * (prof.packets_per_observation() - 1) < prof.video_duration());

    // Overlap flag agrees with the sample-range intersection, and the
    // per-token count sum exceeds N exactly when some packet straddles.
    std::int64_t pairs = 0;
    for (std::int64_t k = 1; k <= prof.tokens_per_observation(); ++k) {
      for (std::int64_t j = 1; j <= prof.packets_per_observation(); ++j) {
        const bool expected = overlap_measure(prof.packet_samples(j), prof.token_samples(k)) > 0 ||
                              (k == prof.tokens_per_observation() &&
                               prof.packet_samples(j).lo >= prof.token_samples(k).lo);
        REQUIRE(packet_token_overlap(prof, j, k) == expected);
        pairs += expected ? 1 : 0;
      }
    }
    const bool divides = (prof.token_duration() / d).denominator() == 1;
    CHECK(pairs >= prof.packets_per_observation());
    CHECK((pairs == prof.packets_per_observation()) ==
          (divides || prof.tokens_per_observation() == 1));
  }
}
