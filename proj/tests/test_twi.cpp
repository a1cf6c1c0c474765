#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "twisim/errors.hpp"
#include "twisim/twi.hpp"

using namespace twisim;
using twisim::test::av_channels;
using twisim::test::av_profiles;

namespace {

// Gamma_s / (1 - eps_s) for the reference setup, frozen from a 40-digit evaluation.
constexpr double kExpAudio = 0.012480438691939958;
constexpr double kExpVisual = 0.031702311147718204;

}  // namespace

TEST_CASE("variant basics") {
  CHECK(TwiVariant::pamo().name() == "pamo");
  CHECK(TwiVariant::tomo().name() == "tomo");
  CHECK(TwiVariant::fixed(0.2).name() == "fixed");
  CHECK(TwiVariant::fixed(0.2).fixed_period() == 0.2);
  CHECK_THROWS_AS(TwiVariant::fixed(0.0), DomainError);
  CHECK_THROWS_AS(TwiVariant::fixed(-1.0), DomainError);

  const auto p = av_profiles();
  CHECK(packets_per_window(TwiVariant::pamo(), p[0]) == 1);
  CHECK(packets_per_window(TwiVariant::tomo(), p[0]) == 50);
  CHECK(packets_per_window(TwiVariant::tomo(), p[1]) == 16);
}

TEST_CASE("closed forms on the reference setup") {
  const auto p = av_profiles();
  const auto c = av_channels();
  CHECK(optimize_twi(TwiVariant::pamo(), p, c) == doctest::Approx(kExpVisual).epsilon(1e-12));
  CHECK(optimize_twi(TwiVariant::tomo(), p, c) == doctest::Approx(50 * kExpAudio).epsilon(1e-12));
  CHECK(optimize_twi(TwiVariant::fixed(0.25), p, c) == 0.25);
}

TEST_CASE("twi_closed_form examples") {
  const std::array<TwiTerm, 2> equal{TwiTerm{1.0, 0.5, 1}, TwiTerm{1.0, 0.5, 1}};
  CHECK(twi_closed_form(equal) == 2.0);
  const std::array<TwiTerm, 2> mixed{TwiTerm{0.1, 0.0, 3}, TwiTerm{0.2, 0.75, 1}};
  CHECK(twi_closed_form(mixed) == doctest::Approx(0.8));
}

TEST_CASE("ToMo never undercuts PaMo") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> snr_db(-10.0, 20.0), eps(0.01, 0.95);
  const auto p = av_profiles();
  for (int n = 0; n < 500; ++n) {
    const PerModality<ChannelProfile> c{ChannelProfile::from_db(1.08e6, snr_db(gen), eps(gen)),
                                        ChannelProfile::from_db(100e6, snr_db(gen), eps(gen))};
    REQUIRE(optimize_twi(TwiVariant::tomo(), p, c) >= optimize_twi(TwiVariant::pamo(), p, c));
  }
}

TEST_CASE("closed form is non-decreasing in each Gamma and each eps") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> gamma(1e-4, 1.0), eps(0.0, 0.95), bump(0.0, 0.5);
  std::uniform_int_distribution<std::int64_t> packets(1, 60);
  for (int n = 0; n < 2000; ++n) {
    std::array<TwiTerm, 2> t{TwiTerm{gamma(gen), eps(gen), packets(gen)},
                             TwiTerm{gamma(gen), eps(gen), packets(gen)}};
    const double base = twi_closed_form(t);
    for (std::size_t s = 0; s < 2; ++s) {
      auto g = t;
      g[s].mean_tx_time += bump(gen);
      REQUIRE(twi_closed_form(g) >= base);
      auto e = t;
      e[s].outage_prob = std::min(0.99, e[s].outage_prob + bump(gen));
      REQUIRE(twi_closed_form(e) >= base);
    }
  }
}

TEST_CASE("Monte Carlo agrees with the closed forms") {
  const auto p = av_profiles();
  const auto c = av_channels();
  constexpr std::int64_t kTrials = 100000;
  SUBCASE("PaMo within 1%") {
    RandomStream rng(123);
    const double mc = monte_carlo_twi(TwiVariant::pamo(), p, c, kTrials, rng);
    CHECK(std::fabs(mc - kExpVisual) / kExpVisual < 0.01);
  }
  SUBCASE("ToMo within 1%") {
    RandomStream rng(456);
    const double mc = monte_carlo_twi(TwiVariant::tomo(), p, c, kTrials, rng);
    CHECK(std::fabs(mc - 50 * kExpAudio) / (50 * kExpAudio) < 0.01);
  }
  SUBCASE("within 4 standard errors over a spread of outage probabilities") {
    for (double eps : {0.05, 0.3, 0.7}) {
      const PerModality<ChannelProfile> ch{ChannelProfile(1.08e6, 1.0, eps),
                                           ChannelProfile(100e6, 1.0, eps)};
      RandomStream rng(static_cast<std::uint64_t>(1000 * eps));
      for (auto v : {TwiVariant::pamo(), TwiVariant::tomo()}) {
        const double cf = optimize_twi(v, p, ch);
        const double mc = monte_carlo_twi(v, p, ch, 20000, rng);
        // Relative SE of a sum of P geometric delays: sqrt(eps / (P n)); P >= 1.
        CHECK(std::fabs(mc - cf) / cf < 4.0 * std::sqrt(eps / 20000.0));
      }
    }
  }
  SUBCASE("exact as eps -> 0") {
    const PerModality<ChannelProfile> ch{ChannelProfile(1.08e6, 1.0, 1e-15),
                                         ChannelProfile(100e6, 1.0, 1e-15)};
    RandomStream rng(1);
    for (auto v : {TwiVariant::pamo(), TwiVariant::tomo()}) {
      CHECK(monte_carlo_twi(v, p, ch, 1000, rng) ==
            doctest::Approx(optimize_twi(v, p, ch)).epsilon(1e-12));
    }
  }
  SUBCASE("fixed variant") {
    RandomStream rng(1);
    CHECK(monte_carlo_twi(TwiVariant::fixed(0.3), p, c, 10, rng) == 0.3);
  }
}
