#include "twisim/twi.hpp"

#include <algorithm>

#include "twisim/errors.hpp"

namespace twisim {

TwiVariant TwiVariant::fixed(double period_s) {
  if (!(period_s > 0.0)) throw DomainError("fixed T_W must be positive");
  return TwiVariant(Kind::kFixed, period_s);
}

std::string_view TwiVariant::name() const {
  switch (kind_) {
    case Kind::kPaMo: return "pamo";
    case Kind::kToMo: return "tomo";
    case Kind::kFixed: return "fixed";
  }
  return "unknown";
}

std::int64_t packets_per_window(const TwiVariant& variant, const ModalityProfile& profile) {
  return variant.kind() == TwiVariant::Kind::kToMo ? profile.packets_per_token() : 1;
}

double twi_closed_form(std::span<const TwiTerm> terms) {
  double best = 0.0;
  for (const TwiTerm& t : terms) {
    best = std::max(best, static_cast<double>(t.packets_needed) * t.mean_tx_time /
                              (1.0 - t.outage_prob));
  }
  return best;
}

double optimize_twi(const TwiVariant& variant, const PerModality<ModalityProfile>& profiles,
                    const PerModality<ChannelProfile>& channels) {
  if (variant.kind() == TwiVariant::Kind::kFixed) return variant.fixed_period();
  PerModality<TwiTerm> terms{};
  for (Modality m : kModalities) {
    const auto s = index_of(m);
    terms[s] = {channels[s].mean_tx_time(profiles[s]), channels[s].outage_prob(),
                packets_per_window(variant, profiles[s])};
  }
  return twi_closed_form(terms);
}

double monte_carlo_twi(const TwiVariant& variant, const PerModality<ModalityProfile>& profiles,
                       const PerModality<ChannelProfile>& channels, std::int64_t trials,
                       RandomStream& rng) {
  if (trials < 1) throw DomainError("monte_carlo_twi needs at least one trial");
  if (variant.kind() == TwiVariant::Kind::kFixed) return variant.fixed_period();
  double best = 0.0;
  for (Modality m : kModalities) {
    const auto s = index_of(m);
    const std::int64_t needed = packets_per_window(variant, profiles[s]);
    const double eps = channels[s].outage_prob();
    // Integer attempt totals keep the degenerate eps -> 0 case exact.
    std::uint64_t attempts = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
      for (std::int64_t p = 0; p < needed; ++p) {
        attempts += static_cast<std::uint64_t>(sample_attempts(eps, rng));
      }
    }
    const double mean_attempts = static_cast<double>(attempts) / static_cast<double>(trials);
    best = std::max(best, mean_attempts * channels[s].mean_tx_time(profiles[s]));
  }
  return best;
}

}  // namespace twisim
