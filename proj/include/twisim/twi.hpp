#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "twisim/channel.hpp"
#include "twisim/random.hpp"
#include "twisim/source_model.hpp"

namespace twisim {

// How the temporal window of integration T_W is sized.
//   PaMo: on average at least one packet per modality per window.
//   ToMo: on average at least one token per modality per window.
//   Fixed: a caller-chosen period.
class TwiVariant {
 public:
  enum class Kind { kPaMo, kToMo, kFixed };

  static TwiVariant pamo() { return TwiVariant(Kind::kPaMo, 0.0); }
  static TwiVariant tomo() { return TwiVariant(Kind::kToMo, 0.0); }
  static TwiVariant fixed(double period_s);

  Kind kind() const { return kind_; }
  double fixed_period() const { return fixed_period_; }
  std::string_view name() const;

  friend bool operator==(const TwiVariant&, const TwiVariant&) = default;

 private:
  TwiVariant(Kind kind, double period) : kind_(kind), fixed_period_(period) {}
  Kind kind_;
  double fixed_period_;
};

// Packets P_s that must arrive per window for `variant` (1 or N_s^k).
std::int64_t packets_per_window(const TwiVariant& variant, const ModalityProfile& profile);

struct TwiTerm {
  double mean_tx_time;          // Gamma_s
  double outage_prob;           // eps_s
  std::int64_t packets_needed;  // P_s
};

// max_s P_s Gamma_s / (1 - eps_s)
double twi_closed_form(std::span<const TwiTerm> terms);

double optimize_twi(const TwiVariant& variant, const PerModality<ModalityProfile>& profiles,
                    const PerModality<ChannelProfile>& channels);

// Monte Carlo estimate of max_s E[sum_{j<=P_s} T^j]: per-modality sample means
// over `trials` independent windows, then the max across modalities.
double monte_carlo_twi(const TwiVariant& variant, const PerModality<ModalityProfile>& profiles,
                       const PerModality<ChannelProfile>& channels, std::int64_t trials,
                       RandomStream& rng);

}  // namespace twisim
