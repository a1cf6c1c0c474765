#pragma once

#include <span>
#include <vector>

#include "twisim/random.hpp"

namespace twisim {

// Fraction of a token's samples available to the model, per modality.
// Missing samples are zero-imputed, so the fraction is all the model sees.
struct AvailabilityPair {
  double audio = 0.0;
  double visual = 0.0;
};

struct TokenOutcome {
  bool correct = false;
  double confidence = 0.0;  // probability of a correct label
};

// Stand-in for the multimodal model: maps per-token availability to per-token
// predictions. Implementations must be deterministic given (inputs, stream
// state) and non-decreasing in each availability fraction.
class InferenceBackend {
 public:
  virtual ~InferenceBackend() = default;

  virtual std::vector<TokenOutcome> predict(std::span<const AvailabilityPair> tokens,
                                            RandomStream& rng) const = 0;

  // Accuracy on a token the model never saw (nothing received, no prediction).
  virtual double chance_level() const = 0;
};

struct SurrogateParams {
  double p_floor = 1.0 / 29.0;  // 28 event classes plus background
  double p_full = 0.672;
  double w_audio = 0.5;
  double w_visual = 0.5;

  // Throws DomainError unless 0 <= p_floor <= p_full <= 1 and the weights are
  // non-negative and sum to 1.
  void validate() const;
};

// p_floor + (p_full - p_floor) (w_a f_a + w_v f_v)
double correctness_probability(const SurrogateParams& params, const AvailabilityPair& token);

std::vector<TokenOutcome> surrogate_predict(const SurrogateParams& params,
                                            std::span<const AvailabilityPair> tokens,
                                            RandomStream& rng);

// Linear availability-to-accuracy surrogate. Synthetic: it reproduces the
// calibration points, not the shape of a real model's accuracy curve.
class SurrogateBackend final : public InferenceBackend {
 public:
  explicit SurrogateBackend(SurrogateParams params);

  std::vector<TokenOutcome> predict(std::span<const AvailabilityPair> tokens,
                                    RandomStream& rng) const override;
  double chance_level() const override { return params_.p_floor; }
  const SurrogateParams& params() const { return params_; }

 private:
  SurrogateParams params_;
};

}  // namespace twisim
