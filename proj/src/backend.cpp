#include "twisim/backend.hpp"

#include <cmath>

#include "twisim/errors.hpp"

namespace twisim {

void SurrogateParams::validate() const {
  if (!(p_floor >= 0.0 && p_floor <= p_full && p_full <= 1.0)) {
    throw DomainError("surrogate requires 0 <= p_floor <= p_full <= 1");
  }
  if (!(w_audio >= 0.0 && w_visual >= 0.0) || std::fabs(w_audio + w_visual - 1.0) > 1e-9) {
    throw DomainError("surrogate weights must be non-negative and sum to 1");
  }
}

double correctness_probability(const SurrogateParams& params, const AvailabilityPair& token) {
  if (!(token.audio >= 0.0 && token.audio <= 1.0 && token.visual >= 0.0 &&
        token.visual <= 1.0)) {
    throw DomainError("availability fractions must lie in [0, 1]");
  }
  const double mix = params.w_audio * token.audio + params.w_visual * token.visual;
  return params.p_floor + (params.p_full - params.p_floor) * mix;
}

std::vector<TokenOutcome> surrogate_predict(const SurrogateParams& params,
                                            std::span<const AvailabilityPair> tokens,
                                            RandomStream& rng) {
  std::vector<TokenOutcome> out;
  out.reserve(tokens.size());
  for (const AvailabilityPair& t : tokens) {
    const double p = correctness_probability(params, t);
    out.push_back({rng.bernoulli(p), p});
  }
  return out;
}

SurrogateBackend::SurrogateBackend(SurrogateParams params) : params_(params) {
  params_.validate();
}

std::vector<TokenOutcome> SurrogateBackend::predict(std::span<const AvailabilityPair> tokens,
                                                    RandomStream& rng) const {
  return surrogate_predict(params_, tokens, rng);
}

}  // namespace twisim
