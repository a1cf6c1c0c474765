#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "twisim/backend.hpp"
#include "twisim/random.hpp"
#include "twisim/source_model.hpp"

namespace twisim {

// How k_avail combines the per-modality pointers. kMax enables partial-modality
// fusion; kMin waits until both modalities hold a token.
enum class PointerMode { kMax, kMin };

struct CompletedTokenRecord {
  double completed_at = 0.0;  // tick time at which the token entered the buffer
  double availability = 1.0;
};

// Sample coverage of one token of one modality.
struct TokenAvailability {
  double fraction = 0.0;
  bool complete = false;
};

struct ControlState {
  std::int64_t active_observation = 0;  // 0 before the first packet
  PerModality<std::int64_t> k_curr{};   // longest complete token prefix
  std::int64_t k_avail = 0;
  PerModality<std::int64_t> k_full{};   // complete tokens, in any order
};

struct TokenPrediction {
  std::int64_t token = 0;  // k
  AvailabilityPair availability;
  TokenOutcome outcome;
};

struct PredictionRecord {
  std::int64_t observation = 0;
  double tick_time = 0.0;
  std::int64_t k_avail = 0;
  std::vector<TokenPrediction> tokens;  // exactly tokens 1..k_avail
};

// What one tick did to the observation it processed.
struct TickReport {
  std::int64_t observation = 0;  // 0 when nothing was buffered
  ControlState control;          // pointers before any finalization reset
  PerModality<double> mean_availability{};  // averaged over all K tokens
  std::optional<PredictionRecord> prediction;
  std::int64_t packets_pruned = 0;
  bool finalized = false;
};

// Non-blocking wrapper clocked by the temporal window of integration.
//
// Packets are buffered per modality as they arrive (ingest). At the end of
// every window (tick) the control unit works on the earliest unfinished
// observation only:
//   1. tokenizes newly buffered packets into per-token sample coverage,
//   2. updates k_curr / k_full / k_avail,
//   3. runs the backend over tokens 1..k_avail (partial tokens go in with
//      their availability fraction, the rest of the signal is zero-imputed),
//   4. moves newly completed tokens into the token-level buffer,
//   5. prunes packets whose tokens are all complete,
//   6. finalizes the observation once every token of both modalities is
//      complete, releasing all its state.
// Later observations stay buffered, untouched, until they become active.
class Wrapper {
 public:
  explicit Wrapper(PerModality<ModalityProfile> profiles,
                   PointerMode pointer_mode = PointerMode::kMax);

  // Throws DuplicatePacketError when (observation, index) was already received
  // for the packet's modality, including observations already finalized.
  void ingest(const Packet& packet, double rx_time);

  TickReport tick(double tau, const InferenceBackend& backend, RandomStream& rng);

  // Individual tick steps on the active observation.
  TokenAvailability assemble_token(Modality m, std::int64_t k);
  void update_pointers();
  std::int64_t prune();

  const ControlState& control() const { return control_; }
  std::int64_t tokens_per_observation() const { return tokens_; }
  const ModalityProfile& profile(Modality m) const { return profiles_[index_of(m)]; }

  // Inspection.
  std::size_t buffered_packets(Modality m) const;
  std::size_t buffered_packets(Modality m, std::int64_t observation) const;
  TokenAvailability availability(Modality m, std::int64_t observation, std::int64_t k) const;
  std::optional<CompletedTokenRecord> token_slot(Modality m, std::int64_t observation,
                                                 std::int64_t k) const;
  bool is_finalized(std::int64_t observation) const { return finalized_.contains(observation); }
  std::size_t pending_observations() const { return progress_.size(); }

  struct Counters {
    std::int64_t ingested = 0;
    std::int64_t pruned = 0;
    std::int64_t dropped_at_finalization = 0;
  };
  // Per-observation packet accounting; kept after finalization.
  Counters counters(std::int64_t observation) const;

 private:
  struct BufferedPacket {
    Packet packet;
    double rx_time = 0.0;
  };
  using PacketKey = std::pair<std::int64_t, std::int64_t>;  // (i, j)

  struct ModalityProgress {
    std::vector<bool> received;                // by packet index
    std::vector<std::int64_t> unassembled;     // packet indices awaiting tokenization
    std::vector<Rational> covered;             // sample measure per token
    std::vector<std::optional<CompletedTokenRecord>> token_buffer;  // K slots
  };
  struct ObservationProgress {
    PerModality<ModalityProgress> modality;
    ControlState control;
  };

  ObservationProgress& progress_for(std::int64_t observation);
  const ObservationProgress* find_progress(std::int64_t observation) const;
  void refresh_active();
  void assemble(ObservationProgress& obs);
  TokenAvailability token_state(Modality m, const ModalityProgress& p, std::int64_t k) const;
  std::int64_t migrate(ObservationProgress& obs, double tau);
  bool all_complete(const ObservationProgress& obs) const;
  void finalize(std::int64_t observation);

  PerModality<ModalityProfile> profiles_;
  PointerMode pointer_mode_;
  std::int64_t tokens_;

  PerModality<std::map<PacketKey, BufferedPacket>> buffers_;
  std::map<std::int64_t, ObservationProgress> progress_;
  std::map<std::int64_t, Counters> counters_;
  std::set<std::int64_t> finalized_;
  std::int64_t next_expected_ = 1;
  ControlState control_;
  double last_tick_ = -1.0;
};

}  // namespace twisim
