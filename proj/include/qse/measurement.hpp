#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qse/resources.hpp"
#include "qse/state.hpp"

namespace qse {

enum class MeasurePolicy : std::uint8_t { Born, Argmax };

std::string to_string(MeasurePolicy policy);

/// Seeded generator; the seed travels with every measurement record.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::mt19937_64& engine() { return engine_; }
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

struct MeasurementRecord {
  QubitAddress addr;
  int outcome = 0;
  double v0 = 0.0;  // RMS of the 0 branch
  double v1 = 0.0;  // RMS of the 1 branch
  double p1 = 0.0;  // v1^2 / (v0^2 + v1^2)
  MeasurePolicy policy = MeasurePolicy::Born;
  std::uint64_t rng_seed = 0;
};

/// Picks an outcome from the branch mean squares. Born draws exactly one
/// uniform variate per call; argmax draws none and breaks ties toward 0.
int choose_outcome(double v0_sq, double v1_sq, MeasurePolicy policy, Rng& rng);

struct MeasureResult {
  MeasurementRecord record;
  EncodedState state;  // collapsed, measured qubit removed, not renormalized
};

/// Projective measurement of one qubit.
///
/// v_b is the RMS over the buffers of branch b (frequency: the partial
/// projection signals; spatial/time: the buffers with that address bit set
/// to b), scaled by the state's scale. The returned state keeps only the
/// chosen branch and drops the measured qubit from the configuration.
/// Throws std::domain_error for a zero-norm state or a bad address.
MeasureResult measure(const EncodedState& state, QubitAddress addr, MeasurePolicy policy, Rng& rng,
                      ResourceCounters* counters = nullptr);

/// Keeps branch `outcome` of `addr` without sampling.
EncodedState collapse(const EncodedState& state, QubitAddress addr, int outcome,
                      ResourceCounters* counters = nullptr);

/// Address of `addr` after `removed` has been measured out of the register.
QubitAddress address_after_removal(QubitAddress addr, QubitAddress removed);

/// Every qubit: frequency (high to low), then spatial, then time.
std::vector<QubitAddress> default_measure_order(const EncodingConfig& config);

struct MeasureAllResult {
  std::vector<int> bits;  // in the requested order
  std::vector<MeasurementRecord> records;
  EncodedState final_state;
};

/// Measures every qubit in `order` (addresses refer to the register before
/// any measurement). Throws std::domain_error on a duplicate or missing
/// address.
MeasureAllResult measure_all(const EncodedState& state, MeasurePolicy policy, Rng& rng,
                             std::span<const QubitAddress> order, ResourceCounters* counters = nullptr);

/// Validates that `order` names every qubit of `config` exactly once.
void check_measure_order(const EncodingConfig& config, std::span<const QubitAddress> order);

}  // namespace qse
