#pragma once

#include <cstddef>

#include "qse/gates.hpp"
#include "qse/measurement.hpp"
#include "qse/state.hpp"

namespace qse {

/// Dense state vector over the same flat index as encode()/decode().
/// Sampling fields of the config are carried along but never used.
struct RefState {
  AmplitudeVector amps;
  EncodingConfig config;

  RefState() = default;
  RefState(AmplitudeVector a, const EncodingConfig& c);
  static RefState basis(std::size_t flat, const EncodingConfig& c);
};

RefState ref_apply_1q(const RefState& ref, const Gate2& gate, QubitAddress target);
RefState ref_apply_controlled(const RefState& ref, const Gate2& gate, QubitAddress control, QubitAddress target);

/// |x, out> -> |x, out xor f(x)>: `out` must be frequency qubit 0 and f reads
/// frequency qubits 1..n. Spatial and time bits pass through.
RefState ref_apply_oracle(const RefState& ref, const BooleanOracle& f, QubitAddress out);

struct RefMeasureResult {
  MeasurementRecord record;
  RefState state;
};

/// Same branch weighting and rng consumption as measure(), so both
/// backends agree outcome for outcome under a shared seed.
RefMeasureResult ref_measure(const RefState& ref, QubitAddress addr, MeasurePolicy policy, Rng& rng);

/// Squared norm of the amplitudes whose bit for `addr` equals `value`.
double ref_branch_norm_sq(const RefState& ref, QubitAddress addr, int value);

/// Keeps one branch and drops the measured bit from the index.
RefState ref_collapse(const RefState& ref, QubitAddress addr, int value);

/// max_k |decode(state)[k] - ref.amps[k]|. Throws on shape mismatch.
double compare(const EncodedState& state, const RefState& ref);

}  // namespace qse
