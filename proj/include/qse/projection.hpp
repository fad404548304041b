#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "qse/resources.hpp"
#include "qse/state.hpp"

namespace qse {

/// Ideal comb filter on one spectrum: keeps the basis-tone bins whose
/// frequency-qubit `bit` equals `value`. Bins that are not basis tones of
/// an `n_freq`-qubit signal are rejected by both teeth sets.
Spectrum comb_filter(const Spectrum& in, unsigned n_freq, unsigned bit, int value);

/// Translates every bin by `delta` harmonics (multiplication by
/// exp(j*delta*omega0*t)). Bins pushed past |k| < S/2 are dropped.
Spectrum shift_bins(const Spectrum& in, int delta);

/// Result of splitting a state on frequency qubit i.
///
/// proj_b holds the filtered signals; partial_b the same signals with the
/// qubit-i carrier removed, so that
///   psi(t) = exp(+j w_i t) partial0(t) + exp(-j w_i t) partial1(t).
/// Partials keep the original sampling grid.
struct FreqProjectionPair {
  EncodedState proj0, proj1;
  EncodedState partial0, partial1;
};

FreqProjectionPair project_frequency(const EncodedState& state, unsigned i,
                                     ResourceCounters* counters = nullptr);

/// Four-way split on frequency qubits (i, j). Entry 2a+b holds the component
/// with x_i = a and x_j = b; partials have both carriers removed.
struct FreqProjectionQuad {
  std::array<EncodedState, 4> proj;
  std::array<EncodedState, 4> partial;
};

FreqProjectionQuad project_frequency_pair(const EncodedState& state, unsigned i, unsigned j,
                                          ResourceCounters* counters = nullptr);

/// Re-expresses a partial projection on frequency qubit `removed` as an
/// ordinary (n-1)-frequency-qubit state on the narrower sampling grid.
EncodedState compact_frequency(const EncodedState& partial, unsigned removed);

/// Component of `state` with qubit `addr` equal to `value`, same shape as
/// the input. Frequency qubits use the comb filter; spatial and time qubits
/// zero the buffers whose index bit differs.
EncodedState project(const EncodedState& state, QubitAddress addr, int value,
                     ResourceCounters* counters = nullptr);

using IndexPair = std::pair<std::size_t, std::size_t>;

/// All (v0, v1) with v0 < 2^width, bit `bit` of v0 clear and v1 = v0 | 2^bit.
std::vector<IndexPair> bit_pairs(unsigned width, unsigned bit);

/// Pairs of spatial signals that differ only in spatial qubit i.
std::vector<IndexPair> spatial_groups(const EncodingConfig& config, unsigned i);
std::vector<IndexPair> spatial_groups(const EncodedState& state, unsigned i);

/// Pairs of time slots that differ only in time qubit i.
std::vector<IndexPair> time_groups(const EncodingConfig& config, unsigned i);
std::vector<IndexPair> time_groups(const EncodedState& state, unsigned i);

/// Staged adjacent swaps that reorder M = 2^m signals so spatial qubit
/// `target_qubit` becomes the most significant position bit.
///
/// Each stage is a set of disjoint transpositions (p, p+1) of positions.
/// Both halves keep their relative order, so after apply() position p and
/// p + M/2 hold signals differing only in the target bit.
struct SwapSchedule {
  std::vector<std::vector<IndexPair>> stages;
  unsigned target_qubit = 0;

  std::size_t swap_count() const;
  /// Runs the stages forward over `order` (order[p] = signal at position p).
  void apply(std::span<std::size_t> order) const;
  /// Runs the stages in reverse, restoring the order apply() started from.
  void undo(std::span<std::size_t> order) const;
};

SwapSchedule swap_schedule(unsigned m, unsigned i);

}  // namespace qse
