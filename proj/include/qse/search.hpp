#pragma once

#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

#include "qse/gates.hpp"
#include "qse/measurement.hpp"
#include "qse/resources.hpp"
#include "qse/state.hpp"

namespace qse {

struct SearchOptions {
  unsigned max_inputs = 12;
  /// Amplitude cut for reading out solutions; 2^{-n/2}/2 when unset.
  std::optional<double> threshold;
  /// Channel noise added after the oracle; none when unset.
  std::optional<double> snr_db;
  double omega0 = 2.0 * std::numbers::pi;
  std::size_t oversample = 2;
};

struct SearchResult {
  std::vector<std::size_t> solutions;  // ascending
  std::size_t count_estimate = 0;
  double projection_norm_sq = 0.0;    // ||Pi_1 psi'||^2 on output qubit 0
  double threshold = 0.0;
  ResourceCounters counters;
};

/// Uniform superposition of |x, 0> over n input qubits (frequency qubits
/// 1..n) with the output on frequency qubit 0. Its signal is
/// 2^{n/2} cos(w_n t) ... cos(w_1 t) exp(j w_0 t).
EncodedState prepare_uniform(unsigned n_inputs, double omega0 = 2.0 * std::numbers::pi,
                             std::size_t oversample = 2);

/// One oracle call on the uniform state, then a comb filter on qubit 0.
/// The out=1 branch holds exactly the solutions.
SearchResult run_search(const BooleanOracle& f, const SearchOptions& options = {}, Rng* rng = nullptr);

/// round(2^n * ||Pi_1 psi'||^2) from the filtered signal's power alone.
std::size_t count_solutions(const BooleanOracle& f, const SearchOptions& options = {}, Rng* rng = nullptr,
                            ResourceCounters* counters = nullptr);

}  // namespace qse
