#include "qse/search.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qse/projection.hpp"

namespace qse {

namespace {

void check_inputs(const BooleanOracle& f, const SearchOptions& options) {
  if (f.n_inputs() < 1) throw std::domain_error("search needs at least one input bit");
  if (f.n_inputs() > options.max_inputs) {
    throw std::domain_error("oracle has " + std::to_string(f.n_inputs()) + " inputs, cap is " +
                            std::to_string(options.max_inputs));
  }
}

// Uniform state -> U_f -> optional channel noise.
EncodedState oracle_output(const BooleanOracle& f, const SearchOptions& options, Rng* rng,
                           ResourceCounters& counters) {
  EncodedState state = prepare_uniform(f.n_inputs(), options.omega0, options.oversample);
  state = apply_oracle(state, f, QubitAddress::freq(0), &counters);
  if (options.snr_db) {
    Rng fallback(0);
    state = add_noise(state, *options.snr_db, (rng ? *rng : fallback).engine());
  }
  return state;
}

}  // namespace

EncodedState prepare_uniform(unsigned n_inputs, double omega0, std::size_t oversample) {
  if (n_inputs < 1) throw std::domain_error("uniform superposition needs at least one input bit");
  const auto config = EncodingConfig::make(n_inputs + 1, 0, 0, omega0, oversample);
  AmplitudeVector amps(config.dim());
  const double level = std::pow(2.0, -0.5 * n_inputs);
  for (std::size_t x = 0; x < (std::size_t{1} << n_inputs); ++x) amps[2 * x] = level;
  return encode(amps, config);
}

SearchResult run_search(const BooleanOracle& f, const SearchOptions& options, Rng* rng) {
  check_inputs(f, options);
  SearchResult result;
  const unsigned n = f.n_inputs();
  const EncodedState state = oracle_output(f, options, rng, result.counters);
  const auto split = project_frequency(state, 0, &result.counters);

  const double total = norm(state);
  const double proj = norm(split.proj1);
  result.projection_norm_sq = proj * proj;
  result.count_estimate = total > 0.0
      ? static_cast<std::size_t>(std::llround(std::ldexp(result.projection_norm_sq / (total * total), static_cast<int>(n))))
      : 0;
  result.threshold = options.threshold.value_or(std::pow(2.0, -0.5 * n) / 2.0);

  const AmplitudeVector amps = decode(compact_frequency(split.partial1, 0));
  for (std::size_t x = 0; x < amps.size(); ++x) {
    if (std::abs(amps[x]) > result.threshold) result.solutions.push_back(x);
  }
  return result;
}

std::size_t count_solutions(const BooleanOracle& f, const SearchOptions& options, Rng* rng,
                            ResourceCounters* counters) {
  check_inputs(f, options);
  ResourceCounters local;
  const EncodedState state = oracle_output(f, options, rng, local);
  const auto split = project_frequency(state, 0, &local);
  const double proj = norm(split.proj1);
  if (counters) *counters += local;
  return static_cast<std::size_t>(std::llround(std::ldexp(proj * proj, static_cast<int>(f.n_inputs()))));
}

}  // namespace qse
