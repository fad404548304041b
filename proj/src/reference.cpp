#include "qse/reference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qse {

RefState::RefState(AmplitudeVector a, const EncodingConfig& c) : amps(std::move(a)), config(c) {
  config.validate();
  if (amps.size() != config.dim()) throw std::domain_error("reference amplitude length mismatch");
}

RefState RefState::basis(std::size_t flat, const EncodingConfig& c) {
  AmplitudeVector a(c.dim());
  a.at(flat) = 1.0;
  return RefState(std::move(a), c);
}

RefState ref_apply_1q(const RefState& ref, const Gate2& g, QubitAddress target) {
  const std::size_t mask = std::size_t{1} << flat_bit(ref.config, target);
  RefState out = ref;
  for (std::size_t k = 0; k < ref.amps.size(); ++k) {
    if (k & mask) continue;
    const Complex a0 = ref.amps[k];
    const Complex a1 = ref.amps[k | mask];
    out.amps[k] = g.u00 * a0 + g.u01 * a1;
    out.amps[k | mask] = g.u10 * a0 + g.u11 * a1;
  }
  return out;
}

RefState ref_apply_controlled(const RefState& ref, const Gate2& g, QubitAddress control, QubitAddress target) {
  if (control == target) throw std::domain_error("control and target are the same qubit");
  const std::size_t cmask = std::size_t{1} << flat_bit(ref.config, control);
  const std::size_t tmask = std::size_t{1} << flat_bit(ref.config, target);
  RefState out = ref;
  for (std::size_t k = 0; k < ref.amps.size(); ++k) {
    if (!(k & cmask) || (k & tmask)) continue;
    const Complex a0 = ref.amps[k];
    const Complex a1 = ref.amps[k | tmask];
    out.amps[k] = g.u00 * a0 + g.u01 * a1;
    out.amps[k | tmask] = g.u10 * a0 + g.u11 * a1;
  }
  return out;
}

RefState ref_apply_oracle(const RefState& ref, const BooleanOracle& f, QubitAddress out) {
  if (out != QubitAddress::freq(0)) throw std::domain_error("oracle output must be frequency qubit 0");
  if (ref.config.n_freq != f.n_inputs() + 1) throw std::domain_error("oracle input count does not match register");
  const unsigned low_bits = ref.config.n_spatial + ref.config.n_time;
  const std::size_t out_mask = std::size_t{1} << low_bits;
  RefState result = ref;
  for (std::size_t k = 0; k < ref.amps.size(); ++k) {
    const std::size_t x = k >> (low_bits + 1);
    if (f(x)) result.amps[k ^ out_mask] = ref.amps[k];
  }
  return result;
}

double ref_branch_norm_sq(const RefState& ref, QubitAddress addr, int value) {
  const std::size_t mask = std::size_t{1} << flat_bit(ref.config, addr);
  double acc = 0.0;
  for (std::size_t k = 0; k < ref.amps.size(); ++k) {
    if (static_cast<int>((k & mask) != 0) == value) acc += std::norm(ref.amps[k]);
  }
  return acc;
}

RefState ref_collapse(const RefState& ref, QubitAddress addr, int value) {
  const unsigned bit = flat_bit(ref.config, addr);
  EncodingConfig narrow = ref.config;
  switch (addr.kind) {
    case QubitKind::Frequency: narrow.n_freq -= 1; break;
    case QubitKind::Spatial: narrow.n_spatial -= 1; break;
    case QubitKind::Time: narrow.n_time -= 1; break;
  }
  const std::size_t low = (std::size_t{1} << bit) - 1;
  AmplitudeVector amps(narrow.dim());
  for (std::size_t j = 0; j < amps.size(); ++j) {
    const std::size_t k = ((j & ~low) << 1) | (static_cast<std::size_t>(value) << bit) | (j & low);
    amps[j] = ref.amps[k];
  }
  return RefState(std::move(amps), narrow);
}

RefMeasureResult ref_measure(const RefState& ref, QubitAddress addr, MeasurePolicy policy, Rng& rng) {
  check_address(ref.config, addr);
  // Match the signal backend's RMS: frequency branches spread over every
  // buffer, spatial/time branches over half of them.
  double buffers = static_cast<double>(ref.config.buffer_count());
  if (addr.kind != QubitKind::Frequency) buffers /= 2.0;
  const double v0_sq = ref_branch_norm_sq(ref, addr, 0) / buffers;
  const double v1_sq = ref_branch_norm_sq(ref, addr, 1) / buffers;
  if (!(v0_sq + v1_sq > 0.0)) throw std::domain_error("cannot measure a zero-norm state");

  MeasurementRecord record;
  record.addr = addr;
  record.v0 = std::sqrt(v0_sq);
  record.v1 = std::sqrt(v1_sq);
  record.p1 = v1_sq / (v0_sq + v1_sq);
  record.policy = policy;
  record.rng_seed = rng.seed();
  record.outcome = choose_outcome(v0_sq, v1_sq, policy, rng);
  return {record, ref_collapse(ref, addr, record.outcome)};
}

double compare(const EncodedState& state, const RefState& ref) {
  const auto& a = state.config();
  const auto& b = ref.config;
  if (a.n_freq != b.n_freq || a.n_spatial != b.n_spatial || a.n_time != b.n_time) {
    throw std::domain_error("compare: register shapes differ");
  }
  const AmplitudeVector decoded = decode(state);
  double worst = 0.0;
  for (std::size_t k = 0; k < decoded.size(); ++k) worst = std::max(worst, std::abs(decoded[k] - ref.amps[k]));
  return worst;
}

}  // namespace qse
