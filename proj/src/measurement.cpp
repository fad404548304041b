#include "qse/measurement.hpp"

#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>

#include "qse/projection.hpp"

namespace qse {

std::string to_string(MeasurePolicy policy) { return policy == MeasurePolicy::Born ? "born" : "argmax"; }

int choose_outcome(double v0_sq, double v1_sq, MeasurePolicy policy, Rng& rng) {
  const double total = v0_sq + v1_sq;
  if (!(total > 0.0)) throw std::domain_error("cannot measure a zero-norm state");
  if (policy == MeasurePolicy::Argmax) return v1_sq > v0_sq ? 1 : 0;
  // u < p1 with u in [0, 1): p1 = 0 never yields 1 and p1 = 1 always does.
  return rng.uniform() < v1_sq / total ? 1 : 0;
}

namespace {

double mean_of_mean_squares(std::span<const SignalBuffer> buffers, std::span<const std::size_t> pick) {
  double acc = 0.0;
  for (std::size_t b : pick) acc += mean_square(buffers[b]);
  return pick.empty() ? 0.0 : acc / static_cast<double>(pick.size());
}

// Buffers whose spatial/time address bit equals `value`, in slot-major order.
std::vector<std::size_t> branch_buffers(const EncodingConfig& config, QubitAddress addr, int value) {
  std::vector<std::size_t> out;
  const std::size_t M = config.spatial_dim();
  for (std::size_t z = 0; z < config.time_dim(); ++z) {
    for (std::size_t y = 0; y < M; ++y) {
      const std::size_t v = addr.kind == QubitKind::Spatial ? y : z;
      if (static_cast<int>((v >> addr.index) & 1U) == value) out.push_back(z * M + y);
    }
  }
  return out;
}

// Keeps the buffers of one spatial/time branch, reindexed for the smaller register.
EncodedState keep_branch(const EncodedState& state, QubitAddress addr, int value) {
  EncodingConfig narrow = state.config();
  if (addr.kind == QubitKind::Spatial) {
    narrow.n_spatial -= 1;
  } else {
    narrow.n_time -= 1;
  }
  EncodedState out(narrow);
  out.set_scale(state.scale());
  const auto picked = branch_buffers(state.config(), addr, value);
  // Removing one bit preserves the order of the remaining indices, so the
  // picked buffers land in slot-major order of the narrow grid.
  for (std::size_t k = 0; k < picked.size(); ++k) {
    SignalBuffer buf = state.buffers()[picked[k]];
    buf.slot = k / narrow.spatial_dim();
    out.buffers()[k] = std::move(buf);
  }
  return out;
}

struct Branches {
  double v0_sq = 0.0;
  double v1_sq = 0.0;
  std::optional<FreqProjectionPair> freq;
};

Branches branch_powers(const EncodedState& state, QubitAddress addr, ResourceCounters* counters) {
  Branches out;
  const double scale_sq = state.scale() * state.scale();
  if (addr.kind == QubitKind::Frequency) {
    out.freq = project_frequency(state, addr.index, counters);
    std::vector<std::size_t> all(state.buffers().size());
    for (std::size_t b = 0; b < all.size(); ++b) all[b] = b;
    out.v0_sq = scale_sq * mean_of_mean_squares(out.freq->partial0.buffers(), all);
    out.v1_sq = scale_sq * mean_of_mean_squares(out.freq->partial1.buffers(), all);
  } else {
    const auto b0 = branch_buffers(state.config(), addr, 0);
    const auto b1 = branch_buffers(state.config(), addr, 1);
    out.v0_sq = scale_sq * mean_of_mean_squares(state.buffers(), b0);
    out.v1_sq = scale_sq * mean_of_mean_squares(state.buffers(), b1);
  }
  return out;
}

EncodedState take_branch(const EncodedState& state, QubitAddress addr, int outcome, const Branches& branches) {
  if (addr.kind == QubitKind::Frequency) {
    return compact_frequency(outcome ? branches.freq->partial1 : branches.freq->partial0, addr.index);
  }
  return keep_branch(state, addr, outcome);
}

}  // namespace

MeasureResult measure(const EncodedState& state, QubitAddress addr, MeasurePolicy policy, Rng& rng,
                      ResourceCounters* counters) {
  check_address(state.config(), addr);
  const Branches branches = branch_powers(state, addr, counters);
  const double total = branches.v0_sq + branches.v1_sq;
  if (!(total > 0.0)) throw std::domain_error("cannot measure a zero-norm state");

  MeasurementRecord record;
  record.addr = addr;
  record.v0 = std::sqrt(branches.v0_sq);
  record.v1 = std::sqrt(branches.v1_sq);
  record.p1 = branches.v1_sq / total;
  record.policy = policy;
  record.rng_seed = rng.seed();
  record.outcome = choose_outcome(branches.v0_sq, branches.v1_sq, policy, rng);
  return {record, take_branch(state, addr, record.outcome, branches)};
}

EncodedState collapse(const EncodedState& state, QubitAddress addr, int outcome, ResourceCounters* counters) {
  check_address(state.config(), addr);
  if (outcome != 0 && outcome != 1) throw std::domain_error("outcome must be 0 or 1");
  if (addr.kind != QubitKind::Frequency) return keep_branch(state, addr, outcome);
  const auto pair = project_frequency(state, addr.index, counters);
  return compact_frequency(outcome ? pair.partial1 : pair.partial0, addr.index);
}

QubitAddress address_after_removal(QubitAddress addr, QubitAddress removed) {
  if (addr.kind == removed.kind && addr.index > removed.index) --addr.index;
  return addr;
}

std::vector<QubitAddress> default_measure_order(const EncodingConfig& config) {
  std::vector<QubitAddress> order;
  for (unsigned i = config.n_freq; i-- > 0;) order.push_back(QubitAddress::freq(i));
  for (unsigned i = config.n_spatial; i-- > 0;) order.push_back(QubitAddress::spatial(i));
  for (unsigned i = config.n_time; i-- > 0;) order.push_back(QubitAddress::time(i));
  return order;
}

void check_measure_order(const EncodingConfig& config, std::span<const QubitAddress> order) {
  std::set<std::pair<int, unsigned>> seen;
  for (const auto& a : order) {
    check_address(config, a);
    if (!seen.emplace(static_cast<int>(a.kind), a.index).second) {
      throw std::domain_error("qubit " + to_string(a) + " appears twice in measurement order");
    }
  }
  if (seen.size() != config.total_qubits()) {
    throw std::domain_error("measurement order covers " + std::to_string(seen.size()) + " of " +
                            std::to_string(config.total_qubits()) + " qubits");
  }
}

MeasureAllResult measure_all(const EncodedState& state, MeasurePolicy policy, Rng& rng,
                             std::span<const QubitAddress> order, ResourceCounters* counters) {
  check_measure_order(state.config(), order);
  std::vector<QubitAddress> pending(order.begin(), order.end());
  MeasureAllResult result{{}, {}, state};
  for (std::size_t k = 0; k < pending.size(); ++k) {
    auto step = measure(result.final_state, pending[k], policy, rng, counters);
    step.record.addr = order[k];
    result.bits.push_back(step.record.outcome);
    result.records.push_back(step.record);
    result.final_state = std::move(step.state);
    for (std::size_t r = k + 1; r < pending.size(); ++r) pending[r] = address_after_removal(pending[r], pending[k]);
  }
  return result;
}

}  // namespace qse
