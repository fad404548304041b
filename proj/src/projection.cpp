#include "qse/projection.hpp"

#include <stdexcept>
#include <string>

namespace qse {

namespace {

void require_freq_qubit(const EncodingConfig& config, unsigned i) {
  check_address(config, QubitAddress::freq(i));
}

// Applies `op` to the spectrum of every buffer and returns the resulting state.
template <typename Op>
EncodedState map_spectra(const EncodedState& state, Op&& op) {
  EncodedState out(state.config());
  out.set_scale(state.scale());
  const auto src = state.buffers();
  auto dst = out.buffers();
  const auto count = static_cast<long long>(src.size());
#pragma omp parallel for schedule(static)
  for (long long b = 0; b < count; ++b) {
    const auto idx = static_cast<std::size_t>(b);
    SignalBuffer buf = idft(op(dft(src[idx])));
    buf.slot = src[idx].slot;
    dst[idx] = std::move(buf);
  }
  return out;
}

}  // namespace

Spectrum comb_filter(const Spectrum& in, unsigned n_freq, unsigned bit, int value) {
  Spectrum out(in.size());
  const std::size_t N = std::size_t{1} << n_freq;
  const std::size_t mask = std::size_t{1} << bit;
  const std::size_t want = value ? mask : 0;
  for (std::size_t x = 0; x < N; ++x) {
    if ((x & mask) != want) continue;
    const int k = harmonic_of(x, n_freq);
    out.bin(k) = in.bin(k);
  }
  return out;
}

Spectrum shift_bins(const Spectrum& in, int delta) {
  Spectrum out(in.size());
  const int top = in.max_harmonic();
  for (int k = -top; k <= top; ++k) {
    const int target = k + delta;
    if (target < -top || target > top) continue;
    out.bin(target) = in.bin(k);
  }
  return out;
}

FreqProjectionPair project_frequency(const EncodedState& state, unsigned i, ResourceCounters* counters) {
  const auto& config = state.config();
  require_freq_qubit(config, i);
  const int carrier = 1 << i;
  const unsigned n = config.n_freq;
  FreqProjectionPair out{
      map_spectra(state, [&](const Spectrum& s) { return comb_filter(s, n, i, 0); }),
      map_spectra(state, [&](const Spectrum& s) { return comb_filter(s, n, i, 1); }),
      {},
      {},
  };
  out.partial0 = map_spectra(out.proj0, [&](const Spectrum& s) { return shift_bins(s, -carrier); });
  out.partial1 = map_spectra(out.proj1, [&](const Spectrum& s) { return shift_bins(s, +carrier); });
  if (counters) ++counters->filters;
  return out;
}

FreqProjectionQuad project_frequency_pair(const EncodedState& state, unsigned i, unsigned j,
                                          ResourceCounters* counters) {
  const auto& config = state.config();
  require_freq_qubit(config, i);
  require_freq_qubit(config, j);
  if (i == j) throw std::domain_error("pair projection needs two distinct qubits, got f" + std::to_string(i) + " twice");

  const auto outer = project_frequency(state, i, counters);
  const auto inner0 = project_frequency(outer.proj0, j, counters);
  const auto inner1 = project_frequency(outer.proj1, j, counters);

  FreqProjectionQuad quad;
  quad.proj = {inner0.proj0, inner0.proj1, inner1.proj0, inner1.proj1};
  const int wi = 1 << i;
  const int wj = 1 << j;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const int carrier = (a ? -wi : wi) + (b ? -wj : wj);
      quad.partial[2 * a + b] =
          map_spectra(quad.proj[2 * a + b], [&](const Spectrum& s) { return shift_bins(s, -carrier); });
    }
  }
  return quad;
}

EncodedState compact_frequency(const EncodedState& partial, unsigned removed) {
  const auto& config = partial.config();
  require_freq_qubit(config, removed);
  EncodingConfig narrow = config;
  narrow.n_freq -= 1;
  EncodedState out(narrow);
  out.set_scale(partial.scale());

  const std::size_t low_mask = (std::size_t{1} << removed) - 1;
  const int carrier = 1 << removed;
  const auto src = partial.buffers();
  auto dst = out.buffers();
  for (std::size_t b = 0; b < src.size(); ++b) {
    const Spectrum wide = dft(src[b]);
    Spectrum spec(narrow.samples_per_slot());
    for (std::size_t xs = 0; xs < narrow.freq_dim(); ++xs) {
      // Reinsert a zero at bit `removed`; the partial has that carrier stripped.
      const std::size_t x = ((xs & ~low_mask) << 1) | (xs & low_mask);
      spec.bin(harmonic_of(xs, narrow.n_freq)) = wide.bin(harmonic_of(x, config.n_freq) - carrier);
    }
    SignalBuffer buf = idft(spec);
    buf.slot = src[b].slot;
    dst[b] = std::move(buf);
  }
  return out;
}

EncodedState project(const EncodedState& state, QubitAddress addr, int value, ResourceCounters* counters) {
  check_address(state.config(), addr);
  if (value != 0 && value != 1) throw std::domain_error("projection value must be 0 or 1");
  if (addr.kind == QubitKind::Frequency) {
    auto pair = project_frequency(state, addr.index, counters);
    return value ? std::move(pair.proj1) : std::move(pair.proj0);
  }
  EncodedState out = state;
  const auto& c = state.config();
  const std::size_t mask = std::size_t{1} << addr.index;
  for (std::size_t z = 0; z < c.time_dim(); ++z) {
    for (std::size_t y = 0; y < c.spatial_dim(); ++y) {
      const std::size_t v = addr.kind == QubitKind::Spatial ? y : z;
      if (static_cast<int>((v & mask) != 0) != value) {
        for (auto& s : out.at(z, y).samples) s = 0.0;
      }
    }
  }
  return out;
}

std::vector<IndexPair> bit_pairs(unsigned width, unsigned bit) {
  if (bit >= width) throw std::domain_error("bit " + std::to_string(bit) + " outside width " + std::to_string(width));
  const std::size_t count = std::size_t{1} << width;
  const std::size_t mask = std::size_t{1} << bit;
  std::vector<IndexPair> pairs;
  pairs.reserve(count / 2);
  for (std::size_t v = 0; v < count; ++v) {
    if (!(v & mask)) pairs.emplace_back(v, v | mask);
  }
  return pairs;
}

std::vector<IndexPair> spatial_groups(const EncodingConfig& config, unsigned i) {
  check_address(config, QubitAddress::spatial(i));
  return bit_pairs(config.n_spatial, i);
}

std::vector<IndexPair> spatial_groups(const EncodedState& state, unsigned i) {
  return spatial_groups(state.config(), i);
}

std::vector<IndexPair> time_groups(const EncodingConfig& config, unsigned i) {
  check_address(config, QubitAddress::time(i));
  return bit_pairs(config.n_time, i);
}

std::vector<IndexPair> time_groups(const EncodedState& state, unsigned i) {
  return time_groups(state.config(), i);
}

std::size_t SwapSchedule::swap_count() const {
  std::size_t total = 0;
  for (const auto& stage : stages) total += stage.size();
  return total;
}

void SwapSchedule::apply(std::span<std::size_t> order) const {
  for (const auto& stage : stages) {
    for (const auto& [p, q] : stage) std::swap(order[p], order[q]);
  }
}

void SwapSchedule::undo(std::span<std::size_t> order) const {
  for (auto it = stages.rbegin(); it != stages.rend(); ++it) {
    for (const auto& [p, q] : *it) std::swap(order[p], order[q]);
  }
}

SwapSchedule swap_schedule(unsigned m, unsigned i) {
  if (i >= m) throw std::domain_error("spatial qubit " + std::to_string(i) + " out of range for m=" + std::to_string(m));
  SwapSchedule schedule;
  schedule.target_qubit = i;
  const std::size_t M = std::size_t{1} << m;
  const std::size_t mask = std::size_t{1} << i;
  std::vector<std::size_t> order(M);
  for (std::size_t p = 0; p < M; ++p) order[p] = p;

  // Odd-even transposition on the target bit: every adjacent (1, 0) pair
  // swaps in the same stage. Such pairs never overlap, and neither the
  // 0-signals nor the 1-signals change relative order.
  for (;;) {
    std::vector<IndexPair> stage;
    for (std::size_t p = 0; p + 1 < M; ++p) {
      if ((order[p] & mask) && !(order[p + 1] & mask)) {
        stage.emplace_back(p, p + 1);
        ++p;
      }
    }
    if (stage.empty()) break;
    for (const auto& [p, q] : stage) std::swap(order[p], order[q]);
    schedule.stages.push_back(std::move(stage));
  }
  return schedule;
}

}  // namespace qse
