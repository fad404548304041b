#include "qse/gates.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "qse/projection.hpp"

namespace qse {

Gate2 Gate2::operator*(const Gate2& r) const {
  return {u00 * r.u00 + u01 * r.u10, u00 * r.u01 + u01 * r.u11,
          u10 * r.u00 + u11 * r.u10, u10 * r.u01 + u11 * r.u11};
}

Gate2 Gate2::adjoint() const { return {std::conj(u00), std::conj(u10), std::conj(u01), std::conj(u11)}; }

bool Gate2::is_finite() const {
  for (const Complex& v : {u00, u01, u10, u11}) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

bool Gate2::is_unitary(double tol) const {
  if (!is_finite()) return false;
  const Gate2 p = adjoint() * *this;
  return std::abs(p.u00 - 1.0) <= tol && std::abs(p.u01) <= tol && std::abs(p.u10) <= tol &&
         std::abs(p.u11 - 1.0) <= tol;
}

namespace gate {
namespace {
constexpr Complex kI{0.0, 1.0};
}
Gate2 I() { return {1.0, 0.0, 0.0, 1.0}; }
Gate2 X() { return {0.0, 1.0, 1.0, 0.0}; }
Gate2 Y() { return {0.0, -kI, kI, 0.0}; }
Gate2 Z() { return {1.0, 0.0, 0.0, -1.0}; }
Gate2 H() {
  const double r = std::numbers::sqrt2 / 2.0;
  return {r, r, r, -r};
}
Gate2 S() { return {1.0, 0.0, 0.0, kI}; }
Gate2 T() { return {1.0, 0.0, 0.0, std::polar(1.0, std::numbers::pi / 4.0)}; }
Gate2 RX(double theta) {
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  return {c, -kI * s, -kI * s, c};
}
Gate2 RY(double theta) {
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  return {c, -s, s, c};
}
Gate2 RZ(double theta) { return {std::polar(1.0, -theta / 2.0), 0.0, 0.0, std::polar(1.0, theta / 2.0)}; }
Gate2 P(double theta) { return {1.0, 0.0, 0.0, std::polar(1.0, theta)}; }
}  // namespace gate

std::optional<Gate2> named_gate(std::string_view name, std::optional<double> parameter) {
  if (!parameter) {
    if (name == "I") return gate::I();
    if (name == "X") return gate::X();
    if (name == "Y") return gate::Y();
    if (name == "Z") return gate::Z();
    if (name == "H") return gate::H();
    if (name == "S") return gate::S();
    if (name == "T") return gate::T();
    return std::nullopt;
  }
  const double t = *parameter;
  if (name == "RX") return gate::RX(t);
  if (name == "RY") return gate::RY(t);
  if (name == "RZ") return gate::RZ(t);
  if (name == "P") return gate::P(t);
  return std::nullopt;
}

BooleanOracle::BooleanOracle(unsigned n_inputs, std::vector<std::uint8_t> table)
    : n_inputs_(n_inputs), table_(std::move(table)) {
  if (n_inputs_ > kMaxQubits - 1) throw std::domain_error("oracle has too many inputs");
  if (table_.size() != (std::size_t{1} << n_inputs_)) {
    throw std::domain_error("truth table has " + std::to_string(table_.size()) + " rows, expected " +
                            std::to_string(std::size_t{1} << n_inputs_));
  }
  for (auto& v : table_) v = v ? 1 : 0;
}

BooleanOracle BooleanOracle::from_bits(std::string_view bits) {
  std::vector<std::uint8_t> table;
  table.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::domain_error(std::string("truth table: unexpected character '") + c + "'");
    table.push_back(c == '1');
  }
  if (table.size() < 2 || (table.size() & (table.size() - 1)) != 0) {
    throw std::domain_error("truth table length " + std::to_string(table.size()) + " is not a power of two >= 2");
  }
  unsigned n = 0;
  while ((std::size_t{1} << n) < table.size()) ++n;
  return BooleanOracle(n, std::move(table));
}

BooleanOracle BooleanOracle::parse(std::string_view text) {
  const auto eol = text.find('\n');
  std::string header(text.substr(0, eol));
  while (!header.empty() && std::isspace(static_cast<unsigned char>(header.back()))) header.pop_back();
  if (header.rfind("n=", 0) != 0) throw std::domain_error("truth table: first line must be n=<k>");
  unsigned n = 0;
  try {
    std::size_t used = 0;
    const unsigned long parsed = std::stoul(header.substr(2), &used);
    if (used != header.size() - 2 || parsed > kMaxQubits - 1) throw std::domain_error("");
    n = static_cast<unsigned>(parsed);
  } catch (const std::exception&) {
    throw std::domain_error("truth table: bad header '" + header + "'");
  }
  std::string bits;
  if (eol != std::string_view::npos) {
    for (char c : text.substr(eol + 1)) {
      if (!std::isspace(static_cast<unsigned char>(c))) bits.push_back(c);
    }
  }
  if (bits.size() != (std::size_t{1} << n)) {
    throw std::domain_error("truth table: expected " + std::to_string(std::size_t{1} << n) + " entries, found " +
                            std::to_string(bits.size()));
  }
  std::vector<std::uint8_t> table;
  table.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::domain_error(std::string("truth table: unexpected character '") + c + "'");
    table.push_back(c == '1');
  }
  return BooleanOracle(n, std::move(table));
}

BooleanOracle BooleanOracle::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::domain_error("cannot open truth table '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

std::size_t BooleanOracle::popcount() const {
  std::size_t count = 0;
  for (auto v : table_) count += v;
  return count;
}

std::string BooleanOracle::bits() const {
  std::string out;
  out.reserve(table_.size());
  for (auto v : table_) out.push_back(v ? '1' : '0');
  return out;
}

namespace {

enum class ControlMode { None, Frequency, Select };

struct Control {
  ControlMode mode = ControlMode::None;
  QubitAddress addr{};

  // For Select mode: is buffer (z, y) in the control-1 subspace?
  bool selects(std::size_t z, std::size_t y) const {
    const std::size_t v = addr.kind == QubitKind::Spatial ? y : z;
    return (v >> addr.index) & 1U;
  }
};

// out += coef * (in translated by delta harmonics)
void add_shifted(Spectrum& out, const Spectrum& in, int delta, Complex coef) {
  if (coef == Complex{}) return;
  const int top = in.max_harmonic();
  for (int k = -top; k <= top; ++k) {
    const int target = k + delta;
    if (target < -top || target > top) continue;
    out.bin(target) += coef * in.bin(k);
  }
}

// Single-qubit gate on frequency qubit i of one buffer spectrum:
// split into partial projections, then remodulate each with
// (U0b exp(+j w_i t) + U1b exp(-j w_i t)).
Spectrum freq_gate_spectrum(const Spectrum& in, unsigned n, unsigned i, const Gate2& g) {
  const int w = 1 << i;
  const Spectrum partial0 = shift_bins(comb_filter(in, n, i, 0), -w);
  const Spectrum partial1 = shift_bins(comb_filter(in, n, i, 1), +w);
  Spectrum out(in.size());
  add_shifted(out, partial0, +w, g.u00);
  add_shifted(out, partial0, -w, g.u10);
  add_shifted(out, partial1, +w, g.u01);
  add_shifted(out, partial1, -w, g.u11);
  return out;
}

std::string gate_kind_key(const Control& control, QubitAddress target) {
  if (control.mode == ControlMode::None) return "1q-" + kind_name(target.kind);
  return "c-" + kind_name(control.addr.kind) + "-" + kind_name(target.kind);
}

// Flat buffer index pairs (a, b) that differ only in the target qubit.
std::vector<IndexPair> target_pairs(const EncodingConfig& config, QubitAddress target, ResourceCounters* counters) {
  const std::size_t M = config.spatial_dim();
  const std::size_t L = config.time_dim();
  std::vector<IndexPair> pairs;
  if (target.kind == QubitKind::Spatial) {
    // Bring the target bit to the top with the swap network, pair position
    // p with p + M/2, then run the network backwards.
    const SwapSchedule schedule = swap_schedule(config.n_spatial, target.index);
    std::vector<std::size_t> order(M);
    for (std::size_t p = 0; p < M; ++p) order[p] = p;
    schedule.apply(order);
    std::vector<IndexPair> signal_pairs;
    signal_pairs.reserve(M / 2);
    for (std::size_t p = 0; p < M / 2; ++p) signal_pairs.emplace_back(order[p], order[p + M / 2]);
    schedule.undo(order);
    for (std::size_t p = 0; p < M; ++p) {
      if (order[p] != p) throw std::logic_error("swap network failed to restore signal order");
    }
    if (counters) {
      counters->swap_stages += 2 * schedule.stages.size();
      counters->buffer_moves += 2 * 2 * schedule.swap_count() * L;
    }
    for (std::size_t z = 0; z < L; ++z) {
      for (const auto& [y0, y1] : signal_pairs) pairs.emplace_back(z * M + y0, z * M + y1);
    }
  } else {
    for (const auto& [z0, z1] : time_groups(config, target.index)) {
      for (std::size_t y = 0; y < M; ++y) pairs.emplace_back(z0 * M + y, z1 * M + y);
    }
  }
  return pairs;
}

EncodedState apply_impl(const EncodedState& state, const Gate2& g, QubitAddress target, const Control& control,
                        ResourceCounters* counters) {
  const auto& config = state.config();
  check_address(config, target);
  if (!g.is_finite()) throw std::domain_error("gate has non-finite entries");

  const unsigned n = config.n_freq;
  const std::size_t M = config.spatial_dim();
  EncodedState out = state;
  const auto src = state.buffers();
  auto dst = out.buffers();

  if (target.kind == QubitKind::Frequency) {
    const auto count = static_cast<long long>(src.size());
#pragma omp parallel for schedule(static)
    for (long long bl = 0; bl < count; ++bl) {
      const auto b = static_cast<std::size_t>(bl);
      if (control.mode == ControlMode::Select && !control.selects(b / M, b % M)) continue;
      const Spectrum spec = dft(src[b]);
      Spectrum result;
      if (control.mode == ControlMode::Frequency) {
        const unsigned c = control.addr.index;
        result = comb_filter(spec, n, c, 0);
        result += freq_gate_spectrum(comb_filter(spec, n, c, 1), n, target.index, g);
      } else {
        result = freq_gate_spectrum(spec, n, target.index, g);
      }
      SignalBuffer buf = idft(result);
      buf.slot = src[b].slot;
      dst[b] = std::move(buf);
    }
    if (counters) counters->filters += control.mode == ControlMode::Frequency ? 2 : 1;
  } else {
    const auto pairs = target_pairs(config, target, counters);
    const auto count = static_cast<long long>(pairs.size());
#pragma omp parallel for schedule(static)
    for (long long pl = 0; pl < count; ++pl) {
      const auto [a, b] = pairs[static_cast<std::size_t>(pl)];
      // Both members share every bit except the target, so one test covers the pair.
      if (control.mode == ControlMode::Select && !control.selects(a / M, a % M)) continue;
      if (control.mode == ControlMode::Frequency) {
        const unsigned c = control.addr.index;
        const Spectrum A = dft(src[a]);
        const Spectrum B = dft(src[b]);
        const Spectrum A1 = comb_filter(A, n, c, 1);
        const Spectrum B1 = comb_filter(B, n, c, 1);
        Spectrum ra = comb_filter(A, n, c, 0);
        Spectrum rb = comb_filter(B, n, c, 0);
        for (int k = -ra.max_harmonic(); k <= ra.max_harmonic(); ++k) {
          ra.bin(k) += g.u00 * A1.bin(k) + g.u01 * B1.bin(k);
          rb.bin(k) += g.u10 * A1.bin(k) + g.u11 * B1.bin(k);
        }
        SignalBuffer na = idft(ra);
        SignalBuffer nb = idft(rb);
        na.slot = src[a].slot;
        nb.slot = src[b].slot;
        dst[a] = std::move(na);
        dst[b] = std::move(nb);
      } else {
        const auto& sa = src[a].samples;
        const auto& sb = src[b].samples;
        auto& da = dst[a].samples;
        auto& db = dst[b].samples;
        for (std::size_t s = 0; s < sa.size(); ++s) {
          da[s] = g.u00 * sa[s] + g.u01 * sb[s];
          db[s] = g.u10 * sa[s] + g.u11 * sb[s];
        }
      }
    }
    if (counters && control.mode == ControlMode::Frequency) counters->filters += 1;
  }
  if (counters) ++counters->gates_by_kind[gate_kind_key(control, target)];
  return out;
}

}  // namespace

EncodedState apply_1q(const EncodedState& state, const Gate2& gate, QubitAddress target, ResourceCounters* counters) {
  return apply_impl(state, gate, target, Control{}, counters);
}

EncodedState apply_controlled(const EncodedState& state, const Gate2& gate, QubitAddress control, QubitAddress target,
                              ResourceCounters* counters) {
  check_address(state.config(), control);
  check_address(state.config(), target);
  if (control == target) throw std::domain_error("control and target are the same qubit " + to_string(control));
  Control c;
  c.addr = control;
  c.mode = control.kind == QubitKind::Frequency ? ControlMode::Frequency : ControlMode::Select;
  return apply_impl(state, gate, target, c, counters);
}

EncodedState apply_oracle(const EncodedState& state, const BooleanOracle& f, QubitAddress out,
                          ResourceCounters* counters) {
  const auto& config = state.config();
  if (config.n_spatial != 0 || config.n_time != 0 || config.n_freq != f.n_inputs() + 1) {
    throw std::domain_error("oracle with " + std::to_string(f.n_inputs()) + " inputs needs " +
                            std::to_string(f.n_inputs() + 1) + " frequency qubits and no spatial or time qubits");
  }
  if (out != QubitAddress::freq(0)) throw std::domain_error("oracle output must be frequency qubit 0");

  const unsigned n = config.n_freq;
  EncodedState result(config);
  result.set_scale(state.scale());
  const auto src = state.buffers();
  auto dst = result.buffers();
  for (std::size_t b = 0; b < src.size(); ++b) {
    Spectrum spec = dft(src[b]);
    for (std::size_t x = 0; x < f.size(); ++x) {
      if (!f(x)) continue;
      std::swap(spec.bin(harmonic_of(2 * x, n)), spec.bin(harmonic_of(2 * x + 1, n)));
    }
    SignalBuffer buf = idft(spec);
    buf.slot = src[b].slot;
    dst[b] = std::move(buf);
  }
  if (counters) ++counters->oracle_calls;
  return result;
}

}  // namespace qse
