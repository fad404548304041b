#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>

namespace qse {

using Complex = std::complex<double>;

/// Sizing of an emulated register.
///
/// Qubits are split into three groups: `n_freq` frequency qubits carried by
/// octave-spaced tones inside one signal, `n_spatial` qubits selecting one of
/// M = 2^m parallel signals, and `n_time` qubits selecting one of L = 2^l
/// time slots. Every slot is sampled with `samples_per_slot()` points over
/// one fundamental period T = 2*pi/omega0, which puts every basis tone on an
/// exact DFT bin below Nyquist.
struct EncodingConfig {
  unsigned n_freq = 0;
  unsigned n_spatial = 0;
  unsigned n_time = 0;
  double omega0 = 2.0 * std::numbers::pi;  // rad/s
  std::size_t oversample = 2;

  /// Validating constructor. Throws std::domain_error on bad sizes.
  static EncodingConfig make(unsigned n_freq, unsigned n_spatial, unsigned n_time,
                             double omega0 = 2.0 * std::numbers::pi,
                             std::size_t oversample = 2);

  void validate() const;

  std::size_t samples_per_slot() const { return oversample << (n_freq + 1); }
  std::size_t freq_dim() const { return std::size_t{1} << n_freq; }
  std::size_t spatial_dim() const { return std::size_t{1} << n_spatial; }
  std::size_t time_dim() const { return std::size_t{1} << n_time; }
  std::size_t buffer_count() const { return spatial_dim() * time_dim(); }
  unsigned total_qubits() const { return n_freq + n_spatial + n_time; }
  std::size_t dim() const { return std::size_t{1} << total_qubits(); }
  double slot_duration() const { return 2.0 * std::numbers::pi / omega0; }

  bool operator==(const EncodingConfig&) const = default;
};

// Upper bound on total qubits; keeps every dense vector addressable.
inline constexpr unsigned kMaxQubits = 26;

enum class QubitKind : std::uint8_t { Frequency, Spatial, Time };

struct QubitAddress {
  QubitKind kind = QubitKind::Frequency;
  unsigned index = 0;

  static constexpr QubitAddress freq(unsigned i) { return {QubitKind::Frequency, i}; }
  static constexpr QubitAddress spatial(unsigned i) { return {QubitKind::Spatial, i}; }
  static constexpr QubitAddress time(unsigned i) { return {QubitKind::Time, i}; }

  bool operator==(const QubitAddress&) const = default;
};

/// Number of qubits of the given kind in `config`.
unsigned qubit_count(const EncodingConfig& config, QubitKind kind);

/// Throws std::domain_error if `addr` does not name a qubit of `config`.
void check_address(const EncodingConfig& config, QubitAddress addr);

/// "f3", "s0", "t1".
std::string to_string(QubitAddress addr);
char kind_letter(QubitKind kind);
std::string kind_name(QubitKind kind);

}  // namespace qse
