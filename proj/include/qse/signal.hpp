#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "qse/config.hpp"

namespace qse {

/// One complex sampled signal over a single time slot [0, T).
///
/// `slot` is the slot offset recorded by time_shift(); the samples
/// themselves never move because T is a period of every basis tone.
struct SignalBuffer {
  std::vector<Complex> samples;
  std::size_t slot = 0;

  SignalBuffer() = default;
  explicit SignalBuffer(std::size_t length) : samples(length) {}
  explicit SignalBuffer(std::vector<Complex> s) : samples(std::move(s)) {}

  std::size_t size() const { return samples.size(); }
};

/// DFT of a buffer, addressed by signed harmonic index k (frequency k*omega0).
///
/// Storage is dense in FFT order; harmonic k lives at bin (k mod S).
/// Valid harmonics satisfy |k| < S/2.
class Spectrum {
 public:
  Spectrum() = default;
  explicit Spectrum(std::size_t size);

  std::size_t size() const { return bins_.size(); }
  int max_harmonic() const { return static_cast<int>(bins_.size() / 2) - 1; }

  /// Unchecked access; caller guarantees |k| < S/2.
  Complex& bin(int k) { return bins_[slot_of(k)]; }
  const Complex& bin(int k) const { return bins_[slot_of(k)]; }

  /// Checked access; throws std::domain_error outside |k| < S/2.
  Complex& at(int k);
  const Complex& at(int k) const;

  std::span<Complex> raw() { return bins_; }
  std::span<const Complex> raw() const { return bins_; }

  /// Harmonics whose magnitude exceeds `tol`, ascending.
  std::vector<std::pair<int, Complex>> nonzero(double tol = 0.0) const;

  Spectrum& operator+=(const Spectrum& other);
  Spectrum& operator*=(Complex factor);

 private:
  std::size_t slot_of(int k) const {
    const auto n = static_cast<long long>(bins_.size());
    return static_cast<std::size_t>(((k % n) + n) % n);
  }
  std::vector<Complex> bins_;
};

/// Harmonic index of basis tone x for n frequency qubits:
/// sum_i (-1)^{x_i} 2^i, which equals (2^n - 1) - 2x.
constexpr int harmonic_of(std::size_t x, unsigned n_freq) {
  return static_cast<int>((std::size_t{1} << n_freq) - 1) - 2 * static_cast<int>(x);
}

/// Inverse of harmonic_of(); empty when k is not a basis tone.
std::optional<std::size_t> basis_of_harmonic(int k, unsigned n_freq);

/// Radian frequency of basis tone x.
double basis_frequency(std::size_t x, const EncodingConfig& config);

/// Samples of exp(j*Omega_x*t) on the slot grid t_s = s*T/S.
SignalBuffer synth_basis(std::size_t x, const EncodingConfig& config);

/// (1/S) * sum_s conj(a[s]) * b[s].
Complex inner_product(const SignalBuffer& a, const SignalBuffer& b);

/// Mean square of the samples: inner_product(b, b) as a real.
double mean_square(const SignalBuffer& b);

/// Forward transform normalized so a unit tone has a unit bin.
Spectrum dft(const SignalBuffer& buffer);
Spectrum dft(std::span<const Complex> samples);

/// Inverse of dft(); the spectrum size becomes the sample count.
SignalBuffer idft(const Spectrum& spectrum);

/// Shift by z slots. Only the slot bookkeeping changes.
SignalBuffer time_shift(const SignalBuffer& buffer, std::size_t z);

/// Adds complex white Gaussian noise at the given signal-to-noise ratio.
/// snr_db = +infinity means no noise.
SignalBuffer add_noise(const SignalBuffer& buffer, double snr_db, std::mt19937_64& rng);

/// Adds noise at a fixed per-sample noise power.
SignalBuffer add_noise_power(const SignalBuffer& buffer, double noise_power, std::mt19937_64& rng);

}  // namespace qse
