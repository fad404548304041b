#include "qse/signal.hpp"

#include <fftw3.h>

#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qse {

namespace {

// FFTW plan creation is not thread-safe; execution with the new-array
// interface is. Plans are created once per (size, direction) and reused.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t size, int sign) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_pair(size, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    auto* in = fftw_alloc_complex(size);
    auto* out = fftw_alloc_complex(size);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(size), in, out, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

void require_pow2(std::size_t n) {
  if (n == 0 || !std::has_single_bit(n)) {
    throw std::domain_error("transform length must be a power of two, got " + std::to_string(n));
  }
}

void transform(const Complex* in, Complex* out, std::size_t size, int sign) {
  fftw_plan plan = plan_cache().get(size, sign);
  // std::complex<double> is layout-compatible with fftw_complex.
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

}  // namespace

Spectrum::Spectrum(std::size_t size) : bins_(size) { require_pow2(size); }

Complex& Spectrum::at(int k) {
  if (std::abs(k) > max_harmonic()) {
    throw std::domain_error("harmonic " + std::to_string(k) + " outside |k| < S/2");
  }
  return bin(k);
}

const Complex& Spectrum::at(int k) const {
  if (std::abs(k) > max_harmonic()) {
    throw std::domain_error("harmonic " + std::to_string(k) + " outside |k| < S/2");
  }
  return bin(k);
}

std::vector<std::pair<int, Complex>> Spectrum::nonzero(double tol) const {
  std::vector<std::pair<int, Complex>> out;
  for (int k = -max_harmonic(); k <= max_harmonic(); ++k) {
    if (std::abs(bin(k)) > tol) out.emplace_back(k, bin(k));
  }
  return out;
}

Spectrum& Spectrum::operator+=(const Spectrum& other) {
  if (other.size() != size()) throw std::domain_error("spectrum size mismatch");
  for (std::size_t i = 0; i < bins_.size(); ++i) bins_[i] += other.bins_[i];
  return *this;
}

Spectrum& Spectrum::operator*=(Complex factor) {
  for (auto& b : bins_) b *= factor;
  return *this;
}

std::optional<std::size_t> basis_of_harmonic(int k, unsigned n_freq) {
  const long long top = (1LL << n_freq) - 1;
  const long long diff = top - k;
  if (diff < 0 || diff % 2 != 0) return std::nullopt;
  const long long x = diff / 2;
  if (x > top) return std::nullopt;
  return static_cast<std::size_t>(x);
}

double basis_frequency(std::size_t x, const EncodingConfig& config) {
  return harmonic_of(x, config.n_freq) * config.omega0;
}

SignalBuffer synth_basis(std::size_t x, const EncodingConfig& config) {
  if (x >= config.freq_dim()) {
    throw std::domain_error("basis index " + std::to_string(x) + " out of range for " +
                            std::to_string(config.n_freq) + " frequency qubits");
  }
  const std::size_t S = config.samples_per_slot();
  const long long k = harmonic_of(x, config.n_freq);
  const long long n = static_cast<long long>(S);
  SignalBuffer out(S);
  for (std::size_t s = 0; s < S; ++s) {
    // Reduce k*s mod S first so the phase stays exact for long buffers.
    const long long r = ((k * static_cast<long long>(s)) % n + n) % n;
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(S);
    out.samples[s] = std::polar(1.0, phase);
  }
  return out;
}

Complex inner_product(const SignalBuffer& a, const SignalBuffer& b) {
  if (a.size() != b.size()) {
    throw std::domain_error("inner product of buffers with different lengths (" +
                            std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
  if (a.size() == 0) return {};
  Complex acc{};
  for (std::size_t s = 0; s < a.size(); ++s) acc += std::conj(a.samples[s]) * b.samples[s];
  return acc / static_cast<double>(a.size());
}

double mean_square(const SignalBuffer& b) {
  if (b.size() == 0) return 0.0;
  double acc = 0.0;
  for (const auto& v : b.samples) acc += std::norm(v);
  return acc / static_cast<double>(b.size());
}

Spectrum dft(std::span<const Complex> samples) {
  require_pow2(samples.size());
  Spectrum out(samples.size());
  transform(samples.data(), out.raw().data(), samples.size(), FFTW_FORWARD);
  out *= 1.0 / static_cast<double>(samples.size());
  return out;
}

Spectrum dft(const SignalBuffer& buffer) { return dft(std::span<const Complex>(buffer.samples)); }

SignalBuffer idft(const Spectrum& spectrum) {
  require_pow2(spectrum.size());
  SignalBuffer out(spectrum.size());
  transform(spectrum.raw().data(), out.samples.data(), spectrum.size(), FFTW_BACKWARD);
  return out;
}

SignalBuffer time_shift(const SignalBuffer& buffer, std::size_t z) {
  SignalBuffer out = buffer;
  out.slot += z;
  return out;
}

SignalBuffer add_noise_power(const SignalBuffer& buffer, double noise_power, std::mt19937_64& rng) {
  SignalBuffer out = buffer;
  if (!(noise_power > 0.0)) return out;
  // Complex AWGN: each quadrature carries half the power.
  std::normal_distribution<double> gauss(0.0, std::sqrt(noise_power / 2.0));
  for (auto& v : out.samples) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v += Complex(re, im);
  }
  return out;
}

SignalBuffer add_noise(const SignalBuffer& buffer, double snr_db, std::mt19937_64& rng) {
  if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity()) {
    throw std::domain_error("snr_db must be finite or +infinity");
  }
  if (std::isinf(snr_db)) return buffer;
  const double noise_power = mean_square(buffer) / std::pow(10.0, snr_db / 10.0);
  return add_noise_power(buffer, noise_power, rng);
}

}  // namespace qse
