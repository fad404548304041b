#pragma once

// Shared test helpers: seeded generators and small independent oracles
// (direct tone evaluation, O(S^2) DFT, Kronecker-product operators).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "qse/config.hpp"
#include "qse/gates.hpp"
#include "qse/signal.hpp"
#include "qse/state.hpp"

namespace qse::test {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}

  std::mt19937_64& engine() { return engine_; }

  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }
  bool coin() { return below(2) == 1; }

  Complex complex_normal() { return {normal(), normal()}; }

  AmplitudeVector amplitudes(std::size_t dim, bool normalized = true) {
    AmplitudeVector a(dim);
    double total = 0.0;
    for (auto& v : a) {
      v = complex_normal();
      total += std::norm(v);
    }
    if (normalized) {
      for (auto& v : a) v /= std::sqrt(total);
    }
    return a;
  }

  // Haar-ish random unitary: global phase times ZYZ Euler rotation.
  Gate2 unitary() {
    const double two_pi = 2.0 * std::numbers::pi;
    const double phase = uniform(0.0, two_pi);
    const double theta = std::acos(1.0 - 2.0 * uniform());
    const Gate2 u = gate::RZ(uniform(0.0, two_pi)) * gate::RY(theta) * gate::RZ(uniform(0.0, two_pi));
    const Complex g = std::polar(1.0, phase);
    return {g * u.u00, g * u.u01, g * u.u10, g * u.u11};
  }

  Gate2 matrix() { return {complex_normal(), complex_normal(), complex_normal(), complex_normal()}; }

  // Random shape with 1 <= total <= max_total.
  EncodingConfig config(unsigned max_total, unsigned max_freq = 6) {
    for (;;) {
      const unsigned n = static_cast<unsigned>(below(std::min(max_total, max_freq) + 1));
      const unsigned m = static_cast<unsigned>(below(max_total - n + 1));
      const unsigned l = static_cast<unsigned>(below(max_total - n - m + 1));
      if (n + m + l >= 1) return EncodingConfig::make(n, m, l);
    }
  }

  QubitAddress address(const EncodingConfig& c) {
    const std::size_t k = below(c.total_qubits());
    if (k < c.n_freq) return QubitAddress::freq(static_cast<unsigned>(k));
    if (k < c.n_freq + c.n_spatial) return QubitAddress::spatial(static_cast<unsigned>(k - c.n_freq));
    return QubitAddress::time(static_cast<unsigned>(k - c.n_freq - c.n_spatial));
  }

 private:
  std::mt19937_64 engine_;
};

inline double max_abs_diff(const AmplitudeVector& a, const AmplitudeVector& b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
  return worst;
}

inline double max_abs_diff(const std::vector<Complex>& a, const std::vector<Complex>& b, Complex scale_b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - scale_b * b[k]));
  return worst;
}

// Largest samplewise difference between two states of equal shape.
inline double state_diff(const EncodedState& a, const EncodedState& b) {
  if (!(a.config() == b.config())) return INFINITY;
  double worst = 0.0;
  const auto ba = a.buffers();
  const auto bb = b.buffers();
  for (std::size_t i = 0; i < ba.size(); ++i) {
    for (std::size_t s = 0; s < ba[i].size(); ++s) {
      worst = std::max(worst, std::abs(a.scale() * ba[i].samples[s] - b.scale() * bb[i].samples[s]));
    }
  }
  return worst;
}

inline double l2(const AmplitudeVector& a) {
  double acc = 0.0;
  for (const auto& v : a) acc += std::norm(v);
  return std::sqrt(acc);
}

// exp(j * Omega_x * t_s) straight from the sign sum over the bits of x.
inline std::vector<Complex> direct_tone(std::size_t x, unsigned n_freq, std::size_t samples) {
  long long harmonic = 0;
  for (unsigned i = 0; i < n_freq; ++i) harmonic += ((x >> i) & 1U) ? -(1LL << i) : (1LL << i);
  std::vector<Complex> out(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(harmonic) * static_cast<double>(s) /
                         static_cast<double>(samples);
    out[s] = std::polar(1.0, phase);
  }
  return out;
}

// O(S^2) transform, normalized by 1/S; entry k is harmonic k (FFT order).
inline std::vector<Complex> direct_dft(const std::vector<Complex>& x) {
  const std::size_t n = x.size();
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      const double phase = -2.0 * std::numbers::pi * static_cast<double>((k * s) % n) / static_cast<double>(n);
      acc += x[s] * std::polar(1.0, phase);
    }
    out[k] = acc / static_cast<double>(n);
  }
  return out;
}

// Full operator on the flat index built entry by entry from tensor factors:
// entry (r, c) is the product over bits of the 2x2 factor on that bit.
// `ctrl_bit` < 0 means no control.
inline AmplitudeVector kron_apply(const AmplitudeVector& amps, const Gate2& g, unsigned tgt_bit, int ctrl_bit = -1) {
  const std::size_t dim = amps.size();
  const Complex u[2][2] = {{g.u00, g.u01}, {g.u10, g.u11}};
  AmplitudeVector out(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    Complex acc = 0.0;
    for (std::size_t c = 0; c < dim; ++c) {
      Complex entry = 1.0;
      const bool active = ctrl_bit < 0 || ((c >> ctrl_bit) & 1U);
      for (unsigned b = 0; (std::size_t{1} << b) < dim; ++b) {
        const unsigned rb = (r >> b) & 1U;
        const unsigned cb = (c >> b) & 1U;
        if (b == tgt_bit && active) {
          entry *= u[rb][cb];
        } else if (rb != cb) {
          entry = 0.0;
        }
        if (entry == Complex(0.0)) break;
      }
      acc += entry * amps[c];
    }
    out[r] = acc;
  }
  return out;
}

}  // namespace qse::test
