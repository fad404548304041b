#pragma once

#include <cstddef>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "qse/config.hpp"
#include "qse/signal.hpp"

namespace qse {

/// Dense amplitudes over the flat index (x * M + y) * L + z.
using AmplitudeVector = std::vector<Complex>;

struct BasisParts {
  std::size_t x = 0;  // frequency part
  std::size_t y = 0;  // spatial part
  std::size_t z = 0;  // time part
};

/// Flat index of |x>|y> (x) |z>. Frequency bits are most significant, time
/// bits least significant. Throws std::domain_error on range violations.
std::size_t basis_index(std::size_t x, std::size_t y, std::size_t z, const EncodingConfig& config);

/// Inverse of basis_index().
BasisParts split_index(std::size_t flat, const EncodingConfig& config);

/// Bit position of a qubit inside the flat amplitude index.
unsigned flat_bit(const EncodingConfig& config, QubitAddress addr);

/// An emulated register: L slots of M parallel signal buffers each.
///
/// Buffers are stored slot-major, so buffer (z, y) sits at z * M + y.
/// `scale` is a global positive factor applied on readout.
class EncodedState {
 public:
  EncodedState() = default;
  /// All-zero state of the given shape.
  explicit EncodedState(const EncodingConfig& config);

  const EncodingConfig& config() const { return config_; }

  SignalBuffer& at(std::size_t z, std::size_t y) { return grid_[flat(z, y)]; }
  const SignalBuffer& at(std::size_t z, std::size_t y) const { return grid_[flat(z, y)]; }

  std::span<SignalBuffer> buffers() { return grid_; }
  std::span<const SignalBuffer> buffers() const { return grid_; }

  std::size_t flat(std::size_t z, std::size_t y) const { return z * config_.spatial_dim() + y; }

  double scale() const { return scale_; }
  void set_scale(double scale);

 private:
  EncodingConfig config_;
  std::vector<SignalBuffer> grid_;
  double scale_ = 1.0;
};

/// Synthesizes every buffer from its amplitudes: buffer (z, y) carries
/// sum_x amps[basis_index(x, y, z)] * phi_x.
EncodedState encode(std::span<const Complex> amps, const EncodingConfig& config);

/// Reads amplitudes back out of the signals, scale included.
AmplitudeVector decode(const EncodedState& state);

/// sqrt of the summed per-buffer mean squares, times scale.
double norm(const EncodedState& state);

/// Adds complex AWGN to every buffer. The SNR is measured against the mean
/// buffer power of the whole state. snr_db = +infinity leaves it unchanged.
EncodedState add_noise(const EncodedState& state, double snr_db, std::mt19937_64& rng);

/// Text snapshot: a "qse-state n m ell omega0 S scale" header followed by
/// "z,y,s,real,imag" lines. Values use 17 significant digits so a
/// write/read round trip is bit-exact.
void write_snapshot(std::ostream& out, const EncodedState& state);
EncodedState read_snapshot(std::istream& in);

}  // namespace qse
