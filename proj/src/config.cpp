#include "qse/config.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace qse {

EncodingConfig EncodingConfig::make(unsigned n_freq, unsigned n_spatial, unsigned n_time,
                                    double omega0, std::size_t oversample) {
  EncodingConfig c;
  c.n_freq = n_freq;
  c.n_spatial = n_spatial;
  c.n_time = n_time;
  c.omega0 = omega0;
  c.oversample = oversample;
  c.validate();
  return c;
}

void EncodingConfig::validate() const {
  if (!(std::isfinite(omega0) && omega0 > 0.0)) {
    throw std::domain_error("omega0 must be finite and positive");
  }
  if (oversample < 2 || !std::has_single_bit(oversample)) {
    throw std::domain_error("oversample must be a power of two >= 2");
  }
  // A fully measured register is legal (zero qubits, one constant buffer).
  if (total_qubits() > kMaxQubits) {
    throw std::domain_error("too many qubits: " + std::to_string(total_qubits()));
  }
}

unsigned qubit_count(const EncodingConfig& config, QubitKind kind) {
  switch (kind) {
    case QubitKind::Frequency: return config.n_freq;
    case QubitKind::Spatial: return config.n_spatial;
    case QubitKind::Time: return config.n_time;
  }
  return 0;
}

void check_address(const EncodingConfig& config, QubitAddress addr) {
  const unsigned count = qubit_count(config, addr.kind);
  if (addr.index >= count) {
    throw std::domain_error("qubit " + to_string(addr) + " out of range (" +
                            kind_name(addr.kind) + " qubits: " + std::to_string(count) + ")");
  }
}

char kind_letter(QubitKind kind) {
  switch (kind) {
    case QubitKind::Frequency: return 'f';
    case QubitKind::Spatial: return 's';
    case QubitKind::Time: return 't';
  }
  return '?';
}

std::string kind_name(QubitKind kind) {
  switch (kind) {
    case QubitKind::Frequency: return "frequency";
    case QubitKind::Spatial: return "spatial";
    case QubitKind::Time: return "time";
  }
  return "unknown";
}

std::string to_string(QubitAddress addr) {
  return std::string(1, kind_letter(addr.kind)) + std::to_string(addr.index);
}

}  // namespace qse
