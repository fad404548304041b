#include "qse/state.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qse {

std::size_t basis_index(std::size_t x, std::size_t y, std::size_t z, const EncodingConfig& config) {
  if (x >= config.freq_dim() || y >= config.spatial_dim() || z >= config.time_dim()) {
    throw std::domain_error("basis parts (" + std::to_string(x) + "," + std::to_string(y) + "," +
                            std::to_string(z) + ") out of range");
  }
  return (x * config.spatial_dim() + y) * config.time_dim() + z;
}

BasisParts split_index(std::size_t flat, const EncodingConfig& config) {
  if (flat >= config.dim()) throw std::domain_error("flat index out of range");
  BasisParts p;
  p.z = flat % config.time_dim();
  flat /= config.time_dim();
  p.y = flat % config.spatial_dim();
  p.x = flat / config.spatial_dim();
  return p;
}

unsigned flat_bit(const EncodingConfig& config, QubitAddress addr) {
  check_address(config, addr);
  switch (addr.kind) {
    case QubitKind::Time: return addr.index;
    case QubitKind::Spatial: return config.n_time + addr.index;
    case QubitKind::Frequency: return config.n_time + config.n_spatial + addr.index;
  }
  return 0;
}

EncodedState::EncodedState(const EncodingConfig& config) : config_(config) {
  config_.validate();
  grid_.assign(config_.buffer_count(), SignalBuffer(config_.samples_per_slot()));
  for (std::size_t z = 0; z < config_.time_dim(); ++z) {
    for (std::size_t y = 0; y < config_.spatial_dim(); ++y) grid_[flat(z, y)].slot = z;
  }
}

void EncodedState::set_scale(double scale) {
  if (!(std::isfinite(scale) && scale > 0.0)) throw std::domain_error("scale must be finite and positive");
  scale_ = scale;
}

EncodedState encode(std::span<const Complex> amps, const EncodingConfig& config) {
  if (amps.size() != config.dim()) {
    throw std::domain_error("amplitude vector has length " + std::to_string(amps.size()) +
                            ", expected " + std::to_string(config.dim()));
  }
  EncodedState state(config);
  const std::size_t M = config.spatial_dim();
  const std::size_t L = config.time_dim();
  const std::size_t N = config.freq_dim();
  const auto buffers = static_cast<long long>(config.buffer_count());
#pragma omp parallel for schedule(static)
  for (long long b = 0; b < buffers; ++b) {
    const std::size_t z = static_cast<std::size_t>(b) / M;
    const std::size_t y = static_cast<std::size_t>(b) % M;
    Spectrum spec(config.samples_per_slot());
    for (std::size_t x = 0; x < N; ++x) spec.bin(harmonic_of(x, config.n_freq)) = amps[(x * M + y) * L + z];
    SignalBuffer buf = idft(spec);
    buf.slot = z;
    state.buffers()[static_cast<std::size_t>(b)] = std::move(buf);
  }
  return state;
}

AmplitudeVector decode(const EncodedState& state) {
  const auto& config = state.config();
  const std::size_t M = config.spatial_dim();
  const std::size_t L = config.time_dim();
  const std::size_t N = config.freq_dim();
  AmplitudeVector amps(config.dim());
  const auto buffers = static_cast<long long>(config.buffer_count());
#pragma omp parallel for schedule(static)
  for (long long b = 0; b < buffers; ++b) {
    const std::size_t z = static_cast<std::size_t>(b) / M;
    const std::size_t y = static_cast<std::size_t>(b) % M;
    const Spectrum spec = dft(state.buffers()[static_cast<std::size_t>(b)]);
    for (std::size_t x = 0; x < N; ++x) {
      amps[(x * M + y) * L + z] = state.scale() * spec.bin(harmonic_of(x, config.n_freq));
    }
  }
  return amps;
}

double norm(const EncodedState& state) {
  double acc = 0.0;
  for (const auto& buf : state.buffers()) acc += mean_square(buf);
  return std::sqrt(acc) * state.scale();
}

EncodedState add_noise(const EncodedState& state, double snr_db, std::mt19937_64& rng) {
  if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity()) {
    throw std::domain_error("snr_db must be finite or +infinity");
  }
  if (std::isinf(snr_db)) return state;
  double power = 0.0;
  for (const auto& buf : state.buffers()) power += mean_square(buf);
  power /= static_cast<double>(state.buffers().size());
  const double noise_power = power / std::pow(10.0, snr_db / 10.0);
  EncodedState out = state;
  // Sequential on purpose: one rng stream, reproducible draws.
  for (auto& buf : out.buffers()) buf = add_noise_power(buf, noise_power, rng);
  return out;
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
T parse_number(std::string_view text, const char* what) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw std::domain_error(std::string("snapshot: bad ") + what + " '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

void write_snapshot(std::ostream& out, const EncodedState& state) {
  const auto& c = state.config();
  out << "qse-state " << c.n_freq << ' ' << c.n_spatial << ' ' << c.n_time << ' ' << fmt17(c.omega0)
      << ' ' << c.samples_per_slot() << ' ' << fmt17(state.scale()) << '\n';
  for (std::size_t z = 0; z < c.time_dim(); ++z) {
    for (std::size_t y = 0; y < c.spatial_dim(); ++y) {
      const auto& buf = state.at(z, y);
      for (std::size_t s = 0; s < buf.size(); ++s) {
        out << z << ',' << y << ',' << s << ',' << fmt17(buf.samples[s].real()) << ','
            << fmt17(buf.samples[s].imag()) << '\n';
      }
    }
  }
}

EncodedState read_snapshot(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::domain_error("snapshot: missing header");
  std::istringstream header(line);
  std::string magic, n, m, ell, omega0, S, scale;
  if (!(header >> magic >> n >> m >> ell >> omega0 >> S >> scale) || magic != "qse-state") {
    throw std::domain_error("snapshot: malformed header '" + line + "'");
  }
  const auto nf = parse_number<unsigned>(n, "n");
  const auto sample_count = parse_number<std::size_t>(S, "S");
  if (nf > kMaxQubits) throw std::domain_error("snapshot: too many frequency qubits");
  const std::size_t base = std::size_t{1} << (nf + 1);
  if (sample_count % base != 0) throw std::domain_error("snapshot: S inconsistent with n");
  const auto config = EncodingConfig::make(nf, parse_number<unsigned>(m, "m"), parse_number<unsigned>(ell, "ell"),
                                           parse_number<double>(omega0, "omega0"), sample_count / base);
  EncodedState state(config);
  state.set_scale(parse_number<double>(scale, "scale"));

  const std::size_t expected = config.buffer_count() * sample_count;
  std::size_t seen = 0;
  std::vector<bool> filled(expected, false);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::string_view rest(line);
    std::string_view fields[5];
    for (int f = 0; f < 5; ++f) {
      const auto comma = rest.find(',');
      if ((f < 4) == (comma == std::string_view::npos)) {
        throw std::domain_error("snapshot: expected 5 fields in '" + line + "'");
      }
      fields[f] = rest.substr(0, comma);
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    const auto z = parse_number<std::size_t>(fields[0], "z");
    const auto y = parse_number<std::size_t>(fields[1], "y");
    const auto s = parse_number<std::size_t>(fields[2], "sample");
    if (z >= config.time_dim() || y >= config.spatial_dim() || s >= sample_count) {
      throw std::domain_error("snapshot: index out of range in '" + line + "'");
    }
    const std::size_t slot = (state.flat(z, y)) * sample_count + s;
    if (filled[slot]) throw std::domain_error("snapshot: duplicate sample in '" + line + "'");
    filled[slot] = true;
    state.at(z, y).samples[s] = Complex(parse_number<double>(fields[3], "real"), parse_number<double>(fields[4], "imag"));
    ++seen;
  }
  if (seen != expected) {
    throw std::domain_error("snapshot: expected " + std::to_string(expected) + " samples, got " + std::to_string(seen));
  }
  return state;
}

}  // namespace qse
