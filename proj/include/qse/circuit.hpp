#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qse/gates.hpp"
#include "qse/measurement.hpp"
#include "qse/reference.hpp"
#include "qse/resources.hpp"
#include "qse/state.hpp"

namespace qse {

// ---------------------------------------------------------------------------
// Program model

struct InitInstr {
  enum class Source : std::uint8_t { Basis, Uniform, Amplitudes };
  Source source = Source::Basis;
  std::size_t basis = 0;
  AmplitudeVector amps;
  bool operator==(const InitInstr&) const = default;
};

struct GateInstr {
  Gate2 gate;
  QubitAddress target;
  bool operator==(const GateInstr&) const = default;
};

struct CGateInstr {
  Gate2 gate;
  QubitAddress control;
  QubitAddress target;
  bool operator==(const CGateInstr&) const = default;
};

struct OracleInstr {
  BooleanOracle oracle;
  bool operator==(const OracleInstr&) const = default;
};

struct NoiseInstr {
  double snr_db = 0.0;
  bool operator==(const NoiseInstr&) const = default;
};

struct MeasureInstr {
  QubitAddress addr;
  MeasurePolicy policy = MeasurePolicy::Born;
  bool operator==(const MeasureInstr&) const = default;
};

struct MeasureAllInstr {
  MeasurePolicy policy = MeasurePolicy::Born;
  bool operator==(const MeasureAllInstr&) const = default;
};

using Instruction =
    std::variant<InitInstr, GateInstr, CGateInstr, OracleInstr, NoiseInstr, MeasureInstr, MeasureAllInstr>;

/// A parsed circuit. Qubit addresses in each instruction refer to the
/// register as it stands at that point: measuring a qubit removes it and
/// renumbers the higher qubits of the same kind.
struct CircuitProgram {
  EncodingConfig config;
  double omega0_hz = 1.0;
  bool allow_nonunitary = false;
  std::vector<Instruction> instructions;

  bool operator==(const CircuitProgram&) const = default;
};

// ---------------------------------------------------------------------------
// Parsing

struct ParseError {
  std::size_t line = 0;    // 1-based
  std::size_t column = 0;  // 1-based
  std::string message;

  std::string to_string() const;
};

struct ParseOptions {
  /// Directory that relative `oracle file` paths resolve against.
  std::filesystem::path base_dir;
  /// Accept non-unitary gate matrices without the pragma.
  bool allow_nonunitary = false;
  /// Register to use when the text has no `qubits` line.
  std::optional<EncodingConfig> config;
};

/// Either a program or the first error found. Never throws for bad input.
struct ParseResult {
  std::optional<CircuitProgram> program;
  std::optional<ParseError> error;

  explicit operator bool() const { return program.has_value(); }
};

ParseResult parse_program(std::string_view text, const ParseOptions& options = {});

/// Canonical text form; parse_program(format_program(p)) == p.
std::string format_program(const CircuitProgram& program);

std::string format_complex(Complex value);
std::string format_gate(const Gate2& gate);

// ---------------------------------------------------------------------------
// Execution

enum class Backend : std::uint8_t { Signal, Reference, Both };

std::string to_string(Backend backend);
std::optional<Backend> parse_backend(std::string_view name);

struct ExecuteOptions {
  Backend backend = Backend::Signal;
  std::uint64_t seed = 0;
  /// Channel noise on the signal backend after every gate and oracle call.
  std::optional<double> noise_snr_db;
};

struct StepMeasurement {
  std::size_t step = 0;
  MeasurementRecord record;
};

struct StepDeviation {
  std::size_t step = 0;
  double max_abs = 0.0;
};

struct RunReport {
  Backend backend = Backend::Signal;
  std::uint64_t seed = 0;
  EncodingConfig initial_config;
  EncodingConfig final_config;
  std::optional<AmplitudeVector> final_amplitudes;  // absent after a full measurement
  std::vector<int> bits;                            // from `measure all`
  std::vector<StepMeasurement> measurements;
  std::vector<StepDeviation> deviations;            // backend = both only
  std::optional<double> max_deviation;              // backend = both only
  ResourceCounters counters;
  std::size_t instructions = 0;
  double wall_seconds = 0.0;
};

/// Module error raised while running instruction `step` (0-based).
class ExecutionError : public std::runtime_error {
 public:
  ExecutionError(std::size_t step, const std::string& what)
      : std::runtime_error("instruction " + std::to_string(step) + ": " + what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

struct Execution {
  RunReport report;
  std::optional<EncodedState> signal_state;  // final signal state, when that backend ran
  std::optional<RefState> reference_state;   // final dense state, when that backend ran
};

/// Runs the program. With Backend::Both, the two backends advance in
/// lockstep from identically seeded generators and compare() is recorded
/// after every instruction.
Execution execute(const CircuitProgram& program, const ExecuteOptions& options = {});

/// JSON text of the report (2-space indent, stable key order).
std::string report_json(const RunReport& report);

/// "step,kind,index,v0,v1,p1,outcome,policy,seed" plus one row per record.
std::string measurements_csv(const RunReport& report);

// ---------------------------------------------------------------------------
// Signal export

struct SpectrumFiles {
  std::filesystem::path spectrum;     // harmonic_index,real,imag
  std::filesystem::path time_series;  // t_seconds,real,imag
};

/// Time-series path paired with a spectrum path: "out.csv" -> "out.time.csv".
std::filesystem::path time_series_path(const std::filesystem::path& spectrum_path);

std::string spectrum_csv(const EncodedState& state, std::size_t z, std::size_t y);
std::string time_series_csv(const EncodedState& state, std::size_t z, std::size_t y);

/// Writes both CSVs for buffer (z, y), scale applied. Throws
/// std::runtime_error naming the path on I/O failure.
SpectrumFiles emit_spectrum(const EncodedState& state, std::size_t z, std::size_t y,
                            const std::filesystem::path& path);

}  // namespace qse
