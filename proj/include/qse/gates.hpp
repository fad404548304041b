#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qse/resources.hpp"
#include "qse/state.hpp"

namespace qse {

/// A 2x2 complex gate. U|0> = u00|0> + u10|1>, U|1> = u01|0> + u11|1>.
struct Gate2 {
  Complex u00{1.0}, u01{}, u10{}, u11{1.0};

  Gate2 operator*(const Gate2& rhs) const;
  Gate2 adjoint() const;
  bool is_finite() const;
  /// ||U^dagger U - I||_max <= tol.
  bool is_unitary(double tol = 1e-12) const;

  bool operator==(const Gate2&) const = default;
};

namespace gate {
Gate2 I();
Gate2 X();
Gate2 Y();
Gate2 Z();
Gate2 H();
Gate2 S();
Gate2 T();
Gate2 RX(double theta);
Gate2 RY(double theta);
Gate2 RZ(double theta);
Gate2 P(double theta);
}  // namespace gate

/// Looks up one of I X Y Z H S T (no parameter) or RX RY RZ P (parameter
/// required). Empty when the name or parameter arity is wrong.
std::optional<Gate2> named_gate(std::string_view name, std::optional<double> parameter = std::nullopt);

/// f : {0,1}^n -> {0,1} stored as a truth table, row x = f(x).
class BooleanOracle {
 public:
  BooleanOracle() = default;
  BooleanOracle(unsigned n_inputs, std::vector<std::uint8_t> table);

  /// From a string of 2^n '0'/'1' characters.
  static BooleanOracle from_bits(std::string_view bits);
  /// Truth-table file: "n=<k>" on the first line, then 2^k '0'/'1'
  /// characters (whitespace ignored).
  static BooleanOracle parse(std::string_view text);
  static BooleanOracle load(const std::filesystem::path& path);

  unsigned n_inputs() const { return n_inputs_; }
  std::size_t size() const { return table_.size(); }
  bool operator()(std::size_t x) const { return table_.at(x) != 0; }
  std::size_t popcount() const;
  std::string bits() const;

  bool operator==(const BooleanOracle&) const = default;

 private:
  unsigned n_inputs_ = 0;
  std::vector<std::uint8_t> table_;
};

/// Applies `gate` to one qubit of any kind.
///
/// Frequency qubits go through the comb-filter split and carrier
/// remodulation in the DFT domain. Spatial qubits are paired through a swap
/// network that is undone afterwards. Time qubits combine slot pairs.
/// Throws std::domain_error for a bad address or non-finite gate entries.
EncodedState apply_1q(const EncodedState& state, const Gate2& gate, QubitAddress target,
                      ResourceCounters* counters = nullptr);

/// Controlled-U for every pairing of qubit kinds. Buffers in the control-0
/// subspace are copied through unchanged where the control is spatial or
/// temporal.
EncodedState apply_controlled(const EncodedState& state, const Gate2& gate, QubitAddress control,
                              QubitAddress target, ResourceCounters* counters = nullptr);

/// U_f|x, out> = |x, out xor f(x)> with `out` frequency qubit 0 and inputs
/// on frequency qubits 1..n. Requires n_freq = n_inputs + 1 and no spatial
/// or time qubits. Implemented as a swap of DFT bin pairs.
EncodedState apply_oracle(const EncodedState& state, const BooleanOracle& f, QubitAddress out,
                          ResourceCounters* counters = nullptr);

}  // namespace qse
