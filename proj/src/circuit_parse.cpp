#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "qse/circuit.hpp"

namespace qse {

std::string ParseError::to_string() const {
  return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
}

namespace {

struct Failure {
  std::size_t column;
  std::string message;
};

[[noreturn]] void fail(std::size_t column, std::string message) { throw Failure{column, std::move(message)}; }

bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; }

// Character cursor over one line; columns are 1-based.
class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char peek_next() const { return pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0'; }
  std::size_t column() const { return pos_ + 1; }
  void advance() { ++pos_; }

  void expect(char c, const char* what) {
    skip_ws();
    if (peek() != c) fail(column(), std::string("expected ") + what);
    ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  // Letters, digits, '_' and '-'; may be empty.
  std::string_view ident() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  // Everything up to the next whitespace.
  std::string_view token() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  // Unsigned decimal number at the cursor (no leading sign).
  double unsigned_number() {
    const std::size_t col = column();
    if (!(std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) fail(col, "expected a number");
    double value = 0.0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || !std::isfinite(value)) fail(col, "malformed number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return value;
  }

  double signed_number() {
    skip_ws();
    double sign = 1.0;
    if (peek() == '-' || peek() == '+') {
      sign = peek() == '-' ? -1.0 : 1.0;
      ++pos_;
    }
    return sign * unsigned_number();
  }

  std::size_t unsigned_integer(const char* what) {
    skip_ws();
    const std::size_t col = column();
    std::size_t value = 0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr == first) fail(col, std::string("expected ") + what);
    pos_ += static_cast<std::size_t>(ptr - first);
    if (pos_ < text_.size() && is_ident_char(text_[pos_])) fail(col, std::string("malformed ") + what);
    return value;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

// [sign] (number ['*' 'pi'] | 'pi') ['/' number]
double parse_angle(Cursor& cur) {
  cur.skip_ws();
  double sign = 1.0;
  if (cur.peek() == '-' || cur.peek() == '+') {
    sign = cur.peek() == '-' ? -1.0 : 1.0;
    cur.advance();
  }
  cur.skip_ws();
  double value;
  if (cur.peek() == 'p') {
    const std::size_t col = cur.column();
    if (cur.ident() != "pi") fail(col, "expected a number or 'pi'");
    value = std::numbers::pi;
  } else {
    value = cur.unsigned_number();
    if (cur.consume('*')) {
      const std::size_t col = cur.column();
      if (cur.ident() != "pi") fail(col, "expected 'pi' after '*'");
      value *= std::numbers::pi;
    }
  }
  if (cur.consume('/')) {
    cur.skip_ws();
    const std::size_t col = cur.column();
    const double d = cur.unsigned_number();
    if (d == 0.0) fail(col, "division by zero");
    value /= d;
  }
  return sign * value;
}

// re, imj, or re(+|-)imj without inner spaces.
Complex parse_complex(Cursor& cur) {
  cur.skip_ws();
  const double a = cur.signed_number();
  if (cur.peek() == 'j') {
    cur.advance();
    return {0.0, a};
  }
  if ((cur.peek() == '+' || cur.peek() == '-') &&
      (std::isdigit(static_cast<unsigned char>(cur.peek_next())) || cur.peek_next() == '.')) {
    const double sign = cur.peek() == '-' ? -1.0 : 1.0;
    cur.advance();
    const double b = cur.unsigned_number();
    if (cur.peek() != 'j') fail(cur.column(), "expected 'j' after imaginary part");
    cur.advance();
    return {a, sign * b};
  }
  return {a, 0.0};
}

struct ParsedGate {
  Gate2 gate;
  std::size_t column;
};

ParsedGate parse_gate(Cursor& cur) {
  cur.skip_ws();
  const std::size_t col = cur.column();
  if (cur.peek() == '[') {
    Complex m[4];
    cur.expect('[', "'['");
    for (int row = 0; row < 2; ++row) {
      if (row) cur.expect(',', "','");
      cur.expect('[', "'['");
      m[2 * row] = parse_complex(cur);
      cur.expect(',', "','");
      m[2 * row + 1] = parse_complex(cur);
      cur.expect(']', "']'");
    }
    cur.expect(']', "']'");
    return {{m[0], m[1], m[2], m[3]}, col};
  }
  const std::string name(cur.ident());
  if (name.empty()) fail(col, "expected a gate name or matrix");
  std::optional<double> param;
  if (cur.peek() == '(') {
    cur.advance();
    param = parse_angle(cur);
    cur.expect(')', "')'");
  }
  auto g = named_gate(name, param);
  if (!g) {
    if (named_gate(name, param ? std::nullopt : std::optional<double>(0.0))) {
      fail(col, "gate " + name + (param ? " takes no angle" : " needs an angle, e.g. " + name + "(0.5)"));
    }
    fail(col, "unknown gate '" + name + "'");
  }
  return {*g, col};
}

QubitAddress parse_address(Cursor& cur, const EncodingConfig& live) {
  cur.skip_ws();
  const std::size_t col = cur.column();
  const std::string_view word = cur.ident();
  if (word.size() < 2) fail(col, "expected a qubit address like f0, s1, t2");
  QubitAddress addr;
  switch (word[0]) {
    case 'f': addr.kind = QubitKind::Frequency; break;
    case 's': addr.kind = QubitKind::Spatial; break;
    case 't': addr.kind = QubitKind::Time; break;
    default: fail(col, "qubit address must start with f, s or t");
  }
  unsigned index = 0;
  const auto digits = word.substr(1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) fail(col, "malformed qubit address");
  addr.index = index;
  const unsigned count = qubit_count(live, addr.kind);
  if (index >= count) {
    fail(col, "qubit " + to_string(addr) + " out of range (" + kind_name(addr.kind) + " qubits: " +
                  std::to_string(count) + ")");
  }
  return addr;
}

MeasurePolicy parse_policy(Cursor& cur) {
  if (cur.at_end()) return MeasurePolicy::Born;
  const std::size_t col = cur.column();
  const auto word = cur.ident();
  if (word == "born") return MeasurePolicy::Born;
  if (word == "argmax") return MeasurePolicy::Argmax;
  fail(col, "expected measurement policy 'born' or 'argmax'");
}

void expect_end(Cursor& cur) {
  if (!cur.at_end()) fail(cur.column(), "unexpected text");
}

void remove_qubit(EncodingConfig& live, QubitAddress addr) {
  switch (addr.kind) {
    case QubitKind::Frequency: --live.n_freq; break;
    case QubitKind::Spatial: --live.n_spatial; break;
    case QubitKind::Time: --live.n_time; break;
  }
}

class Parser {
 public:
  explicit Parser(const ParseOptions& options) : options_(options) {}

  CircuitProgram run(std::string_view text) {
    if (options_.config) {
      program_.config = *options_.config;
      program_.omega0_hz = program_.config.omega0 / (2.0 * std::numbers::pi);
      live_ = program_.config;
      have_config_ = true;
    }
    std::size_t start = 0;
    while (start <= text.size()) {
      const std::size_t eol = text.find('\n', start);
      std::string_view line = text.substr(start, eol == std::string_view::npos ? std::string_view::npos : eol - start);
      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      ++line_no_;
      parse_line(line);
      if (eol == std::string_view::npos) break;
      start = eol + 1;
    }
    if (!have_config_) throw LineFailure{line_no_ == 0 ? 1 : line_no_, 1, "missing 'qubits' declaration"};
    if (nonunitary_ && !(program_.allow_nonunitary || options_.allow_nonunitary)) {
      throw LineFailure{nonunitary_->first, nonunitary_->second,
                        "gate matrix is not unitary (add 'pragma allow-nonunitary' to permit it)"};
    }
    return std::move(program_);
  }

  struct LineFailure {
    std::size_t line;
    std::size_t column;
    std::string message;
  };

  std::size_t line_no() const { return line_no_; }

 private:
  void parse_line(std::string_view line) {
    Cursor cur(line);
    if (cur.at_end()) return;
    try {
      const std::size_t col = cur.column();
      const std::string kw(cur.ident());
      if (kw == "qubits") {
        parse_qubits(cur, col);
      } else if (kw == "pragma") {
        cur.skip_ws();
        const std::size_t pcol = cur.column();
        if (cur.ident() != "allow-nonunitary") fail(pcol, "unknown pragma");
        expect_end(cur);
        program_.allow_nonunitary = true;
      } else {
        if (!have_config_) fail(col, "the first statement must be 'qubits'");
        if (finished_) fail(col, "no instructions may follow 'measure all'");
        parse_instruction(kw, cur, col);
      }
    } catch (const Failure& f) {
      throw LineFailure{line_no_, f.column, f.message};
    }
  }

  void parse_qubits(Cursor& cur, std::size_t col) {
    if (have_config_) fail(col, "duplicate 'qubits' declaration");
    unsigned counts[3] = {0, 0, 0};
    double omega0_hz = 1.0;
    std::size_t oversample = 2;
    while (!cur.at_end()) {
      const std::size_t kcol = cur.column();
      const std::string key(cur.ident());
      if (!cur.consume('=')) fail(cur.column(), "expected '=' after '" + key + "'");
      if (key == "f" || key == "s" || key == "t") {
        cur.skip_ws();
        const std::size_t vcol = cur.column();
        const std::size_t v = cur.unsigned_integer("qubit count");
        if (v > kMaxQubits) fail(vcol, "too many qubits");
        counts[key == "f" ? 0 : key == "s" ? 1 : 2] = static_cast<unsigned>(v);
      } else if (key == "omega0_hz") {
        cur.skip_ws();
        const std::size_t vcol = cur.column();
        omega0_hz = cur.signed_number();
        if (!(omega0_hz > 0.0)) fail(vcol, "omega0_hz must be positive");
      } else if (key == "oversample") {
        cur.skip_ws();
        const std::size_t vcol = cur.column();
        oversample = cur.unsigned_integer("oversample factor");
        if (oversample < 2 || oversample > 1024 || (oversample & (oversample - 1)) != 0) {
          fail(vcol, "oversample must be a power of two between 2 and 1024");
        }
      } else {
        fail(kcol, "unknown key '" + key + "' (expected f, s, t, omega0_hz, oversample)");
      }
    }
    const unsigned total = counts[0] + counts[1] + counts[2];
    if (total == 0) fail(col, "register needs at least one qubit");
    if (total > kMaxQubits) fail(col, "too many qubits");
    program_.omega0_hz = omega0_hz;
    program_.config = EncodingConfig::make(counts[0], counts[1], counts[2], 2.0 * std::numbers::pi * omega0_hz,
                                           oversample);
    live_ = program_.config;
    have_config_ = true;
  }

  void parse_instruction(const std::string& kw, Cursor& cur, std::size_t col) {
    if (kw == "init") {
      if (!program_.instructions.empty()) fail(col, "'init' must be the first instruction");
      program_.instructions.emplace_back(parse_init(cur));
    } else if (kw == "gate") {
      auto g = parse_gate(cur);
      const auto target = parse_address(cur, live_);
      expect_end(cur);
      note_unitarity(g);
      program_.instructions.emplace_back(GateInstr{g.gate, target});
    } else if (kw == "cgate") {
      auto g = parse_gate(cur);
      cur.skip_ws();
      const std::size_t ccol = cur.column();
      const auto control = parse_address(cur, live_);
      const auto target = parse_address(cur, live_);
      expect_end(cur);
      if (control == target) fail(ccol, "control and target must differ");
      note_unitarity(g);
      program_.instructions.emplace_back(CGateInstr{g.gate, control, target});
    } else if (kw == "oracle") {
      program_.instructions.emplace_back(parse_oracle(cur));
    } else if (kw == "noise") {
      cur.skip_ws();
      double snr;
      if (cur.peek() == 'i') {
        const std::size_t icol = cur.column();
        if (cur.ident() != "inf") fail(icol, "expected an SNR in dB or 'inf'");
        snr = std::numeric_limits<double>::infinity();
      } else {
        snr = cur.signed_number();
      }
      expect_end(cur);
      program_.instructions.emplace_back(NoiseInstr{snr});
    } else if (kw == "measure") {
      cur.skip_ws();
      if (cur.peek() == 'a') {
        const std::size_t acol = cur.column();
        if (cur.ident() != "all") fail(acol, "expected 'all' or a qubit address");
        const auto policy = parse_policy(cur);
        expect_end(cur);
        program_.instructions.emplace_back(MeasureAllInstr{policy});
        finished_ = true;
      } else {
        const auto addr = parse_address(cur, live_);
        const auto policy = parse_policy(cur);
        expect_end(cur);
        program_.instructions.emplace_back(MeasureInstr{addr, policy});
        remove_qubit(live_, addr);
      }
    } else if (kw.empty()) {
      fail(col, "expected a keyword");
    } else {
      fail(col, "unknown instruction '" + kw + "'");
    }
  }

  InitInstr parse_init(Cursor& cur) {
    cur.skip_ws();
    const std::size_t col = cur.column();
    const std::string source(cur.ident());
    InitInstr init;
    if (source == "basis") {
      init.source = InitInstr::Source::Basis;
      cur.skip_ws();
      const std::size_t vcol = cur.column();
      init.basis = cur.unsigned_integer("basis index");
      if (init.basis >= live_.dim()) {
        fail(vcol, "basis index " + std::to_string(init.basis) + " out of range (dimension " +
                       std::to_string(live_.dim()) + ")");
      }
    } else if (source == "uniform") {
      init.source = InitInstr::Source::Uniform;
    } else if (source == "amps") {
      init.source = InitInstr::Source::Amplitudes;
      while (!cur.at_end()) {
        if (init.amps.size() >= live_.dim()) fail(cur.column(), "too many amplitudes (dimension " + std::to_string(live_.dim()) + ")");
        init.amps.push_back(parse_complex(cur));
      }
      if (init.amps.size() != live_.dim()) {
        fail(cur.column(), "expected " + std::to_string(live_.dim()) + " amplitudes, got " +
                               std::to_string(init.amps.size()));
      }
      double total = 0.0;
      for (const auto& a : init.amps) total += std::norm(a);
      if (!(total > 0.0)) fail(col, "initial state must have nonzero norm");
    } else {
      fail(col, "expected 'basis', 'uniform' or 'amps'");
    }
    expect_end(cur);
    return init;
  }

  OracleInstr parse_oracle(Cursor& cur) {
    cur.skip_ws();
    const std::size_t col = cur.column();
    const std::string form(cur.ident());
    OracleInstr instr;
    cur.skip_ws();
    const std::size_t vcol = cur.column();
    const std::string value(cur.token());
    if (value.empty()) fail(vcol, "expected a truth table or file path");
    try {
      if (form == "table") {
        instr.oracle = BooleanOracle::from_bits(value);
      } else if (form == "file") {
        std::filesystem::path path(value);
        if (path.is_relative() && !options_.base_dir.empty()) path = options_.base_dir / path;
        instr.oracle = BooleanOracle::load(path);
      } else {
        fail(col, "expected 'table' or 'file'");
      }
    } catch (const std::domain_error& e) {
      fail(vcol, e.what());
    }
    expect_end(cur);
    if (live_.n_spatial != 0 || live_.n_time != 0 || live_.n_freq != instr.oracle.n_inputs() + 1) {
      fail(vcol, "oracle with " + std::to_string(instr.oracle.n_inputs()) + " inputs needs f=" +
                     std::to_string(instr.oracle.n_inputs() + 1) + " s=0 t=0");
    }
    return instr;
  }

  void note_unitarity(const ParsedGate& g) {
    if (!g.gate.is_finite()) fail(g.column, "gate matrix has non-finite entries");
    if (!nonunitary_ && !g.gate.is_unitary(1e-12)) nonunitary_ = std::make_pair(line_no_, g.column);
  }

  const ParseOptions& options_;
  CircuitProgram program_;
  EncodingConfig live_;
  bool have_config_ = false;
  bool finished_ = false;
  std::size_t line_no_ = 0;
  std::optional<std::pair<std::size_t, std::size_t>> nonunitary_;
};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_address(QubitAddress a) { return to_string(a); }

}  // namespace

ParseResult parse_program(std::string_view text, const ParseOptions& options) {
  ParseResult result;
  Parser parser(options);
  try {
    result.program = parser.run(text);
  } catch (const Parser::LineFailure& f) {
    result.error = ParseError{f.line, f.column, f.message};
  } catch (const std::exception& e) {
    result.error = ParseError{std::max<std::size_t>(parser.line_no(), 1), 1, e.what()};
  }
  return result;
}

std::string format_complex(Complex value) {
  std::string out = fmt17(value.real());
  const double im = value.imag();
  if (im != 0.0 || std::signbit(im)) {
    out += std::signbit(im) ? "-" : "+";
    out += fmt17(std::abs(im));
    out += "j";
  }
  return out;
}

std::string format_gate(const Gate2& g) {
  return "[[" + format_complex(g.u00) + "," + format_complex(g.u01) + "],[" + format_complex(g.u10) + "," +
         format_complex(g.u11) + "]]";
}

std::string format_program(const CircuitProgram& p) {
  std::ostringstream out;
  out << "qubits f=" << p.config.n_freq << " s=" << p.config.n_spatial << " t=" << p.config.n_time
      << " omega0_hz=" << fmt17(p.omega0_hz) << " oversample=" << p.config.oversample << '\n';
  if (p.allow_nonunitary) out << "pragma allow-nonunitary\n";
  for (const auto& instr : p.instructions) {
    std::visit(
        [&](const auto& i) {
          using T = std::decay_t<decltype(i)>;
          if constexpr (std::is_same_v<T, InitInstr>) {
            switch (i.source) {
              case InitInstr::Source::Basis: out << "init basis " << i.basis; break;
              case InitInstr::Source::Uniform: out << "init uniform"; break;
              case InitInstr::Source::Amplitudes:
                out << "init amps";
                for (const auto& a : i.amps) out << ' ' << format_complex(a);
                break;
            }
          } else if constexpr (std::is_same_v<T, GateInstr>) {
            out << "gate " << format_gate(i.gate) << ' ' << format_address(i.target);
          } else if constexpr (std::is_same_v<T, CGateInstr>) {
            out << "cgate " << format_gate(i.gate) << ' ' << format_address(i.control) << ' '
                << format_address(i.target);
          } else if constexpr (std::is_same_v<T, OracleInstr>) {
            out << "oracle table " << i.oracle.bits();
          } else if constexpr (std::is_same_v<T, NoiseInstr>) {
            out << "noise " << (std::isinf(i.snr_db) ? std::string("inf") : fmt17(i.snr_db));
          } else if constexpr (std::is_same_v<T, MeasureInstr>) {
            out << "measure " << format_address(i.addr) << ' ' << to_string(i.policy);
          } else if constexpr (std::is_same_v<T, MeasureAllInstr>) {
            out << "measure all " << to_string(i.policy);
          }
        },
        instr);
    out << '\n';
  }
  return out.str();
}

}  // namespace qse
