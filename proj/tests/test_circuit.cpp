#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fixtures.hpp"
#include "qse/circuit.hpp"
#include "support.hpp"

using namespace qse;
using qse::test::Gen;

namespace {

ParseError parse_error(std::string_view text, const ParseOptions& options = {}) {
  const auto r = parse_program(text, options);
  REQUIRE_MESSAGE(!r.program.has_value(), text);
  REQUIRE(r.error.has_value());
  return *r.error;
}

CircuitProgram parse_ok(std::string_view text, const ParseOptions& options = {}) {
  const auto r = parse_program(text, options);
  if (r.error) FAIL(r.error->to_string());
  return *r.program;
}

std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string without_wall_time(std::string json) {
  const auto pos = json.find("\"wall_seconds\"");
  return pos == std::string::npos ? json : json.substr(0, pos);
}

// Random valid program over a live register that shrinks on measurement.
CircuitProgram random_program(Gen& gen) {
  CircuitProgram p;
  const auto base = gen.config(6, 4);
  p.omega0_hz = gen.coin() ? 1.0 : gen.uniform(0.1, 50.0);
  p.config = EncodingConfig::make(base.n_freq, base.n_spatial, base.n_time, 2.0 * std::numbers::pi * p.omega0_hz,
                                  std::size_t{2} << gen.below(3));
  EncodingConfig live = p.config;
  if (gen.coin()) {
    InitInstr init;
    switch (gen.below(3)) {
      case 0: init.source = InitInstr::Source::Basis; init.basis = gen.below(live.dim()); break;
      case 1: init.source = InitInstr::Source::Uniform; break;
      default: init.source = InitInstr::Source::Amplitudes; init.amps = gen.amplitudes(live.dim()); break;
    }
    p.instructions.emplace_back(init);
  }
  const std::size_t depth = gen.below(12);
  for (std::size_t k = 0; k < depth && live.total_qubits() > 0; ++k) {
    const auto choice = gen.below(10);
    const Gate2 g = gen.coin() ? gen.unitary() : *named_gate("H");
    if (choice < 4) {
      p.instructions.emplace_back(GateInstr{g, gen.address(live)});
    } else if (choice < 7 && live.total_qubits() >= 2) {
      const auto t = gen.address(live);
      auto c = gen.address(live);
      while (c == t) c = gen.address(live);
      p.instructions.emplace_back(CGateInstr{g, c, t});
    } else if (choice == 7) {
      p.instructions.emplace_back(NoiseInstr{gen.coin() ? INFINITY : gen.uniform(-5.0, 60.0)});
    } else {
      const auto a = gen.address(live);
      p.instructions.emplace_back(MeasureInstr{a, gen.coin() ? MeasurePolicy::Born : MeasurePolicy::Argmax});
      switch (a.kind) {
        case QubitKind::Frequency: --live.n_freq; break;
        case QubitKind::Spatial: --live.n_spatial; break;
        case QubitKind::Time: --live.n_time; break;
      }
    }
  }
  if (gen.coin()) p.instructions.emplace_back(MeasureAllInstr{MeasurePolicy::Argmax});
  return p;
}

}  // namespace

TEST_CASE("parse a small program") {
  const auto p = parse_ok("qubits f=2 s=0 t=0\ninit basis 0\ngate H f1\ncgate X f1 f0\nmeasure all born");
  CHECK(p.instructions.size() == 4);
  CHECK(p.config == EncodingConfig::make(2, 0, 0));
  CHECK(p.omega0_hz == 1.0);
  CHECK(std::get<GateInstr>(p.instructions[1]).gate == gate::H());
  const auto& cg = std::get<CGateInstr>(p.instructions[2]);
  CHECK(cg.control == QubitAddress::freq(1));
  CHECK(cg.target == QubitAddress::freq(0));
  CHECK(std::get<MeasureAllInstr>(p.instructions[3]).policy == MeasurePolicy::Born);
}

TEST_CASE("address errors carry positions") {
  ParseOptions with_config;
  with_config.config = EncodingConfig::make(2, 0, 0);
  auto e = parse_error("gate H f5", with_config);
  CHECK(e.line == 1);
  CHECK(e.column == 8);
  CHECK(e.message.find("f5") != std::string::npos);

  e = parse_error("qubits f=2 s=0 t=0\ngate H f5");
  CHECK(e.line == 2);
  CHECK(e.column == 8);

  // measuring renumbers the live register
  e = parse_error("qubits f=2\nmeasure f0\ngate H f1\n");
  CHECK(e.line == 3);
  CHECK(parse_ok("qubits f=2\nmeasure f0\ngate H f0\n").instructions.size() == 2);
}

TEST_CASE("matrix literals and named gates") {
  CHECK(parse_ok("qubits f=1\ngate [[0,1],[1,0]] f0") == parse_ok("qubits f=1\ngate X f0"));
  CHECK(parse_ok("qubits f=1\ngate [[1, 0], [0, 1j]] f0") == parse_ok("qubits f=1\ngate S f0"));
  CHECK(parse_ok("qubits f=1\ngate RZ(pi/2) f0") == parse_ok("qubits f=1\ngate RZ(1.5707963267948966) f0"));
  CHECK(std::get<GateInstr>(parse_ok("qubits f=1\ngate P(-2*pi/3) f0").instructions[0]).gate ==
        gate::P(-2.0 * std::numbers::pi / 3.0));
  const auto p = parse_ok("qubits f=1\ngate [[0.6,-0.8j],[0.8-0j,-0.6e0j]] f0\npragma allow-nonunitary");
  const auto& g = std::get<GateInstr>(p.instructions[0]).gate;
  CHECK(g.u01 == Complex(0.0, -0.8));
  CHECK(g.u11 == Complex(0.0, -0.6));
}

TEST_CASE("syntax and semantic errors") {
  struct Case {
    const char* text;
    std::size_t line, column;
  };
  const Case cases[] = {
      {"gate H f0", 1, 1},                                     // no qubits line
      {"qubits f=2\ngate Q f0", 2, 6},                         // unknown gate
      {"qubits f=2\ngate RX f0", 2, 6},                        // missing angle
      {"qubits f=2\ngate H(1) f0", 2, 6},                      // angle on H
      {"qubits f=2\ngate RX(1 f0", 2, 11},                     // missing ')'
      {"qubits f=2\ngate [[1,0],[0,1] f0", 2, 19},             // missing ']'
      {"qubits f=2\ngate [[1,0],[0,2]] f0", 2, 6},             // not unitary
      {"qubits f=2\ngate H q0", 2, 8},                         // bad kind
      {"qubits f=2\ngate H f0 f1", 2, 11},                     // trailing text
      {"qubits f=2\ncgate X f0 f0", 2, 9} ,                    // control == target
      {"qubits f=2\ngate H f0\ninit basis 0", 3, 1},           // late init
      {"qubits f=2\ninit basis 4", 2, 12},                     // basis out of range
      {"qubits f=1\ninit amps 1 0 0", 2, 15},                  // too many amps
      {"qubits f=1\ninit amps 1", 2, 12},                      // too few amps
      {"qubits f=1\ninit amps 0 0", 2, 6},                     // zero norm
      {"qubits f=1\nmeasure all\ngate H f0", 3, 1},            // after measure all
      {"qubits f=1\nmeasure f0 maybe", 2, 12},                 // bad policy
      {"qubits f=1\nnoise loud", 2, 7},                        // bad snr
      {"qubits f=1\nfrobnicate", 2, 1},                        // unknown instruction
      {"qubits f=0 s=0 t=0", 1, 1},                            // empty register
      {"qubits f=2 x=1", 1, 12},                               // unknown key
      {"qubits f=2 oversample=3", 1, 23},                      // oversample not 2^k
      {"qubits f=2 omega0_hz=-1", 1, 22},                      // bad omega0
      {"qubits f=99", 1, 10},                                  // too many qubits
      {"qubits f=2\nqubits f=2", 2, 1},                        // duplicate declaration
      {"qubits f=4\noracle table 0110", 2, 14},                // oracle shape mismatch
      {"qubits f=3 s=1\noracle table 0110", 2, 14},            // spatial qubits present
      {"qubits f=3\noracle table 01x0", 2, 14},                // bad table
      {"qubits f=3\noracle file /nonexistent/table.txt", 2, 13},
      {"qubits f=2\npragma speed", 2, 8},
      {"qubits f=1\ngate RX(1e999) f0", 2, 9},                 // overflow
  };
  for (const auto& c : cases) {
    const auto e = parse_error(c.text);
    CHECK_MESSAGE(e.line == c.line, std::string(c.text) << " -> " << e.to_string());
    CHECK_MESSAGE(e.column == c.column, std::string(c.text) << " -> " << e.to_string());
    CHECK(!e.message.empty());
  }
}

TEST_CASE("non-unitary gates need the pragma or the option") {
  const char* text = "qubits f=1\ngate [[1,0],[0,0.5]] f0";
  parse_error(text);
  CHECK(parse_ok(std::string(text) + "\npragma allow-nonunitary").allow_nonunitary);
  ParseOptions opts;
  opts.allow_nonunitary = true;
  CHECK(parse_ok(text, opts).instructions.size() == 1);
}

TEST_CASE("comments, blank lines, qubits keys") {
  const auto p = parse_ok("# header\n\n  qubits s=1 f=1 omega0_hz=2.5 oversample=8  # trailing\n\ngate T s0 # c\n");
  CHECK(p.config.n_freq == 1);
  CHECK(p.config.n_spatial == 1);
  CHECK(p.config.oversample == 8);
  CHECK(p.omega0_hz == 2.5);
  CHECK(p.config.omega0 == doctest::Approx(5.0 * std::numbers::pi));
  CHECK(p.instructions.size() == 1);
}

TEST_CASE("oracle instructions") {
  const auto p = parse_ok("qubits f=4\noracle table 00010100");
  CHECK(std::get<OracleInstr>(p.instructions[0]).oracle.popcount() == 2);
  ParseOptions opts;
  opts.base_dir = QSE_CIRCUITS;
  const auto q = parse_ok("qubits f=4\noracle file oracles/three_five.txt", opts);
  CHECK(std::get<OracleInstr>(q.instructions[0]).oracle == BooleanOracle::from_bits("00010100"));
}

TEST_CASE("format/parse round trip") {
  Gen gen(81);
  for (int trial = 0; trial < 300; ++trial) {
    const auto p = random_program(gen);
    const auto text = format_program(p);
    const auto back = parse_program(text);
    REQUIRE_MESSAGE(back.program.has_value(), text << "\n" << (back.error ? back.error->to_string() : ""));
    CHECK_MESSAGE(*back.program == p, text);
    CHECK(format_program(*back.program) == text);
  }
  CHECK(format_complex({1.5, -0.25}) == "1.5-0.25j");
  CHECK(format_complex({0.0, 0.0}) == "0");
  CHECK(format_complex({-2.0, 3.0}) == "-2+3j");
}

TEST_CASE("execute: Bell program on every backend") {
  const auto p = parse_ok("qubits f=2\ninit basis 0\ngate H f1\ncgate X f1 f0");
  const double h = 1.0 / std::sqrt(2.0);
  for (auto backend : {Backend::Signal, Backend::Reference, Backend::Both}) {
    const auto run = execute(p, {backend, 0, std::nullopt});
    REQUIRE(run.report.final_amplitudes.has_value());
    CHECK(test::max_abs_diff(*run.report.final_amplitudes, AmplitudeVector{h, 0.0, 0.0, h}) < 1e-12);
    CHECK(run.report.max_deviation.has_value() == (backend == Backend::Both));
    CHECK(run.signal_state.has_value() == (backend != Backend::Reference));
    CHECK(run.reference_state.has_value() == (backend != Backend::Signal));
    if (backend == Backend::Both) {
      CHECK(run.report.deviations.size() == 3);
      CHECK(*run.report.max_deviation < 1e-12);
    }
  }
}

TEST_CASE("execute: measurements agree across backends and replay") {
  const auto p = parse_ok(
      "qubits f=2 s=1 t=1\ninit uniform\ncgate RY(0.9) s0 f1\ncgate H t0 f0\nmeasure f1\nmeasure s0 born\nmeasure all");
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto sig = execute(p, {Backend::Signal, seed, std::nullopt});
    const auto ref = execute(p, {Backend::Reference, seed, std::nullopt});
    const auto both = execute(p, {Backend::Both, seed, std::nullopt});
    REQUIRE(sig.report.measurements.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(sig.report.measurements[k].record.outcome == ref.report.measurements[k].record.outcome);
      CHECK(sig.report.measurements[k].record.outcome == both.report.measurements[k].record.outcome);
      CHECK(sig.report.measurements[k].record.rng_seed == seed);
    }
    CHECK(sig.report.bits == ref.report.bits);
    CHECK(*both.report.max_deviation < 1e-9);
    CHECK_FALSE(sig.report.final_amplitudes.has_value());
    const auto again = execute(p, {Backend::Signal, seed, std::nullopt});
    CHECK(without_wall_time(report_json(again.report)) == without_wall_time(report_json(sig.report)));
  }
}

TEST_CASE("execute: init only returns the basis vector") {
  const auto p = parse_ok("qubits f=2 s=1\ninit basis 5");
  const auto run = execute(p, {Backend::Both, 0, std::nullopt});
  AmplitudeVector want(8);
  want[5] = 1.0;
  CHECK(test::max_abs_diff(*run.report.final_amplitudes, want) < 1e-12);
  CHECK(run.report.deviations.size() == 1);
}

TEST_CASE("execute: errors name the instruction") {
  CircuitProgram p;
  p.config = EncodingConfig::make(2, 0, 0);
  p.instructions.emplace_back(GateInstr{gate::H(), QubitAddress::freq(0)});
  p.instructions.emplace_back(GateInstr{gate::H(), QubitAddress::spatial(0)});
  try {
    execute(p);
    FAIL("expected an error");
  } catch (const ExecutionError& e) {
    CHECK(e.step() == 1);
    CHECK(std::string(e.what()).rfind("instruction 1:", 0) == 0);
  }
}

TEST_CASE("execute: channel noise only touches the signal backend") {
  const auto p = parse_ok("qubits f=2\ngate H f0\ngate H f1\nnoise 20");
  const auto run = execute(p, {Backend::Both, 1, std::nullopt});
  CHECK(run.report.deviations.back().max_abs > 1e-4);
  CHECK(run.report.deviations.front().max_abs < 1e-12);
  const auto noisy = execute(parse_ok("qubits f=2\ngate H f0\ngate H f1"), {Backend::Both, 1, 25.0});
  CHECK(noisy.report.deviations[0].max_abs > 1e-4);
  const auto quiet = execute(p, {Backend::Signal, 1, std::nullopt});
  const auto quiet2 = execute(p, {Backend::Signal, 1, std::nullopt});
  CHECK(*quiet.report.final_amplitudes == *quiet2.report.final_amplitudes);
}

TEST_CASE("report JSON layout") {
  const auto p = parse_ok("qubits f=1 s=1\ngate H s0\ncgate X s0 f0\nmeasure s0\nmeasure all argmax");
  const auto run = execute(p, {Backend::Both, 9, std::nullopt});
  const auto j = nlohmann::json::parse(report_json(run.report));
  for (const char* key : {"backend", "seed", "collapse_renormalized", "initial_config", "final_config",
                          "final_amplitudes", "bits", "measurements", "deviations", "max_deviation", "counters",
                          "instructions", "wall_seconds"}) {
    CHECK_MESSAGE(j.contains(key), key);
  }
  CHECK(j["backend"] == "both");
  CHECK(j["final_amplitudes"].is_null());
  CHECK(j["measurements"].size() == 2);
  CHECK(j["measurements"][0]["kind"] == "spatial");
  CHECK(j["counters"]["gates_by_kind"]["1q-spatial"] == 1);
  CHECK(j["counters"]["gates_by_kind"]["c-spatial-frequency"] == 1);

  const auto single = nlohmann::json::parse(report_json(execute(p, {Backend::Signal, 9, std::nullopt}).report));
  CHECK_FALSE(single.contains("deviations"));
  CHECK_FALSE(single.contains("max_deviation"));

  const auto csv = measurements_csv(run.report);
  CHECK(csv.rfind("step,kind,index,v0,v1,p1,outcome,policy,seed\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("spectrum export") {
  const auto c = EncodingConfig::make(2, 0, 0);
  const auto dir = std::filesystem::temp_directory_path() / "qse_spectrum_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "four.csv";
  const auto files = emit_spectrum(encode(test::kFourTone, c), 0, 0, path);
  CHECK(files.time_series == dir / "four.time.csv");

  auto rows = [](const std::string& text) {
    std::vector<std::tuple<int, Complex>> out;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      int k;
      double re, im;
      REQUIRE(std::sscanf(line.c_str(), "%d,%lf,%lf", &k, &re, &im) == 3);
      out.emplace_back(k, Complex(re, im));
    }
    return out;
  };
  const auto spec = rows(read_text(files.spectrum));
  CHECK(spec.size() == c.samples_per_slot() - 1);
  std::map<int, Complex> nonzero;
  for (const auto& [k, v] : spec)
    if (std::abs(v) > 1e-12) nonzero[k] = v;
  REQUIRE(nonzero.size() == 4);
  CHECK(std::abs(nonzero[3] - test::kFourTone[0]) < 1e-12);
  CHECK(std::abs(nonzero[1] - test::kFourTone[1]) < 1e-12);
  CHECK(std::abs(nonzero[-1] - test::kFourTone[2]) < 1e-12);
  CHECK(std::abs(nonzero[-3] - test::kFourTone[3]) < 1e-12);
  const auto time_text = read_text(files.time_series);
  CHECK(time_text.rfind("t_seconds,real,imag\n", 0) == 0);
  CHECK(std::count(time_text.begin(), time_text.end(), '\n') == static_cast<long>(c.samples_per_slot() + 1));

  // the NOT program swaps the pairs
  const auto prog = parse_ok(read_text(std::filesystem::path(QSE_CIRCUITS) / "four_tone_not.qc"));
  const auto run = execute(prog);
  const auto swapped = rows(spectrum_csv(*run.signal_state, 0, 0));
  std::map<int, Complex> nz2;
  for (const auto& [k, v] : swapped)
    if (std::abs(v) > 1e-12) nz2[k] = v;
  CHECK(std::abs(nz2[-1] - test::kFourTone[0]) < 1e-12);
  CHECK(std::abs(nz2[-3] - test::kFourTone[1]) < 1e-12);
  CHECK(std::abs(nz2[3] - test::kFourTone[2]) < 1e-12);
  CHECK(std::abs(nz2[1] - test::kFourTone[3]) < 1e-12);

  for (const auto& [k, v] : rows(spectrum_csv(EncodedState(c), 0, 0))) CHECK(v == Complex(0.0));

  CHECK_THROWS_AS(spectrum_csv(EncodedState(c), 0, 1), std::domain_error);
  try {
    emit_spectrum(EncodedState(c), 0, 0, dir / "missing" / "x.csv");
    FAIL("expected an I/O error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("missing") != std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("bundled circuits: dual run stays within 1e-9") {
  std::size_t count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(QSE_CIRCUITS)) {
    if (entry.path().extension() != ".qc") continue;
    ParseOptions opts;
    opts.base_dir = entry.path().parent_path();
    const auto parsed = parse_program(read_text(entry.path()), opts);
    REQUIRE_MESSAGE(parsed.program.has_value(), entry.path().string());
    for (std::uint64_t seed : {0u, 1u, 2u}) {
      const auto run = execute(*parsed.program, {Backend::Both, seed, std::nullopt});
      CHECK_MESSAGE(*run.report.max_deviation <= 1e-9, entry.path().string());
    }
    ++count;
  }
  CHECK(count >= 8);
}
