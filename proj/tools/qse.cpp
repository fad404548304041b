// qse: run circuit programs and the search application from the shell.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qse/circuit.hpp"
#include "qse/search.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kParse = 2, kExec = 3, kIo = 4 };

bool read_file(const std::string& path, std::string& text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  text = buf.str();
  return true;
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  return static_cast<bool>(out);
}

struct SpectrumRequest {
  std::size_t y = 0;
  std::size_t z = 0;
  std::string path;
};

std::optional<SpectrumRequest> parse_spectrum_arg(const std::string& arg) {
  const auto c1 = arg.find(',');
  const auto c2 = c1 == std::string::npos ? std::string::npos : arg.find(',', c1 + 1);
  if (c2 == std::string::npos || c2 + 1 >= arg.size()) return std::nullopt;
  SpectrumRequest req;
  try {
    std::size_t used = 0;
    req.y = std::stoul(arg.substr(0, c1), &used);
    if (used != c1) return std::nullopt;
    req.z = std::stoul(arg.substr(c1 + 1, c2 - c1 - 1), &used);
    if (used != c2 - c1 - 1) return std::nullopt;
  } catch (const std::exception&) {
    return std::nullopt;
  }
  req.path = arg.substr(c2 + 1);
  return req;
}

std::string complex_text(qse::Complex a) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%+.6f%+.6fj", a.real(), a.imag());
  return buf;
}

int cmd_run(const std::string& file, const std::string& backend_name, std::uint64_t seed,
            const std::string& report_path, const std::string& measurements_path, const std::string& spectrum_arg,
            bool allow_nonunitary, std::optional<double> noise_snr_db) {
  const auto backend = qse::parse_backend(backend_name);
  if (!backend) {
    std::cerr << "qse: unknown backend '" << backend_name << "' (signal, reference, both)\n";
    return kUsage;
  }
  std::optional<SpectrumRequest> spectrum;
  if (!spectrum_arg.empty()) {
    spectrum = parse_spectrum_arg(spectrum_arg);
    if (!spectrum) {
      std::cerr << "qse: --spectrum expects y,z,path\n";
      return kUsage;
    }
    if (*backend == qse::Backend::Reference) {
      std::cerr << "qse: --spectrum needs the signal backend\n";
      return kUsage;
    }
  }

  std::string text;
  if (!read_file(file, text)) {
    std::cerr << "qse: cannot read " << file << '\n';
    return kIo;
  }
  qse::ParseOptions popts;
  popts.base_dir = std::filesystem::path(file).parent_path();
  popts.allow_nonunitary = allow_nonunitary;
  const auto parsed = qse::parse_program(text, popts);
  if (!parsed) {
    std::cerr << file << ':' << parsed.error->line << ':' << parsed.error->column << ": " << parsed.error->message
              << '\n';
    return kParse;
  }

  qse::ExecuteOptions eopts{*backend, seed, noise_snr_db};
  qse::Execution run;
  try {
    run = qse::execute(*parsed.program, eopts);
  } catch (const std::exception& e) {
    std::cerr << "qse: " << e.what() << '\n';
    return kExec;
  }
  const auto& report = run.report;

  std::cout << "backend " << qse::to_string(report.backend) << ", seed " << report.seed << ", "
            << report.instructions << " instructions\n";
  for (const auto& m : report.measurements) {
    std::printf("measure %s -> %d  (v0=%.6g v1=%.6g p1=%.6f)\n", qse::to_string(m.record.addr).c_str(),
                m.record.outcome, m.record.v0, m.record.v1, m.record.p1);
  }
  if (!report.bits.empty()) {
    std::cout << "bits ";
    for (int b : report.bits) std::cout << b;
    std::cout << '\n';
  }
  if (report.final_amplitudes) {
    std::cout << "amplitudes\n";
    for (std::size_t k = 0; k < report.final_amplitudes->size(); ++k) {
      std::cout << "  " << k << "  " << complex_text((*report.final_amplitudes)[k]) << '\n';
    }
  }
  if (report.max_deviation) std::printf("max deviation %.3e\n", *report.max_deviation);
  std::printf("filters %zu, swap stages %zu, buffer moves %zu, oracle calls %zu\n", report.counters.filters,
              report.counters.swap_stages, report.counters.buffer_moves, report.counters.oracle_calls);

  if (!report_path.empty() && !write_file(report_path, qse::report_json(report))) {
    std::cerr << "qse: cannot write " << report_path << '\n';
    return kIo;
  }
  if (!measurements_path.empty() && !write_file(measurements_path, qse::measurements_csv(report))) {
    std::cerr << "qse: cannot write " << measurements_path << '\n';
    return kIo;
  }
  if (spectrum) {
    try {
      const auto files = qse::emit_spectrum(*run.signal_state, spectrum->z, spectrum->y, spectrum->path);
      std::cout << "spectrum " << files.spectrum.string() << ", time series " << files.time_series.string() << '\n';
    } catch (const std::domain_error& e) {
      std::cerr << "qse: " << e.what() << '\n';
      return kUsage;
    } catch (const std::exception& e) {
      std::cerr << "qse: " << e.what() << '\n';
      return kIo;
    }
  }
  return kOk;
}

int cmd_search(const std::string& oracle_path, std::optional<double> noise_snr_db, std::size_t trials,
               std::uint64_t seed, unsigned max_inputs) {
  qse::BooleanOracle f;
  try {
    f = qse::BooleanOracle::load(oracle_path);
  } catch (const std::exception& e) {
    std::cerr << "qse: " << e.what() << '\n';
    return kIo;
  }
  qse::SearchOptions options;
  options.snr_db = noise_snr_db;
  options.max_inputs = max_inputs;

  std::vector<std::size_t> expected;
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (f(x)) expected.push_back(x);
  }

  qse::Rng rng(seed);
  std::size_t exact_sets = 0;
  std::size_t exact_counts = 0;
  try {
    for (std::size_t t = 0; t < trials; ++t) {
      const auto result = qse::run_search(f, options, &rng);
      if (result.solutions == expected) ++exact_sets;
      if (result.count_estimate == expected.size()) ++exact_counts;
      if (t == 0) {
        std::cout << "n " << f.n_inputs() << ", oracle calls " << result.counters.oracle_calls << ", filters "
                  << result.counters.filters << '\n';
        std::cout << "solutions";
        for (auto x : result.solutions) std::cout << ' ' << x;
        std::cout << '\n';
        std::printf("count %zu  (||P1 psi'||^2 = %.9f, threshold %.6g)\n", result.count_estimate,
                    result.projection_norm_sq, result.threshold);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "qse: " << e.what() << '\n';
    return kExec;
  }
  if (trials > 1) {
    std::printf("trials %zu: solution set exact %zu (%.1f%%), count exact %zu (%.1f%%)\n", trials, exact_sets,
                100.0 * static_cast<double>(exact_sets) / static_cast<double>(trials), exact_counts,
                100.0 * static_cast<double>(exact_counts) / static_cast<double>(trials));
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signal-domain emulator of gate-based quantum circuits"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Execute a circuit program");
  std::string file, backend = "signal", report, measurements, spectrum;
  std::uint64_t seed = 0;
  bool allow_nonunitary = false;
  std::optional<double> run_noise;
  run->add_option("file", file, "Circuit program")->required();
  run->add_option("--backend", backend, "signal, reference or both")->capture_default_str();
  run->add_option("--seed", seed, "Measurement seed")->capture_default_str();
  run->add_option("--report", report, "Write the JSON run report here");
  run->add_option("--measurements", measurements, "Write measurement records as CSV here");
  run->add_option("--spectrum", spectrum, "Export buffer y of slot z: y,z,out.csv");
  run->add_flag("--allow-nonunitary", allow_nonunitary, "Accept non-unitary gate matrices");
  run->add_option("--noise-snr-db", run_noise, "Channel noise after every gate (signal backend)");

  auto* search = app.add_subcommand("search", "One-call search over a truth-table oracle");
  std::string oracle;
  std::optional<double> search_noise;
  std::size_t trials = 1;
  std::uint64_t search_seed = 0;
  unsigned max_inputs = 12;
  search->add_option("--oracle", oracle, "Truth-table file (n=<k> then 2^k bits)")->required();
  search->add_option("--noise-snr-db", search_noise, "Channel noise after the oracle");
  search->add_option("--trials", trials, "Repetitions (with noise)")->capture_default_str()->check(CLI::PositiveNumber);
  search->add_option("--seed", search_seed, "Noise seed")->capture_default_str();
  search->add_option("--max-inputs", max_inputs, "Input-size cap")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (*run) return cmd_run(file, backend, seed, report, measurements, spectrum, allow_nonunitary, run_noise);
  return cmd_search(oracle, search_noise, trials, search_seed, max_inputs);
}
