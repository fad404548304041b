#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qse/circuit.hpp"

namespace qse {

std::string to_string(Backend backend) {
  switch (backend) {
    case Backend::Signal: return "signal";
    case Backend::Reference: return "reference";
    case Backend::Both: return "both";
  }
  return "signal";
}

std::optional<Backend> parse_backend(std::string_view name) {
  if (name == "signal") return Backend::Signal;
  if (name == "reference") return Backend::Reference;
  if (name == "both") return Backend::Both;
  return std::nullopt;
}

namespace {

constexpr std::uint64_t kNoiseStream = 0x9E3779B97F4A7C15ULL;

AmplitudeVector initial_amplitudes(const CircuitProgram& program) {
  const auto& config = program.config;
  AmplitudeVector amps(config.dim());
  if (program.instructions.empty() || !std::holds_alternative<InitInstr>(program.instructions.front())) {
    amps[0] = 1.0;
    return amps;
  }
  const auto& init = std::get<InitInstr>(program.instructions.front());
  switch (init.source) {
    case InitInstr::Source::Basis:
      amps.at(init.basis) = 1.0;
      break;
    case InitInstr::Source::Uniform: {
      const double level = 1.0 / std::sqrt(static_cast<double>(amps.size()));
      for (auto& a : amps) a = level;
      break;
    }
    case InitInstr::Source::Amplitudes:
      if (init.amps.size() != amps.size()) throw std::domain_error("amplitude count does not match register");
      amps = init.amps;
      break;
  }
  return amps;
}

class Runner {
 public:
  Runner(const CircuitProgram& program, const ExecuteOptions& options)
      : program_(program),
        options_(options),
        signal_rng_(options.seed),
        ref_rng_(options.seed),
        noise_rng_(options.seed ^ kNoiseStream) {}

  Execution run() {
    const auto start = std::chrono::steady_clock::now();
    program_.config.validate();
    RunReport& report = out_.report;
    report.backend = options_.backend;
    report.seed = options_.seed;
    report.initial_config = program_.config;
    report.instructions = program_.instructions.size();

    const AmplitudeVector amps = initial_amplitudes(program_);
    if (use_signal()) signal_ = encode(amps, program_.config);
    if (use_reference()) ref_ = RefState(amps, program_.config);

    for (std::size_t step = 0; step < program_.instructions.size(); ++step) {
      try {
        std::visit([&](const auto& instr) { apply(step, instr); }, program_.instructions[step]);
      } catch (const ExecutionError&) {
        throw;
      } catch (const std::exception& e) {
        throw ExecutionError(step, e.what());
      }
      if (options_.backend == Backend::Both) {
        const double dev = compare(*signal_, *ref_);
        report.deviations.push_back({step, dev});
        report.max_deviation = std::max(report.max_deviation.value_or(0.0), dev);
      }
    }
    if (options_.backend == Backend::Both && !report.max_deviation) report.max_deviation = compare(*signal_, *ref_);

    report.final_config = use_signal() ? signal_->config() : ref_->config;
    if (!measured_all_) report.final_amplitudes = use_signal() ? decode(*signal_) : ref_->amps;
    report.counters = counters_;
    out_.signal_state = std::move(signal_);
    out_.reference_state = std::move(ref_);
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return std::move(out_);
  }

 private:
  bool use_signal() const { return options_.backend != Backend::Reference; }
  bool use_reference() const { return options_.backend != Backend::Signal; }

  void channel_noise() {
    if (options_.noise_snr_db && use_signal()) *signal_ = add_noise(*signal_, *options_.noise_snr_db, noise_rng_.engine());
  }

  void apply(std::size_t, const InitInstr&) {}

  void apply(std::size_t, const GateInstr& g) {
    if (use_signal()) *signal_ = apply_1q(*signal_, g.gate, g.target, &counters_);
    if (use_reference()) *ref_ = ref_apply_1q(*ref_, g.gate, g.target);
    channel_noise();
  }

  void apply(std::size_t, const CGateInstr& g) {
    if (use_signal()) *signal_ = apply_controlled(*signal_, g.gate, g.control, g.target, &counters_);
    if (use_reference()) *ref_ = ref_apply_controlled(*ref_, g.gate, g.control, g.target);
    channel_noise();
  }

  void apply(std::size_t, const OracleInstr& o) {
    if (use_signal()) *signal_ = apply_oracle(*signal_, o.oracle, QubitAddress::freq(0), &counters_);
    if (use_reference()) *ref_ = ref_apply_oracle(*ref_, o.oracle, QubitAddress::freq(0));
    channel_noise();
  }

  void apply(std::size_t, const NoiseInstr& n) {
    if (use_signal()) *signal_ = add_noise(*signal_, n.snr_db, noise_rng_.engine());
  }

  MeasurementRecord measure_one(std::size_t step, QubitAddress addr, MeasurePolicy policy) {
    std::optional<MeasurementRecord> sig_record;
    std::optional<MeasurementRecord> ref_record;
    if (use_signal()) {
      auto r = measure(*signal_, addr, policy, signal_rng_, &counters_);
      sig_record = r.record;
      *signal_ = std::move(r.state);
    }
    if (use_reference()) {
      auto r = ref_measure(*ref_, addr, policy, ref_rng_);
      ref_record = r.record;
      *ref_ = std::move(r.state);
    }
    if (sig_record && ref_record && sig_record->outcome != ref_record->outcome) {
      throw ExecutionError(step, "backends disagree on the outcome of measuring " + to_string(addr));
    }
    return sig_record ? *sig_record : *ref_record;
  }

  void apply(std::size_t step, const MeasureInstr& m) {
    out_.report.measurements.push_back({step, measure_one(step, m.addr, m.policy)});
  }

  void apply(std::size_t step, const MeasureAllInstr& m) {
    const auto order = default_measure_order(use_signal() ? signal_->config() : ref_->config);
    std::vector<QubitAddress> pending = order;
    for (std::size_t k = 0; k < pending.size(); ++k) {
      MeasurementRecord record = measure_one(step, pending[k], m.policy);
      record.addr = order[k];
      out_.report.bits.push_back(record.outcome);
      out_.report.measurements.push_back({step, record});
      for (std::size_t r = k + 1; r < pending.size(); ++r) pending[r] = address_after_removal(pending[r], pending[k]);
    }
    measured_all_ = true;
  }

  const CircuitProgram& program_;
  const ExecuteOptions& options_;
  Rng signal_rng_;
  Rng ref_rng_;
  Rng noise_rng_;
  std::optional<EncodedState> signal_;
  std::optional<RefState> ref_;
  ResourceCounters counters_;
  bool measured_all_ = false;
  Execution out_;
};

nlohmann::ordered_json config_json(const EncodingConfig& c) {
  nlohmann::ordered_json j;
  j["n_freq"] = c.n_freq;
  j["n_spatial"] = c.n_spatial;
  j["n_time"] = c.n_time;
  j["omega0"] = c.omega0;
  j["oversample"] = c.oversample;
  j["samples_per_slot"] = c.samples_per_slot();
  return j;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Execution execute(const CircuitProgram& program, const ExecuteOptions& options) {
  return Runner(program, options).run();
}

std::string report_json(const RunReport& report) {
  nlohmann::ordered_json j;
  j["backend"] = to_string(report.backend);
  j["seed"] = report.seed;
  j["collapse_renormalized"] = false;
  j["initial_config"] = config_json(report.initial_config);
  j["final_config"] = config_json(report.final_config);
  if (report.final_amplitudes) {
    auto amps = nlohmann::ordered_json::array();
    for (const auto& a : *report.final_amplitudes) amps.push_back({a.real(), a.imag()});
    j["final_amplitudes"] = std::move(amps);
  } else {
    j["final_amplitudes"] = nullptr;
  }
  j["bits"] = report.bits;
  auto records = nlohmann::ordered_json::array();
  for (const auto& m : report.measurements) {
    nlohmann::ordered_json r;
    r["step"] = m.step;
    r["kind"] = kind_name(m.record.addr.kind);
    r["index"] = m.record.addr.index;
    r["v0"] = m.record.v0;
    r["v1"] = m.record.v1;
    r["p1"] = m.record.p1;
    r["outcome"] = m.record.outcome;
    r["policy"] = to_string(m.record.policy);
    r["seed"] = m.record.rng_seed;
    records.push_back(std::move(r));
  }
  j["measurements"] = std::move(records);
  if (report.backend == Backend::Both) {
    auto devs = nlohmann::ordered_json::array();
    for (const auto& d : report.deviations) devs.push_back({{"step", d.step}, {"max_abs", d.max_abs}});
    j["deviations"] = std::move(devs);
    j["max_deviation"] = report.max_deviation.value_or(0.0);
  }
  nlohmann::ordered_json counters;
  counters["filters"] = report.counters.filters;
  counters["swap_stages"] = report.counters.swap_stages;
  counters["buffer_moves"] = report.counters.buffer_moves;
  counters["oracle_calls"] = report.counters.oracle_calls;
  counters["gates_by_kind"] = nlohmann::ordered_json::object();
  for (const auto& [kind, count] : report.counters.gates_by_kind) counters["gates_by_kind"][kind] = count;
  j["counters"] = std::move(counters);
  j["instructions"] = report.instructions;
  j["wall_seconds"] = report.wall_seconds;
  return j.dump(2) + "\n";
}

std::string measurements_csv(const RunReport& report) {
  std::ostringstream out;
  out << "step,kind,index,v0,v1,p1,outcome,policy,seed\n";
  for (const auto& m : report.measurements) {
    out << m.step << ',' << kind_name(m.record.addr.kind) << ',' << m.record.addr.index << ',' << fmt17(m.record.v0)
        << ',' << fmt17(m.record.v1) << ',' << fmt17(m.record.p1) << ',' << m.record.outcome << ','
        << to_string(m.record.policy) << ',' << m.record.rng_seed << '\n';
  }
  return out.str();
}

std::filesystem::path time_series_path(const std::filesystem::path& spectrum_path) {
  std::filesystem::path out = spectrum_path;
  const std::string ext = spectrum_path.has_extension() ? spectrum_path.extension().string() : std::string(".csv");
  out.replace_extension(".time" + ext);
  return out;
}

namespace {

void check_buffer(const EncodedState& state, std::size_t z, std::size_t y) {
  const auto& c = state.config();
  if (z >= c.time_dim() || y >= c.spatial_dim()) {
    throw std::domain_error("buffer (z=" + std::to_string(z) + ", y=" + std::to_string(y) + ") out of range");
  }
}

}  // namespace

std::string spectrum_csv(const EncodedState& state, std::size_t z, std::size_t y) {
  check_buffer(state, z, y);
  const Spectrum spec = dft(state.at(z, y));
  std::ostringstream out;
  out << "harmonic_index,real,imag\n";
  for (int k = -spec.max_harmonic(); k <= spec.max_harmonic(); ++k) {
    const Complex v = spec.bin(k) * state.scale();
    out << k << ',' << fmt17(v.real()) << ',' << fmt17(v.imag()) << '\n';
  }
  return out.str();
}

std::string time_series_csv(const EncodedState& state, std::size_t z, std::size_t y) {
  check_buffer(state, z, y);
  const auto& buffer = state.at(z, y);
  const double dt = state.config().slot_duration() / static_cast<double>(buffer.size());
  const double offset = static_cast<double>(buffer.slot) * state.config().slot_duration();
  std::ostringstream out;
  out << "t_seconds,real,imag\n";
  for (std::size_t s = 0; s < buffer.size(); ++s) {
    const Complex v = buffer.samples[s] * state.scale();
    out << fmt17(offset + static_cast<double>(s) * dt) << ',' << fmt17(v.real()) << ',' << fmt17(v.imag()) << '\n';
  }
  return out.str();
}

SpectrumFiles emit_spectrum(const EncodedState& state, std::size_t z, std::size_t y,
                            const std::filesystem::path& path) {
  SpectrumFiles files{path, time_series_path(path)};
  const std::pair<const std::filesystem::path*, std::string> outputs[] = {
      {&files.spectrum, spectrum_csv(state, z, y)},
      {&files.time_series, time_series_csv(state, z, y)},
  };
  for (const auto& [target, text] : outputs) {
    std::ofstream out(*target, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + target->string() + " for writing");
    out << text;
    out.close();
    if (!out) throw std::runtime_error("failed writing " + target->string());
  }
  return files;
}

}  // namespace qse
