// Python bindings for the emulator core.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cmath>

#include "qse/circuit.hpp"
#include "qse/projection.hpp"
#include "qse/reference.hpp"
#include "qse/search.hpp"

namespace py = pybind11;
using namespace qse;

namespace {

using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

ComplexArray to_array(const std::vector<Complex>& v) {
  return ComplexArray(static_cast<py::ssize_t>(v.size()), v.data());
}

AmplitudeVector from_array(const ComplexArray& a) {
  if (a.ndim() != 1) throw py::value_error("amplitudes must be one-dimensional");
  return AmplitudeVector(a.data(), a.data() + a.size());
}

QubitAddress parse_address(std::string_view text) {
  if (text.size() < 2) throw py::value_error("bad qubit address: " + std::string(text));
  unsigned index = 0;
  for (char c : text.substr(1)) {
    if (c < '0' || c > '9') throw py::value_error("bad qubit address: " + std::string(text));
    index = index * 10 + static_cast<unsigned>(c - '0');
  }
  switch (text[0]) {
    case 'f': return QubitAddress::freq(index);
    case 's': return QubitAddress::spatial(index);
    case 't': return QubitAddress::time(index);
    default: throw py::value_error("bad qubit address: " + std::string(text));
  }
}

// Accepts either a QubitAddress or its "f0"/"s1"/"t2" spelling.
QubitAddress address_arg(const py::object& obj) {
  if (py::isinstance<py::str>(obj)) return parse_address(obj.cast<std::string>());
  return obj.cast<QubitAddress>();
}

Gate2 gate_arg(const py::object& obj) {
  if (py::isinstance<Gate2>(obj)) return obj.cast<Gate2>();
  const auto m = py::array_t<Complex, py::array::c_style | py::array::forcecast>::ensure(obj);
  if (!m || m.ndim() != 2 || m.shape(0) != 2 || m.shape(1) != 2) throw py::value_error("gate must be a 2x2 matrix");
  const auto r = m.unchecked<2>();
  return {r(0, 0), r(0, 1), r(1, 0), r(1, 1)};
}

}  // namespace

PYBIND11_MODULE(_qse, m) {
  m.doc() = "Classical signal emulation of gate-based quantum circuits";

  py::enum_<QubitKind>(m, "QubitKind")
      .value("Frequency", QubitKind::Frequency)
      .value("Spatial", QubitKind::Spatial)
      .value("Time", QubitKind::Time);

  py::class_<QubitAddress>(m, "QubitAddress")
      .def(py::init([](const std::string& text) { return parse_address(text); }))
      .def_static("freq", &QubitAddress::freq)
      .def_static("spatial", &QubitAddress::spatial)
      .def_static("time", &QubitAddress::time)
      .def_readonly("kind", &QubitAddress::kind)
      .def_readonly("index", &QubitAddress::index)
      .def(py::self == py::self)
      .def("__repr__", [](const QubitAddress& a) { return to_string(a); });

  py::class_<EncodingConfig>(m, "EncodingConfig")
      .def(py::init(&EncodingConfig::make), py::arg("n_freq"), py::arg("n_spatial") = 0, py::arg("n_time") = 0,
           py::arg("omega0") = 2.0 * std::numbers::pi, py::arg("oversample") = 2)
      .def_readonly("n_freq", &EncodingConfig::n_freq)
      .def_readonly("n_spatial", &EncodingConfig::n_spatial)
      .def_readonly("n_time", &EncodingConfig::n_time)
      .def_readonly("omega0", &EncodingConfig::omega0)
      .def_readonly("oversample", &EncodingConfig::oversample)
      .def_property_readonly("samples_per_slot", &EncodingConfig::samples_per_slot)
      .def_property_readonly("dim", &EncodingConfig::dim)
      .def_property_readonly("total_qubits", &EncodingConfig::total_qubits)
      .def("flat_bit", [](const EncodingConfig& c, const py::object& a) { return flat_bit(c, address_arg(a)); })
      .def(py::self == py::self)
      .def("__repr__", [](const EncodingConfig& c) {
        return "EncodingConfig(n_freq=" + std::to_string(c.n_freq) + ", n_spatial=" + std::to_string(c.n_spatial) +
               ", n_time=" + std::to_string(c.n_time) + ")";
      });

  py::class_<Gate2>(m, "Gate2")
      .def(py::init([](const py::object& matrix) { return gate_arg(matrix); }))
      .def("matrix",
           [](const Gate2& g) {
             py::array_t<Complex> out({2, 2});
             auto w = out.mutable_unchecked<2>();
             w(0, 0) = g.u00;
             w(0, 1) = g.u01;
             w(1, 0) = g.u10;
             w(1, 1) = g.u11;
             return out;
           })
      .def("is_unitary", &Gate2::is_unitary, py::arg("tol") = 1e-12)
      .def(py::self * py::self)
      .def(py::self == py::self)
      .def("__repr__", &format_gate);

  m.def(
      "named_gate",
      [](const std::string& name, std::optional<double> theta) {
        const auto g = named_gate(name, theta);
        if (!g) throw py::value_error("unknown gate or wrong parameter count: " + name);
        return *g;
      },
      py::arg("name"), py::arg("theta") = py::none());

  py::class_<ResourceCounters>(m, "ResourceCounters")
      .def(py::init<>())
      .def_readonly("filters", &ResourceCounters::filters)
      .def_readonly("swap_stages", &ResourceCounters::swap_stages)
      .def_readonly("buffer_moves", &ResourceCounters::buffer_moves)
      .def_readonly("oracle_calls", &ResourceCounters::oracle_calls)
      .def_readonly("gates_by_kind", &ResourceCounters::gates_by_kind);

  py::class_<EncodedState>(m, "EncodedState")
      .def_property_readonly("config", &EncodedState::config)
      .def_property_readonly("scale", &EncodedState::scale)
      .def(
          "samples", [](const EncodedState& s, std::size_t z, std::size_t y) {
            const auto& c = s.config();
            if (z >= c.time_dim() || y >= c.spatial_dim()) throw py::index_error("buffer out of range");
            return to_array(s.at(z, y).samples);
          },
          py::arg("z") = 0, py::arg("y") = 0)
      .def(
          "spectrum",
          [](const EncodedState& s, std::size_t z, std::size_t y, double tol) {
            const auto& c = s.config();
            if (z >= c.time_dim() || y >= c.spatial_dim()) throw py::index_error("buffer out of range");
            py::dict out;
            for (const auto& [k, v] : dft(s.at(z, y)).nonzero(tol / s.scale())) out[py::int_(k)] = v * s.scale();
            return out;
          },
          py::arg("z") = 0, py::arg("y") = 0, py::arg("tol") = 1e-12,
          "Nonzero DFT bins of buffer (z, y) keyed by harmonic index, scale applied.")
      .def("emit_spectrum", [](const EncodedState& s, std::size_t z, std::size_t y, const std::filesystem::path& p) {
        const auto files = emit_spectrum(s, z, y, p);
        return py::make_tuple(files.spectrum, files.time_series);
      });

  m.def("encode", [](const ComplexArray& a, const EncodingConfig& c) { return encode(from_array(a), c); });
  m.def("decode", [](const EncodedState& s) { return to_array(decode(s)); });
  m.def("norm", [](const EncodedState& s) { return norm(s); });
  m.def("harmonic_of", &harmonic_of, py::arg("x"), py::arg("n_freq"));

  m.def(
      "apply_1q",
      [](const EncodedState& s, const py::object& g, const py::object& target, ResourceCounters* counters) {
        return apply_1q(s, gate_arg(g), address_arg(target), counters);
      },
      py::arg("state"), py::arg("gate"), py::arg("target"), py::arg("counters") = nullptr);
  m.def(
      "apply_controlled",
      [](const EncodedState& s, const py::object& g, const py::object& control, const py::object& target,
         ResourceCounters* counters) {
        return apply_controlled(s, gate_arg(g), address_arg(control), address_arg(target), counters);
      },
      py::arg("state"), py::arg("gate"), py::arg("control"), py::arg("target"), py::arg("counters") = nullptr);
  m.def(
      "project",
      [](const EncodedState& s, const py::object& addr, int value) { return project(s, address_arg(addr), value); },
      py::arg("state"), py::arg("addr"), py::arg("value"));

  py::enum_<MeasurePolicy>(m, "MeasurePolicy").value("Born", MeasurePolicy::Born).value("Argmax", MeasurePolicy::Argmax);

  py::class_<Rng>(m, "Rng").def(py::init<std::uint64_t>()).def_property_readonly("seed", &Rng::seed);

  py::class_<MeasurementRecord>(m, "MeasurementRecord")
      .def_readonly("addr", &MeasurementRecord::addr)
      .def_readonly("outcome", &MeasurementRecord::outcome)
      .def_readonly("v0", &MeasurementRecord::v0)
      .def_readonly("v1", &MeasurementRecord::v1)
      .def_readonly("p1", &MeasurementRecord::p1)
      .def_readonly("policy", &MeasurementRecord::policy)
      .def_readonly("seed", &MeasurementRecord::rng_seed);

  m.def(
      "measure",
      [](const EncodedState& s, const py::object& addr, MeasurePolicy policy, Rng& rng) {
        auto r = measure(s, address_arg(addr), policy, rng);
        return py::make_tuple(r.record, std::move(r.state));
      },
      py::arg("state"), py::arg("addr"), py::arg("policy"), py::arg("rng"),
      "Returns (record, collapsed state).");
  m.def(
      "measure_all",
      [](const EncodedState& s, MeasurePolicy policy, Rng& rng) {
        const auto order = default_measure_order(s.config());
        auto r = measure_all(s, policy, rng, order);
        return py::make_tuple(r.bits, r.records);
      },
      py::arg("state"), py::arg("policy"), py::arg("rng"), "Bits in the default order, highest flat bit first.");

  py::class_<RefState>(m, "RefState")
      .def(py::init([](const ComplexArray& a, const EncodingConfig& c) { return RefState(from_array(a), c); }))
      .def_property_readonly("amps", [](const RefState& r) { return to_array(r.amps); })
      .def_readonly("config", &RefState::config);
  m.def("ref_apply_1q", [](const RefState& r, const py::object& g, const py::object& t) {
    return ref_apply_1q(r, gate_arg(g), address_arg(t));
  });
  m.def("ref_apply_controlled", [](const RefState& r, const py::object& g, const py::object& c, const py::object& t) {
    return ref_apply_controlled(r, gate_arg(g), address_arg(c), address_arg(t));
  });
  m.def("compare", &compare, "max_k |decode(state)[k] - ref.amps[k]|");

  py::class_<BooleanOracle>(m, "BooleanOracle")
      .def(py::init(&BooleanOracle::from_bits), py::arg("bits"))
      .def_static("parse", &BooleanOracle::parse)
      .def_static("load", &BooleanOracle::load)
      .def_property_readonly("n_inputs", &BooleanOracle::n_inputs)
      .def_property_readonly("bits", &BooleanOracle::bits)
      .def("popcount", &BooleanOracle::popcount)
      .def("__call__", &BooleanOracle::operator())
      .def("__len__", &BooleanOracle::size);

  py::class_<SearchResult>(m, "SearchResult")
      .def_readonly("solutions", &SearchResult::solutions)
      .def_readonly("count_estimate", &SearchResult::count_estimate)
      .def_readonly("projection_norm_sq", &SearchResult::projection_norm_sq)
      .def_readonly("threshold", &SearchResult::threshold)
      .def_readonly("counters", &SearchResult::counters);

  auto search_options = [](std::optional<double> snr_db, std::optional<double> threshold) {
    SearchOptions o;
    o.snr_db = snr_db;
    o.threshold = threshold;
    return o;
  };
  m.def(
      "run_search",
      [search_options](const BooleanOracle& f, std::optional<double> snr_db, std::optional<double> threshold,
                       std::uint64_t seed) {
        Rng rng(seed);
        return run_search(f, search_options(snr_db, threshold), &rng);
      },
      py::arg("oracle"), py::arg("snr_db") = py::none(), py::arg("threshold") = py::none(), py::arg("seed") = 0);
  m.def(
      "count_solutions",
      [search_options](const BooleanOracle& f, std::optional<double> snr_db, std::uint64_t seed) {
        Rng rng(seed);
        return count_solutions(f, search_options(snr_db, std::nullopt), &rng);
      },
      py::arg("oracle"), py::arg("snr_db") = py::none(), py::arg("seed") = 0);

  py::register_exception<ExecutionError>(m, "ExecutionError", PyExc_RuntimeError);

  m.def(
      "format_program",
      [](const std::string& text, const std::filesystem::path& base_dir) {
        ParseOptions opts;
        opts.base_dir = base_dir;
        const auto r = parse_program(text, opts);
        if (r.error) throw py::value_error(r.error->to_string());
        return format_program(*r.program);
      },
      py::arg("text"), py::arg("base_dir") = std::filesystem::path("."),
      "Canonical text of a circuit; raises ValueError with line:column on bad input.");
  m.def(
      "run_circuit",
      [](const std::string& text, const std::string& backend, std::uint64_t seed, std::optional<double> noise_snr_db,
         const std::filesystem::path& base_dir) {
        ParseOptions opts;
        opts.base_dir = base_dir;
        const auto r = parse_program(text, opts);
        if (r.error) throw py::value_error(r.error->to_string());
        const auto b = parse_backend(backend);
        if (!b) throw py::value_error("unknown backend: " + backend);
        const auto run = execute(*r.program, {*b, seed, noise_snr_db});
        return py::module_::import("json").attr("loads")(report_json(run.report));
      },
      py::arg("text"), py::arg("backend") = "signal", py::arg("seed") = 0, py::arg("noise_snr_db") = py::none(),
      py::arg("base_dir") = std::filesystem::path("."), "Runs a circuit and returns the report as a dict.");
}
