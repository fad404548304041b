import json
import os
import pathlib

import numpy as np
import pytest

import qse

CIRCUITS = pathlib.Path(os.environ.get("QSE_CIRCUITS", pathlib.Path(__file__).resolve().parents[2] / "circuits"))

FOUR_TONE = np.array([-0.2518 + 0.0766j, -0.1907 - 0.1778j, -0.6936 + 0.3228j, 0.3389 - 0.4032j])


def test_four_tone_spectrum():
    state = qse.encode(FOUR_TONE, qse.EncodingConfig(2))
    bins = state.spectrum()
    assert sorted(bins) == [-3, -1, 1, 3]
    for x, a in enumerate(FOUR_TONE):
        assert abs(bins[qse.harmonic_of(x, 2)] - a) < 1e-12


def test_not_swaps_tone_pairs():
    state = qse.apply_1q(qse.encode(FOUR_TONE, qse.EncodingConfig(2)), qse.named_gate("X"), "f1")
    assert np.allclose(qse.decode(state), FOUR_TONE[[2, 3, 0, 1]], atol=1e-12)


def test_gates_match_reference():
    rng = np.random.default_rng(3)
    config = qse.EncodingConfig(2, 1, 1)
    amps = rng.normal(size=config.dim) + 1j * rng.normal(size=config.dim)
    amps /= np.linalg.norm(amps)
    state = qse.encode(amps, config)
    ref = qse.RefState(amps, config)
    steps = [("H", None, "s0"), ("RY", 0.3, "t0"), ("X", "t0", "f1"), ("P", "f0", "s0")]
    for name, extra, target in steps:
        if extra is None or isinstance(extra, float):
            gate = qse.named_gate(name, extra)
            state = qse.apply_1q(state, gate, target)
            ref = qse.ref_apply_1q(ref, gate, target)
        else:
            gate = qse.named_gate(name, 0.7) if name == "P" else qse.named_gate(name)
            state = qse.apply_controlled(state, gate, extra, target)
            ref = qse.ref_apply_controlled(ref, gate, extra, target)
    assert qse.compare(state, ref) < 1e-12
    matrix_gate = qse.Gate2(np.array([[0, 1], [1, 0]]))
    assert matrix_gate == qse.named_gate("X")


def test_projection_and_measurement():
    config = qse.EncodingConfig(1)
    state = qse.encode(np.array([0.5, np.sqrt(3) / 2]), config)
    p0 = qse.project(state, "f0", 0)
    p1 = qse.project(state, "f0", 1)
    assert np.allclose(p0.samples() + p1.samples(), state.samples(), atol=1e-12)
    record, collapsed = qse.measure(state, "f0", qse.MeasurePolicy.Born, qse.Rng(7))
    assert record.p1 == pytest.approx(0.75)
    assert collapsed.config.total_qubits == 0


def test_search():
    result = qse.run_search(qse.BooleanOracle("00010100"))
    assert result.solutions == [3, 5]
    assert result.count_estimate == 2
    assert result.counters.oracle_calls == 1
    assert qse.count_solutions(qse.BooleanOracle("1111")) == 4


def test_run_circuit_report():
    text = (CIRCUITS / "bell.qc").read_text()
    report = qse.run_circuit(text, backend="both", seed=5)
    assert report["backend"] == "both"
    assert report["max_deviation"] <= 1e-9
    assert report["bits"] == []
    amps = np.array([complex(*pair) for pair in report["final_amplitudes"]])
    assert np.allclose(amps, [2**-0.5, 0, 0, 2**-0.5], atol=1e-12)
    json.dumps(report)


def test_parse_errors_carry_positions():
    with pytest.raises(ValueError, match=r"line 2, column 8"):
        qse.format_program("qubits f=2\ngate H f5\n")
