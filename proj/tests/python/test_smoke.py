# Copyright 2026 The otocsim Authors.
# SPDX-License-Identifier: Apache-2.0

import json
import math

import pytest

import otocsim


def test_light_cone_value_is_one():
    spec = otocsim.EnsembleSpec(3, 3, depth=3, seed=7)
    circuit = otocsim.sample_circuit(spec)
    assert otocsim.min_connecting_depth(spec.grid, "X:(3,3)", "Z:(1,1)") == 4
    for k in (1, 2):
        assert otocsim.otoc(circuit, "X:(3,3)", "Z:(1,1)", k) == pytest.approx(1.0, abs=1e-9)


def test_paths_agree():
    spec = otocsim.EnsembleSpec(2, 3, depth=10, seed=11)
    circuit = otocsim.sample_circuit(spec)
    for k in (1, 2, 3):
        moment = otocsim.otoc(circuit, spec.butterfly, spec.measurement, k)
        direct = otocsim.otoc_direct(circuit, spec.butterfly, spec.measurement, k)
        assert isinstance(direct, complex)
        assert abs(direct.imag) < 1e-10
        assert abs(moment - direct.real) < 1e-10
        assert -1.0 <= moment <= 1.0


def test_circuit_json_round_trip():
    spec = otocsim.EnsembleSpec(2, 2, depth=4, seed=3, ensemble="fixed-entangler", entangler="cz")
    circuit = otocsim.sample_circuit(spec)
    text = circuit.to_json()
    doc = json.loads(text)
    assert doc["rows"] == 2 and len(doc["layers"]) == 4
    again = otocsim.Circuit.from_json(text)
    assert again.to_json() == text
    assert otocsim.otoc(again, "X:(2,2)", "Z:(1,1)", 2) == otocsim.otoc(circuit, "X:(2,2)", "Z:(1,1)", 2)


def test_estimator():
    assert otocsim.shots_for_epsilon(0.05) == 400
    circuit = otocsim.sample_circuit(otocsim.EnsembleSpec(2, 2, depth=6, seed=5))
    exact = otocsim.otoc(circuit, "X:(2,2)", "Z:(1,1)", 1)
    est = otocsim.estimate(circuit, "X:(2,2)", "Z:(1,1)", 1, shots=20000, seed=9)
    assert est["shots"] == 20000
    assert abs(est["estimate"] - exact) <= 5 * est["stderr"] + 1e-12
    with pytest.raises(ValueError):
        otocsim.estimate(circuit, "X:(2,2)", "Z:(1,1)", 1, shots=10, epsilon=0.1)
    with pytest.raises(otocsim.UnsupportedEstimatorError):
        otocsim.estimate(circuit, "X:(2,2)", "Z:(1,1),Z:(1,2)", 1, shots=10)


def test_mixed_state_moment():
    circuit = otocsim.sample_circuit(otocsim.EnsembleSpec(2, 2, depth=8, seed=2))
    exact = otocsim.mixed_state_moment(circuit, "X:(2,2)", "Z:(1,1)", 2)
    sto = otocsim.mixed_state_moment(circuit, "X:(2,2)", "Z:(1,1)", 2, method="stochastic",
                                     samples=500, seed=1)
    assert exact["stderr"] is None
    assert abs(sto["value"] - exact["value"]) <= 5 * sto["stderr"] + 1e-12


def test_sweep_and_results(tmp_path):
    spec = otocsim.EnsembleSpec(2, 2, depth=0, seed=13)
    out = tmp_path / "sweep.csv"
    table = otocsim.depth_sweep(spec, [1, 4], 5, ks=[1, 2], threads=2, output=str(out))
    assert len(table["records"]) == 20
    assert len(table["aggregates"]) == 4
    loaded = otocsim.load_results(str(out))
    assert [r["exact"] for r in loaded] == [r["exact"] for r in table["records"]]
    single = otocsim.run_ensemble(otocsim.EnsembleSpec(2, 2, depth=4, seed=13), 5, ks=[1, 2])
    assert [r["exact"] for r in single] == [r["exact"] for r in table["records"] if r["depth"] == 4]


def test_pearson_and_errors():
    assert otocsim.pearson([1.0, 2.0, 3.0], [2.0, 4.0, 6.5]) > 0.99
    with pytest.raises(ValueError):
        otocsim.pearson([1.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        otocsim.EnsembleSpec(0, 3, depth=1)
    with pytest.raises(ValueError):
        otocsim.PauliString.parse("X:(9,9)", otocsim.Grid(2, 2))


def test_qubit_guard():
    limit = otocsim.max_qubits()
    try:
        otocsim.set_max_qubits(4)
        circuit = otocsim.sample_circuit(otocsim.EnsembleSpec(2, 3, depth=1))
        with pytest.raises(otocsim.ResourceLimitError):
            otocsim.otoc(circuit, "X:(2,3)", "Z:(1,1)")
    finally:
        otocsim.set_max_qubits(limit)


def test_support_growth():
    sizes = otocsim.support_size_by_depth(otocsim.Grid(4, 4), 6, "X:(4,4)")
    assert sizes[0] == 1 and sizes[-1] >= sizes[0]
    assert not math.isnan(otocsim.time_ordered(otocsim.sample_circuit(otocsim.EnsembleSpec(2, 2, depth=3)),
                                               "X:(2,2)", "Z:(1,1)").real)
