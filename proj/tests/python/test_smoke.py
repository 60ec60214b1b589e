# Copyright 2026 The qmalab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json

import numpy as np
import pytest

import qmalab


def test_scenarios_listed():
    names = qmalab.scenario_names()
    assert "e2e-complete" in names and len(names) == 9


def test_calculators():
    assert qmalab.recommended_k(2, 1.0, 0.5, 2) == 106
    assert qmalab.bernstein_tail(1, 1, 100, 50) == pytest.approx(3.13e-3, rel=5e-3)
    assert qmalab.matrix_bernstein_tail(1, 1, 100, 1, 0) == 1.0
    assert qmalab.thresholds_from_energy(0.0, 0.25, 0.5) == pytest.approx((0.5, 0.25))
    assert qmalab.rref(["110", "011"]) == ["101", "011"]


def test_permver_bench_shape():
    out = qmalab.permver_bench({"seed": 3, "k": 6, "trials": 500})
    assert set(out) == {"k", "threshold", "accept_freq_yes", "accept_freq_no", "hoeffding_bound"}
    assert out["accept_freq_yes"] == 1.0
    assert out["accept_freq_no"] == 0.0


def test_scenario_report():
    rep = qmalab.run_scenario("csa-correctness", {"seed": 1})
    assert rep["passed"]
    assert {m["name"] for m in rep["metrics"]} >= {"correctness_max_deviation", "codespace_max_deviation"}
    with pytest.raises(qmalab.MalformedInput):
        qmalab.run_scenario("no-such-scenario", {"seed": 1})
    with pytest.raises(qmalab.MalformedInput):
        qmalab.run_scenario("csa-correctness", {})


def test_protocol_round_trip():
    energy, witness = qmalab.ground_state()
    assert energy == pytest.approx(0.0, abs=1e-12)
    s = qmalab.Session(7)
    proof = s.prove(witness)
    assert json.loads(proof)["state"]["qubits"] == 12
    out = s.verify(proof)
    assert out["accept"], out["diagnostics"]
    extracted = s.extract(out["residual"])
    target = np.kron(witness, witness)
    assert abs(np.vdot(target, extracted)) ** 2 == pytest.approx(1.0)
    assert min(s.per_copy_acceptance(extracted)) == pytest.approx(1.0)


def test_simulation_and_errors():
    assert qmalab.simulate_and_verify(9)["accept"]
    s = qmalab.Session(8)
    with pytest.raises(qmalab.MalformedInput):
        s.prove(np.ones(3, dtype=complex))
    with pytest.raises(qmalab.SizingError):
        qmalab.Session(8, {"k": 4}).prove(qmalab.ground_state()[1])
