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
import os
import subprocess

import pytest

CLI = os.environ.get("QMALAB_CLI")
pytestmark = pytest.mark.skipif(not CLI, reason="QMALAB_CLI not set")


def run(*args):
    return subprocess.run([CLI, *args], capture_output=True, text=True)


def test_list_scenarios():
    r = run("list-scenarios")
    assert r.returncode == 0
    assert r.stdout.split() == [
        "csa-correctness", "permver-bench", "ati-check", "e2e-complete", "e2e-extract",
        "e2e-simulate", "jllw-correctness", "cutchoose-detect", "distinguish-game",
    ]


def test_run_writes_report(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 5}))
    out = tmp_path / "report.json"
    r = run("run", "--scenario", "csa-correctness", "--config", str(cfg), "--out", str(out))
    assert r.returncode == 0, r.stderr
    rep = json.loads(out.read_text())
    assert rep["scenario"] == "csa-correctness" and rep["passed"]
    assert all({"name", "value", "tolerance", "pass"} <= set(m) for m in rep["metrics"])


def test_reports_are_reproducible(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 11, "trials": 200}))
    reps = []
    for i in range(2):
        out = tmp_path / f"r{i}.json"
        assert run("run", "--scenario", "distinguish-game", "--config", str(cfg), "--out", str(out)).returncode == 0
        rep = json.loads(out.read_text())
        rep.pop("wall_clock_s")
        reps.append(rep)
    assert reps[0] == reps[1]


def test_errors_are_structured(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 1}))
    out = tmp_path / "err.json"
    r = run("run", "--scenario", "bogus", "--config", str(cfg), "--out", str(out))
    assert r.returncode == 2
    err = json.loads(out.read_text())
    assert err["error"]["type"] == "MalformedInput"
    cfg.write_text(json.dumps({"trials": 3}))
    assert run("run", "--scenario", "ati-check", "--config", str(cfg), "--out", str(out)).returncode == 2
    cfg.write_text("{not json")
    assert run("run", "--scenario", "ati-check", "--config", str(cfg), "--out", str(out)).returncode == 2


def test_permver_bench_json():
    r = run("permver", "bench", "--k", "6", "--trials", "1000", "--seed", "2")
    assert r.returncode == 0, r.stderr
    out = json.loads(r.stdout)
    assert set(out) == {"k", "threshold", "accept_freq_yes", "accept_freq_no", "hoeffding_bound"}
    assert out["k"] == 6 and out["threshold"] == pytest.approx(1.875)
