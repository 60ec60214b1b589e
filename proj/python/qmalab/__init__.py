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

"""Desk-scale laboratory for NIZK arguments of quantum knowledge."""

import json as _json

from . import _qmalab
from ._qmalab import (  # noqa: F401
    Error,
    ExtractionError,
    IntegrityError,
    MalformedInput,
    NotAWitness,
    SizingError,
    UnsupportedMode,
    bernstein_tail,
    ground_state,
    matrix_bernstein_tail,
    recommended_k,
    rref,
    scenario_names,
    thresholds_from_energy,
)

__all__ = [
    "Session",
    "permver_bench",
    "run_scenario",
    "simulate_and_verify",
    "scenario_names",
    "recommended_k",
    "bernstein_tail",
    "matrix_bernstein_tail",
    "thresholds_from_energy",
    "rref",
    "ground_state",
]


def _dump(obj):
    return obj if isinstance(obj, str) else _json.dumps(obj)


def run_scenario(name, config):
    """Run a named scenario; `config` is a dict (must contain "seed")."""
    return _json.loads(_qmalab.run_scenario(name, _dump(config)))


def permver_bench(config):
    """{k, threshold, accept_freq_yes, accept_freq_no, hoeffding_bound}."""
    return _json.loads(_qmalab.permver_bench(_dump(config)))


def simulate_and_verify(seed, config=None, instance=None):
    return _qmalab.simulate_and_verify(seed, _dump(config or {}), None if instance is None else _dump(instance))


class Session:
    """Protocol session in extraction mode (CRS plus extraction trapdoor).

    Proofs are JSON strings; states are complex numpy vectors.
    """

    def __init__(self, seed, config=None, instance=None):
        self._s = _qmalab.Session(seed, _dump(config or {}), None if instance is None else _dump(instance))

    def prove(self, witness_copy):
        return self._s.prove(witness_copy)

    def verify(self, proof):
        return self._s.verify(_dump(proof))

    def extract(self, residual):
        return self._s.extract(_dump(residual))

    def per_copy_acceptance(self, state):
        return self._s.per_copy_acceptance(state)
