# Copyright 2026 The scenario_forge Authors
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
"""Scenario extraction, tail-biased generation and virtual safety validation.

Documents are plain dicts (the JSON documents the command-line tool writes);
driving logs are CSV text.
"""

import json

from . import _scenario_forge as _core
from ._scenario_forge import Database as _Database
from ._scenario_forge import ScenarioForgeError

__all__ = [
    "Database",
    "ScenarioForgeError",
    "decompose",
    "default_config",
    "default_patterns",
    "density_eval",
    "density_fit",
    "fit",
    "generate",
    "ingest",
    "jittered_overtake_pair_csv",
    "mine",
    "overtake_pair_csv",
    "random_log_csv",
    "report",
    "simulate",
    "verify",
]

overtake_pair_csv = _core.overtake_pair_csv
jittered_overtake_pair_csv = _core.jittered_overtake_pair_csv
random_log_csv = _core.random_log_csv


def _dump(value):
    return None if value is None else json.dumps(value)


def default_config():
    return json.loads(_core.default_config())


def default_patterns():
    return json.loads(_core.default_patterns())


def ingest(csv_text, source_id="log", resample_dt=None, config=None):
    """Cleans and resamples a log. Returns (clean CSV, cleaning report)."""
    log, report = _core.ingest_csv(csv_text, source_id, resample_dt, _dump(config))
    return log, json.loads(report)


def decompose(csv_text, config=None):
    return json.loads(_core.decompose_csv(csv_text, _dump(config)))


def mine(csv_text, source_id="log", patterns=None, config=None):
    """Tagged scenario records, each with its content id."""
    return json.loads(_core.mine_csv(csv_text, source_id, _dump(patterns), _dump(config)))


def fit(records):
    """Class model and per-slot densities from records sharing one pattern."""
    return json.loads(_core.fit_records(json.dumps(records)))


def generate(densities, n, tail_c=2.0, seed=0, road_query="road:motorway", config=None):
    return json.loads(
        _core.generate(json.dumps(densities), n, tail_c, seed, road_query, _dump(config)))


def verify(batch, faults=(), config=None):
    """Critical scenarios plus one variant per fault "kind:t_start:t_end[:magnitude]"."""
    return json.loads(_core.verify(json.dumps(batch), list(faults), _dump(config)))


def simulate(batch, seed=0, jobs=1, config=None):
    return json.loads(_core.simulate(json.dumps(batch), seed, jobs, _dump(config)))


def report(results, batch, format="json", config=None):
    """Safety report: a dict for "json", the plain-text document for "text"."""
    doc = _core.report(json.dumps(results), json.dumps(batch), format, _dump(config))
    return json.loads(doc) if format == "json" else doc


def density_fit(points):
    return json.loads(_core.density_fit([list(map(float, p)) for p in points]))


def density_eval(density, x):
    return _core.density_eval(json.dumps(density), [float(v) for v in x])


class Database:
    """Directory-backed scenario database."""

    def __init__(self, root):
        self._db = _Database(str(root))

    def store_log(self, log_id, csv_text):
        self._db.store_log(log_id, csv_text)

    def store_scenario(self, record):
        return self._db.store_scenario(json.dumps(record))

    def fetch_scenario(self, scenario_id):
        return json.loads(self._db.fetch_scenario(scenario_id))

    def scenario_ids(self):
        return self._db.scenario_ids()

    def log_ids(self):
        return self._db.log_ids()

    def query(self, expr):
        return self._db.query(expr)

    def audit(self):
        """List of invariant violations; empty when the database is sound."""
        return self._db.audit()
