# Copyright 2026 The ohsense Authors.

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at

#     http://www.apache.org/licenses/LICENSE-2.0

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Multiparameter quantum estimation bounds for an OH-molecule field probe.

Operators and states are numpy arrays: complex128 8x8 matrices and
8-vectors. Parameters are (lambda1, lambda2, lambda3) in kelvin.
"""

import json

from ._core import *  # noqa: F401,F403
from ._core import report_point_json, sweep_csv, sweep_jsonl

__all__ = [name for name in dir() if not name.startswith("_")]


def _config_text(config):
    return config if isinstance(config, str) else json.dumps(config)


def run_sweep(config):
    """Rows of a sweep as dicts, in grid order. `config` is a dict or JSON text."""
    return [json.loads(line) for line in sweep_jsonl(_config_text(config))]


def sweep_to_csv(config):
    """CSV text of a sweep, byte identical to the command-line output."""
    return sweep_csv(_config_text(config))


def report_point(config, point):
    """Single-point report as a dict. Infinite values are encoded as strings."""
    return json.loads(report_point_json(_config_text(config), dict(point)))


__all__ += ["run_sweep", "sweep_to_csv", "report_point"]
