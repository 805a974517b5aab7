# Copyright 2026 The norobi authors
#
#    Licensed under the Apache License, Version 2.0 (the "License");
#    you may not use this file except in compliance with the License.
#    You may obtain a copy of the License at
#
#        http://www.apache.org/licenses/LICENSE-2.0
#
#    Unless required by applicable law or agreed to in writing, software
#    distributed under the License is distributed on an "AS IS" BASIS,
#    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#    See the License for the specific language governing permissions and
#    limitations under the License.

"""Exact toolkit for near-optimal robust bilevel and multilevel problems.

All values cross the boundary as exact rational strings ("p" or "p/q");
``fractions.Fraction`` accepts them directly.
"""

__version__ = "0.1.0"

from ._norobi import (
    Instance,
    NorobiCapError,
    NorobiInputError,
    NorobiInternalError,
    NorobiParseError,
    NorobiSemanticError,
    anticipation_graph_dot,
    compare,
    delta_sweep,
    emit_subproblems,
    evaluate_objective,
    parse_instance,
    solve,
    solve_canonical,
    validate,
    verify,
)

__all__ = [
    "Instance",
    "NorobiCapError",
    "NorobiInputError",
    "NorobiInternalError",
    "NorobiParseError",
    "NorobiSemanticError",
    "anticipation_graph_dot",
    "compare",
    "delta_sweep",
    "emit_subproblems",
    "evaluate_objective",
    "load_instance",
    "parse_instance",
    "solve",
    "solve_canonical",
    "validate",
    "verify",
]


def load_instance(path):
    """Parse an instance from a JSON file on disk."""
    with open(path, "r", encoding="utf-8") as handle:
        return parse_instance(handle.read())
