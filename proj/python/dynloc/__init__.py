# Copyright 2026 The dynloc Authors. All Rights Reserved.
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

"""Contrastive regression losses with dynamic localized repulsion."""

import json

from ._dynloc import (
    ContractError,
    NumericalError,
    ParseError,
    distance_matrix,
    generate_synthetic,
    kernel_value,
    l2_normalize,
    loss_with_gradient,
    mae,
    neighbors_at_epoch,
    positiveness_matrix,
    ridge_fit,
    run_cli,
    select_neighbors,
    similarity_matrix,
)
from ._dynloc import _benchmark_json

__all__ = [
    "ContractError",
    "NumericalError",
    "ParseError",
    "benchmark",
    "distance_matrix",
    "generate_synthetic",
    "kernel_value",
    "l2_normalize",
    "loss_with_gradient",
    "mae",
    "neighbors_at_epoch",
    "positiveness_matrix",
    "ridge_fit",
    "run_cli",
    "select_neighbors",
    "similarity_matrix",
]

__version__ = "0.1.0"


def benchmark(features, labels, variants=("dynlocrep", "yaware", "threshold", "exponential", "rnc"),
              seeds=(0, 1, 2, 3, 4), epochs=50, batch_size=32, learning_rate=1e-4, nn_final=14,
              hidden=(64, 64), embedding_dim=32, threads=1):
    """Runs the multi-seed comparison and returns the report as a dict."""
    text = _benchmark_json(features, list(labels), list(variants), list(seeds), epochs, batch_size,
                           learning_rate, nn_final, list(hidden), embedding_dim, threads)
    return json.loads(text)
