# Copyright 2026 The otocsim Authors.
# SPDX-License-Identifier: Apache-2.0
"""Python bindings for the otocsim statevector simulator."""

from otocsim._core import (
    Circuit,
    EnsembleSpec,
    Grid,
    ParseError,
    PauliString,
    ResourceLimitError,
    UnsupportedEstimatorError,
    butterfly_support,
    commutes_by_lightcone,
    depth_sweep,
    estimate,
    instance_seed,
    load_results,
    max_qubits,
    min_connecting_depth,
    mixed_state_moment,
    otoc,
    otoc_direct,
    pearson,
    run_ensemble,
    sample_circuit,
    set_max_qubits,
    shots_for_epsilon,
    support_size_by_depth,
    time_ordered,
)

__all__ = [name for name in dir() if not name.startswith("_")]
