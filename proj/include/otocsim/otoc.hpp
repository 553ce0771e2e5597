// Copyright 2026 The otocsim Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>

#include "otocsim/ensemble.hpp"
#include "otocsim/pauli.hpp"
#include "otocsim/rng.hpp"
#include "otocsim/statevector.hpp"

namespace otocsim {

/// C = U^dagger B U M together with the moment order k of <0|C^{2k}|0>.
struct CorrelatorSpec {
    Circuit circuit;
    PauliString butterfly;
    PauliString measurement;
    int k = 1;

    /// Requires Z-type nonempty M, nonempty B, k >= 1, and operators inside the grid.
    void validate() const;
};

/// |state> <- U^dagger B U M |state>.
void apply_correlator(StateVector& state, const CorrelatorSpec& spec);

/// <0|C^{2k}|0> evaluated as <psi|M|psi> with psi = C^k|0>.
double otoc_moment(const CorrelatorSpec& spec);

/// <0|C^{2k}|0> by 2k applications of C and an overlap with |0>.
Complex otoc_moment_direct(const CorrelatorSpec& spec);

/// <0|U^dagger B U M|0>.
Complex time_ordered_correlator(const Circuit& circuit, const PauliString& butterfly,
                                const PauliString& measurement);

struct ShotEstimate {
    double estimate = 0.0;
    double standard_error = 0.0;
    std::int64_t shots = 0;
    std::optional<double> target_epsilon;
};

/// ceil(1/eps^2); eps must lie in (0, 1).
std::int64_t shots_for_epsilon(double epsilon);

/// Emulates measuring the single Z qubit of C^k|0> `shots` times.
ShotEstimate shot_estimate(const CorrelatorSpec& spec, std::int64_t shots, Xoshiro256& rng);
ShotEstimate shot_estimate_for_epsilon(const CorrelatorSpec& spec, double epsilon,
                                       Xoshiro256& rng);

enum class TraceMethod { exact, stochastic };

inline constexpr int kExactTraceMaxQubits = 14;

struct MixedMoment {
    double value = 0.0;
    std::optional<double> standard_error;
    std::int64_t samples = 0;
};

/// Tr(C^{2k}) / 2^n. Exact sums every basis state; stochastic samples them uniformly.
MixedMoment mixed_state_moment(const CorrelatorSpec& spec, TraceMethod method,
                               std::int64_t samples, Xoshiro256& rng);
MixedMoment mixed_state_moment_exact(const CorrelatorSpec& spec);

}  // namespace otocsim
