// Copyright 2026 The otocsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include "otocsim/otoc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "otocsim/errors.hpp"

namespace otocsim {

namespace {

constexpr double kRealTolerance = 1e-10;

double checked_unit_interval(double value, const char* what)
{
    if (!(std::abs(value) <= 1.0 + kRealTolerance)) {
        throw std::logic_error(std::string(what) + " left [-1, 1]: " + std::to_string(value));
    }
    return std::clamp(value, -1.0, 1.0);
}

// C^k |state>, in place.
void apply_correlator_power(StateVector& state, const CorrelatorSpec& spec, int power)
{
    for (int i = 0; i < power; ++i) {
        apply_correlator(state, spec);
    }
}

}  // namespace

void CorrelatorSpec::validate() const
{
    if (k < 1) {
        throw std::invalid_argument("moment order k must be >= 1, got " + std::to_string(k));
    }
    if (butterfly.empty()) {
        throw std::invalid_argument("butterfly operator must be nonempty");
    }
    if (measurement.empty()) {
        throw std::invalid_argument("measurement operator must be nonempty");
    }
    if (!measurement.is_z_type()) {
        throw std::invalid_argument(
            "measurement operator must be Z-type (M|0^n> = |0^n> and M^2 = 1)");
    }
    const int n = circuit.num_qubits();
    if (butterfly.max_site() >= n || measurement.max_site() >= n) {
        throw std::out_of_range("operator site outside the " + circuit.geometry.describe() +
                                " circuit");
    }
    circuit.validate();
}

void apply_correlator(StateVector& state, const CorrelatorSpec& spec)
{
    if (!spec.measurement.is_z_type()) {
        throw std::invalid_argument("measurement operator must be Z-type");
    }
    if (state.num_qubits() != spec.circuit.num_qubits()) {
        throw std::invalid_argument("correlator on " + std::to_string(spec.circuit.num_qubits()) +
                                    " qubits applied to a " +
                                    std::to_string(state.num_qubits()) + "-qubit state");
    }
    apply_pauli_string(state, spec.measurement);
    apply_circuit(state, spec.circuit, Direction::forward);
    apply_pauli_string(state, spec.butterfly);
    apply_circuit(state, spec.circuit, Direction::inverse);
}

double otoc_moment(const CorrelatorSpec& spec)
{
    spec.validate();
    auto state = StateVector::zero(spec.circuit.num_qubits());
    apply_correlator_power(state, spec, spec.k);
    return checked_unit_interval(pauli_expectation(state, spec.measurement), "OTOC moment");
}

Complex otoc_moment_direct(const CorrelatorSpec& spec)
{
    spec.validate();
    auto state = StateVector::zero(spec.circuit.num_qubits());
    apply_correlator_power(state, spec, 2 * spec.k);
    return state[0];
}

Complex time_ordered_correlator(const Circuit& circuit, const PauliString& butterfly,
                                const PauliString& measurement)
{
    auto state = StateVector::zero(circuit.num_qubits());
    apply_pauli_string(state, measurement);
    apply_circuit(state, circuit, Direction::forward);
    apply_pauli_string(state, butterfly);
    apply_circuit(state, circuit, Direction::inverse);
    return state[0];
}

std::int64_t shots_for_epsilon(double epsilon)
{
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("epsilon must lie in (0, 1), got " + std::to_string(epsilon));
    }
    // Guard against 1/eps^2 landing a hair above an integer, e.g. eps = 0.05.
    const double raw = 1.0 / (epsilon * epsilon);
    const double nearest = std::round(raw);
    if (std::abs(raw - nearest) <= 1e-9 * nearest) {
        return static_cast<std::int64_t>(nearest);
    }
    return static_cast<std::int64_t>(std::ceil(raw));
}

ShotEstimate shot_estimate(const CorrelatorSpec& spec, std::int64_t shots, Xoshiro256& rng)
{
    if (shots < 1) {
        throw std::invalid_argument("shots must be >= 1, got " + std::to_string(shots));
    }
    if (spec.measurement.weight() != 1 || !spec.measurement.is_z_type()) {
        throw UnsupportedEstimatorError(
            "shot estimator measures one qubit; M must be a single-site Z (exact paths accept "
            "multi-site Z strings)");
    }
    const double z = otoc_moment(spec);
    const double p = std::clamp((1.0 + z) / 2.0, 0.0, 1.0);
    std::int64_t ups = 0;
    for (std::int64_t s = 0; s < shots; ++s) {
        ups += rng.uniform() < p ? 1 : 0;
    }
    const double p_hat = static_cast<double>(ups) / static_cast<double>(shots);
    ShotEstimate out;
    out.estimate = 2.0 * p_hat - 1.0;
    out.standard_error = 2.0 * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(shots));
    out.shots = shots;
    return out;
}

ShotEstimate shot_estimate_for_epsilon(const CorrelatorSpec& spec, double epsilon,
                                       Xoshiro256& rng)
{
    ShotEstimate out = shot_estimate(spec, shots_for_epsilon(epsilon), rng);
    out.target_epsilon = epsilon;
    return out;
}

namespace {

// <x|C^{2k}|x> = m_x <psi_x|M|psi_x> with psi_x = C^k|x> and m_x = +-1 the M eigenvalue.
double diagonal_element(StateVector& scratch, const CorrelatorSpec& spec, std::uint64_t x)
{
    scratch.set_basis(x);
    apply_correlator_power(scratch, spec, spec.k);
    const double sign = (std::popcount(x & spec.measurement.z_mask()) & 1) ? -1.0 : 1.0;
    return sign * pauli_expectation(scratch, spec.measurement);
}

}  // namespace

MixedMoment mixed_state_moment_exact(const CorrelatorSpec& spec)
{
    spec.validate();
    const int n = spec.circuit.num_qubits();
    if (n > kExactTraceMaxQubits) {
        throw ResourceLimitError("exact trace supports at most " +
                                 std::to_string(kExactTraceMaxQubits) + " qubits, got " +
                                 std::to_string(n) + "; use the stochastic method");
    }
    auto scratch = StateVector::zero(n);
    const std::uint64_t dim = std::uint64_t{1} << n;
    double sum = 0.0;
    for (std::uint64_t x = 0; x < dim; ++x) {
        sum += diagonal_element(scratch, spec, x);
    }
    MixedMoment out;
    out.value = checked_unit_interval(sum / static_cast<double>(dim), "mixed-state moment");
    out.samples = static_cast<std::int64_t>(dim);
    return out;
}

MixedMoment mixed_state_moment(const CorrelatorSpec& spec, TraceMethod method,
                               std::int64_t samples, Xoshiro256& rng)
{
    if (method == TraceMethod::exact) {
        return mixed_state_moment_exact(spec);
    }
    if (samples < 1) {
        throw std::invalid_argument("stochastic trace needs samples >= 1, got " +
                                    std::to_string(samples));
    }
    spec.validate();
    const int n = spec.circuit.num_qubits();
    auto scratch = StateVector::zero(n);
    // Welford accumulation of the per-basis-state diagonal.
    double mean = 0.0;
    double m2 = 0.0;
    for (std::int64_t s = 0; s < samples; ++s) {
        const std::uint64_t x = rng() >> (64 - n);
        const double v = diagonal_element(scratch, spec, x);
        const double delta = v - mean;
        mean += delta / static_cast<double>(s + 1);
        m2 += delta * (v - mean);
    }
    MixedMoment out;
    out.value = std::clamp(mean, -1.0, 1.0);
    out.samples = samples;
    if (samples > 1) {
        const double variance = m2 / static_cast<double>(samples - 1);
        out.standard_error = std::sqrt(variance / static_cast<double>(samples));
    }
    return out;
}

}  // namespace otocsim
