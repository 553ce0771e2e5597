// Copyright 2026 The otocsim Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "otocsim/ensemble.hpp"
#include "otocsim/pauli.hpp"

namespace otocsim {

using Complex = std::complex<double>;

inline constexpr int kDefaultMaxQubits = 26;
inline constexpr int kDenseUnitaryMaxQubits = 10;

/// Current qubit guard: set_max_qubits() if called, else $OTOC_MAX_QUBITS, else 26.
int max_qubits() noexcept;
void set_max_qubits(int limit) noexcept;

/// Throws ResourceLimitError naming the amplitude count and memory when n > limit.
void check_qubit_guard(int n, int limit = max_qubits());

/// Dense 2^n amplitude vector. Qubit q is bit q of the basis index.
///
/// Copying is explicit through clone(); moves are cheap.
class StateVector {
public:
    static StateVector zero(int n, int limit = max_qubits());
    static StateVector basis(int n, std::uint64_t index, int limit = max_qubits());

    StateVector(StateVector&&) noexcept = default;
    StateVector& operator=(StateVector&&) noexcept = default;
    ~StateVector() = default;

    StateVector clone() const { return StateVector(*this); }

    int num_qubits() const noexcept { return n_; }
    std::size_t size() const noexcept { return amps_.size(); }

    std::span<Complex> amplitudes() noexcept { return amps_; }
    std::span<const Complex> amplitudes() const noexcept { return amps_; }
    Complex operator[](std::size_t i) const noexcept { return amps_[i]; }
    Complex& operator[](std::size_t i) noexcept { return amps_[i]; }

    double norm_squared() const noexcept;

    /// Resets to basis state |index>.
    void set_basis(std::uint64_t index);

private:
    StateVector(int n, std::vector<Complex> amps) : n_(n), amps_(std::move(amps)) {}
    StateVector(const StateVector&) = default;
    StateVector& operator=(const StateVector&) = default;

    int n_ = 0;
    std::vector<Complex> amps_;
};

inline StateVector zero_state(int n) { return StateVector::zero(n); }

void apply_single_qubit_gate(StateVector& state, const GateMatrix2& u, int site);
void apply_two_qubit_gate(StateVector& state, const GateMatrix4& u, int a, int b);
void apply_pauli_string(StateVector& state, const PauliString& p);

enum class Direction { forward, inverse };

/// Forward applies layers in order; inverse applies adjoints in reverse order.
void apply_circuit(StateVector& state, const Circuit& circuit,
                   Direction direction = Direction::forward);

/// <a|b>, conjugate-linear in a. Pairwise reduction of fixed shape.
Complex inner_product(const StateVector& a, const StateVector& b);

/// <psi|P|psi> for normalized psi. Throws if the imaginary residue exceeds 1e-10.
double pauli_expectation(const StateVector& state, const PauliString& p);

/// Full 2^n x 2^n matrix of the circuit, column j = U|j>. Requires n <= 10.
Eigen::MatrixXcd dense_unitary(const Circuit& circuit);

/// Debug dump: little-endian uint64 qubit count then 2^n (re,im) double pairs.
void write_state(const StateVector& state, std::ostream& out);
StateVector read_state(std::istream& in);

}  // namespace otocsim
