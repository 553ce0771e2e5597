// Copyright 2026 The otocsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include "otocsim/statevector.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "otocsim/errors.hpp"

namespace otocsim {

namespace {

std::atomic<int> g_max_qubits{-1};

int env_max_qubits() noexcept
{
    const char* raw = std::getenv("OTOC_MAX_QUBITS");
    if (raw == nullptr || *raw == '\0') {
        return kDefaultMaxQubits;
    }
    char* end = nullptr;
    const long value = std::strtol(raw, &end, 10);
    if (end == raw || *end != '\0' || value < 1) {
        return kDefaultMaxQubits;
    }
    return static_cast<int>(std::min<long>(value, 62));
}

constexpr std::size_t kPairwiseBlock = 64;

// Pairwise sum of f(i) over [begin, end). The split points depend only on the range.
template <typename F>
Complex pairwise_sum(std::size_t begin, std::size_t end, const F& f)
{
    if (end - begin <= kPairwiseBlock) {
        Complex acc{0.0, 0.0};
        for (std::size_t i = begin; i < end; ++i) {
            acc += f(i);
        }
        return acc;
    }
    const std::size_t mid = begin + (end - begin) / 2;
    return pairwise_sum(begin, mid, f) + pairwise_sum(mid, end, f);
}

constexpr std::uint64_t insert_zero_bit(std::uint64_t x, int position) noexcept
{
    const std::uint64_t low = x & ((std::uint64_t{1} << position) - 1);
    return ((x >> position) << (position + 1)) | low;
}

void check_site(const StateVector& state, int site, const char* what)
{
    if (site < 0 || site >= state.num_qubits()) {
        throw std::out_of_range(std::string(what) + " site " + std::to_string(site) +
                                " out of range for " + std::to_string(state.num_qubits()) +
                                " qubits");
    }
}

void check_same_size(const StateVector& a, const StateVector& b)
{
    if (a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument("state dimension mismatch: " + std::to_string(a.num_qubits()) +
                                    " vs " + std::to_string(b.num_qubits()) + " qubits");
    }
}

template <typename T>
void write_le(std::ostream& out, T value)
{
    std::array<char, sizeof(T)> bytes{};
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes.begin(), bytes.end());
    }
    out.write(bytes.data(), sizeof(T));
}

template <typename T>
T read_le(std::istream& in)
{
    std::array<char, sizeof(T)> bytes{};
    if (!in.read(bytes.data(), sizeof(T))) {
        throw ParseError("state dump truncated");
    }
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes.begin(), bytes.end());
    }
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

}  // namespace

int max_qubits() noexcept
{
    const int set = g_max_qubits.load(std::memory_order_relaxed);
    return set > 0 ? set : env_max_qubits();
}

void set_max_qubits(int limit) noexcept
{
    g_max_qubits.store(std::clamp(limit, 1, 62), std::memory_order_relaxed);
}

void check_qubit_guard(int n, int limit)
{
    if (n < 1) {
        throw std::invalid_argument("state needs at least one qubit, got " + std::to_string(n));
    }
    if (n > limit || n > 62) {
        const double gib = std::ldexp(16.0, n) / std::ldexp(1.0, 30);
        std::ostringstream msg;
        msg << "n=" << n << " qubits requires 2^" << n << " amplitudes (" << gib
            << " GiB of complex doubles); the limit is " << limit
            << " qubits (raise it with OTOC_MAX_QUBITS or --allow-large)";
        throw ResourceLimitError(msg.str());
    }
}

StateVector StateVector::zero(int n, int limit)
{
    return basis(n, 0, limit);
}

StateVector StateVector::basis(int n, std::uint64_t index, int limit)
{
    check_qubit_guard(n, limit);
    const std::size_t dim = std::size_t{1} << n;
    if (index >= dim) {
        throw std::out_of_range("basis index " + std::to_string(index) + " out of range");
    }
    std::vector<Complex> amps(dim, Complex{0.0, 0.0});
    amps[index] = 1.0;
    return StateVector(n, std::move(amps));
}

double StateVector::norm_squared() const noexcept
{
    return pairwise_sum(0, amps_.size(), [this](std::size_t i) {
               return Complex{std::norm(amps_[i]), 0.0};
           })
        .real();
}

void StateVector::set_basis(std::uint64_t index)
{
    if (index >= amps_.size()) {
        throw std::out_of_range("basis index " + std::to_string(index) + " out of range");
    }
    std::fill(amps_.begin(), amps_.end(), Complex{0.0, 0.0});
    amps_[index] = 1.0;
}

void apply_single_qubit_gate(StateVector& state, const GateMatrix2& u, int site)
{
    check_site(state, site, "single-qubit gate");
    const Complex u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
    const std::uint64_t bit = std::uint64_t{1} << site;
    const std::uint64_t half = state.size() / 2;
    auto amps = state.amplitudes();
    for (std::uint64_t k = 0; k < half; ++k) {
        const std::uint64_t i0 = insert_zero_bit(k, site);
        const std::uint64_t i1 = i0 | bit;
        const Complex v0 = amps[i0];
        const Complex v1 = amps[i1];
        amps[i0] = u00 * v0 + u01 * v1;
        amps[i1] = u10 * v0 + u11 * v1;
    }
}

void apply_two_qubit_gate(StateVector& state, const GateMatrix4& u, int a, int b)
{
    check_site(state, a, "two-qubit gate");
    check_site(state, b, "two-qubit gate");
    if (a == b) {
        throw std::invalid_argument("two-qubit gate needs distinct sites, got " +
                                    std::to_string(a) + " twice");
    }
    std::array<Complex, 16> m{};
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            m[static_cast<std::size_t>(4 * r + c)] = u(r, c);
        }
    }
    const int lo = std::min(a, b);
    const int hi = std::max(a, b);
    const std::uint64_t bit_a = std::uint64_t{1} << a;
    const std::uint64_t bit_b = std::uint64_t{1} << b;
    const std::uint64_t quarter = state.size() / 4;
    auto amps = state.amplitudes();
    for (std::uint64_t k = 0; k < quarter; ++k) {
        const std::uint64_t base = insert_zero_bit(insert_zero_bit(k, lo), hi);
        // Gate index 2*bit_a + bit_b.
        const std::array<std::uint64_t, 4> idx{base, base | bit_b, base | bit_a,
                                               base | bit_a | bit_b};
        const std::array<Complex, 4> v{amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]};
        for (std::size_t r = 0; r < 4; ++r) {
            amps[idx[r]] = m[4 * r] * v[0] + m[4 * r + 1] * v[1] + m[4 * r + 2] * v[2] +
                           m[4 * r + 3] * v[3];
        }
    }
}

void apply_pauli_string(StateVector& state, const PauliString& p)
{
    if (p.max_site() >= state.num_qubits()) {
        throw std::out_of_range("Pauli site " + std::to_string(p.max_site()) +
                                " out of range for " + std::to_string(state.num_qubits()) +
                                " qubits");
    }
    // Y = i X Z, so P|x> = i^{#Y} (-1)^{|x & zmask|} |x ^ xmask>.
    static constexpr std::array<Complex, 4> kPowersOfI{Complex{1, 0}, Complex{0, 1},
                                                       Complex{-1, 0}, Complex{0, -1}};
    const Complex global = kPowersOfI[static_cast<std::size_t>(p.y_count() % 4)];
    const std::uint64_t xmask = p.x_mask();
    const std::uint64_t zmask = p.z_mask();
    auto phase = [&](std::uint64_t i) {
        return (std::popcount(i & zmask) & 1) ? -global : global;
    };
    auto amps = state.amplitudes();
    const std::uint64_t dim = state.size();
    if (xmask == 0) {
        for (std::uint64_t i = 0; i < dim; ++i) {
            if (std::popcount(i & zmask) & 1) {
                amps[i] = -amps[i];
            }
        }
        return;
    }
    for (std::uint64_t i = 0; i < dim; ++i) {
        const std::uint64_t j = i ^ xmask;
        if (i < j) {
            const Complex vi = amps[i];
            const Complex vj = amps[j];
            amps[j] = phase(i) * vi;
            amps[i] = phase(j) * vj;
        }
    }
}

void apply_circuit(StateVector& state, const Circuit& circuit, Direction direction)
{
    if (circuit.num_qubits() != state.num_qubits()) {
        throw std::invalid_argument("circuit on " + std::to_string(circuit.num_qubits()) +
                                    " qubits applied to a " + std::to_string(state.num_qubits()) +
                                    "-qubit state");
    }
    if (direction == Direction::forward) {
        for (const auto& layer : circuit.layers) {
            for (const auto& op : layer.singles) {
                apply_single_qubit_gate(state, op.gate, op.site);
            }
            for (const auto& op : layer.ops) {
                apply_two_qubit_gate(state, op.gate, op.a, op.b);
            }
        }
        return;
    }
    for (auto layer = circuit.layers.rbegin(); layer != circuit.layers.rend(); ++layer) {
        for (auto op = layer->ops.rbegin(); op != layer->ops.rend(); ++op) {
            apply_two_qubit_gate(state, op->gate.adjoint(), op->a, op->b);
        }
        for (auto op = layer->singles.rbegin(); op != layer->singles.rend(); ++op) {
            apply_single_qubit_gate(state, op->gate.adjoint(), op->site);
        }
    }
}

Complex inner_product(const StateVector& a, const StateVector& b)
{
    check_same_size(a, b);
    const auto x = a.amplitudes();
    const auto y = b.amplitudes();
    return pairwise_sum(0, x.size(), [&](std::size_t i) { return std::conj(x[i]) * y[i]; });
}

double pauli_expectation(const StateVector& state, const PauliString& p)
{
    if (p.max_site() >= state.num_qubits()) {
        throw std::out_of_range("Pauli site " + std::to_string(p.max_site()) +
                                " out of range for " + std::to_string(state.num_qubits()) +
                                " qubits");
    }
    static constexpr std::array<Complex, 4> kPowersOfI{Complex{1, 0}, Complex{0, 1},
                                                       Complex{-1, 0}, Complex{0, -1}};
    const Complex global = kPowersOfI[static_cast<std::size_t>(p.y_count() % 4)];
    const std::uint64_t xmask = p.x_mask();
    const std::uint64_t zmask = p.z_mask();
    const auto amps = state.amplitudes();
    const Complex value = pairwise_sum(0, amps.size(), [&](std::size_t i) {
        const Complex ph = (std::popcount(i & zmask) & 1) ? -global : global;
        return std::conj(amps[i ^ xmask]) * ph * amps[i];
    });
    if (std::abs(value.imag()) > 1e-10) {
        throw std::logic_error("Pauli expectation has imaginary residue " +
                               std::to_string(value.imag()));
    }
    return value.real();
}

Eigen::MatrixXcd dense_unitary(const Circuit& circuit)
{
    const int n = circuit.num_qubits();
    if (n > kDenseUnitaryMaxQubits) {
        throw ResourceLimitError("dense_unitary supports at most " +
                                 std::to_string(kDenseUnitaryMaxQubits) + " qubits, got " +
                                 std::to_string(n));
    }
    const std::size_t dim = std::size_t{1} << n;
    Eigen::MatrixXcd u(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    auto state = StateVector::zero(n);
    for (std::size_t j = 0; j < dim; ++j) {
        state.set_basis(j);
        apply_circuit(state, circuit, Direction::forward);
        for (std::size_t i = 0; i < dim; ++i) {
            u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = state[i];
        }
    }
    return u;
}

void write_state(const StateVector& state, std::ostream& out)
{
    write_le<std::uint64_t>(out, static_cast<std::uint64_t>(state.num_qubits()));
    for (const Complex z : state.amplitudes()) {
        write_le<double>(out, z.real());
        write_le<double>(out, z.imag());
    }
}

StateVector read_state(std::istream& in)
{
    const auto n = read_le<std::uint64_t>(in);
    if (n < 1 || n > 62) {
        throw ParseError("state dump has invalid qubit count " + std::to_string(n));
    }
    auto state = StateVector::zero(static_cast<int>(n));
    for (auto& z : state.amplitudes()) {
        const double re = read_le<double>(in);
        const double im = read_le<double>(in);
        z = Complex{re, im};
    }
    return state;
}

}  // namespace otocsim
