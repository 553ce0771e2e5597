// Copyright 2026 The otocsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "otocsim/errors.hpp"
#include "otocsim/statevector.hpp"

using namespace otocsim;

namespace {

StateVector random_state(int n, std::uint64_t seed)
{
    Xoshiro256 rng(seed);
    auto s = StateVector::zero(n);
    for (auto& z : s.amplitudes()) {
        z = Complex(rng.normal(), rng.normal());
    }
    const double norm = std::sqrt(s.norm_squared());
    for (auto& z : s.amplitudes()) {
        z /= norm;
    }
    return s;
}

Eigen::VectorXcd to_eigen(const StateVector& s)
{
    Eigen::VectorXcd v(static_cast<Eigen::Index>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = s[i];
    }
    return v;
}

double max_diff(const StateVector& s, const Eigen::VectorXcd& v)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        worst = std::max(worst, std::abs(s[i] - v(static_cast<Eigen::Index>(i))));
    }
    return worst;
}

double max_diff(const StateVector& a, const StateVector& b)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

PauliString random_pauli(int n, int sites, Xoshiro256& rng)
{
    PauliString p;
    for (int i = 0; i < sites; ++i) {
        const int site = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
        const PauliLetter letters[] = {PauliLetter::X, PauliLetter::Y, PauliLetter::Z};
        p.set(site, letters[rng() % 3]);
    }
    return p;
}

}  // namespace

TEST(ZeroState, Basics)
{
    const auto one = zero_state(1);
    ASSERT_EQ(one.size(), 2U);
    EXPECT_EQ(one[0], Complex(1.0, 0.0));
    EXPECT_EQ(one[1], Complex(0.0, 0.0));
    const auto three = zero_state(3);
    EXPECT_EQ(three.size(), 8U);
    EXPECT_DOUBLE_EQ(three.norm_squared(), 1.0);
}

TEST(ZeroState, GuardRefusesLargeStates)
{
    try {
        (void)StateVector::zero(27, kDefaultMaxQubits);
        FAIL() << "expected ResourceLimitError";
    } catch (const ResourceLimitError& e) {
        EXPECT_NE(std::string(e.what()).find("2^27"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("GiB"), std::string::npos);
    }
    EXPECT_THROW((void)StateVector::zero(0), std::invalid_argument);
}

TEST(TwoQubitGate, IdentityIsBitExact)
{
    auto s = random_state(4, 1);
    const auto before = s.clone();
    apply_two_qubit_gate(s, GateMatrix4::Identity(), 1, 3);
    for (std::size_t i = 0; i < s.size(); ++i) {
        EXPECT_EQ(s[i], before[i]);
    }
}

TEST(TwoQubitGate, SwapMovesExcitation)
{
    GateMatrix4 swap = GateMatrix4::Zero();
    swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
    // |01> in little-endian: qubit 0 set, basis index 1.
    auto s = StateVector::basis(2, 1);
    apply_two_qubit_gate(s, swap, 0, 1);
    EXPECT_EQ(s[2], Complex(1.0, 0.0));
    EXPECT_EQ(s[1], Complex(0.0, 0.0));
}

TEST(TwoQubitGate, GateIndexConvention)
{
    // CNOT with control a, target b in the 2*bit_a + bit_b basis.
    GateMatrix4 cnot = GateMatrix4::Zero();
    cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;
    auto s = StateVector::basis(3, 1U << 2);  // qubit 2 set
    apply_two_qubit_gate(s, cnot, 2, 0);
    EXPECT_EQ(s[(1U << 2) | 1U], Complex(1.0, 0.0));
    auto t = StateVector::basis(3, 1U << 2);
    apply_two_qubit_gate(t, cnot, 0, 2);  // control 0 unset, no-op
    EXPECT_EQ(t[1U << 2], Complex(1.0, 0.0));
}

TEST(TwoQubitGate, MatchesDenseOracle)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Xoshiro256 rng(seed);
        const GateMatrix4 g = sample_haar_two_qubit_gate(rng);
        const int a = static_cast<int>(rng() % 3);
        const int b = (a + 1 + static_cast<int>(rng() % 2)) % 3;
        auto s = random_state(3, seed + 100);
        const Eigen::VectorXcd expected = oracle::embed_two_qubit(3, g, a, b) * to_eigen(s);
        apply_two_qubit_gate(s, g, a, b);
        EXPECT_LT(max_diff(s, expected), 1e-12);
        EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
    }
}

TEST(TwoQubitGate, RejectsBadSites)
{
    auto s = zero_state(3);
    EXPECT_THROW(apply_two_qubit_gate(s, GateMatrix4::Identity(), 1, 1), std::invalid_argument);
    EXPECT_THROW(apply_two_qubit_gate(s, GateMatrix4::Identity(), 0, 3), std::out_of_range);
}

TEST(SingleQubitGate, KnownGates)
{
    auto s = zero_state(1);
    apply_single_qubit_gate(s, GateMatrix2::Identity(), 0);
    EXPECT_EQ(s[0], Complex(1.0, 0.0));
    GateMatrix2 x;
    x << 0, 1, 1, 0;
    apply_single_qubit_gate(s, x, 0);
    EXPECT_EQ(s[1], Complex(1.0, 0.0));
    GateMatrix2 h;
    h << 1, 1, 1, -1;
    h /= std::sqrt(2.0);
    auto r = random_state(3, 9);
    const auto before = r.clone();
    apply_single_qubit_gate(r, h, 1);
    apply_single_qubit_gate(r, h, 1);
    EXPECT_LT(max_diff(r, before), 1e-12);
    EXPECT_THROW(apply_single_qubit_gate(r, h, 3), std::out_of_range);
}

TEST(SingleQubitGate, MatchesDenseOracle)
{
    Xoshiro256 rng(3);
    for (int q = 0; q < 4; ++q) {
        const GateMatrix2 g = sample_haar_single_qubit_gate(rng);
        auto s = random_state(4, 50 + static_cast<std::uint64_t>(q));
        const Eigen::VectorXcd expected = oracle::embed_single_qubit(4, g, q) * to_eigen(s);
        apply_single_qubit_gate(s, g, q);
        EXPECT_LT(max_diff(s, expected), 1e-12);
    }
}

TEST(Pauli, KnownActions)
{
    auto s = zero_state(3);
    apply_pauli_string(s, PauliString::single(0, PauliLetter::Z).set(2, PauliLetter::Z));
    EXPECT_EQ(s[0], Complex(1.0, 0.0));
    apply_pauli_string(s, PauliString::single(0, PauliLetter::X));
    EXPECT_EQ(s[1], Complex(1.0, 0.0));
    auto y = zero_state(1);
    apply_pauli_string(y, PauliString::single(0, PauliLetter::Y));
    EXPECT_EQ(y[1], Complex(0.0, 1.0));
    apply_pauli_string(y, PauliString::single(0, PauliLetter::Y));
    EXPECT_EQ(y[0], Complex(1.0, 0.0));
    EXPECT_THROW(apply_pauli_string(y, PauliString::single(1, PauliLetter::X)),
                 std::out_of_range);
}

TEST(Pauli, MatchesDenseOracleAndIsInvolution)
{
    Xoshiro256 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 10);
        const PauliString p = random_pauli(n, 1 + static_cast<int>(rng() % 10), rng);
        auto s = random_state(n, static_cast<std::uint64_t>(trial));
        const auto before = s.clone();
        if (n <= 6) {
            const Eigen::VectorXcd expected = oracle::pauli_dense(n, p) * to_eigen(s);
            apply_pauli_string(s, p);
            ASSERT_LT(max_diff(s, expected), 1e-14);
        } else {
            apply_pauli_string(s, p);
        }
        apply_pauli_string(s, p);
        ASSERT_LT(max_diff(s, before), 1e-12);
    }
}

TEST(Pauli, ParseAndFormat)
{
    const GridGeometry g(4, 4);
    const auto p = PauliString::parse("X:(4,4),X:(4,3),X:(3,4)", g);
    EXPECT_EQ(p.weight(), 3U);
    EXPECT_EQ(p.terms().at(15), PauliLetter::X);
    EXPECT_EQ(PauliString::parse(p.to_string(g), g), p);
    EXPECT_TRUE(PauliString::parse("Z:(1,1)", g).is_z_type());
    EXPECT_FALSE(p.is_z_type());
    EXPECT_THROW(PauliString::parse("", g), std::invalid_argument);
    EXPECT_THROW(PauliString::parse("Q:(1,1)", g), std::invalid_argument);
    EXPECT_THROW(PauliString::parse("X:(5,1)", g), std::invalid_argument);
    EXPECT_THROW(PauliString::parse("X:(1,1),Z:(1,1)", g), std::invalid_argument);
    EXPECT_THROW(PauliString::parse("X:(1,1", g), std::invalid_argument);
    EXPECT_THROW(PauliString::parse("X:(1,1)Z:(1,2)", g), std::invalid_argument);
}

TEST(Circuit, ForwardInverseIdentityUpToDepth40)
{
    for (int depth : {1, 7, 20, 40}) {
        const Circuit c = sample_circuit(EnsembleSpec::canonical(3, 3, depth, 8));
        auto s = random_state(9, static_cast<std::uint64_t>(depth));
        const auto before = s.clone();
        apply_circuit(s, c, Direction::forward);
        EXPECT_NEAR(s.norm_squared(), 1.0, 1e-10);
        apply_circuit(s, c, Direction::inverse);
        EXPECT_LT(max_diff(s, before), 1e-10) << depth;
    }
}

TEST(Circuit, DepthZeroUnchangedAndMismatchRejected)
{
    const Circuit c = sample_circuit(EnsembleSpec::canonical(2, 2, 0, 8));
    auto s = random_state(4, 3);
    const auto before = s.clone();
    apply_circuit(s, c);
    EXPECT_EQ(max_diff(s, before), 0.0);
    auto wrong = zero_state(5);
    EXPECT_THROW(apply_circuit(wrong, c), std::invalid_argument);
}

TEST(Circuit, KernelMatchesDenseOracleUpToSixQubits)
{
    const std::pair<int, int> grids[] = {{1, 2}, {1, 3}, {2, 2}, {1, 5}, {2, 3}};
    for (const auto& [rows, cols] : grids) {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            auto spec = EnsembleSpec::canonical(rows, cols, 1 + static_cast<int>(seed % 12), seed);
            if (seed % 5 == 0) {
                spec.distribution = GateDistribution::fixed_entangler;
                spec.entangler = named_entangler("sqrt-iswap");
            }
            const Circuit c = sample_circuit(spec);
            const int n = c.num_qubits();
            auto s = random_state(n, seed + 1000);
            const Eigen::VectorXcd expected = oracle::circuit_dense(c) * to_eigen(s);
            apply_circuit(s, c);
            ASSERT_LT(max_diff(s, expected), 1e-10) << rows << "x" << cols << " seed " << seed;
        }
    }
}

TEST(Circuit, NormPreservedOverManyGates)
{
    auto s = random_state(6, 4);
    Xoshiro256 rng(4);
    for (int i = 0; i < 10000; ++i) {
        const int a = static_cast<int>(rng() % 6);
        const int b = (a + 1 + static_cast<int>(rng() % 5)) % 6;
        apply_two_qubit_gate(s, sample_haar_two_qubit_gate(rng), a, b);
    }
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-10);
}

TEST(InnerProduct, Properties)
{
    const auto a = random_state(5, 1);
    const auto b = random_state(5, 2);
    EXPECT_NEAR(std::abs(inner_product(a, a) - Complex(1.0, 0.0)), 0.0, 1e-12);
    EXPECT_EQ(inner_product(StateVector::basis(3, 1), StateVector::basis(3, 4)),
              Complex(0.0, 0.0));
    EXPECT_NEAR(std::abs(inner_product(a, b) - std::conj(inner_product(b, a))), 0.0, 1e-15);
    EXPECT_THROW(inner_product(a, zero_state(4)), std::invalid_argument);
}

TEST(PauliExpectation, KnownValues)
{
    const auto z = PauliString::single(0, PauliLetter::Z);
    const auto x = PauliString::single(0, PauliLetter::X);
    EXPECT_DOUBLE_EQ(pauli_expectation(zero_state(1), z), 1.0);
    EXPECT_DOUBLE_EQ(pauli_expectation(zero_state(1), x), 0.0);
    EXPECT_DOUBLE_EQ(pauli_expectation(StateVector::basis(1, 1), z), -1.0);
}

TEST(PauliExpectation, MatchesDense)
{
    Xoshiro256 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const PauliString p = random_pauli(4, 3, rng);
        const auto s = random_state(4, static_cast<std::uint64_t>(trial));
        const Eigen::VectorXcd v = to_eigen(s);
        const Complex expected = v.dot(oracle::pauli_dense(4, p) * v);
        EXPECT_NEAR(pauli_expectation(s, p), expected.real(), 1e-12);
    }
}

TEST(DenseUnitary, Basics)
{
    const Circuit empty = sample_circuit(EnsembleSpec::canonical(2, 2, 0, 1));
    EXPECT_TRUE(dense_unitary(empty).isApprox(Eigen::MatrixXcd::Identity(16, 16)));

    Circuit swap_circuit;
    swap_circuit.geometry = GridGeometry(1, 2);
    GateMatrix4 swap = GateMatrix4::Zero();
    swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
    swap_circuit.layers.push_back(Layer{{}, {TwoQubitOp{swap, 0, 1}}});
    const Eigen::MatrixXcd m = dense_unitary(swap_circuit);
    Eigen::MatrixXcd perm = Eigen::MatrixXcd::Zero(4, 4);
    perm(0, 0) = perm(1, 2) = perm(2, 1) = perm(3, 3) = 1.0;
    EXPECT_TRUE(m == perm);

    const Circuit deep = sample_circuit(EnsembleSpec::canonical(3, 3, 10, 2));
    EXPECT_LT(unitarity_residual(dense_unitary(deep)), 1e-10);
    EXPECT_THROW(dense_unitary(sample_circuit(EnsembleSpec::canonical(3, 4, 1, 0))),
                 ResourceLimitError);
}

TEST(StateDump, RoundTrip)
{
    const auto s = random_state(4, 77);
    std::stringstream buf;
    write_state(s, buf);
    EXPECT_EQ(buf.str().size(), 8U + 16U * 16U);
    const auto back = read_state(buf);
    EXPECT_EQ(back.num_qubits(), 4);
    EXPECT_EQ(max_diff(s, back), 0.0);
    std::stringstream truncated(buf.str().substr(0, 20));
    EXPECT_THROW(read_state(truncated), ParseError);
}
