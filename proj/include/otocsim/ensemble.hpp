// Copyright 2026 The otocsim Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "otocsim/geometry.hpp"
#include "otocsim/pauli.hpp"
#include "otocsim/rng.hpp"

namespace otocsim {

using GateMatrix2 = Eigen::Matrix2cd;
/// Row/column index of a two-qubit gate is 2*bit_a + bit_b.
using GateMatrix4 = Eigen::Matrix4cd;

/// Unitarity tolerance on max |U^dagger U - I|.
inline constexpr double kUnitarityTolerance = 1e-12;

/// max |U^dagger U - I| over all entries.
double unitarity_residual(const Eigen::Ref<const Eigen::MatrixXcd>& u);

/// Haar-distributed unitary of dimension `dim` (Ginibre -> QR -> phase fix).
Eigen::MatrixXcd sample_haar_unitary(int dim, Xoshiro256& rng);
GateMatrix4 sample_haar_two_qubit_gate(Xoshiro256& rng);
GateMatrix2 sample_haar_single_qubit_gate(Xoshiro256& rng);

/// Named entanglers usable by the fixed-entangler ensemble: "iswap", "sqrt-iswap", "cz".
GateMatrix4 named_entangler(std::string_view name);

struct SitePair {
    int a = 0;
    int b = 0;

    friend bool operator==(const SitePair&, const SitePair&) = default;
};

/// Site pairs of one brickwork layer, no gates attached.
using LayerPattern = std::vector<SitePair>;

enum class LayerKind { horizontal_even, vertical_even, horizontal_odd, vertical_odd };

/// Kind of layer `layer_index` (0-based) in the repeating H-even, V-even, H-odd, V-odd cycle.
LayerKind layer_kind(int layer_index) noexcept;

LayerPattern layer_pattern(const GridGeometry& geometry, LayerKind kind);

/// First `depth` patterns of the brickwork cycle. Empty patterns are kept.
std::vector<LayerPattern> brickwork_layout(const GridGeometry& geometry, int depth);

struct TwoQubitOp {
    GateMatrix4 gate;
    int a = 0;
    int b = 0;
};

struct SingleQubitOp {
    GateMatrix2 gate;
    int site = 0;
};

/// One circuit layer: single-qubit gates (applied first) then disjoint two-qubit gates.
struct Layer {
    std::vector<SingleQubitOp> singles;
    std::vector<TwoQubitOp> ops;
};

enum class GateDistribution { haar_2q, fixed_entangler };

std::string to_string(GateDistribution d);
GateDistribution parse_gate_distribution(std::string_view name);

struct Circuit {
    GridGeometry geometry;
    std::vector<Layer> layers;
    std::uint64_t seed = 0;
    GateDistribution distribution = GateDistribution::haar_2q;

    int num_qubits() const noexcept { return geometry.num_qubits(); }
    int depth() const noexcept { return static_cast<int>(layers.size()); }
    std::size_t gate_count() const noexcept;

    /// Throws std::invalid_argument naming the first violated invariant.
    void validate() const;
};

/// The circuit ensemble plus the operator pair evaluated on it.
struct EnsembleSpec {
    GridGeometry geometry;
    int depth = 0;
    GateDistribution distribution = GateDistribution::haar_2q;
    /// Only read by the fixed-entangler distribution.
    GateMatrix4 entangler = GateMatrix4::Identity();
    PauliString butterfly;
    PauliString measurement;
    std::uint64_t master_seed = 0;

    /// Default operators: X at the far corner (rows,cols), Z at (1,1).
    static EnsembleSpec canonical(int rows, int cols, int depth, std::uint64_t seed);

    void validate() const;
};

/// Samples one circuit using `seed` as the per-circuit master seed.
Circuit sample_circuit(const EnsembleSpec& spec, std::uint64_t seed);
inline Circuit sample_circuit(const EnsembleSpec& spec)
{
    return sample_circuit(spec, spec.master_seed);
}

}  // namespace otocsim
