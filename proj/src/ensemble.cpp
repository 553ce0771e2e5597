// Copyright 2026 The otocsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include "otocsim/ensemble.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace otocsim {

double unitarity_residual(const Eigen::Ref<const Eigen::MatrixXcd>& u)
{
    const Eigen::MatrixXcd gram = u.adjoint() * u;
    return (gram - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd sample_haar_unitary(int dim, Xoshiro256& rng)
{
    // Ginibre matrix with E|z|^2 = 1, filled row-major, real part first.
    Eigen::MatrixXcd ginibre(dim, dim);
    const double scale = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            const double re = rng.normal();
            const double im = rng.normal();
            ginibre(i, j) = std::complex<double>(re * scale, im * scale);
        }
    }
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(ginibre);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd& packed = qr.matrixQR();
    // Q * diag(R_ii / |R_ii|) makes the decomposition unique, hence Haar.
    for (int j = 0; j < dim; ++j) {
        const std::complex<double> r = packed(j, j);
        const double mag = std::abs(r);
        q.col(j) *= mag > 0.0 ? r / mag : std::complex<double>(1.0, 0.0);
    }
    return q;
}

GateMatrix4 sample_haar_two_qubit_gate(Xoshiro256& rng)
{
    return sample_haar_unitary(4, rng);
}

GateMatrix2 sample_haar_single_qubit_gate(Xoshiro256& rng)
{
    return sample_haar_unitary(2, rng);
}

GateMatrix4 named_entangler(std::string_view name)
{
    using C = std::complex<double>;
    const C i{0.0, 1.0};
    GateMatrix4 g = GateMatrix4::Identity();
    if (name == "iswap") {
        g(1, 1) = 0.0;
        g(2, 2) = 0.0;
        g(1, 2) = i;
        g(2, 1) = i;
    } else if (name == "sqrt-iswap") {
        const double h = 1.0 / std::sqrt(2.0);
        g(1, 1) = h;
        g(2, 2) = h;
        g(1, 2) = i * h;
        g(2, 1) = i * h;
    } else if (name == "cz") {
        g(3, 3) = -1.0;
    } else {
        throw std::invalid_argument("unknown entangler \"" + std::string(name) +
                                    "\" (expected iswap, sqrt-iswap or cz)");
    }
    return g;
}

LayerKind layer_kind(int layer_index) noexcept
{
    switch (layer_index % 4) {
    case 0:
        return LayerKind::horizontal_even;
    case 1:
        return LayerKind::vertical_even;
    case 2:
        return LayerKind::horizontal_odd;
    default:
        return LayerKind::vertical_odd;
    }
}

LayerPattern layer_pattern(const GridGeometry& geometry, LayerKind kind)
{
    const int rows = geometry.rows();
    const int cols = geometry.cols();
    LayerPattern pattern;
    const bool horizontal =
        kind == LayerKind::horizontal_even || kind == LayerKind::horizontal_odd;
    // 1-based offset of the first pair: even layers start at 1, odd layers at 2.
    const int first =
        (kind == LayerKind::horizontal_even || kind == LayerKind::vertical_even) ? 1 : 2;
    if (horizontal) {
        for (int r = 1; r <= rows; ++r) {
            for (int c = first; c + 1 <= cols; c += 2) {
                pattern.push_back({geometry.index({r, c}), geometry.index({r, c + 1})});
            }
        }
    } else {
        for (int r = first; r + 1 <= rows; r += 2) {
            for (int c = 1; c <= cols; ++c) {
                pattern.push_back({geometry.index({r, c}), geometry.index({r + 1, c})});
            }
        }
    }
    return pattern;
}

std::vector<LayerPattern> brickwork_layout(const GridGeometry& geometry, int depth)
{
    if (depth < 0) {
        throw std::invalid_argument("depth must be non-negative, got " + std::to_string(depth));
    }
    std::vector<LayerPattern> layout;
    layout.reserve(static_cast<std::size_t>(depth));
    for (int d = 0; d < depth; ++d) {
        layout.push_back(layer_pattern(geometry, layer_kind(d)));
    }
    return layout;
}

std::string to_string(GateDistribution d)
{
    return d == GateDistribution::haar_2q ? "haar-2q" : "fixed-entangler";
}

GateDistribution parse_gate_distribution(std::string_view name)
{
    if (name == "haar-2q") {
        return GateDistribution::haar_2q;
    }
    if (name == "fixed-entangler") {
        return GateDistribution::fixed_entangler;
    }
    throw std::invalid_argument("unknown ensemble \"" + std::string(name) +
                                "\" (expected haar-2q or fixed-entangler)");
}

std::size_t Circuit::gate_count() const noexcept
{
    std::size_t count = 0;
    for (const auto& layer : layers) {
        count += layer.ops.size() + layer.singles.size();
    }
    return count;
}

void Circuit::validate() const
{
    const int n = num_qubits();
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const std::string where = "layer " + std::to_string(l);
        std::vector<bool> used_single(static_cast<std::size_t>(n), false);
        for (const auto& op : layers[l].singles) {
            if (!geometry.contains(op.site)) {
                throw std::invalid_argument(where + ": single-qubit site " +
                                            std::to_string(op.site) + " out of range");
            }
            if (used_single[static_cast<std::size_t>(op.site)]) {
                throw std::invalid_argument(where + ": site " + std::to_string(op.site) +
                                            " has two single-qubit gates");
            }
            used_single[static_cast<std::size_t>(op.site)] = true;
            if (unitarity_residual(op.gate) >= kUnitarityTolerance) {
                throw std::invalid_argument(where + ": single-qubit gate is not unitary");
            }
        }
        std::vector<bool> used(static_cast<std::size_t>(n), false);
        for (const auto& op : layers[l].ops) {
            if (!geometry.contains(op.a) || !geometry.contains(op.b)) {
                throw std::invalid_argument(where + ": gate site out of range");
            }
            if (op.a == op.b) {
                throw std::invalid_argument(where + ": gate acts twice on site " +
                                            std::to_string(op.a));
            }
            for (int s : {op.a, op.b}) {
                if (used[static_cast<std::size_t>(s)]) {
                    throw std::invalid_argument(where + ": site " + std::to_string(s) +
                                                " appears in two gates");
                }
                used[static_cast<std::size_t>(s)] = true;
            }
            if (unitarity_residual(op.gate) >= kUnitarityTolerance) {
                throw std::invalid_argument(where + ": two-qubit gate is not unitary");
            }
        }
    }
}

EnsembleSpec EnsembleSpec::canonical(int rows, int cols, int depth, std::uint64_t seed)
{
    EnsembleSpec spec;
    spec.geometry = GridGeometry(rows, cols);
    spec.depth = depth;
    spec.butterfly = PauliString::single(spec.geometry.index({rows, cols}), PauliLetter::X);
    spec.measurement = PauliString::single(0, PauliLetter::Z);
    spec.master_seed = seed;
    return spec;
}

void EnsembleSpec::validate() const
{
    if (depth < 0) {
        throw std::invalid_argument("depth must be non-negative, got " + std::to_string(depth));
    }
    if (butterfly.empty()) {
        throw std::invalid_argument("butterfly operator must be nonempty");
    }
    if (measurement.empty()) {
        throw std::invalid_argument("measurement operator must be nonempty");
    }
    if (!measurement.is_z_type()) {
        throw std::invalid_argument("measurement operator must be Z-type so that M|0^n> = |0^n>");
    }
    if (butterfly.max_site() >= geometry.num_qubits() ||
        measurement.max_site() >= geometry.num_qubits()) {
        throw std::invalid_argument("operator site outside " + geometry.describe() + " grid");
    }
    if (distribution == GateDistribution::fixed_entangler &&
        unitarity_residual(entangler) >= kUnitarityTolerance) {
        throw std::invalid_argument("fixed entangler is not unitary");
    }
}

Circuit sample_circuit(const EnsembleSpec& spec, std::uint64_t seed)
{
    spec.validate();
    Circuit circuit;
    circuit.geometry = spec.geometry;
    circuit.seed = seed;
    circuit.distribution = spec.distribution;
    circuit.layers.resize(static_cast<std::size_t>(spec.depth));
    const int n = spec.geometry.num_qubits();
    const auto layout = brickwork_layout(spec.geometry, spec.depth);
    // Each slot owns its stream, so slot order never affects the draws.
    for (int l = 0; l < spec.depth; ++l) {
        Layer& layer = circuit.layers[static_cast<std::size_t>(l)];
        const auto& pattern = layout[static_cast<std::size_t>(l)];
        if (spec.distribution == GateDistribution::fixed_entangler) {
            layer.singles.reserve(static_cast<std::size_t>(n));
            for (int s = 0; s < n; ++s) {
                Xoshiro256 rng(derive_slot_seed(seed, static_cast<std::uint64_t>(l),
                                                static_cast<std::uint64_t>(s),
                                                StreamKind::single_qubit));
                layer.singles.push_back({sample_haar_single_qubit_gate(rng), s});
            }
        }
        layer.ops.reserve(pattern.size());
        for (std::size_t slot = 0; slot < pattern.size(); ++slot) {
            const SitePair pair = pattern[slot];
            if (spec.distribution == GateDistribution::haar_2q) {
                Xoshiro256 rng(derive_slot_seed(seed, static_cast<std::uint64_t>(l), slot));
                layer.ops.push_back({sample_haar_two_qubit_gate(rng), pair.a, pair.b});
            } else {
                layer.ops.push_back({spec.entangler, pair.a, pair.b});
            }
        }
    }
    return circuit;
}

}  // namespace otocsim
