// Copyright 2026 The otocsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include "otocsim/lightcone.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace otocsim {

namespace {

void check_in_range(const GridGeometry& geometry, const PauliString& p, const char* what)
{
    if (p.max_site() >= geometry.num_qubits()) {
        throw std::out_of_range(std::string(what) + " operator has a site outside the " +
                                geometry.describe() + " grid");
    }
}

bool intersects(const SupportSet& support, const PauliString& p)
{
    return std::ranges::any_of(p.terms(), [&](const auto& term) {
        return support.contains(term.first);
    });
}

}  // namespace

SupportSet propagate_support(const GridGeometry& geometry, std::span<const LayerPattern> layers,
                             const SupportSet& initial)
{
    if (initial.empty()) {
        throw std::invalid_argument("initial support must be nonempty");
    }
    for (int s : initial) {
        if (!geometry.contains(s)) {
            throw std::out_of_range("support site " + std::to_string(s) + " outside the " +
                                    geometry.describe() + " grid");
        }
    }
    SupportSet support = initial;
    for (const auto& layer : layers) {
        // Pairs within a layer are disjoint, so in-place update is order independent.
        for (const SitePair pair : layer) {
            const bool has_a = support.contains(pair.a);
            const bool has_b = support.contains(pair.b);
            if (has_a != has_b) {
                support.insert(has_a ? pair.b : pair.a);
            }
        }
    }
    return support;
}

SupportSet butterfly_support(const GridGeometry& geometry, int depth, const PauliString& butterfly)
{
    check_in_range(geometry, butterfly, "butterfly");
    auto layout = brickwork_layout(geometry, depth);
    // U^dagger B U conjugates B by the last layer first.
    std::reverse(layout.begin(), layout.end());
    const auto sites = butterfly.sites();
    return propagate_support(geometry, layout, SupportSet(sites.begin(), sites.end()));
}

bool commutes_by_lightcone(const GridGeometry& geometry, int depth, const PauliString& butterfly,
                           const PauliString& measurement)
{
    check_in_range(geometry, measurement, "measurement");
    return !intersects(butterfly_support(geometry, depth, butterfly), measurement);
}

int min_connecting_depth(const GridGeometry& geometry, const PauliString& butterfly,
                         const PauliString& measurement)
{
    // Any two sites connect within one pass of 4*(rows+cols) layers.
    const int limit = 4 * (geometry.rows() + geometry.cols()) + 4;
    for (int d = 0; d <= limit; ++d) {
        if (!commutes_by_lightcone(geometry, d, butterfly, measurement)) {
            return d;
        }
    }
    throw std::logic_error("light cones never met within " + std::to_string(limit) + " layers");
}

std::vector<std::size_t> support_size_by_depth(const GridGeometry& geometry, int max_depth,
                                               const PauliString& butterfly)
{
    if (max_depth < 0) {
        throw std::invalid_argument("max depth must be non-negative");
    }
    std::vector<std::size_t> sizes;
    sizes.reserve(static_cast<std::size_t>(max_depth) + 1);
    for (int d = 0; d <= max_depth; ++d) {
        sizes.push_back(butterfly_support(geometry, d, butterfly).size());
    }
    return sizes;
}

}  // namespace otocsim
