// Copyright 2026 The otocsim Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <set>
#include <span>
#include <vector>

#include "otocsim/ensemble.hpp"
#include "otocsim/pauli.hpp"

namespace otocsim {

using SupportSet = std::set<int>;

/// Walks `layers` in the given order; every pair touching the support adds its partner.
SupportSet propagate_support(const GridGeometry& geometry, std::span<const LayerPattern> layers,
                             const SupportSet& initial);

/// Support of U^dagger B U for a depth-`depth` brickwork U (layers walked last to first).
SupportSet butterfly_support(const GridGeometry& geometry, int depth, const PauliString& butterfly);

/// True when B's light cone misses M's sites: then C^2 = 1 for every gate assignment.
bool commutes_by_lightcone(const GridGeometry& geometry, int depth, const PauliString& butterfly,
                           const PauliString& measurement);

/// Smallest depth at which commutes_by_lightcone turns false.
int min_connecting_depth(const GridGeometry& geometry, const PauliString& butterfly,
                         const PauliString& measurement);

/// |butterfly_support(d)| for d = 0..max_depth.
std::vector<std::size_t> support_size_by_depth(const GridGeometry& geometry, int max_depth,
                                               const PauliString& butterfly);

}  // namespace otocsim
