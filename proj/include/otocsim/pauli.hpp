// Copyright 2026 The otocsim Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "otocsim/geometry.hpp"

namespace otocsim {

enum class PauliLetter : char { X = 'X', Y = 'Y', Z = 'Z' };

/// Tensor product of single-site Paulis with identity elsewhere; no phase.
class PauliString {
public:
    PauliString() = default;

    /// Sets the letter on `site`, replacing any previous letter there.
    PauliString& set(int site, PauliLetter letter);

    static PauliString single(int site, PauliLetter letter)
    {
        return PauliString{}.set(site, letter);
    }

    /// Parses "X:(4,4),X:(4,3)" with 1-based (row,col) coordinates.
    static PauliString parse(std::string_view text, const GridGeometry& geometry);

    /// Inverse of parse().
    std::string to_string(const GridGeometry& geometry) const;

    const std::map<int, PauliLetter>& terms() const noexcept { return terms_; }
    std::vector<int> sites() const;
    bool empty() const noexcept { return terms_.empty(); }
    std::size_t weight() const noexcept { return terms_.size(); }
    bool is_z_type() const noexcept;
    int max_site() const noexcept { return terms_.empty() ? -1 : terms_.rbegin()->first; }

    /// Bits flipped by the string (X and Y sites).
    std::uint64_t x_mask() const noexcept;
    /// Bits that pick up a sign (Z and Y sites).
    std::uint64_t z_mask() const noexcept;
    int y_count() const noexcept;

    friend bool operator==(const PauliString&, const PauliString&) = default;

private:
    std::map<int, PauliLetter> terms_;
};

}  // namespace otocsim
