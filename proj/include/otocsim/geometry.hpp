// Copyright 2026 The otocsim Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace otocsim {

/// 1-based grid coordinate, (1,1) is the top-left corner.
struct Site {
    int row = 1;
    int col = 1;

    friend bool operator==(const Site&, const Site&) = default;
};

/// Rectangular grid of qubits. Site (r,c) has linear index (r-1)*cols + (c-1).
class GridGeometry {
public:
    GridGeometry() = default;
    GridGeometry(int rows, int cols) : rows_(rows), cols_(cols)
    {
        if (rows < 1 || cols < 1) {
            throw std::invalid_argument("grid geometry must be at least 1x1, got " +
                                        std::to_string(rows) + "x" + std::to_string(cols));
        }
    }

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    int num_qubits() const noexcept { return rows_ * cols_; }

    bool contains(Site s) const noexcept
    {
        return s.row >= 1 && s.row <= rows_ && s.col >= 1 && s.col <= cols_;
    }
    bool contains(int index) const noexcept { return index >= 0 && index < num_qubits(); }

    int index(Site s) const
    {
        if (!contains(s)) {
            throw std::out_of_range("site (" + std::to_string(s.row) + "," +
                                    std::to_string(s.col) + ") outside " + describe() + " grid");
        }
        return (s.row - 1) * cols_ + (s.col - 1);
    }

    Site site(int index) const
    {
        if (!contains(index)) {
            throw std::out_of_range("site index " + std::to_string(index) + " outside " +
                                    describe() + " grid");
        }
        return {index / cols_ + 1, index % cols_ + 1};
    }

    std::string describe() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

    friend bool operator==(const GridGeometry&, const GridGeometry&) = default;

private:
    int rows_ = 1;
    int cols_ = 1;
};

}  // namespace otocsim
