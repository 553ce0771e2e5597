// Copyright 2026 The otocsim Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace otocsim {

/// A request that would exceed the qubit memory guard.
class ResourceLimitError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed circuit JSON or results CSV.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown by the shot estimator when M is not a single-site Z.
class UnsupportedEstimatorError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace otocsim
