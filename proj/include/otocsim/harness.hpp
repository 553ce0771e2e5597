// Copyright 2026 The otocsim Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "otocsim/ensemble.hpp"

namespace otocsim {

/// One (instance, depth, k) evaluation.
struct OtocRecord {
    std::uint64_t instance_seed = 0;
    int rows = 1;
    int cols = 1;
    int depth = 0;
    int k = 1;
    std::string ensemble;
    double exact = 0.0;
    std::optional<double> estimate;
    std::optional<double> standard_error;
    std::optional<std::int64_t> shots;
    int d_star = 0;
    double wall_time_s = 0.0;

    friend bool operator==(const OtocRecord&, const OtocRecord&) = default;
};

struct RunOptions {
    /// Shot estimates are added when set. Requires a single-site Z measurement.
    std::optional<std::int64_t> shots;
    /// Worker threads; results do not depend on it.
    int threads = 1;
};

/// Instance i is sampled with derive_instance_seed(spec.master_seed, i).
/// Output order is (k, instance).
std::vector<OtocRecord> run_ensemble(const EnsembleSpec& spec, int instances,
                                     std::span<const int> ks, const RunOptions& options = {});

struct GroupStats {
    int rows = 1;
    int cols = 1;
    int depth = 0;
    int k = 1;
    std::size_t count = 0;
    double mean = 0.0;
    /// Unbiased (n-1); zero for a single record.
    double variance = 0.0;
    double std = 0.0;
};

/// Groups by (rows, cols, depth, k), in order of first appearance.
std::vector<GroupStats> fluctuation_stats(std::span<const OtocRecord> records);

struct ScalingRow {
    int num_qubits = 0;
    int depth = 0;
    int k = 1;
    double std = 0.0;
};

/// std vs n, sorted by (depth, k, n). Reported only, no scaling law asserted.
std::vector<ScalingRow> fluctuation_scaling(std::span<const GroupStats> groups);

struct SweepTable {
    EnsembleSpec spec;
    std::vector<int> depths;
    std::vector<int> ks;
    int instances = 0;
    std::vector<OtocRecord> rows;
    std::vector<GroupStats> aggregates;
};

/// run_ensemble per depth. Rows ordered by (depth, k, instance).
SweepTable depth_sweep(const EnsembleSpec& base, std::span<const int> depths, int instances,
                       std::span<const int> ks, const RunOptions& options = {});

/// Notes every consecutive depth pair where the order-k mean rises by more than two
/// pooled standard errors. Empty when the sweep is monotone non-increasing.
std::vector<std::string> transition_violations(const SweepTable& table, int k);

/// Sample Pearson correlation. Throws std::domain_error when either input is constant.
double pearson(std::span<const double> xs, std::span<const double> ys);

inline constexpr const char* kResultsCsvHeader =
    "instance_seed,rows,cols,depth,k,ensemble,exact,estimate,stderr,shots,d_star,wall_time_s";

void write_records_csv(std::ostream& out, std::span<const OtocRecord> records);
/// Throws ParseError naming line and field.
std::vector<OtocRecord> read_records_csv(std::istream& in);

/// Writes the CSV to `path` and the spec snapshot plus aggregates to `path` + ".meta.json".
void save_results(const SweepTable& table, const std::filesystem::path& path);
std::vector<OtocRecord> load_results(const std::filesystem::path& path);

}  // namespace otocsim
