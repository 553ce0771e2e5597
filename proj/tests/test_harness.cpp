// Copyright 2026 The otocsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "otocsim/circuit_io.hpp"
#include "otocsim/errors.hpp"
#include "otocsim/harness.hpp"
#include "otocsim/lightcone.hpp"
#include "otocsim/otoc.hpp"

using namespace otocsim;

namespace {

std::string csv_without_wall_time(std::span<const OtocRecord> records)
{
    std::vector<OtocRecord> copy(records.begin(), records.end());
    for (auto& r : copy) {
        r.wall_time_s = 0.0;
    }
    std::ostringstream out;
    write_records_csv(out, copy);
    return out.str();
}

OtocRecord record_with(double exact, int depth = 3, int k = 1)
{
    OtocRecord r;
    r.exact = exact;
    r.depth = depth;
    r.k = k;
    r.ensemble = "haar-2q";
    return r;
}

std::filesystem::path temp_path(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("otocsim_test_" + name);
}

}  // namespace

TEST(RunEnsemble, CountsAndOrdering)
{
    const auto spec = EnsembleSpec::canonical(2, 2, 3, 9);
    const std::vector<int> ks{1, 2};
    const auto records = run_ensemble(spec, 5, ks);
    ASSERT_EQ(records.size(), 10U);
    for (std::size_t i = 0; i < records.size(); ++i) {
        EXPECT_EQ(records[i].k, ks[i / 5]);
        EXPECT_EQ(records[i].instance_seed, derive_instance_seed(9, i % 5));
        EXPECT_EQ(records[i].d_star, 2);
        EXPECT_FALSE(records[i].estimate.has_value());
    }
}

TEST(RunEnsemble, InstanceReproducibleInIsolation)
{
    const auto spec = EnsembleSpec::canonical(2, 3, 6, 4);
    const std::vector<int> ks{2};
    const auto records = run_ensemble(spec, 4, ks);
    const Circuit c = sample_circuit(spec, derive_instance_seed(4, 3));
    const CorrelatorSpec corr{c, spec.butterfly, spec.measurement, 2};
    EXPECT_EQ(records[3].exact, otoc_moment(corr));
}

TEST(RunEnsemble, DeterministicAcrossThreadCounts)
{
    const auto spec = EnsembleSpec::canonical(3, 3, 8, 2024);
    const std::vector<int> ks{1, 2};
    RunOptions opts;
    opts.shots = 500;
    const std::string reference = csv_without_wall_time(run_ensemble(spec, 12, ks, opts));
    for (int threads : {1, 4, 8}) {
        opts.threads = threads;
        EXPECT_EQ(csv_without_wall_time(run_ensemble(spec, 12, ks, opts)), reference) << threads;
    }
}

TEST(RunEnsemble, ShallowCornersAllOne)
{
    const auto spec = EnsembleSpec::canonical(3, 3, 2, 1);
    ASSERT_GT(min_connecting_depth(spec.geometry, spec.butterfly, spec.measurement), 2);
    const std::vector<int> ks{2};
    for (const auto& r : run_ensemble(spec, 10, ks)) {
        EXPECT_NEAR(r.exact, 1.0, 1e-12);
    }
}

TEST(RunEnsemble, InvalidArguments)
{
    const auto spec = EnsembleSpec::canonical(2, 2, 3, 9);
    const std::vector<int> ks{1};
    const std::vector<int> none;
    const std::vector<int> zero{0};
    EXPECT_THROW(run_ensemble(spec, 0, ks), std::invalid_argument);
    EXPECT_THROW(run_ensemble(spec, 1, none), std::invalid_argument);
    EXPECT_THROW(run_ensemble(spec, 1, zero), std::invalid_argument);
    auto multi = spec;
    multi.measurement.set(1, PauliLetter::Z);
    RunOptions opts;
    opts.shots = 10;
    EXPECT_THROW(run_ensemble(multi, 1, ks, opts), UnsupportedEstimatorError);
}

TEST(Stats, TrivialGroups)
{
    const std::vector<OtocRecord> ones{record_with(1), record_with(1), record_with(1)};
    const auto g = fluctuation_stats(ones);
    ASSERT_EQ(g.size(), 1U);
    EXPECT_EQ(g[0].count, 3U);
    EXPECT_DOUBLE_EQ(g[0].mean, 1.0);
    EXPECT_DOUBLE_EQ(g[0].variance, 0.0);

    const std::vector<OtocRecord> pm{record_with(1), record_with(-1)};
    const auto h = fluctuation_stats(pm);
    EXPECT_DOUBLE_EQ(h[0].mean, 0.0);
    EXPECT_DOUBLE_EQ(h[0].variance, 2.0);
    EXPECT_DOUBLE_EQ(h[0].std, std::sqrt(2.0));
    EXPECT_THROW(fluctuation_stats(std::vector<OtocRecord>{}), std::invalid_argument);
}

TEST(Stats, GroupsByDepthAndK)
{
    const std::vector<OtocRecord> recs{record_with(1, 1, 1), record_with(0.5, 2, 1),
                                       record_with(0.0, 1, 2), record_with(0.25, 2, 1)};
    const auto g = fluctuation_stats(recs);
    ASSERT_EQ(g.size(), 3U);
    EXPECT_EQ(g[1].depth, 2);
    EXPECT_EQ(g[1].count, 2U);
    EXPECT_DOUBLE_EQ(g[1].mean, 0.375);
    const auto scaling = fluctuation_scaling(g);
    ASSERT_EQ(scaling.size(), 3U);
    EXPECT_EQ(scaling[0].depth, 1);
}

TEST(Pearson, KnownCases)
{
    const std::vector<double> xs{0.1, 0.4, -0.3, 0.9, 0.2};
    std::vector<double> neg;
    for (double x : xs) {
        neg.push_back(-x);
    }
    EXPECT_NEAR(pearson(xs, xs), 1.0, 1e-15);
    EXPECT_NEAR(pearson(xs, neg), -1.0, 1e-15);
    const std::vector<double> flat{2.0, 2.0, 2.0, 2.0, 2.0};
    EXPECT_THROW(pearson(flat, xs), std::domain_error);
    EXPECT_THROW(pearson(std::vector<double>{1.0}, std::vector<double>{1.0}),
                 std::invalid_argument);
    EXPECT_THROW(pearson(xs, std::vector<double>{1.0, 2.0}), std::invalid_argument);
    // sxy = 8, sxx = syy = 10.
    const std::vector<double> a{1, 2, 3, 4, 5};
    const std::vector<double> b{2, 1, 4, 3, 5};
    EXPECT_NEAR(pearson(a, b), 0.8, 1e-15);
}

TEST(Sweep, ShallowDepthsExactAndAggregatesConsistent)
{
    const auto base = EnsembleSpec::canonical(3, 3, 0, 5);
    const int d_star = min_connecting_depth(base.geometry, base.butterfly, base.measurement);
    const std::vector<int> depths{1, 2, 3, 4, d_star + 2};
    const std::vector<int> ks{1, 2};
    const SweepTable table = depth_sweep(base, depths, 20, ks);
    EXPECT_EQ(table.rows.size(), 20U * depths.size() * ks.size());
    for (const auto& g : table.aggregates) {
        if (g.depth < d_star) {
            EXPECT_NEAR(g.mean, 1.0, 1e-12);
            EXPECT_NEAR(g.variance, 0.0, 1e-20);
        }
        if (g.depth == d_star + 2) {
            EXPECT_GT(g.variance, 0.0);
        }
        // Recompute the mean from raw rows.
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& r : table.rows) {
            if (r.depth == g.depth && r.k == g.k) {
                sum += r.exact;
                ++n;
            }
        }
        EXPECT_EQ(n, g.count);
        EXPECT_NEAR(sum / static_cast<double>(n), g.mean, 1e-12);
    }
    // Row order is (depth, k, instance).
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        const auto& p = table.rows[i - 1];
        const auto& q = table.rows[i];
        EXPECT_TRUE(p.depth < q.depth || (p.depth == q.depth && p.k <= q.k));
    }
    EXPECT_THROW(depth_sweep(base, std::vector<int>{}, 1, ks), std::invalid_argument);
}

TEST(Sweep, TransitionViolationsDetectsRise)
{
    SweepTable table;
    table.depths = {1, 2, 3};
    table.aggregates = {GroupStats{3, 3, 1, 2, 10, 1.0, 0.0, 0.0},
                        GroupStats{3, 3, 2, 2, 10, 0.2, 0.01, 0.1},
                        GroupStats{3, 3, 3, 2, 10, 0.9, 0.01, 0.1}};
    const auto notes = transition_violations(table, 2);
    ASSERT_EQ(notes.size(), 1U);
    EXPECT_NE(notes[0].find("depth 3"), std::string::npos);
    EXPECT_TRUE(transition_violations(table, 1).empty());
}

TEST(Csv, RoundTripAndRowCount)
{
    const auto spec = EnsembleSpec::canonical(2, 2, 4, 77);
    RunOptions opts;
    opts.shots = 100;
    const std::vector<int> depths{2, 4};
    const std::vector<int> ks{1, 2};
    const SweepTable table = depth_sweep(spec, depths, 3, ks, opts);
    const auto path = temp_path("results.csv");
    save_results(table, path);
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    EXPECT_EQ(first, kResultsCsvHeader);
    std::size_t lines = 1;
    for (std::string line; std::getline(in, line);) {
        ++lines;
    }
    EXPECT_EQ(lines, table.rows.size() + 1);
    EXPECT_EQ(load_results(path), table.rows);

    auto meta_path = path;
    meta_path += ".meta.json";
    std::ifstream meta_in(meta_path);
    const auto meta = nlohmann::json::parse(meta_in);
    EXPECT_EQ(meta["spec"]["master_seed"].get<std::uint64_t>(), 77U);
    EXPECT_EQ(meta["aggregates"].size(), table.aggregates.size());
    EXPECT_EQ(ensemble_spec_from_json(meta["spec"]).butterfly, spec.butterfly);
    std::filesystem::remove(path);
    std::filesystem::remove(meta_path);
}

TEST(Csv, MalformedInputsNameLineAndField)
{
    const std::string header = std::string(kResultsCsvHeader) + "\n";
    auto expect_error = [](const std::string& text, const std::string& needle) {
        std::istringstream in(text);
        try {
            (void)read_records_csv(in);
            FAIL() << "expected ParseError for: " << text;
        } catch (const ParseError& e) {
            EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
        }
    };
    expect_error("a,b\n", "line 1");
    expect_error(header + "1,2,2,3,1,haar-2q,0.5,,,,2\n", "line 2");
    expect_error(header + "1,2,2,3,1,haar-2q,abc,,,,2,0.1\n", "field exact");
    expect_error(header + "1,2,2,3,1,haar-2q,0.5,0.4,,,2,0.1\n", "line 2");
}

TEST(CircuitIo, RoundTripBitExact)
{
    auto spec = EnsembleSpec::canonical(3, 3, 8, 7);
    for (auto dist : {GateDistribution::haar_2q, GateDistribution::fixed_entangler}) {
        spec.distribution = dist;
        spec.entangler = named_entangler("sqrt-iswap");
        const Circuit c = sample_circuit(spec);
        const auto path = temp_path("circuit.json");
        save_circuit(c, path);
        const Circuit back = load_circuit(path);
        EXPECT_EQ(dump_circuit(back), dump_circuit(c));
        ASSERT_EQ(back.layers.size(), c.layers.size());
        for (std::size_t l = 0; l < c.layers.size(); ++l) {
            for (std::size_t i = 0; i < c.layers[l].ops.size(); ++i) {
                EXPECT_TRUE(back.layers[l].ops[i].gate == c.layers[l].ops[i].gate);
            }
            EXPECT_EQ(back.layers[l].singles.size(), c.layers[l].singles.size());
        }
        EXPECT_EQ(back.seed, c.seed);
        EXPECT_EQ(back.distribution, dist);
        std::filesystem::remove(path);
    }
}

TEST(CircuitIo, SchemaShape)
{
    const Circuit c = sample_circuit(EnsembleSpec::canonical(1, 2, 1, 3));
    const auto doc = circuit_to_json(c);
    EXPECT_EQ(doc["version"], 1);
    EXPECT_EQ(doc["rows"], 1);
    EXPECT_EQ(doc["cols"], 2);
    EXPECT_EQ(doc["seed"], 3);
    EXPECT_EQ(doc["ensemble"], "haar-2q");
    const auto& op = doc["layers"][0]["ops"][0];
    EXPECT_EQ(op["q"], nlohmann::json::array({0, 1}));
    EXPECT_EQ(op["u"].size(), 4U);
    EXPECT_EQ(op["u"][0].size(), 4U);
    EXPECT_EQ(op["u"][0][0].size(), 2U);
    EXPECT_FALSE(doc["layers"][0].contains("singles"));
}

TEST(CircuitIo, MalformedInputs)
{
    const std::string good = dump_circuit(sample_circuit(EnsembleSpec::canonical(2, 2, 2, 1)));
    try {
        (void)parse_circuit(good.substr(0, good.size() / 2));
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("offset"), std::string::npos) << e.what();
    }
    auto doc = nlohmann::json::parse(good);
    doc["version"] = 2;
    EXPECT_THROW(circuit_from_json(doc), ParseError);
    doc = nlohmann::json::parse(good);
    doc["layers"][0]["ops"][0]["q"] = {0, 9};
    EXPECT_THROW(circuit_from_json(doc), ParseError);
    doc = nlohmann::json::parse(good);
    doc["layers"][0]["ops"][0]["u"][0][0] = {7.0, 0.0};
    EXPECT_THROW(circuit_from_json(doc), ParseError);
    doc = nlohmann::json::parse(good);
    doc.erase("rows");
    EXPECT_THROW(circuit_from_json(doc), ParseError);
    EXPECT_THROW(load_circuit(temp_path("does-not-exist.json")), std::runtime_error);
}
