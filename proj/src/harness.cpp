// Copyright 2026 The otocsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include "otocsim/harness.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <nlohmann/json.hpp>

#include "otocsim/circuit_io.hpp"
#include "otocsim/errors.hpp"
#include "otocsim/lightcone.hpp"
#include "otocsim/otoc.hpp"
#include "parallel.hpp"

namespace otocsim {

std::vector<OtocRecord> run_ensemble(const EnsembleSpec& spec, int instances,
                                     std::span<const int> ks, const RunOptions& options)
{
    spec.validate();
    if (instances < 1) {
        throw std::invalid_argument("instances must be >= 1, got " + std::to_string(instances));
    }
    if (ks.empty()) {
        throw std::invalid_argument("at least one moment order k is required");
    }
    for (int k : ks) {
        if (k < 1) {
            throw std::invalid_argument("moment order k must be >= 1, got " + std::to_string(k));
        }
    }
    if (options.shots) {
        if (*options.shots < 1) {
            throw std::invalid_argument("shots must be >= 1");
        }
        if (spec.measurement.weight() != 1) {
            throw UnsupportedEstimatorError("shot estimates need a single-site Z measurement");
        }
    }
    check_qubit_guard(spec.geometry.num_qubits());

    const int d_star = min_connecting_depth(spec.geometry, spec.butterfly, spec.measurement);
    const auto n_inst = static_cast<std::size_t>(instances);
    std::vector<OtocRecord> records(ks.size() * n_inst);

    detail::parallel_for(n_inst, options.threads, [&](std::size_t i) {
        const std::uint64_t seed = derive_instance_seed(spec.master_seed, i);
        CorrelatorSpec corr{sample_circuit(spec, seed), spec.butterfly, spec.measurement, 1};
        for (std::size_t ki = 0; ki < ks.size(); ++ki) {
            const auto start = std::chrono::steady_clock::now();
            corr.k = ks[ki];
            OtocRecord rec;
            rec.instance_seed = seed;
            rec.rows = spec.geometry.rows();
            rec.cols = spec.geometry.cols();
            rec.depth = spec.depth;
            rec.k = corr.k;
            rec.ensemble = to_string(spec.distribution);
            rec.exact = otoc_moment(corr);
            rec.d_star = d_star;
            if (options.shots) {
                Xoshiro256 rng(derive_slot_seed(seed, static_cast<std::uint64_t>(corr.k), 0,
                                                StreamKind::shot_noise));
                const ShotEstimate est = shot_estimate(corr, *options.shots, rng);
                rec.estimate = est.estimate;
                rec.standard_error = est.standard_error;
                rec.shots = est.shots;
            }
            rec.wall_time_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            records[ki * n_inst + i] = std::move(rec);
        }
    });
    return records;
}

std::vector<GroupStats> fluctuation_stats(std::span<const OtocRecord> records)
{
    if (records.empty()) {
        throw std::invalid_argument("fluctuation_stats needs at least one record");
    }
    using Key = std::tuple<int, int, int, int>;
    std::map<Key, std::size_t> slot;
    std::vector<GroupStats> groups;
    std::vector<std::vector<double>> values;
    for (const auto& r : records) {
        const Key key{r.rows, r.cols, r.depth, r.k};
        auto [it, inserted] = slot.try_emplace(key, groups.size());
        if (inserted) {
            GroupStats g;
            g.rows = r.rows;
            g.cols = r.cols;
            g.depth = r.depth;
            g.k = r.k;
            groups.push_back(g);
            values.emplace_back();
        }
        values[it->second].push_back(r.exact);
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const auto& v = values[g];
        double sum = 0.0;
        for (double x : v) {
            sum += x;
        }
        const double mean = sum / static_cast<double>(v.size());
        double ss = 0.0;
        for (double x : v) {
            ss += (x - mean) * (x - mean);
        }
        groups[g].count = v.size();
        groups[g].mean = mean;
        groups[g].variance = v.size() > 1 ? ss / static_cast<double>(v.size() - 1) : 0.0;
        groups[g].std = std::sqrt(groups[g].variance);
    }
    return groups;
}

std::vector<ScalingRow> fluctuation_scaling(std::span<const GroupStats> groups)
{
    std::vector<ScalingRow> rows;
    rows.reserve(groups.size());
    for (const auto& g : groups) {
        rows.push_back({g.rows * g.cols, g.depth, g.k, g.std});
    }
    std::ranges::sort(rows, [](const ScalingRow& a, const ScalingRow& b) {
        return std::tie(a.depth, a.k, a.num_qubits) < std::tie(b.depth, b.k, b.num_qubits);
    });
    return rows;
}

SweepTable depth_sweep(const EnsembleSpec& base, std::span<const int> depths, int instances,
                       std::span<const int> ks, const RunOptions& options)
{
    if (depths.empty()) {
        throw std::invalid_argument("depth sweep needs at least one depth");
    }
    SweepTable table;
    table.spec = base;
    table.depths.assign(depths.begin(), depths.end());
    table.ks.assign(ks.begin(), ks.end());
    table.instances = instances;
    for (int depth : depths) {
        EnsembleSpec spec = base;
        spec.depth = depth;
        auto records = run_ensemble(spec, instances, ks, options);
        table.rows.insert(table.rows.end(), std::make_move_iterator(records.begin()),
                          std::make_move_iterator(records.end()));
    }
    table.aggregates = fluctuation_stats(table.rows);
    return table;
}

std::vector<std::string> transition_violations(const SweepTable& table, int k)
{
    std::vector<const GroupStats*> series;
    for (int depth : table.depths) {
        for (const auto& g : table.aggregates) {
            if (g.depth == depth && g.k == k) {
                series.push_back(&g);
                break;
            }
        }
    }
    std::vector<std::string> notes;
    for (std::size_t i = 0; i + 1 < series.size(); ++i) {
        const GroupStats& a = *series[i];
        const GroupStats& b = *series[i + 1];
        const double se_a = a.count > 0 ? a.std / std::sqrt(static_cast<double>(a.count)) : 0.0;
        const double se_b = b.count > 0 ? b.std / std::sqrt(static_cast<double>(b.count)) : 0.0;
        const double slack = 2.0 * std::sqrt(se_a * se_a + se_b * se_b);
        if (b.mean > a.mean + slack) {
            std::ostringstream msg;
            msg << "k=" << k << ": mean rises from " << a.mean << " at depth " << a.depth
                << " to " << b.mean << " at depth " << b.depth << " (allowed slack " << slack
                << ")";
            notes.push_back(msg.str());
        }
    }
    return notes;
}

double pearson(std::span<const double> xs, std::span<const double> ys)
{
    if (xs.size() != ys.size()) {
        throw std::invalid_argument("pearson inputs differ in length");
    }
    if (xs.size() < 2) {
        throw std::invalid_argument("pearson needs at least two points");
    }
    const auto n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw std::domain_error("pearson correlation undefined: an input has zero variance");
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace {

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

constexpr int kCsvFields = 12;
constexpr std::array<const char*, kCsvFields> kCsvNames{
    "instance_seed", "rows", "cols",   "depth", "k",      "ensemble",
    "exact",         "estimate", "stderr", "shots", "d_star", "wall_time_s"};

[[noreturn]] void csv_fail(std::size_t line, int field, const std::string& what)
{
    std::string msg = "results CSV line " + std::to_string(line);
    if (field >= 0) {
        msg += " field " + std::string(kCsvNames[static_cast<std::size_t>(field)]);
    }
    throw ParseError(msg + ": " + what);
}

template <typename T>
T parse_number(std::string_view text, std::size_t line, int field)
{
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        csv_fail(line, field, "cannot parse \"" + std::string(text) + "\"");
    }
    return value;
}

}  // namespace

void write_records_csv(std::ostream& out, std::span<const OtocRecord> records)
{
    out << kResultsCsvHeader << '\n';
    for (const auto& r : records) {
        out << r.instance_seed << ',' << r.rows << ',' << r.cols << ',' << r.depth << ','
            << r.k << ',' << r.ensemble << ',' << format_double(r.exact) << ','
            << (r.estimate ? format_double(*r.estimate) : "") << ','
            << (r.standard_error ? format_double(*r.standard_error) : "") << ','
            << (r.shots ? std::to_string(*r.shots) : "") << ',' << r.d_star << ','
            << format_double(r.wall_time_s) << '\n';
    }
}

std::vector<OtocRecord> read_records_csv(std::istream& in)
{
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) {
        csv_fail(1, -1, "missing header");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != kResultsCsvHeader) {
        csv_fail(1, -1, "unexpected header \"" + line + "\"");
    }
    std::vector<OtocRecord> out;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string_view> fields;
        std::string_view rest = line;
        while (true) {
            const auto comma = rest.find(',');
            fields.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) {
                break;
            }
            rest.remove_prefix(comma + 1);
        }
        if (fields.size() != kCsvFields) {
            csv_fail(line_no, -1,
                     "expected " + std::to_string(kCsvFields) + " fields, got " +
                         std::to_string(fields.size()));
        }
        OtocRecord r;
        r.instance_seed = parse_number<std::uint64_t>(fields[0], line_no, 0);
        r.rows = parse_number<int>(fields[1], line_no, 1);
        r.cols = parse_number<int>(fields[2], line_no, 2);
        r.depth = parse_number<int>(fields[3], line_no, 3);
        r.k = parse_number<int>(fields[4], line_no, 4);
        r.ensemble = std::string(fields[5]);
        r.exact = parse_number<double>(fields[6], line_no, 6);
        if (!fields[7].empty()) {
            r.estimate = parse_number<double>(fields[7], line_no, 7);
        }
        if (!fields[8].empty()) {
            r.standard_error = parse_number<double>(fields[8], line_no, 8);
        }
        if (!fields[9].empty()) {
            r.shots = parse_number<std::int64_t>(fields[9], line_no, 9);
        }
        if (r.estimate.has_value() != r.standard_error.has_value() ||
            r.estimate.has_value() != r.shots.has_value()) {
            csv_fail(line_no, 7, "estimate, stderr and shots must be all present or all empty");
        }
        r.d_star = parse_number<int>(fields[10], line_no, 10);
        r.wall_time_s = parse_number<double>(fields[11], line_no, 11);
        out.push_back(std::move(r));
    }
    return out;
}

void save_results(const SweepTable& table, const std::filesystem::path& path)
{
    {
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw std::runtime_error("cannot open " + path.string() + " for writing");
        }
        write_records_csv(out, table.rows);
    }
    nlohmann::json aggregates = nlohmann::json::array();
    for (const auto& g : table.aggregates) {
        aggregates.push_back({{"rows", g.rows},
                              {"cols", g.cols},
                              {"depth", g.depth},
                              {"k", g.k},
                              {"count", g.count},
                              {"mean", g.mean},
                              {"variance", g.variance},
                              {"std", g.std}});
    }
    const nlohmann::json meta = {{"spec", ensemble_spec_to_json(table.spec)},
                                 {"depths", table.depths},
                                 {"ks", table.ks},
                                 {"instances", table.instances},
                                 {"aggregates", std::move(aggregates)}};
    auto meta_path = path;
    meta_path += ".meta.json";
    std::ofstream out(meta_path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + meta_path.string() + " for writing");
    }
    out << meta.dump(2) << '\n';
}

std::vector<OtocRecord> load_results(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    try {
        return read_records_csv(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

}  // namespace otocsim
