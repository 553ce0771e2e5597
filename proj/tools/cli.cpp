// Copyright 2026 The otocsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "otocsim/circuit_io.hpp"
#include "otocsim/errors.hpp"
#include "otocsim/harness.hpp"
#include "otocsim/lightcone.hpp"
#include "otocsim/otoc.hpp"
#include "otocsim/statevector.hpp"

namespace otocsim::cli {

namespace {

using nlohmann::json;

struct CircuitOptions {
    std::string circuit_path;
    int rows = 3;
    int cols = 3;
    int depth = 8;
    std::uint64_t seed = 0;
    std::string ensemble = "haar-2q";
    std::string entangler = "iswap";
};

struct OperatorOptions {
    std::string butterfly;
    std::string measurement;
};

struct Config {
    CircuitOptions circuit;
    OperatorOptions ops;
    int k = 2;
    std::string ks = "2";
    std::optional<std::int64_t> shots;
    std::optional<double> epsilon;
    std::uint64_t sample_seed = 1;
    std::string depths = "1:8";
    int instances = 10;
    std::string method = "exact";
    std::int64_t samples = 2000;
    std::optional<int> max_depth;
    std::string output;
    std::string input;
    int threads = 1;
    bool allow_large = false;
};

std::vector<int> parse_int_list(const std::string& text, const char* what)
{
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    auto to_int = [&](const std::string& s) {
        int v = 0;
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size()) {
            throw std::invalid_argument(std::string("invalid ") + what + " list \"" + text + "\"");
        }
        return v;
    };
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            out.push_back(to_int(item));
            continue;
        }
        const int lo = to_int(item.substr(0, colon));
        const int hi = to_int(item.substr(colon + 1));
        if (hi < lo) {
            throw std::invalid_argument(std::string("empty ") + what + " range \"" + item + "\"");
        }
        for (int v = lo; v <= hi; ++v) {
            out.push_back(v);
        }
    }
    if (out.empty()) {
        throw std::invalid_argument(std::string("empty ") + what + " list");
    }
    return out;
}

GateMatrix4 resolve_entangler(const std::string& name_or_path)
{
    if (name_or_path == "iswap" || name_or_path == "sqrt-iswap" || name_or_path == "cz") {
        return named_entangler(name_or_path);
    }
    std::ifstream in(name_or_path);
    if (!in) {
        throw std::invalid_argument("entangler \"" + name_or_path +
                                    "\" is neither iswap, sqrt-iswap, cz nor a readable file");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(name_or_path + ": " + e.what());
    }
    GateMatrix4 g;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const auto& z = doc.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(j));
            g(i, j) = {z.at(0).get<double>(), z.at(1).get<double>()};
        }
    }
    return g;
}

EnsembleSpec ensemble_from(const Config& cfg)
{
    const auto& c = cfg.circuit;
    EnsembleSpec spec = EnsembleSpec::canonical(c.rows, c.cols, c.depth, c.seed);
    spec.distribution = parse_gate_distribution(c.ensemble);
    if (spec.distribution == GateDistribution::fixed_entangler) {
        spec.entangler = resolve_entangler(c.entangler);
    }
    if (!cfg.ops.butterfly.empty()) {
        spec.butterfly = PauliString::parse(cfg.ops.butterfly, spec.geometry);
    }
    if (!cfg.ops.measurement.empty()) {
        spec.measurement = PauliString::parse(cfg.ops.measurement, spec.geometry);
    }
    spec.validate();
    return spec;
}

// Loads --circuit when given, otherwise samples from the grid flags.
CorrelatorSpec correlator_from(const Config& cfg)
{
    if (cfg.circuit.circuit_path.empty()) {
        check_qubit_guard(cfg.circuit.rows * cfg.circuit.cols);
        const EnsembleSpec spec = ensemble_from(cfg);
        return {sample_circuit(spec), spec.butterfly, spec.measurement, cfg.k};
    }
    Circuit circuit = load_circuit(cfg.circuit.circuit_path);
    check_qubit_guard(circuit.num_qubits());
    const GridGeometry& g = circuit.geometry;
    PauliString b = cfg.ops.butterfly.empty()
                        ? PauliString::single(g.index({g.rows(), g.cols()}), PauliLetter::X)
                        : PauliString::parse(cfg.ops.butterfly, g);
    PauliString m = cfg.ops.measurement.empty() ? PauliString::single(0, PauliLetter::Z)
                                                : PauliString::parse(cfg.ops.measurement, g);
    CorrelatorSpec spec{std::move(circuit), std::move(b), std::move(m), cfg.k};
    spec.validate();
    return spec;
}

json describe(const CorrelatorSpec& spec)
{
    const GridGeometry& g = spec.circuit.geometry;
    return {{"rows", g.rows()},
            {"cols", g.cols()},
            {"depth", spec.circuit.depth()},
            {"seed", spec.circuit.seed},
            {"ensemble", to_string(spec.circuit.distribution)},
            {"butterfly", spec.butterfly.to_string(g)},
            {"measurement", spec.measurement.to_string(g)},
            {"k", spec.k}};
}

int cmd_sample(const Config& cfg, std::ostream& out)
{
    check_qubit_guard(cfg.circuit.rows * cfg.circuit.cols);
    const Circuit circuit = sample_circuit(ensemble_from(cfg));
    if (cfg.output.empty()) {
        out << dump_circuit(circuit) << '\n';
        return kExitOk;
    }
    save_circuit(circuit, cfg.output);
    out << json{{"path", cfg.output},
                {"rows", circuit.geometry.rows()},
                {"cols", circuit.geometry.cols()},
                {"depth", circuit.depth()},
                {"seed", circuit.seed},
                {"gates", circuit.gate_count()}}
               .dump()
        << '\n';
    return kExitOk;
}

int cmd_eval(const Config& cfg, std::ostream& out)
{
    const CorrelatorSpec spec = correlator_from(cfg);
    const GridGeometry& g = spec.circuit.geometry;
    const double exact = otoc_moment(spec);
    const Complex direct = otoc_moment_direct(spec);
    const Complex toc = time_ordered_correlator(spec.circuit, spec.butterfly, spec.measurement);
    json doc = describe(spec);
    doc["exact"] = exact;
    doc["direct"] = {direct.real(), direct.imag()};
    doc["time_ordered"] = {toc.real(), toc.imag()};
    doc["d_star"] = min_connecting_depth(g, spec.butterfly, spec.measurement);
    doc["lightcone_commutes"] =
        commutes_by_lightcone(g, spec.circuit.depth(), spec.butterfly, spec.measurement);
    out << doc.dump() << '\n';
    return kExitOk;
}

int cmd_estimate(const Config& cfg, std::ostream& out)
{
    const CorrelatorSpec spec = correlator_from(cfg);
    Xoshiro256 rng(cfg.sample_seed);
    const ShotEstimate est = cfg.epsilon ? shot_estimate_for_epsilon(spec, *cfg.epsilon, rng)
                                         : shot_estimate(spec, cfg.shots.value_or(10000), rng);
    json doc = describe(spec);
    doc["exact"] = otoc_moment(spec);
    doc["estimate"] = est.estimate;
    doc["stderr"] = est.standard_error;
    doc["shots"] = est.shots;
    doc["epsilon"] = est.target_epsilon ? json(*est.target_epsilon) : json(nullptr);
    out << doc.dump() << '\n';
    return kExitOk;
}

json aggregates_json(std::span<const GroupStats> groups)
{
    json arr = json::array();
    for (const auto& g : groups) {
        arr.push_back({{"rows", g.rows},
                       {"cols", g.cols},
                       {"depth", g.depth},
                       {"k", g.k},
                       {"count", g.count},
                       {"mean", g.mean},
                       {"variance", g.variance},
                       {"std", g.std}});
    }
    return arr;
}

int cmd_sweep(const Config& cfg, std::ostream& out, std::ostream& err)
{
    check_qubit_guard(cfg.circuit.rows * cfg.circuit.cols);
    const EnsembleSpec base = ensemble_from(cfg);
    const auto depths = parse_int_list(cfg.depths, "depth");
    const auto ks = parse_int_list(cfg.ks, "k");
    RunOptions opts;
    opts.threads = cfg.threads;
    if (cfg.epsilon) {
        opts.shots = shots_for_epsilon(*cfg.epsilon);
    } else {
        opts.shots = cfg.shots;
    }
    const SweepTable table = depth_sweep(base, depths, cfg.instances, ks, opts);
    for (int k : ks) {
        for (const auto& note : transition_violations(table, k)) {
            err << "otoc: note: " << note << '\n';
        }
    }
    if (cfg.output.empty()) {
        write_records_csv(out, table.rows);
        return kExitOk;
    }
    save_results(table, cfg.output);
    out << json{{"path", cfg.output},
                {"records", table.rows.size()},
                {"spec", ensemble_spec_to_json(base)},
                {"aggregates", aggregates_json(table.aggregates)}}
               .dump()
        << '\n';
    return kExitOk;
}

int cmd_lightcone(const Config& cfg, std::ostream& out)
{
    const GridGeometry g(cfg.circuit.rows, cfg.circuit.cols);
    const PauliString b =
        cfg.ops.butterfly.empty()
            ? PauliString::single(g.index({g.rows(), g.cols()}), PauliLetter::X)
            : PauliString::parse(cfg.ops.butterfly, g);
    const PauliString m = cfg.ops.measurement.empty() ? PauliString::single(0, PauliLetter::Z)
                                                      : PauliString::parse(cfg.ops.measurement, g);
    if (b.empty() || m.empty()) {
        throw std::invalid_argument("operators must be nonempty");
    }
    const int d_star = min_connecting_depth(g, b, m);
    const int max_depth = cfg.max_depth.value_or(d_star + 4);
    out << json{{"rows", g.rows()},
                {"cols", g.cols()},
                {"butterfly", b.to_string(g)},
                {"measurement", m.to_string(g)},
                {"d_star", d_star},
                {"support_size_by_depth", support_size_by_depth(g, max_depth, b)}}
               .dump()
        << '\n';
    return kExitOk;
}

int cmd_trace(const Config& cfg, std::ostream& out)
{
    const CorrelatorSpec spec = correlator_from(cfg);
    TraceMethod method = TraceMethod::exact;
    if (cfg.method == "stochastic") {
        method = TraceMethod::stochastic;
    } else if (cfg.method != "exact") {
        throw std::invalid_argument("unknown trace method \"" + cfg.method + "\"");
    }
    Xoshiro256 rng(cfg.sample_seed);
    const MixedMoment m = mixed_state_moment(spec, method, cfg.samples, rng);
    json doc = describe(spec);
    doc["method"] = cfg.method;
    doc["value"] = m.value;
    doc["stderr"] = m.standard_error ? json(*m.standard_error) : json(nullptr);
    doc["samples"] = m.samples;
    out << doc.dump() << '\n';
    return kExitOk;
}

int cmd_stats(const Config& cfg, std::ostream& out)
{
    const auto records = load_results(cfg.input);
    const auto groups = fluctuation_stats(records);
    json scaling = json::array();
    for (const auto& row : fluctuation_scaling(groups)) {
        scaling.push_back(
            {{"n", row.num_qubits}, {"depth", row.depth}, {"k", row.k}, {"std", row.std}});
    }
    out << json{{"records", records.size()},
                {"groups", aggregates_json(groups)},
                {"std_vs_n", std::move(scaling)}}
               .dump()
        << '\n';
    return kExitOk;
}

void add_grid(CLI::App* sub, Config& cfg)
{
    sub->add_option("--rows", cfg.circuit.rows, "Grid rows")->check(CLI::PositiveNumber);
    sub->add_option("--cols", cfg.circuit.cols, "Grid columns")->check(CLI::PositiveNumber);
}

void add_operators(CLI::App* sub, Config& cfg)
{
    sub->add_option("--b,--butterfly", cfg.ops.butterfly,
                    "Butterfly operator, e.g. \"X:(3,3)\" (default X at (rows,cols))");
    sub->add_option("--m,--measurement", cfg.ops.measurement,
                    "Measurement operator, Z-type (default \"Z:(1,1)\")");
}

void add_ensemble(CLI::App* sub, Config& cfg, bool with_depth)
{
    add_grid(sub, cfg);
    if (with_depth) {
        sub->add_option("--depth", cfg.circuit.depth, "Number of brickwork layers")
            ->check(CLI::NonNegativeNumber);
    }
    sub->add_option("--seed", cfg.circuit.seed, "Master seed");
    sub->add_option("--ensemble", cfg.circuit.ensemble, "haar-2q or fixed-entangler")
        ->check(CLI::IsMember({"haar-2q", "fixed-entangler"}));
    sub->add_option("--entangler", cfg.circuit.entangler,
                    "Fixed entangler: iswap, sqrt-iswap, cz, or a JSON 4x4 [re,im] file");
}

void add_circuit_source(CLI::App* sub, Config& cfg)
{
    add_ensemble(sub, cfg, true);
    sub->add_option("--circuit", cfg.circuit.circuit_path, "Circuit JSON file (overrides grid flags)")
        ->check(CLI::ExistingFile);
    add_operators(sub, cfg);
    sub->add_option("--k", cfg.k, "Moment order k of <0|C^{2k}|0>")->check(CLI::PositiveNumber);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Config cfg;
    CLI::App app{"Out-of-time-order correlator simulation on random brickwork circuits", "otoc"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--threads", cfg.threads, "Worker threads for ensemble runs")
        ->check(CLI::PositiveNumber);
    app.add_flag("--allow-large", cfg.allow_large,
                 "Lift the default qubit guard (also OTOC_MAX_QUBITS)");

    auto* sample = app.add_subcommand("sample", "Sample a circuit and emit its JSON");
    add_ensemble(sample, cfg, true);
    add_operators(sample, cfg);
    sample->add_option("-o,--output", cfg.output, "Output path (stdout if omitted)");

    auto* eval = app.add_subcommand("eval", "Exact OTOC moment and time-ordered correlator");
    add_circuit_source(eval, cfg);

    auto* estimate = app.add_subcommand("estimate", "Shot-based estimate of the OTOC moment");
    add_circuit_source(estimate, cfg);
    auto* shots_opt = estimate->add_option("--shots", cfg.shots, "Number of shots (default 10000)")
                          ->check(CLI::PositiveNumber);
    auto* eps_opt = estimate->add_option("--epsilon", cfg.epsilon, "Target additive error; shots = ceil(1/eps^2)")
                        ->check(CLI::Range(0.0, 1.0));
    shots_opt->excludes(eps_opt);
    estimate->add_option("--shot-seed", cfg.sample_seed, "Seed of the measurement outcomes");

    auto* sweep = app.add_subcommand("sweep", "Depth sweep over an ensemble, CSV output");
    add_ensemble(sweep, cfg, false);
    add_operators(sweep, cfg);
    sweep->add_option("--depths", cfg.depths, "Depth list, e.g. \"1,2,5\" or \"1:8\"");
    sweep->add_option("--instances", cfg.instances, "Instances per depth")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--k", cfg.ks, "Moment orders, e.g. \"1,2\"");
    auto* sweep_shots = sweep->add_option("--shots", cfg.shots, "Add shot estimates")
                            ->check(CLI::PositiveNumber);
    auto* sweep_eps = sweep->add_option("--epsilon", cfg.epsilon, "Add shot estimates at ceil(1/eps^2) shots")
                          ->check(CLI::Range(0.0, 1.0));
    sweep_shots->excludes(sweep_eps);
    sweep->add_option("-o,--output", cfg.output, "CSV path; also writes <path>.meta.json");

    auto* lightcone = app.add_subcommand("lightcone", "Light-cone connecting depth and support growth");
    add_grid(lightcone, cfg);
    add_operators(lightcone, cfg);
    lightcone->add_option("--depth", cfg.max_depth, "Largest depth in support_size_by_depth")
        ->check(CLI::NonNegativeNumber);

    auto* trace = app.add_subcommand("trace", "Maximally mixed moment Tr(C^{2k})/2^n");
    add_circuit_source(trace, cfg);
    trace->add_option("--method", cfg.method, "exact or stochastic")
        ->check(CLI::IsMember({"exact", "stochastic"}));
    trace->add_option("--samples", cfg.samples, "Basis-state samples for the stochastic method")
        ->check(CLI::PositiveNumber);
    trace->add_option("--sample-seed", cfg.sample_seed, "Seed of the basis-state sampler");

    auto* stats = app.add_subcommand("stats", "Aggregate an existing results CSV");
    stats->add_option("--input,input", cfg.input, "Results CSV")->required()->check(CLI::ExistingFile);

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "otoc: error: " << e.what() << '\n';
        return kExitUsage;
    }

    struct GuardRestore {
        int previous = max_qubits();
        ~GuardRestore() { set_max_qubits(previous); }
    } restore;
    if (cfg.allow_large) {
        set_max_qubits(62);
    }
    try {
        if (sample->parsed()) {
            return cmd_sample(cfg, out);
        }
        if (eval->parsed()) {
            return cmd_eval(cfg, out);
        }
        if (estimate->parsed()) {
            return cmd_estimate(cfg, out);
        }
        if (sweep->parsed()) {
            return cmd_sweep(cfg, out, err);
        }
        if (lightcone->parsed()) {
            return cmd_lightcone(cfg, out);
        }
        if (trace->parsed()) {
            return cmd_trace(cfg, out);
        }
        return cmd_stats(cfg, out);
    } catch (const std::invalid_argument& e) {
        err << "otoc: error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        err << "otoc: error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "otoc: error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

}  // namespace otocsim::cli
