// Copyright 2026 The otocsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "otocsim/circuit_io.hpp"
#include "otocsim/errors.hpp"
#include "otocsim/harness.hpp"
#include "otocsim/lightcone.hpp"
#include "otocsim/otoc.hpp"

namespace py = pybind11;
using namespace otocsim;

namespace {

// Operators may be passed as "X:(4,4)" text or as a parsed PauliString.
using OperatorArg = std::variant<PauliString, std::string>;

PauliString to_pauli(const OperatorArg& arg, const GridGeometry& geometry)
{
    if (const auto* text = std::get_if<std::string>(&arg)) {
        return PauliString::parse(*text, geometry);
    }
    return std::get<PauliString>(arg);
}

CorrelatorSpec make_spec(const Circuit& circuit, const OperatorArg& b, const OperatorArg& m,
                         int k)
{
    CorrelatorSpec spec{circuit, to_pauli(b, circuit.geometry), to_pauli(m, circuit.geometry), k};
    spec.validate();
    return spec;
}

py::dict record_to_dict(const OtocRecord& r)
{
    py::dict d;
    d["instance_seed"] = r.instance_seed;
    d["rows"] = r.rows;
    d["cols"] = r.cols;
    d["depth"] = r.depth;
    d["k"] = r.k;
    d["ensemble"] = r.ensemble;
    d["exact"] = r.exact;
    d["estimate"] = r.estimate;
    d["stderr"] = r.standard_error;
    d["shots"] = r.shots;
    d["d_star"] = r.d_star;
    d["wall_time_s"] = r.wall_time_s;
    return d;
}

py::list records_to_list(const std::vector<OtocRecord>& records)
{
    py::list out;
    for (const auto& r : records) {
        out.append(record_to_dict(r));
    }
    return out;
}

RunOptions run_options(std::optional<std::int64_t> shots, int threads)
{
    RunOptions opts;
    opts.shots = shots;
    opts.threads = threads;
    return opts;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Statevector simulation of out-of-time-order correlators on brickwork circuits";

    static py::exception<ResourceLimitError> resource_error(m, "ResourceLimitError",
                                                            PyExc_ValueError);
    static py::exception<ParseError> parse_error(m, "ParseError", PyExc_RuntimeError);
    static py::exception<UnsupportedEstimatorError> estimator_error(
        m, "UnsupportedEstimatorError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const ResourceLimitError& e) {
            resource_error(e.what());
        } catch (const ParseError& e) {
            parse_error(e.what());
        } catch (const UnsupportedEstimatorError& e) {
            estimator_error(e.what());
        }
    });

    py::class_<GridGeometry>(m, "Grid")
        .def(py::init<int, int>(), py::arg("rows"), py::arg("cols"))
        .def_property_readonly("rows", &GridGeometry::rows)
        .def_property_readonly("cols", &GridGeometry::cols)
        .def_property_readonly("num_qubits", &GridGeometry::num_qubits)
        .def("index", [](const GridGeometry& g, int row, int col) { return g.index({row, col}); })
        .def("site",
             [](const GridGeometry& g, int index) {
                 const Site s = g.site(index);
                 return py::make_tuple(s.row, s.col);
             })
        .def("__repr__", [](const GridGeometry& g) { return "Grid(" + g.describe() + ")"; });

    py::class_<PauliString>(m, "PauliString")
        .def_static("parse", &PauliString::parse, py::arg("text"), py::arg("grid"))
        .def("to_string", &PauliString::to_string, py::arg("grid"))
        .def_property_readonly("sites", &PauliString::sites)
        .def_property_readonly("weight", &PauliString::weight)
        .def_property_readonly("is_z_type", &PauliString::is_z_type)
        .def(py::self == py::self);

    py::class_<Circuit>(m, "Circuit")
        .def_property_readonly("grid", [](const Circuit& c) { return c.geometry; })
        .def_property_readonly("depth", &Circuit::depth)
        .def_property_readonly("num_qubits", &Circuit::num_qubits)
        .def_property_readonly("gate_count", &Circuit::gate_count)
        .def_property_readonly("seed", [](const Circuit& c) { return c.seed; })
        .def_property_readonly("ensemble", [](const Circuit& c) { return to_string(c.distribution); })
        .def("to_json", &dump_circuit)
        .def_static("from_json", &parse_circuit, py::arg("text"))
        .def("save", [](const Circuit& c, const std::string& path) { save_circuit(c, path); })
        .def_static("load", [](const std::string& path) { return load_circuit(path); });

    py::class_<EnsembleSpec>(m, "EnsembleSpec")
        .def(py::init([](int rows, int cols, int depth, std::uint64_t seed,
                         const std::string& ensemble, const std::string& entangler,
                         std::optional<OperatorArg> b, std::optional<OperatorArg> mm) {
                 EnsembleSpec spec = EnsembleSpec::canonical(rows, cols, depth, seed);
                 spec.distribution = parse_gate_distribution(ensemble);
                 if (spec.distribution == GateDistribution::fixed_entangler) {
                     spec.entangler = named_entangler(entangler);
                 }
                 if (b) {
                     spec.butterfly = to_pauli(*b, spec.geometry);
                 }
                 if (mm) {
                     spec.measurement = to_pauli(*mm, spec.geometry);
                 }
                 spec.validate();
                 return spec;
             }),
             py::arg("rows"), py::arg("cols"), py::arg("depth"), py::arg("seed") = 0,
             py::arg("ensemble") = "haar-2q", py::arg("entangler") = "iswap",
             py::arg("butterfly") = py::none(), py::arg("measurement") = py::none())
        .def_property_readonly("grid", [](const EnsembleSpec& s) { return s.geometry; })
        .def_readwrite("depth", &EnsembleSpec::depth)
        .def_readwrite("seed", &EnsembleSpec::master_seed)
        .def_readonly("butterfly", &EnsembleSpec::butterfly)
        .def_readonly("measurement", &EnsembleSpec::measurement)
        .def_property_readonly("ensemble",
                               [](const EnsembleSpec& s) { return to_string(s.distribution); })
        .def("to_json", [](const EnsembleSpec& s) { return ensemble_spec_to_json(s).dump(); });

    m.def(
        "sample_circuit",
        [](const EnsembleSpec& spec, std::optional<std::uint64_t> seed) {
            return sample_circuit(spec, seed.value_or(spec.master_seed));
        },
        py::arg("spec"), py::arg("seed") = py::none());
    m.def("instance_seed", &derive_instance_seed, py::arg("master_seed"), py::arg("index"));

    m.def(
        "otoc",
        [](const Circuit& c, const OperatorArg& b, const OperatorArg& mm, int k) {
            return otoc_moment(make_spec(c, b, mm, k));
        },
        py::arg("circuit"), py::arg("butterfly"), py::arg("measurement"), py::arg("k") = 1,
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "otoc_direct",
        [](const Circuit& c, const OperatorArg& b, const OperatorArg& mm, int k) {
            return otoc_moment_direct(make_spec(c, b, mm, k));
        },
        py::arg("circuit"), py::arg("butterfly"), py::arg("measurement"), py::arg("k") = 1,
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "time_ordered",
        [](const Circuit& c, const OperatorArg& b, const OperatorArg& mm) {
            return time_ordered_correlator(c, to_pauli(b, c.geometry), to_pauli(mm, c.geometry));
        },
        py::arg("circuit"), py::arg("butterfly"), py::arg("measurement"));

    m.def("shots_for_epsilon", &shots_for_epsilon, py::arg("epsilon"));
    m.def(
        "estimate",
        [](const Circuit& c, const OperatorArg& b, const OperatorArg& mm, int k,
           std::optional<std::int64_t> shots, std::optional<double> epsilon, std::uint64_t seed) {
            if (shots.has_value() == epsilon.has_value()) {
                throw std::invalid_argument("pass exactly one of shots or epsilon");
            }
            const CorrelatorSpec spec = make_spec(c, b, mm, k);
            Xoshiro256 rng(seed);
            const ShotEstimate est = shots ? shot_estimate(spec, *shots, rng)
                                           : shot_estimate_for_epsilon(spec, *epsilon, rng);
            py::dict d;
            d["estimate"] = est.estimate;
            d["stderr"] = est.standard_error;
            d["shots"] = est.shots;
            d["epsilon"] = est.target_epsilon;
            return d;
        },
        py::arg("circuit"), py::arg("butterfly"), py::arg("measurement"), py::arg("k") = 1,
        py::arg("shots") = py::none(), py::arg("epsilon") = py::none(), py::arg("seed") = 0);

    m.def(
        "mixed_state_moment",
        [](const Circuit& c, const OperatorArg& b, const OperatorArg& mm, int k,
           const std::string& method, std::int64_t samples, std::uint64_t seed) {
            TraceMethod tm;
            if (method == "exact") {
                tm = TraceMethod::exact;
            } else if (method == "stochastic") {
                tm = TraceMethod::stochastic;
            } else {
                throw std::invalid_argument("method must be 'exact' or 'stochastic', got '" +
                                            method + "'");
            }
            Xoshiro256 rng(seed);
            const MixedMoment r = mixed_state_moment(make_spec(c, b, mm, k), tm, samples, rng);
            py::dict d;
            d["value"] = r.value;
            d["stderr"] = r.standard_error;
            d["samples"] = r.samples;
            return d;
        },
        py::arg("circuit"), py::arg("butterfly"), py::arg("measurement"), py::arg("k") = 1,
        py::arg("method") = "exact", py::arg("samples") = 1000, py::arg("seed") = 0);

    m.def(
        "min_connecting_depth",
        [](const GridGeometry& g, const OperatorArg& b, const OperatorArg& mm) {
            return min_connecting_depth(g, to_pauli(b, g), to_pauli(mm, g));
        },
        py::arg("grid"), py::arg("butterfly"), py::arg("measurement"));
    m.def(
        "commutes_by_lightcone",
        [](const GridGeometry& g, int depth, const OperatorArg& b, const OperatorArg& mm) {
            return commutes_by_lightcone(g, depth, to_pauli(b, g), to_pauli(mm, g));
        },
        py::arg("grid"), py::arg("depth"), py::arg("butterfly"), py::arg("measurement"));
    m.def(
        "butterfly_support",
        [](const GridGeometry& g, int depth, const OperatorArg& b) {
            const SupportSet s = butterfly_support(g, depth, to_pauli(b, g));
            return std::vector<int>(s.begin(), s.end());
        },
        py::arg("grid"), py::arg("depth"), py::arg("butterfly"));
    m.def(
        "support_size_by_depth",
        [](const GridGeometry& g, int max_depth, const OperatorArg& b) {
            return support_size_by_depth(g, max_depth, to_pauli(b, g));
        },
        py::arg("grid"), py::arg("max_depth"), py::arg("butterfly"));

    m.def(
        "run_ensemble",
        [](const EnsembleSpec& spec, int instances, const std::vector<int>& ks,
           std::optional<std::int64_t> shots, int threads) {
            std::vector<OtocRecord> records;
            {
                py::gil_scoped_release release;
                records = run_ensemble(spec, instances, ks, run_options(shots, threads));
            }
            return records_to_list(records);
        },
        py::arg("spec"), py::arg("instances"), py::arg("ks") = std::vector<int>{1},
        py::arg("shots") = py::none(), py::arg("threads") = 1);
    m.def(
        "depth_sweep",
        [](const EnsembleSpec& spec, const std::vector<int>& depths, int instances,
           const std::vector<int>& ks, std::optional<std::int64_t> shots, int threads,
           std::optional<std::string> output) {
            SweepTable table;
            {
                py::gil_scoped_release release;
                table = depth_sweep(spec, depths, instances, ks, run_options(shots, threads));
                if (output) {
                    save_results(table, *output);
                }
            }
            py::list aggregates;
            for (const auto& g : table.aggregates) {
                py::dict d;
                d["rows"] = g.rows;
                d["cols"] = g.cols;
                d["depth"] = g.depth;
                d["k"] = g.k;
                d["count"] = g.count;
                d["mean"] = g.mean;
                d["variance"] = g.variance;
                d["std"] = g.std;
                aggregates.append(d);
            }
            py::dict out;
            out["records"] = records_to_list(table.rows);
            out["aggregates"] = aggregates;
            return out;
        },
        py::arg("spec"), py::arg("depths"), py::arg("instances"),
        py::arg("ks") = std::vector<int>{1}, py::arg("shots") = py::none(),
        py::arg("threads") = 1, py::arg("output") = py::none());
    m.def(
        "load_results",
        [](const std::string& path) { return records_to_list(load_results(path)); },
        py::arg("path"));

    m.def(
        "pearson",
        [](const std::vector<double>& xs, const std::vector<double>& ys) {
            return pearson(xs, ys);
        },
        py::arg("xs"), py::arg("ys"));

    m.def("max_qubits", &max_qubits);
    m.def("set_max_qubits", &set_max_qubits, py::arg("limit"));
}
