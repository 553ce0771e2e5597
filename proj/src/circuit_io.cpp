// Copyright 2026 The otocsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include "otocsim/circuit_io.hpp"

#include <fstream>
#include <sstream>

#include "otocsim/errors.hpp"

namespace otocsim {

using nlohmann::json;

namespace {

json complex_to_json(std::complex<double> z)
{
    return json::array({z.real(), z.imag()});
}

template <typename Matrix>
json matrix_to_json(const Matrix& m)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(complex_to_json(m(i, j)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

[[noreturn]] void fail(const std::string& where, const std::string& what)
{
    throw ParseError("circuit JSON: " + where + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& where)
{
    if (!obj.is_object()) {
        fail(where, "expected object");
    }
    const auto it = obj.find(key);
    if (it == obj.end()) {
        fail(where, std::string("missing field \"") + key + "\"");
    }
    return *it;
}

int int_field(const json& obj, const char* key, const std::string& where)
{
    const json& v = field(obj, key, where);
    if (!v.is_number_integer()) {
        fail(where, std::string("field \"") + key + "\" must be an integer");
    }
    return v.get<int>();
}

std::complex<double> complex_from_json(const json& v, const std::string& where)
{
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        fail(where, "expected [re, im] pair");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

template <int Dim>
Eigen::Matrix<std::complex<double>, Dim, Dim> matrix_from_json(const json& v,
                                                               const std::string& where)
{
    if (!v.is_array() || v.size() != Dim) {
        fail(where, "expected " + std::to_string(Dim) + "x" + std::to_string(Dim) + " matrix");
    }
    Eigen::Matrix<std::complex<double>, Dim, Dim> m;
    for (int i = 0; i < Dim; ++i) {
        if (!v[i].is_array() || v[i].size() != Dim) {
            fail(where + " row " + std::to_string(i),
                 "expected " + std::to_string(Dim) + " entries");
        }
        for (int j = 0; j < Dim; ++j) {
            m(i, j) = complex_from_json(v[i][j],
                                        where + " entry (" + std::to_string(i) + "," +
                                            std::to_string(j) + ")");
        }
    }
    return m;
}

}  // namespace

json circuit_to_json(const Circuit& circuit)
{
    json layers = json::array();
    for (const auto& layer : circuit.layers) {
        json ops = json::array();
        for (const auto& op : layer.ops) {
            ops.push_back({{"q", {op.a, op.b}}, {"u", matrix_to_json(op.gate)}});
        }
        json entry = {{"ops", std::move(ops)}};
        if (!layer.singles.empty()) {
            json singles = json::array();
            for (const auto& op : layer.singles) {
                singles.push_back({{"q", op.site}, {"u", matrix_to_json(op.gate)}});
            }
            entry["singles"] = std::move(singles);
        }
        layers.push_back(std::move(entry));
    }
    return {{"version", kCircuitFormatVersion},
            {"rows", circuit.geometry.rows()},
            {"cols", circuit.geometry.cols()},
            {"seed", circuit.seed},
            {"ensemble", to_string(circuit.distribution)},
            {"layers", std::move(layers)}};
}

Circuit circuit_from_json(const json& doc)
{
    const std::string top = "document";
    const int version = int_field(doc, "version", top);
    if (version != kCircuitFormatVersion) {
        fail(top, "unsupported version " + std::to_string(version));
    }
    Circuit circuit;
    try {
        circuit.geometry = GridGeometry(int_field(doc, "rows", top), int_field(doc, "cols", top));
    } catch (const std::invalid_argument& e) {
        fail(top, e.what());
    }
    const json& seed = field(doc, "seed", top);
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
        fail(top, "field \"seed\" must be a non-negative integer");
    }
    circuit.seed = seed.get<std::uint64_t>();
    const json& ensemble = field(doc, "ensemble", top);
    if (!ensemble.is_string()) {
        fail(top, "field \"ensemble\" must be a string");
    }
    try {
        circuit.distribution = parse_gate_distribution(ensemble.get<std::string>());
    } catch (const std::invalid_argument& e) {
        fail(top, e.what());
    }
    const json& layers = field(doc, "layers", top);
    if (!layers.is_array()) {
        fail(top, "field \"layers\" must be an array");
    }
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const std::string where = "layers[" + std::to_string(l) + "]";
        Layer layer;
        const json& ops = field(layers[l], "ops", where);
        if (!ops.is_array()) {
            fail(where, "field \"ops\" must be an array");
        }
        for (std::size_t i = 0; i < ops.size(); ++i) {
            const std::string op_where = where + ".ops[" + std::to_string(i) + "]";
            const json& q = field(ops[i], "q", op_where);
            if (!q.is_array() || q.size() != 2 || !q[0].is_number_integer() ||
                !q[1].is_number_integer()) {
                fail(op_where, "field \"q\" must be [a, b]");
            }
            layer.ops.push_back({matrix_from_json<4>(field(ops[i], "u", op_where), op_where),
                                 q[0].get<int>(), q[1].get<int>()});
        }
        if (const auto it = layers[l].find("singles"); it != layers[l].end()) {
            if (!it->is_array()) {
                fail(where, "field \"singles\" must be an array");
            }
            for (std::size_t i = 0; i < it->size(); ++i) {
                const std::string op_where = where + ".singles[" + std::to_string(i) + "]";
                const json& op = (*it)[i];
                layer.singles.push_back(
                    {matrix_from_json<2>(field(op, "u", op_where), op_where),
                     int_field(op, "q", op_where)});
            }
        }
        circuit.layers.push_back(std::move(layer));
    }
    try {
        circuit.validate();
    } catch (const std::invalid_argument& e) {
        fail(top, e.what());
    }
    return circuit;
}

std::string dump_circuit(const Circuit& circuit)
{
    return circuit_to_json(circuit).dump();
}

Circuit parse_circuit(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("circuit JSON: syntax error at byte offset " + std::to_string(e.byte) +
                         ": " + e.what());
    }
    return circuit_from_json(doc);
}

void save_circuit(const Circuit& circuit, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << dump_circuit(circuit) << '\n';
    if (!out) {
        throw std::runtime_error("failed writing " + path.string());
    }
}

Circuit load_circuit(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_circuit(buffer.str());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

json ensemble_spec_to_json(const EnsembleSpec& spec)
{
    json doc = {{"rows", spec.geometry.rows()},
                {"cols", spec.geometry.cols()},
                {"depth", spec.depth},
                {"ensemble", to_string(spec.distribution)},
                {"butterfly", spec.butterfly.to_string(spec.geometry)},
                {"measurement", spec.measurement.to_string(spec.geometry)},
                {"master_seed", spec.master_seed}};
    if (spec.distribution == GateDistribution::fixed_entangler) {
        doc["entangler"] = matrix_to_json(spec.entangler);
    }
    return doc;
}

EnsembleSpec ensemble_spec_from_json(const json& doc)
{
    const std::string top = "ensemble spec";
    EnsembleSpec spec;
    try {
        spec.geometry = GridGeometry(int_field(doc, "rows", top), int_field(doc, "cols", top));
        spec.depth = int_field(doc, "depth", top);
        spec.distribution =
            parse_gate_distribution(field(doc, "ensemble", top).get<std::string>());
        spec.butterfly =
            PauliString::parse(field(doc, "butterfly", top).get<std::string>(), spec.geometry);
        spec.measurement =
            PauliString::parse(field(doc, "measurement", top).get<std::string>(), spec.geometry);
        spec.master_seed = field(doc, "master_seed", top).get<std::uint64_t>();
        if (spec.distribution == GateDistribution::fixed_entangler) {
            spec.entangler = matrix_from_json<4>(field(doc, "entangler", top), top + " entangler");
        }
    } catch (const std::invalid_argument& e) {
        fail(top, e.what());
    } catch (const json::exception& e) {
        fail(top, e.what());
    }
    return spec;
}

}  // namespace otocsim
