// model_file.hpp — JSON model descriptions consumed by the CLI and other front ends
//
// Schema (strict; unknown keys are rejected):
//   {
//     "sites": 2,
//     "kind": "ising_zz" | "heisenberg",
//     "couplings": [[0, 1, 1.0], ...],
//     "field_h": -1.0,
//     "probe": {"lambda": 1.0, "h0": -1.0},
//     "beta": 0.5,
//     "hbar": 1.0            // optional, default 1
//   }

#pragma once

#include <json.hpp>

#include <fstream>
#include <set>
#include <stdexcept>
#include <string>

#include "leeyang/spin_model.hpp"

namespace leeyang {

struct ModelParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelFile {
    SpinModel model;
    ProbeParams probe;
    ThermalParams thermal;
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& obj, const std::set<std::string>& allowed,
                                const std::string& where) {
    for (const auto& [key, _] : obj.items())
        if (!allowed.contains(key))
            throw ModelParseError("unknown key \"" + key + "\" in " + where);
}

inline double require_number(const nlohmann::json& obj, const std::string& key,
                             const std::string& where) {
    if (!obj.contains(key)) throw ModelParseError("missing key \"" + key + "\" in " + where);
    if (!obj[key].is_number()) throw ModelParseError("key \"" + key + "\" must be a number");
    return obj[key].get<double>();
}

}  // namespace detail

inline ModelFile parse_model_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ModelParseError("model file must be a JSON object");
    detail::reject_unknown_keys(
        doc, {"sites", "kind", "couplings", "field_h", "probe", "beta", "hbar"}, "model file");

    ModelFile out;

    if (!doc.contains("sites") || !doc["sites"].is_number_integer())
        throw ModelParseError("\"sites\" must be an integer");
    out.model.n_sites = doc["sites"].get<int>();

    if (!doc.contains("kind") || !doc["kind"].is_string())
        throw ModelParseError("\"kind\" must be a string");
    const std::string kind = doc["kind"].get<std::string>();
    if (kind == "ising_zz")
        out.model.kind = ModelKind::ising_zz;
    else if (kind == "heisenberg")
        out.model.kind = ModelKind::heisenberg;
    else
        throw ModelParseError("unsupported kind \"" + kind +
                              "\" (expected ising_zz or heisenberg)");

    if (!doc.contains("couplings") || !doc["couplings"].is_array())
        throw ModelParseError("\"couplings\" must be an array of [site, site, strength]");
    for (const auto& entry : doc["couplings"]) {
        if (!entry.is_array() || entry.size() != 3 || !entry[0].is_number_integer() ||
            !entry[1].is_number_integer() || !entry[2].is_number())
            throw ModelParseError("coupling entries must be [integer, integer, number]");
        out.model.couplings.push_back(
            {entry[0].get<int>(), entry[1].get<int>(), entry[2].get<double>()});
    }

    out.model.bath_field = detail::require_number(doc, "field_h", "model file");

    if (!doc.contains("probe") || !doc["probe"].is_object())
        throw ModelParseError("\"probe\" must be an object {lambda, h0}");
    detail::reject_unknown_keys(doc["probe"], {"lambda", "h0"}, "probe");
    out.probe.lambda = detail::require_number(doc["probe"], "lambda", "probe");
    out.probe.h0 = detail::require_number(doc["probe"], "h0", "probe");

    out.thermal.beta = detail::require_number(doc, "beta", "model file");
    out.thermal.hbar = doc.contains("hbar") ? detail::require_number(doc, "hbar", "model file")
                                            : 1.0;

    try {
        validate(out.model);
        validate(out.thermal);
    } catch (const std::invalid_argument& err) {
        throw ModelParseError(err.what());
    }
    return out;
}

inline ModelFile parse_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelParseError("cannot open model file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& err) {
        throw ModelParseError("invalid JSON in " + path + ": " + err.what());
    }
    return parse_model_json(doc);
}

}  // namespace leeyang
