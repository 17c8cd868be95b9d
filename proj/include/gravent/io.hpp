#pragma once

// JSON experiment files.
//
// {
//   "model": "qg",                 optional
//   "mass_kg": 1e-14, "time_s": 2.0,
//   "dx_m": 2e-4, "dsep_m": 2e-4,
//   "radius_m": 1e-6,              optional, derived from density if absent
//   "material": {"name": "Yb", "atom_mass_kg": ..., "density_kg_m3": ...},   optional
//   "geometry": "collinear" | {"x1L": [x,y,z], "x1R": [...], "x2L": [...], "x2R": [...]},
//   "constants": {"G": ..., "hbar": ..., "c": ...}                          optional
// }

#include "gravent/amplitudes.hpp"
#include "gravent/config.hpp"
#include "gravent/entanglement.hpp"

#include <json.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace gravent {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    ExperimentConfig cfg;
    std::optional<std::string> model;
};

namespace detail {

inline double number_field(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
    if (!j.at(key).is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
    return j.at(key).get<double>();
}

inline Vec3 vec3_field(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("missing position '") + key + "'");
    const auto& a = j.at(key);
    if (!a.is_array() || a.size() != 3) throw ConfigError(std::string("position '") + key + "' must be [x, y, z]");
    Vec3 v;
    for (int k = 0; k < 3; ++k) {
        if (!a[k].is_number()) throw ConfigError(std::string("position '") + key + "' has a non-numeric entry");
        v[k] = a[k].get<double>();
    }
    return v;
}

} // namespace detail

inline RunConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    RunConfig rc;
    auto& cfg = rc.cfg;
    if (j.contains("model")) rc.model = j.at("model").get<std::string>();

    if (j.contains("material")) {
        const auto& m = j.at("material");
        cfg.material.name = m.value("name", std::string("custom"));
        cfg.material.atom_mass = detail::number_field(m, "atom_mass_kg");
        cfg.material.density = detail::number_field(m, "density_kg_m3");
    }
    if (j.contains("constants")) {
        const auto& c = j.at("constants");
        cfg.constants.G = c.contains("G") ? detail::number_field(c, "G") : cfg.constants.G;
        cfg.constants.hbar = c.contains("hbar") ? detail::number_field(c, "hbar") : cfg.constants.hbar;
        cfg.constants.c = c.contains("c") ? detail::number_field(c, "c") : cfg.constants.c;
    }
    try {
        cfg.material.validate();
        cfg.constants.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }

    cfg.M = detail::number_field(j, "mass_kg");
    cfg.t = detail::number_field(j, "time_s");
    if (j.contains("radius_m")) {
        cfg.R = detail::number_field(j, "radius_m");
    } else {
        try {
            cfg.R = derive_radius(cfg.M, cfg.material.density);
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
    }

    const auto geom = j.value("geometry", nlohmann::json("collinear"));
    if (geom.is_string()) {
        if (geom.get<std::string>() != "collinear") {
            throw ConfigError("geometry must be \"collinear\" or an object of positions");
        }
        cfg.dx = detail::number_field(j, "dx_m");
        cfg.d_rl = detail::number_field(j, "dsep_m");
        cfg.geometry = CollinearGeometry{};
    } else if (geom.is_object()) {
        ExplicitPositions pos;
        pos.x1L = detail::vec3_field(geom, "x1L");
        pos.x1R = detail::vec3_field(geom, "x1R");
        pos.x2L = detail::vec3_field(geom, "x2L");
        pos.x2R = detail::vec3_field(geom, "x2R");
        cfg.geometry = pos;
        cfg.dx = cfg.branch_separation(1);
        cfg.d_rl = cfg.distance(RL);
    } else {
        throw ConfigError("geometry must be \"collinear\" or an object of positions");
    }

    if (!(cfg.M > 0.0) || !(cfg.R > 0.0) || cfg.t < 0.0) {
        throw ConfigError("mass_kg and radius must be > 0 and time_s >= 0");
    }
    return rc;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
    try {
        return config_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
}

inline nlohmann::ordered_json complex_json(cplx z) { return nlohmann::ordered_json::array({z.real(), z.imag()}); }

inline nlohmann::ordered_json to_json(const AmplitudeSet& a) {
    nlohmann::ordered_json alpha = nlohmann::ordered_json::object();
    for (auto p : all_pairs) alpha[p.name()] = complex_json(a[p]);
    return {{"model", to_string(a.model)},
            {"order", a.order},
            {"exponentiated", a.exponentiated},
            {"perturbative_ok", a.perturbative_ok},
            {"alpha", alpha}};
}

inline nlohmann::ordered_json to_json(const Matrix4c& m) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int r = 0; r < 4; ++r) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (int c = 0; c < 4; ++c) row.push_back(complex_json(m(r, c)));
        rows.push_back(row);
    }
    return rows;
}

inline nlohmann::ordered_json to_json(const ValidityReport& rep) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& f : rep.flags) {
        arr.push_back({{"name", f.name}, {"status", to_string(f.status)}, {"detail", f.detail}});
    }
    return arr;
}

} // namespace gravent
