#pragma once

#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "eitsim/errors.hpp"
#include "eitsim/lineshape.hpp"
#include "eitsim/multilevel.hpp"
#include "eitsim/presets.hpp"
#include "eitsim/types.hpp"
#include "eitsim/units.hpp"

namespace eitsim {

enum class MotionMode {
    None,
    DopplerAverage,
    DickeSubstitution,
    TransitCusp,
    CollisionalFormula,
};

inline std::string motion_mode_name(MotionMode m) {
    switch (m) {
        case MotionMode::None: return "none";
        case MotionMode::DopplerAverage: return "doppler_average";
        case MotionMode::DickeSubstitution: return "dicke_substitution";
        case MotionMode::TransitCusp: return "transit_cusp";
        case MotionMode::CollisionalFormula: return "collisional_formula";
    }
    return "none";
}

enum class OutputFormat { Csv, Json, Svg };

struct OutputSpec {
    OutputFormat format = OutputFormat::Csv;
    std::string path;
};

struct MultilevelConfig {
    ProbeRoot root;
    std::vector<DetuningMapEntry> map;
};

struct ScenarioConfig {
    struct FitModelKindName {
        std::string name;
    };

    AtomicSystem atom;
    std::vector<FieldDrive> fields;
    MotionEnvironment motion;
    double medium_length = 0.0;  // m; 0 = no transmission outputs requested
    double medium_k_probe = 0.0; // rad/m; 0 = take |k| of the probe field
    DetuningGrid grid;
    MotionMode motion_mode = MotionMode::None;
    std::optional<MultilevelConfig> multilevel;
    std::optional<FitModelKindName> fit_model;
    std::vector<OutputSpec> outputs;
    nlohmann::json raw; // normalized source document (for hashing/round-trip)
};

namespace detail {

[[noreturn]] inline void config_error(const std::string& pointer,
                                      const std::string& what) {
    throw ValidationError("config error at " +
                          (pointer.empty() ? "/" : pointer) + ": " + what);
}

inline void require_keys(const nlohmann::json& j, const std::string& pointer,
                         const std::set<std::string>& allowed) {
    if (!j.is_object()) config_error(pointer, "expected an object");
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k))
            config_error(pointer + "/" + k, "unknown key '" + k + "'");
}

inline double require_number(const nlohmann::json& j,
                             const std::string& pointer,
                             const std::string& key) {
    if (!j.contains(key)) config_error(pointer + "/" + key, "missing");
    if (!j[key].is_number())
        config_error(pointer + "/" + key, "expected a number");
    return j[key].get<double>();
}

inline AtomicSystem parse_atom_strict(const nlohmann::json& j,
                                      const std::string& ptr) {
    require_keys(j, ptr,
                 {"scheme", "gamma13", "gamma12", "gamma23", "gamma3", "r31",
                  "r32", "omega12", "dipole13", "density"});
    try {
        return detail::parse_atom(j);
    } catch (const Error& e) {
        config_error(ptr, e.what());
    }
}

inline FieldDrive parse_field_strict(const nlohmann::json& j,
                                     const std::string& ptr) {
    require_keys(j, ptr, {"role", "rabi", "detuning", "wavevector"});
    try {
        return detail::parse_field(j);
    } catch (const Error& e) {
        config_error(ptr, e.what());
    }
}

inline MotionEnvironment parse_motion_strict(const nlohmann::json& j,
                                             const std::string& ptr) {
    require_keys(j, ptr,
                 {"v_th", "diffusion", "waist_probe", "waist_control",
                  "waist_generic", "gamma13_col", "gamma12_col",
                  "buffer_pressure"});
    try {
        return detail::parse_motion(j);
    } catch (const Error& e) {
        config_error(ptr, e.what());
    }
}

inline CouplingNode parse_coupling_node(const nlohmann::json& j,
                                        const std::string& ptr) {
    require_keys(j, ptr, {"rabi", "gamma", "delta", "children"});
    CouplingNode n;
    if (j.at("rabi").is_array())
        n.rabi = Complex(j["rabi"][0].get<double>(), j["rabi"][1].get<double>());
    else
        n.rabi = Complex(require_number(j, ptr, "rabi"), 0.0);
    n.gamma = require_number(j, ptr, "gamma");
    n.delta = require_number(j, ptr, "delta");
    if (j.contains("children")) {
        std::size_t i = 0;
        for (const auto& c : j["children"])
            n.children.push_back(parse_coupling_node(
                c, ptr + "/children/" + std::to_string(i++)));
    }
    return n;
}

} // namespace detail

inline ScenarioConfig parse_scenario(const nlohmann::json& doc) {
    using detail::config_error;
    detail::require_keys(doc, "",
                         {"schema_version", "preset", "atom", "fields",
                          "motion", "medium", "grid", "motion_mode",
                          "multilevel", "fit", "outputs"});
    if (!doc.contains("schema_version"))
        config_error("/schema_version", "missing");
    if (doc["schema_version"] != 1)
        config_error("/schema_version", "unsupported version (expected 1)");

    ScenarioConfig cfg;
    bool have_atom = false, have_fields = false;
    if (doc.contains("preset")) {
        if (!doc["preset"].is_string())
            config_error("/preset", "expected a string");
        const Preset p = preset(doc["preset"].get<std::string>());
        cfg.atom = p.atom;
        cfg.fields = p.fields;
        cfg.motion = p.motion;
        have_atom = have_fields = true;
    }
    if (doc.contains("atom")) {
        cfg.atom = detail::parse_atom_strict(doc["atom"], "/atom");
        have_atom = true;
    }
    if (doc.contains("fields")) {
        cfg.fields.clear();
        std::size_t i = 0;
        for (const auto& f : doc["fields"])
            cfg.fields.push_back(detail::parse_field_strict(
                f, "/fields/" + std::to_string(i++)));
        have_fields = true;
    }
    if (!have_atom) config_error("/atom", "need 'preset' or inline 'atom'");
    if (!have_fields && !doc.contains("multilevel"))
        config_error("/fields", "need 'preset', 'fields', or 'multilevel'");
    if (doc.contains("motion"))
        cfg.motion = detail::parse_motion_strict(doc["motion"], "/motion");

    if (doc.contains("medium")) {
        detail::require_keys(doc["medium"], "/medium", {"length", "k_probe"});
        cfg.medium_length = detail::require_number(doc["medium"], "/medium",
                                                   "length");
        if (doc["medium"].contains("k_probe"))
            cfg.medium_k_probe =
                detail::require_number(doc["medium"], "/medium", "k_probe");
    }

    if (!doc.contains("grid")) config_error("/grid", "missing");
    {
        const nlohmann::json& g = doc["grid"];
        detail::require_keys(g, "/grid", {"start", "stop", "points", "unit"});
        Unit unit = Unit::RadPerSec;
        if (g.contains("unit")) {
            try {
                unit = parse_unit(g["unit"].get<std::string>());
            } catch (const Error& e) {
                config_error("/grid/unit", e.what());
            }
        }
        double factor = 1.0;
        try {
            factor = to_rad_per_sec_factor(unit, cfg.atom.gamma13);
        } catch (const Error& e) {
            config_error("/grid/unit", e.what());
        }
        cfg.grid.start = detail::require_number(g, "/grid", "start") * factor;
        cfg.grid.stop = detail::require_number(g, "/grid", "stop") * factor;
        const double pts = detail::require_number(g, "/grid", "points");
        cfg.grid.points = std::size_t(pts);
        cfg.grid.unit_hint = unit;
        try {
            cfg.grid.validate();
        } catch (const Error& e) {
            config_error("/grid", e.what());
        }
    }

    if (doc.contains("motion_mode")) {
        const std::string m = doc["motion_mode"].get<std::string>();
        if (m == "none")
            cfg.motion_mode = MotionMode::None;
        else if (m == "doppler_average")
            cfg.motion_mode = MotionMode::DopplerAverage;
        else if (m == "dicke_substitution")
            cfg.motion_mode = MotionMode::DickeSubstitution;
        else if (m == "transit_cusp")
            cfg.motion_mode = MotionMode::TransitCusp;
        else if (m == "collisional_formula")
            cfg.motion_mode = MotionMode::CollisionalFormula;
        else
            config_error("/motion_mode", "unknown mode '" + m + "'");
    }

    if (doc.contains("multilevel")) {
        const nlohmann::json& ml = doc["multilevel"];
        detail::require_keys(ml, "/multilevel",
                             {"alpha0", "gamma", "delta", "children", "map"});
        MultilevelConfig mc;
        mc.root.alpha0 = detail::require_number(ml, "/multilevel", "alpha0");
        mc.root.gamma = detail::require_number(ml, "/multilevel", "gamma");
        mc.root.delta = detail::require_number(ml, "/multilevel", "delta");
        std::size_t i = 0;
        if (ml.contains("children"))
            for (const auto& c : ml["children"])
                mc.root.children.push_back(detail::parse_coupling_node(
                    c, "/multilevel/children/" + std::to_string(i++)));
        i = 0;
        if (ml.contains("map")) {
            for (const auto& e : ml["map"]) {
                const std::string p = "/multilevel/map/" + std::to_string(i++);
                detail::require_keys(e, p, {"path", "coefficient"});
                DetuningMapEntry entry;
                if (e.contains("path"))
                    for (const auto& idx : e["path"])
                        entry.path.push_back(idx.get<std::size_t>());
                if (e.contains("coefficient"))
                    entry.coefficient = e["coefficient"].get<double>();
                mc.map.push_back(entry);
            }
        } else {
            mc.map.push_back({{}, 1.0}); // scan the probe root by default
        }
        cfg.multilevel = mc;
        if (cfg.motion_mode != MotionMode::None)
            config_error("/motion_mode",
                         "multilevel trees support motion_mode 'none' only");
    }

    if (doc.contains("fit")) {
        detail::require_keys(doc["fit"], "/fit", {"model"});
        if (!doc["fit"].contains("model"))
            config_error("/fit/model", "missing");
        cfg.fit_model =
            ScenarioConfig::FitModelKindName{doc["fit"]["model"].get<std::string>()};
    }

    if (doc.contains("outputs")) {
        std::size_t i = 0;
        for (const auto& o : doc["outputs"]) {
            const std::string p = "/outputs/" + std::to_string(i++);
            detail::require_keys(o, p, {"format", "path"});
            OutputSpec spec;
            const std::string fmt = o.at("format").get<std::string>();
            if (fmt == "csv")
                spec.format = OutputFormat::Csv;
            else if (fmt == "json")
                spec.format = OutputFormat::Json;
            else if (fmt == "svg")
                spec.format = OutputFormat::Svg;
            else
                config_error(p + "/format", "unknown format '" + fmt + "'");
            if (!o.contains("path")) config_error(p + "/path", "missing");
            spec.path = o["path"].get<std::string>();
            cfg.outputs.push_back(spec);
        }
    }

    cfg.atom.validate();
    cfg.motion.validate();
    cfg.raw = doc;
    return cfg;
}

inline ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("config parse failure in " + path + ": " +
                              e.what());
    }
    return parse_scenario(doc);
}

inline FitModelKind parse_fit_model(const std::string& name) {
    if (name == "generalized_lorentzian")
        return FitModelKind::GeneralizedLorentzian;
    if (name == "lorentzian") return FitModelKind::Lorentzian;
    if (name == "cusp") return FitModelKind::Cusp;
    if (name == "gaussian") return FitModelKind::Gaussian;
    if (name == "pseudo_voigt") return FitModelKind::PseudoVoigt;
    throw ValidationError(
        "unknown fit model '" + name +
        "'; valid: generalized_lorentzian, lorentzian, cusp, gaussian, "
        "pseudo_voigt");
}

} // namespace eitsim
