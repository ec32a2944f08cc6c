#pragma once

#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "eitsim/errors.hpp"
#include "eitsim/types.hpp"

namespace eitsim {

struct Preset {
    std::string name;
    std::string description;
    AtomicSystem atom;
    std::vector<FieldDrive> fields; // probe first, then control(s)
    MotionEnvironment motion;

    const FieldDrive& probe() const { return field(FieldRole::Probe); }
    const FieldDrive& control() const { return field(FieldRole::Control); }

  private:
    const FieldDrive& field(FieldRole role) const {
        for (const FieldDrive& f : fields)
            if (f.role == role) return f;
        throw ValidationError("preset '" + name + "' lacks a " +
                              (role == FieldRole::Probe ? std::string("probe")
                                                        : std::string("control")) +
                              " field");
    }
};

namespace detail {

inline std::string data_dir() {
    if (const char* env = std::getenv("EITSIM_DATA_DIR")) return env;
#ifdef EITSIM_DATA_DIR
    return EITSIM_DATA_DIR;
#else
    return "data";
#endif
}

inline AtomicSystem parse_atom(const nlohmann::json& j) {
    AtomicSystem a;
    const std::string scheme = j.at("scheme").get<std::string>();
    if (scheme == "lambda")
        a.scheme = SchemeKind::Lambda;
    else if (scheme == "ladder")
        a.scheme = SchemeKind::Ladder;
    else
        throw ValidationError("unknown scheme '" + scheme + "'");
    a.gamma13 = j.at("gamma13").get<double>();
    a.gamma12 = j.at("gamma12").get<double>();
    a.gamma23 = j.at("gamma23").get<double>();
    a.gamma3 = j.at("gamma3").get<double>();
    a.r31 = j.value("r31", a.r31);
    a.r32 = j.value("r32", a.r32);
    a.omega12 = j.value("omega12", a.omega12);
    a.dipole13 = j.at("dipole13").get<double>();
    a.density = j.at("density").get<double>();
    return a;
}

inline FieldDrive parse_field(const nlohmann::json& j) {
    FieldDrive f;
    const std::string role = j.at("role").get<std::string>();
    if (role == "probe")
        f.role = FieldRole::Probe;
    else if (role == "control")
        f.role = FieldRole::Control;
    else
        throw ValidationError("unknown field role '" + role + "'");
    if (j.at("rabi").is_array())
        f.rabi = Complex(j["rabi"][0].get<double>(), j["rabi"][1].get<double>());
    else
        f.rabi = Complex(j.at("rabi").get<double>(), 0.0);
    f.detuning = j.value("detuning", 0.0);
    if (j.contains("wavevector")) {
        const auto& k = j.at("wavevector");
        for (int i = 0; i < 3; ++i)
            f.wavevector[std::size_t(i)] = k.at(i).get<double>();
    }
    return f;
}

inline MotionEnvironment parse_motion(const nlohmann::json& j) {
    MotionEnvironment m;
    m.v_th = j.value("v_th", m.v_th);
    m.diffusion = j.value("diffusion", m.diffusion);
    m.waist_probe = j.value("waist_probe", m.waist_probe);
    m.waist_control = j.value("waist_control", m.waist_control);
    m.waist_generic = j.value("waist_generic", m.waist_generic);
    m.gamma13_col = j.value("gamma13_col", m.gamma13_col);
    m.gamma12_col = j.value("gamma12_col", m.gamma12_col);
    m.buffer_pressure = j.value("buffer_pressure", m.buffer_pressure);
    m.validate();
    return m;
}

inline const nlohmann::json& preset_catalog() {
    static const nlohmann::json catalog = [] {
        const std::string path = data_dir() + "/presets.json";
        std::ifstream in(path);
        if (!in) throw IoError("cannot open preset catalog at " + path);
        nlohmann::json j;
        in >> j;
        return j;
    }();
    return catalog;
}

} // namespace detail

inline std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& [k, v] : detail::preset_catalog().at("presets").items())
        names.push_back(k);
    return names;
}

inline Preset preset(const std::string& name) {
    const nlohmann::json& all = detail::preset_catalog().at("presets");
    if (!all.contains(name)) {
        std::string valid;
        for (const auto& [k, v] : all.items()) {
            if (!valid.empty()) valid += ", ";
            valid += k;
        }
        throw ValidationError("unknown preset '" + name + "'; valid names: " +
                              valid);
    }
    const nlohmann::json& j = all.at(name);
    Preset p;
    p.name = name;
    p.description = j.value("description", "");
    p.atom = detail::parse_atom(j.at("atom"));
    p.atom.validate();
    for (const auto& f : j.at("fields")) p.fields.push_back(detail::parse_field(f));
    p.motion = detail::parse_motion(j.at("motion"));
    return p;
}

} // namespace eitsim
