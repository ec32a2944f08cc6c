#pragma once

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "eitsim/config.hpp"
#include "eitsim/lineshape.hpp"
#include "eitsim/motion.hpp"
#include "eitsim/multilevel.hpp"
#include "eitsim/optics.hpp"
#include "eitsim/steady.hpp"
#include "eitsim/svg.hpp"

namespace eitsim {

inline const char* version_string() { return "1.0.0"; }

struct RunReport {
    Spectrum chi;
    std::optional<TransmissionSpectrum> transmission;
    std::optional<FiguresOfMerit> figures;
    std::optional<FitResult> fit_result;
    std::vector<std::string> warnings;
    std::string config_hash;
    std::string version;
    std::string timestamp;
};

namespace detail {

inline const FieldDrive& find_field(const std::vector<FieldDrive>& fields,
                                    FieldRole role, const char* what) {
    for (const FieldDrive& f : fields)
        if (f.role == role) return f;
    throw ValidationError(std::string("scenario lacks a ") + what + " field");
}

inline std::string hash_hex(const std::string& s) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016zx", std::hash<std::string>{}(s));
    return buf;
}

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Convolve a complex spectrum with the (grid-normalized) transit cusp weight.
inline Spectrum convolve_cusp(const Spectrum& chi, double w0, double v_th) {
    const std::size_t n = chi.size();
    const double h = chi.delta[1] - chi.delta[0];
    const double cusp_hw = v_th / w0;
    if (h > cusp_hw / 10.0)
        throw ResolutionError(
            "transit_cusp: grid step does not resolve v_th/w0 by >= 10 points");
    std::vector<double> kernel(n);
    double norm = 0.0;
    const double mid = 0.5 * (chi.delta.front() + chi.delta.back());
    for (std::size_t i = 0; i < n; ++i) {
        kernel[i] = cusp_lineshape(chi.delta[i] - mid, w0, v_th);
        norm += kernel[i];
    }
    Spectrum out;
    out.delta = chi.delta;
    out.warnings = chi.warnings;
    out.chi.assign(n, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        Complex acc(0.0, 0.0);
        double wsum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const long k = long(i) - (long(j) - long(n / 2));
            if (k < 0 || k >= long(n)) continue;
            acc += kernel[j] * chi.chi[std::size_t(k)];
            wsum += kernel[j];
        }
        out.chi[i] = acc / wsum;
    }
    (void)norm;
    return out;
}

} // namespace detail

// Compute the susceptibility spectrum for a scenario under its motion_mode.
inline Spectrum compute_spectrum(const ScenarioConfig& cfg) {
    if (cfg.multilevel)
        return spectrum_nested(cfg.multilevel->root, cfg.grid,
                               cfg.multilevel->map);

    const FieldDrive& probe =
        detail::find_field(cfg.fields, FieldRole::Probe, "probe");
    const FieldDrive& control =
        detail::find_field(cfg.fields, FieldRole::Control, "control");
    const TwoPhotonConfig tp =
        TwoPhotonConfig::from(cfg.atom.scheme, probe, control);

    switch (cfg.motion_mode) {
        case MotionMode::None: {
            Spectrum out;
            out.delta = cfg.grid.values();
            out.chi.reserve(out.delta.size());
            for (double d : out.delta) {
                const double d1 = detail::delta1_of(cfg.atom.scheme,
                                                    control.detuning, d);
                out.chi.push_back(
                    chi_weak_probe(cfg.atom, control, d1, d).value);
            }
            return out;
        }
        case MotionMode::DopplerAverage:
            return doppler_average(cfg.atom, control, cfg.grid,
                                   probe.k_magnitude(), tp.k_eff,
                                   cfg.motion.v_th);
        case MotionMode::DickeSubstitution:
            return dicke_eit_spectrum(cfg.atom, control, cfg.grid, tp.k_eff,
                                      cfg.motion.diffusion, cfg.motion.v_th);
        case MotionMode::TransitCusp: {
            Spectrum base;
            base.delta = cfg.grid.values();
            base.chi.reserve(base.delta.size());
            for (double d : base.delta) {
                const double d1 = detail::delta1_of(cfg.atom.scheme,
                                                    control.detuning, d);
                base.chi.push_back(
                    chi_weak_probe(cfg.atom, control, d1, d).value);
            }
            const double w0 = cfg.motion.waist_generic > 0
                                  ? cfg.motion.waist_generic
                                  : cfg.motion.waist_probe;
            if (!(w0 > 0))
                throw ValidationError("transit_cusp: needs a beam waist");
            return detail::convolve_cusp(base, w0, cfg.motion.v_th);
        }
        case MotionMode::CollisionalFormula: {
            AtomicSystem sys = cfg.atom;
            const double sig =
                sigma_doppler(cfg.motion.v_th, probe.k_magnitude());
            sys.gamma13 += cfg.motion.gamma13_col + sig;
            sys.gamma23 += cfg.motion.gamma13_col + sig;
            sys.gamma12 += cfg.motion.gamma12_col;
            Spectrum out;
            out.delta = cfg.grid.values();
            out.chi.reserve(out.delta.size());
            for (double d : out.delta) {
                const double d1 = detail::delta1_of(cfg.atom.scheme,
                                                    control.detuning, d);
                out.chi.push_back(chi_weak_probe(sys, control, d1, d).value);
            }
            if (!(cfg.atom.gamma13 + cfg.motion.gamma13_col > 3.0 * sig))
                out.warnings.push_back(
                    "collisional_formula: gamma13 + gamma13_col is not large "
                    "against sigma_Dop; homogeneous substitution is a crude "
                    "approximation");
            return out;
        }
    }
    throw ValidationError("unknown motion mode");
}

inline void write_csv(const std::string& path, const Spectrum& chi,
                      const TransmissionSpectrum* trans) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write CSV to " + path);
    out << "delta_rad_s,re_chi,im_chi,transmission,phase_rad\n";
    for (std::size_t i = 0; i < chi.size(); ++i) {
        out << detail::format_double(chi.delta[i]) << ','
            << detail::format_double(chi.chi[i].real()) << ','
            << detail::format_double(chi.chi[i].imag()) << ','
            << detail::format_double(trans ? trans->transmission[i] : 1.0)
            << ','
            << detail::format_double(trans ? trans->phase[i] : 0.0) << '\n';
    }
    if (!out) throw IoError("write failure on " + path);
}

inline nlohmann::json report_json(const RunReport& report) {
    nlohmann::json j;
    j["provenance"] = {{"config_hash", report.config_hash},
                       {"version", report.version},
                       {"timestamp", report.timestamp}};
    j["warnings"] = report.warnings;
    if (report.figures) {
        const FiguresOfMerit& f = *report.figures;
        j["figures_of_merit"] = {{"od", f.od},
                                 {"od_eit", f.od_eit},
                                 {"gamma_eit_fit_rad_s", f.gamma_eit_fit},
                                 {"bandwidth_rad_s", f.bandwidth},
                                 {"delay_s", f.delay},
                                 {"time_bandwidth_product", f.tbp}};
    }
    if (report.fit_result) {
        const FitResult& f = *report.fit_result;
        j["fit"] = {{"params", f.model.params},
                    {"rms_residual", f.rms_residual},
                    {"fwhm_rad_s", f.fwhm},
                    {"center_rad_s", f.center},
                    {"contrast", f.contrast},
                    {"converged", f.converged},
                    {"iterations", f.iterations}};
    }
    return j;
}

// End-to-end scenario run: spectrum per motion_mode, optional transmission
// and figures of merit, optional fit, declared file outputs.
inline RunReport run_spectrum(const ScenarioConfig& cfg,
                              const std::string& out_dir = ".") {
    RunReport report;
    report.version = version_string();
    report.config_hash = detail::hash_hex(cfg.raw.dump());
    {
        std::time_t now = std::time(nullptr);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ",
                      std::gmtime(&now));
        report.timestamp = buf;
    }
    for (const std::string& w : cfg.atom.validate())
        report.warnings.push_back(w);

    report.chi = compute_spectrum(cfg);
    for (const std::string& w : report.chi.warnings)
        report.warnings.push_back(w);

    if (cfg.medium_length > 0) {
        MediumSpec medium;
        medium.length = cfg.medium_length;
        medium.atom = cfg.atom;
        medium.k_probe =
            cfg.medium_k_probe > 0
                ? cfg.medium_k_probe
                : detail::find_field(cfg.fields, FieldRole::Probe, "probe")
                      .k_magnitude();
        report.transmission = transmission_spectrum(report.chi, medium);
        try {
            report.figures = figures_of_merit(*report.transmission, medium);
        } catch (const NoResonance& e) {
            report.warnings.push_back(e.what());
        }
    }

    if (cfg.fit_model) {
        const FitModelKind kind = parse_fit_model(cfg.fit_model->name);
        report.fit_result = fit(report.chi, kind);
        if (!report.fit_result->converged)
            report.warnings.push_back("fit did not converge; best-so-far "
                                      "parameters reported");
    }

    for (const OutputSpec& o : cfg.outputs) {
        const std::string path = out_dir + "/" + o.path;
        switch (o.format) {
            case OutputFormat::Csv:
                write_csv(path, report.chi,
                          report.transmission ? &*report.transmission
                                              : nullptr);
                break;
            case OutputFormat::Json: {
                std::ofstream out(path, std::ios::binary);
                if (!out) throw IoError("cannot write JSON to " + path);
                out << report_json(report).dump(2) << '\n';
                break;
            }
            case OutputFormat::Svg:
                write_svg(path, report.chi,
                          report.transmission ? &*report.transmission
                                              : nullptr);
                break;
        }
    }
    return report;
}

struct ScanRow {
    double value = 0.0;
    FiguresOfMerit figures;
    double fit_fwhm = 0.0; // rad/s, from the configured fit model if any
};

// Apply one sweep value to a config document. Ordinary entries are JSON
// pointers into the document; the virtual pointer "/theta_rad" tilts the
// control beam by theta in the x-z plane (changing k_eff ~ k theta).
inline ScenarioConfig apply_sweep_value(const ScenarioConfig& base,
                                        const std::string& pointer,
                                        double value) {
    nlohmann::json doc = base.raw;
    if (pointer == "/theta_rad") {
        if (!doc.contains("fields")) {
            // materialize the preset's fields so the tilt can be applied
            doc["fields"] = nlohmann::json::array();
            for (const FieldDrive& f : base.fields)
                doc["fields"].push_back(
                    {{"role", f.role == FieldRole::Probe ? "probe" : "control"},
                     {"rabi", f.rabi.real()},
                     {"detuning", f.detuning},
                     {"wavevector",
                      {f.wavevector[0], f.wavevector[1], f.wavevector[2]}}});
        }
        for (auto& f : doc["fields"]) {
            if (f["role"] != "control") continue;
            const double kx = f["wavevector"][0].get<double>();
            const double kz = f["wavevector"][2].get<double>();
            f["wavevector"][0] = kx * std::cos(value) + kz * std::sin(value);
            f["wavevector"][2] = kz * std::cos(value) - kx * std::sin(value);
        }
    } else {
        nlohmann::json::json_pointer p;
        try {
            p = nlohmann::json::json_pointer(pointer);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError("sweep: bad JSON pointer '" + pointer +
                                  "': " + e.what());
        }
        if (!doc.contains(p))
            throw ValidationError("sweep: pointer '" + pointer +
                                  "' not present in config");
        if (!doc.at(p).is_number())
            throw ValidationError("sweep: pointer '" + pointer +
                                  "' does not address a numeric field");
        doc[p] = value;
    }
    return parse_scenario(doc);
}

inline std::vector<ScanRow> run_scan(const ScenarioConfig& base,
                                     const std::string& pointer,
                                     const std::vector<double>& values,
                                     const std::string& out_dir = ".") {
    std::vector<ScanRow> rows;
    for (double v : values) {
        ScenarioConfig cfg = apply_sweep_value(base, pointer, v);
        cfg.outputs.clear(); // per-row artifacts are not emitted
        RunReport rep = run_spectrum(cfg, out_dir);
        ScanRow row;
        row.value = v;
        if (rep.figures) row.figures = *rep.figures;
        if (rep.fit_result) row.fit_fwhm = rep.fit_result->fwhm;
        rows.push_back(row);
    }
    return rows;
}

inline void write_scan_csv(const std::string& path,
                           const std::string& pointer,
                           const std::vector<ScanRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write scan CSV to " + path);
    out << "sweep_value,od,od_eit,gamma_eit_rad_s,bandwidth_rad_s,delay_s,"
           "tbp,fit_fwhm_rad_s\n";
    for (const ScanRow& r : rows) {
        out << detail::format_double(r.value) << ','
            << detail::format_double(r.figures.od) << ','
            << detail::format_double(r.figures.od_eit) << ','
            << detail::format_double(r.figures.gamma_eit_fit) << ','
            << detail::format_double(r.figures.bandwidth) << ','
            << detail::format_double(r.figures.delay) << ','
            << detail::format_double(r.figures.tbp) << ','
            << detail::format_double(r.fit_fwhm) << '\n';
    }
    (void)pointer;
}

// Parse a CSV produced by write_csv back into a Spectrum.
inline Spectrum read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open CSV " + path);
    std::string header;
    if (!std::getline(in, header))
        throw ValidationError("CSV " + path + " is empty");
    if (header.rfind("delta_rad_s,re_chi,im_chi", 0) != 0)
        throw ValidationError(
            "CSV " + path +
            ": missing required columns delta_rad_s,re_chi,im_chi");
    Spectrum s;
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string cell;
        std::vector<double> cells;
        while (std::getline(ss, cell, ','))
            cells.push_back(std::stod(cell));
        if (cells.size() < 3)
            throw ValidationError("CSV " + path + " line " +
                                  std::to_string(lineno) + ": too few columns");
        s.delta.push_back(cells[0]);
        s.chi.push_back(Complex(cells[1], cells[2]));
    }
    for (std::size_t i = 1; i < s.delta.size(); ++i)
        if (!(s.delta[i] > s.delta[i - 1]))
            throw ValidationError("CSV " + path +
                                  ": delta_rad_s column must increase");
    if (s.delta.size() < 2)
        throw ValidationError("CSV " + path + ": no data rows");
    return s;
}

inline FitResult fit_file(const std::string& csv_path, FitModelKind kind) {
    return fit(read_csv(csv_path), kind);
}

} // namespace eitsim
