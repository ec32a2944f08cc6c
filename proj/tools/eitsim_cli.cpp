#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eitsim/eitsim.hpp"

namespace {

// exit codes: 0 success, 1 validation error, 2 numeric failure
constexpr int kExitValidation = 1;
constexpr int kExitNumeric = 2;

std::vector<double> parse_value_list(const std::string& csv) {
    std::vector<double> values;
    std::istringstream ss(csv);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            values.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw eitsim::ValidationError("bad sweep value '" + cell + "'");
        }
    }
    if (values.empty())
        throw eitsim::ValidationError("sweep value list is empty");
    return values;
}

void print_report(const eitsim::RunReport& report, bool quiet) {
    if (quiet) return;
    std::cout << eitsim::report_json(report).dump(2) << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"EIT spectra, motional broadening, and slow-light toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", sweep_arg, csv_path,
                fit_model = "lorentzian";
    std::vector<std::string> formats;
    bool quiet = false;
    app.add_flag("--quiet", quiet, "suppress report output on stdout");

    auto* spectrum = app.add_subcommand("spectrum", "run one scenario");
    spectrum->add_option("--config", config_path, "scenario JSON")->required();
    spectrum->add_option("--out-dir", out_dir, "output directory");
    spectrum->add_option("--format", formats,
                         "extra output format(s): csv|json|svg (paths derived "
                         "from the config file name)");

    auto* scan = app.add_subcommand("scan", "sweep one parameter");
    scan->add_option("--config", config_path, "scenario JSON")->required();
    scan->add_option("--sweep", sweep_arg, "<json-pointer>=<v1,v2,...>")
        ->required();
    scan->add_option("--out-dir", out_dir, "output directory");

    auto* fit_cmd = app.add_subcommand("fit", "fit a CSV spectrum");
    fit_cmd->add_option("--csv", csv_path, "input CSV")->required();
    fit_cmd->add_option("--model", fit_model,
                        "generalized_lorentzian|lorentzian|cusp|gaussian|"
                        "pseudo_voigt");
    fit_cmd->add_option("--out-dir", out_dir, "output directory");

    auto* presets_cmd = app.add_subcommand("presets", "list presets");
    auto* check_cmd =
        app.add_subcommand("check", "run the built-in invariant suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*spectrum) {
            eitsim::ScenarioConfig cfg = eitsim::load_scenario(config_path);
            // --format adds derived-path outputs next to the declared ones
            std::string stem = config_path;
            if (auto slash = stem.find_last_of('/'); slash != std::string::npos)
                stem = stem.substr(slash + 1);
            if (auto dot = stem.find_last_of('.'); dot != std::string::npos)
                stem = stem.substr(0, dot);
            for (const std::string& f : formats) {
                eitsim::OutputSpec spec;
                if (f == "csv")
                    spec.format = eitsim::OutputFormat::Csv;
                else if (f == "json")
                    spec.format = eitsim::OutputFormat::Json;
                else if (f == "svg")
                    spec.format = eitsim::OutputFormat::Svg;
                else
                    throw eitsim::ValidationError("unknown --format '" + f +
                                                  "'");
                spec.path = stem + "." + f;
                cfg.outputs.push_back(spec);
            }
            eitsim::RunReport report = eitsim::run_spectrum(cfg, out_dir);
            print_report(report, quiet);
            return 0;
        }
        if (*scan) {
            const auto eq = sweep_arg.find('=');
            if (eq == std::string::npos)
                throw eitsim::ValidationError(
                    "--sweep expects <json-pointer>=<v1,v2,...>");
            const std::string pointer = sweep_arg.substr(0, eq);
            const std::vector<double> values =
                parse_value_list(sweep_arg.substr(eq + 1));
            eitsim::ScenarioConfig cfg = eitsim::load_scenario(config_path);
            const auto rows = eitsim::run_scan(cfg, pointer, values, out_dir);
            eitsim::write_scan_csv(out_dir + "/scan.csv", pointer, rows);
            if (!quiet)
                std::cout << "wrote " << rows.size() << " rows to " << out_dir
                          << "/scan.csv\n";
            return 0;
        }
        if (*fit_cmd) {
            const eitsim::FitModelKind kind =
                eitsim::parse_fit_model(fit_model);
            const eitsim::FitResult fr = eitsim::fit_file(csv_path, kind);
            nlohmann::json j = {{"params", fr.model.params},
                                {"rms_residual", fr.rms_residual},
                                {"fwhm_rad_s", fr.fwhm},
                                {"center_rad_s", fr.center},
                                {"contrast", fr.contrast},
                                {"converged", fr.converged},
                                {"iterations", fr.iterations}};
            std::ofstream out(out_dir + "/fit.json", std::ios::binary);
            if (!out)
                throw eitsim::IoError("cannot write " + out_dir + "/fit.json");
            out << j.dump(2) << '\n';
            if (!quiet) std::cout << j.dump(2) << '\n';
            return fr.converged ? 0 : kExitNumeric;
        }
        if (*presets_cmd) {
            for (const std::string& name : eitsim::preset_names()) {
                const eitsim::Preset p = eitsim::preset(name);
                std::cout << name << ": " << p.description << '\n';
            }
            return 0;
        }
        if (*check_cmd) {
            bool all_ok = true;
            for (const eitsim::CheckResult& r : eitsim::run_builtin_checks()) {
                all_ok = all_ok && r.passed;
                if (!quiet)
                    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name
                              << " — " << r.detail << '\n';
            }
            return all_ok ? 0 : kExitNumeric;
        }
    } catch (const eitsim::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const eitsim::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const eitsim::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return 0;
}
