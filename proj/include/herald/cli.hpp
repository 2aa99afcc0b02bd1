#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace herald::cli {

enum ExitCode { kOk = 0, kMismatch = 1, kUsage = 2, kNumerical = 3 };

struct CzArgs {
    std::vector<double> C;
    std::vector<double> a;
    double kappa_ratio = 100.0;
    double alpha = 1.0;
    double beta = 1.0;
    double gamma_g = 0.0;
    std::string scheme = "direct";  // direct | two-photon
    double delta_E2 = 0.0;
    double omega_mw_coeff = 4.0;    // Omega_MW = coeff gamma C^(1/4)
    double omega_ratio = 0.0;       // two-photon: Omega = ratio Delta_E2 (overrides --a)
    double ramp = 0.0;              // sin^2 ramp time [1/gamma]; 0 = flat pulse
    std::string source = "effective";  // effective | full | both
    std::string calibration = "closed_form";  // closed_form | liouvillian
    bool series = false;            // also write the full-run time series
};

struct ToffoliArgs {
    std::vector<int> N;
    std::vector<double> C;
    double alpha = 1.0;
    double beta = 1.0;
    double kappa_ratio = 100.0;
    std::string input = "generic";  // generic | worst
};

struct RepeaterArgs {
    std::vector<double> L;
    double L0 = 1.0;
    std::vector<double> p;
    double eps0 = 0.0;
    double epsg = 0.0;
    double F_final = 0.9;
};

struct OutputFile {
    std::string name;
    std::string content;
};

// In-memory result of one subcommand: data files plus the manifest that
// references them. Nothing here depends on the wall clock except the
// manifest's wall_time field, so CSVs are byte-identical across reruns.
struct RunOutput {
    std::vector<OutputFile> files;
    nlohmann::json manifest;
    std::string manifest_name;
};

RunOutput cmd_cz(const CzArgs& args, int jobs);
RunOutput cmd_toffoli(const ToffoliArgs& args, int jobs);
RunOutput cmd_repeater(const RepeaterArgs& args);

nlohmann::json to_json(const CzArgs& a);
nlohmann::json to_json(const ToffoliArgs& a);
nlohmann::json to_json(const RepeaterArgs& a);
CzArgs cz_args_from_json(const nlohmann::json& j);
ToffoliArgs toffoli_args_from_json(const nlohmann::json& j);
RepeaterArgs repeater_args_from_json(const nlohmann::json& j);

// Writes every file and the manifest below `out`.
void write_run(const RunOutput& run, const std::filesystem::path& out);

// Re-executes the run a manifest describes and compares data checksums.
// Returns true when every file reproduces byte for byte.
bool rerun_manifest(const std::filesystem::path& manifest, const std::filesystem::path& out, int jobs,
                    std::vector<std::string>* report = nullptr);

// "10,30,100" or "lo..hi:n" (n evenly spaced points, default 8).
std::vector<double> parse_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

// --jobs value unless HERALD_JOBS is set; 0 means available parallelism.
int resolve_jobs(int requested);

int run(int argc, char** argv);

}  // namespace herald::cli
