#include "herald/io.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <fstream>
#include <sstream>

#include "herald/error.hpp"

namespace herald {

std::string format_double(double x) {
    if (x == 0.0) return "0.00000000000e+00";  // no negative zero
    return fmt::format("{:.11e}", x);
}

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 || EVP_DigestFinal_ex(ctx, md, &len) != 1) {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("sha256 failed");
    }
    EVP_MD_CTX_free(ctx);
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", md[i]);
    return out;
}

std::string render_csv(const CsvTable& t, const std::vector<std::string>& comments) {
    std::string out;
    for (const auto& c : comments) out += "# " + c + "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
    out += "\n";
    for (const auto& row : t.rows) {
        if (row.size() != t.columns.size()) throw std::logic_error("render_csv: row width mismatch");
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
        out += "\n";
    }
    return out;
}

CsvTable parse_csv(const std::string& text) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (header) {
            t.columns = std::move(cells);
            header = false;
        } else {
            t.rows.push_back(std::move(cells));
        }
    }
    return t;
}

nlohmann::json to_json(const SystemParams& p) {
    return {
        {"scheme", to_string(p.scheme)},
        {"n_qubits", p.n_qubits},
        {"gamma", p.gamma},
        {"kappa", p.kappa},
        {"g", p.g},
        {"g_f", p.g_f},
        {"gamma_f", p.gamma_f},
        {"gamma_g", p.gamma_g},
        {"omega", p.omega},
        {"omega_mw", p.omega_mw},
        {"delta_E", p.delta_E},
        {"delta_e", p.delta_e},
        {"delta_E2", p.delta_E2},
        {"photon_cutoff", p.photon_cutoff},
        {"ramp", {{"shape", p.drive.shape == RampShape::Flat ? "flat" : "sin2"}, {"t_ramp", p.drive.t_ramp}}},
    };
}

SystemParams params_from_json(const nlohmann::json& j) {
    SystemParams p;
    p.scheme = scheme_from_string(j.at("scheme").get<std::string>());
    p.n_qubits = j.at("n_qubits").get<int>();
    p.gamma = j.at("gamma").get<double>();
    p.kappa = j.at("kappa").get<double>();
    p.g = j.at("g").get<double>();
    p.g_f = j.at("g_f").get<double>();
    p.gamma_f = j.at("gamma_f").get<double>();
    p.gamma_g = j.at("gamma_g").get<double>();
    p.omega = j.at("omega").get<double>();
    p.omega_mw = j.at("omega_mw").get<double>();
    p.delta_E = j.at("delta_E").get<double>();
    p.delta_e = j.at("delta_e").get<double>();
    p.delta_E2 = j.at("delta_E2").get<double>();
    p.photon_cutoff = j.at("photon_cutoff").get<int>();
    const auto& r = j.at("ramp");
    p.drive.shape = r.at("shape").get<std::string>() == "flat" ? RampShape::Flat : RampShape::SinSquared;
    p.drive.t_ramp = r.at("t_ramp").get<double>();
    p.validate();
    return p;
}

nlohmann::json to_json(const CalibrationResult& c) {
    nlohmann::json j = {{"delta_E", c.delta_E},   {"delta_e", c.delta_e}, {"residual", c.residual},
                        {"iterations", c.iterations}, {"mode", c.mode}};
    if (c.mode == "tradeoff") {
        j["lambda"] = c.lambda;
        j["error"] = c.error;
        j["failure"] = c.failure;
    }
    return j;
}

nlohmann::json to_json(const IntegrationOptions& o) {
    return {{"rtol", o.rtol},
            {"atol", o.atol},
            {"trace_tolerance", o.trace_tolerance},
            {"positivity_tolerance", o.positivity_tolerance}};
}

CsvTable timeseries_table(const TimeSeries& s) {
    CsvTable t;
    t.columns = {"t", "P_success", "fidelity"};
    for (std::size_t i = 0; i < s.times.size(); ++i) {
        const double f = i < s.fidelity.size() ? s.fidelity[i] : 0.0;
        t.rows.push_back({format_double(s.times[i]), format_double(s.success[i]), format_double(f)});
    }
    return t;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParameterError("cannot write " + path.string());
    out << content;
    if (!out) throw ParameterError("write failed for " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParameterError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace herald
