#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "herald/calibrate.hpp"
#include "herald/dynamics.hpp"
#include "herald/params.hpp"

namespace herald {

inline constexpr const char* kToolVersion = "0.1.0";

// 12 significant digits, scientific notation.
std::string format_double(double x);

std::string sha256_hex(const std::string& data);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

// `#`-prefixed comment lines, then the column row, then the data rows.
std::string render_csv(const CsvTable& table, const std::vector<std::string>& comments);
CsvTable parse_csv(const std::string& text);  // skips comment lines

nlohmann::json to_json(const SystemParams& p);
SystemParams params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CalibrationResult& c);
nlohmann::json to_json(const IntegrationOptions& o);

// Sampled P_g(t) and F(t) of a full run.
CsvTable timeseries_table(const TimeSeries& series);

void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

}  // namespace herald
