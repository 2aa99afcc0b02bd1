#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "herald/cli.hpp"
#include "herald/error.hpp"
#include "herald/io.hpp"

using namespace herald;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("herald_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

int run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "herald");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return cli::run(static_cast<int>(argv.size()), argv.data());
}

double cell(const CsvTable& t, std::size_t row, const std::string& col) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (t.columns[i] == col) return std::stod(t.rows.at(row).at(i));
    }
    throw std::runtime_error("no column " + col);
}

cli::CzArgs cz_args(std::vector<double> C, std::vector<double> a) {
    cli::CzArgs args;
    args.C = std::move(C);
    args.a = std::move(a);
    return args;
}

}  // namespace

TEST_CASE("number formatting") {
    CHECK(format_double(1.0) == "1.00000000000e+00");
    CHECK(format_double(-0.0) == "0.00000000000e+00");
    CHECK(format_double(-1234.5678901234) == "-1.23456789012e+03");
    CHECK(format_double(2.5e-300) == "2.50000000000e-300");
}

TEST_CASE("sha256 test vectors") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("csv round trip") {
    CsvTable t;
    t.columns = {"x", "y"};
    t.rows = {{"1", "2"}, {"3", "4"}};
    const std::string text = render_csv(t, {"first", "second"});
    CHECK(text.rfind("# first\n# second\nx,y\n", 0) == 0);
    const CsvTable back = parse_csv(text);
    CHECK(back.columns == t.columns);
    CHECK(back.rows == t.rows);
    t.rows.push_back({"5"});
    CHECK_THROWS(render_csv(t, {}));
}

TEST_CASE("parameter json round trip") {
    SystemParams p = make_params(37.0, 1.5, 0.7, 50.0);
    p.scheme = Scheme::TwoPhoton;
    p.delta_E2 = 80.0;
    p.omega_mw = 3.0;
    p.omega = 0.4;
    p.gamma_g = 0.5;
    p.drive = {RampShape::SinSquared, 2.0};
    const SystemParams q = params_from_json(to_json(p));
    CHECK(to_json(q) == to_json(p));
    CHECK(q.cooperativity() == doctest::Approx(37.0).epsilon(1e-14));
}

TEST_CASE("list syntax") {
    CHECK(cli::parse_list("10,30,100") == std::vector<double>{10, 30, 100});
    CHECK(cli::parse_list("1..2:3") == std::vector<double>{1.0, 1.5, 2.0});
    const auto r = cli::parse_list("0.05..0.4");
    REQUIRE(r.size() == 8);
    CHECK(r.front() == 0.05);
    CHECK(r.back() == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(cli::parse_list("").empty());
    CHECK_THROWS_AS(cli::parse_list("ten"), ParameterError);
    CHECK_THROWS_AS(cli::parse_list("2..1"), ParameterError);
    CHECK_THROWS_AS(cli::parse_list("1..2:1"), ParameterError);
    CHECK(cli::parse_int_list("5,10,15") == std::vector<int>{5, 10, 15});
    CHECK_THROWS_AS(cli::parse_int_list("2.5"), ParameterError);
}

TEST_CASE("job count") {
    unsetenv("HERALD_JOBS");
    CHECK(cli::resolve_jobs(2) == 2);
    CHECK(cli::resolve_jobs(0) >= 1);
    CHECK_THROWS_AS(cli::resolve_jobs(-1), ParameterError);
    setenv("HERALD_JOBS", "3", 1);
    CHECK(cli::resolve_jobs(1) == 3);
    setenv("HERALD_JOBS", "many", 1);
    CHECK_THROWS_AS(cli::resolve_jobs(1), ParameterError);
    unsetenv("HERALD_JOBS");
}

TEST_CASE("cz effective point") {
    const cli::RunOutput out = cli::cmd_cz(cz_args({100.0}, {0.25}), 1);
    REQUIRE(out.files.size() == 1);
    const CsvTable t = parse_csv(out.files[0].content);
    REQUIRE(t.rows.size() == 1);
    CHECK(t.columns == std::vector<std::string>{"C", "a", "delta_E", "delta_e", "t_gate", "P_success", "infidelity",
                                                "source"});
    // 15 pi sqrt(C) / (2 Omega^2) with Omega = 2.5 gives 37.7; finite-C corrections add ~1%
    CHECK(cell(t, 0, "t_gate") == doctest::Approx(37.7).epsilon(0.02));
    CHECK(cell(t, 0, "delta_E") == doctest::Approx(10.0125).epsilon(1e-5));
    CHECK(t.rows[0].back() == "effective");
    CHECK(out.manifest.at("points").size() == 1);
    CHECK(out.manifest.at("outputs").at(0).at("sha256") == sha256_hex(out.files[0].content));
    const std::string hash = out.manifest.at("config_sha256");
    CHECK(out.files[0].content.find("# config_sha256 " + hash) != std::string::npos);
}

TEST_CASE("cz output is independent of scheduling") {
    const auto args = cz_args({10.0, 100.0, 1000.0}, {0.1, 0.25});
    const cli::RunOutput a = cli::cmd_cz(args, 1);
    const cli::RunOutput b = cli::cmd_cz(args, 4);
    CHECK(a.files[0].content == b.files[0].content);
    CHECK(parse_csv(a.files[0].content).rows.size() == 6);
}

TEST_CASE("cz flag validation") {
    CHECK_THROWS_AS(cli::cmd_cz(cz_args({}, {0.25}), 1), ParameterError);
    auto bad = cz_args({100.0}, {0.25});
    bad.delta_E2 = 50.0;
    CHECK_THROWS_AS(cli::cmd_cz(bad, 1), ParameterError);
    bad = cz_args({100.0}, {0.25});
    bad.scheme = "two-photon";
    CHECK_THROWS_AS(cli::cmd_cz(bad, 1), ParameterError);
    bad.delta_E2 = 100.0;
    bad.gamma_g = 1.0;
    bad.omega_ratio = 0.125;
    const CsvTable t = parse_csv(cli::cmd_cz(bad, 1).files[0].content);
    REQUIRE(t.rows.size() == 1);
    // Omega Omega_MW / (2 Delta_E2 gamma sqrt C) with Omega_MW = 4 C^(1/4)
    CHECK(cell(t, 0, "a") == doctest::Approx(0.25 / std::pow(100.0, 0.25)).epsilon(1e-12));
}

TEST_CASE("toffoli and repeater tables") {
    cli::ToffoliArgs ta;
    ta.N = {5, 10, 15};
    ta.C = {100.0};
    const CsvTable t = parse_csv(cli::cmd_toffoli(ta, 2).files[0].content);
    REQUIRE(t.rows.size() == 3);
    CHECK(cell(t, 2, "F") > cell(t, 1, "F"));
    CHECK(cell(t, 1, "F") > cell(t, 0, "F"));
    ta.N = {1};
    CHECK_THROWS_AS(cli::cmd_toffoli(ta, 1), ParameterError);

    cli::RepeaterArgs ra;
    ra.L = {128.0};
    ra.p = {1.0};
    ra.eps0 = 0.005;
    ra.epsg = 0.005;
    const CsvTable r = parse_csv(cli::cmd_repeater(ra).files[0].content);
    CHECK(cell(r, 0, "N_max") == doctest::Approx(10.536).epsilon(1e-4));
    CHECK(cell(r, 0, "ratio") > 2.1);
    CHECK(cell(r, 0, "ratio") < 3.9);
    ra.L = {96.0};
    CHECK_THROWS_AS(cli::cmd_repeater(ra), ParameterError);
}

TEST_CASE("rerun reproduces checksums") {
    const fs::path dir = scratch_dir("rerun");
    cli::RepeaterArgs ra;
    ra.L = {2.0, 8.0, 32.0};
    ra.p = {0.5, 1.0};
    write_run(cli::cmd_repeater(ra), dir);
    CHECK(fs::exists(dir / "repeater.csv"));
    std::vector<std::string> report;
    CHECK(cli::rerun_manifest(dir / "repeater.manifest.json", dir / "again", 1, &report));
    REQUIRE(report.size() == 1);
    CHECK(report[0].rfind("match repeater.csv", 0) == 0);

    auto m = nlohmann::json::parse(read_text(dir / "repeater.manifest.json"));
    m["outputs"][0]["sha256"] = std::string(64, '0');
    write_text(dir / "tampered.json", m.dump());
    CHECK_FALSE(cli::rerun_manifest(dir / "tampered.json", dir / "again2", 1));
    CHECK(run_cli({"--out", (dir / "again3").string(), "rerun", (dir / "tampered.json").string()}) == cli::kMismatch);
    fs::remove_all(dir);
}

TEST_CASE("exit codes") {
    const fs::path dir = scratch_dir("exit");
    CHECK(run_cli({"--out", dir.string(), "cz", "--C", "", "--a", "0.25"}) == cli::kUsage);
    CHECK(run_cli({"--out", dir.string(), "repeater", "--L", "4", "--p", "0"}) == cli::kUsage);
    CHECK(run_cli({"--out", dir.string(), "bogus"}) == cli::kUsage);
    CHECK(run_cli({"--out", dir.string(), "repeater", "--L", "128", "--p", "1"}) == cli::kOk);
    CHECK(fs::exists(dir / "repeater.manifest.json"));
    CHECK(run_cli({"--out", dir.string(), "rerun", (dir / "missing.json").string()}) == cli::kUsage);
    fs::remove_all(dir);
}
