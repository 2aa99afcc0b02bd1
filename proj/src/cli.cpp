#include "herald/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <iostream>
#include <thread>

#include "herald/calibrate.hpp"
#include "herald/dynamics.hpp"
#include "herald/error.hpp"
#include "herald/gates.hpp"
#include "herald/io.hpp"
#include "herald/repeater.hpp"

namespace herald::cli {

using nlohmann::json;

namespace {

// Runs task(i) for i in [0, n) on `jobs` threads. Exceptions are collected
// and the one from the lowest index is rethrown, so failures are
// deterministic too.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& task) {
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                task(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const auto nthreads = static_cast<std::size_t>(std::max(1, jobs));
    if (nthreads == 1 || n <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < std::min(nthreads, n); ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::string fmt_d(double x) { return format_double(x); }

json base_manifest(const std::string& command, const json& args) {
    json cfg = {{"command", command}, {"args", args}, {"version", kToolVersion}};
    return {{"tool", "herald"},
            {"version", kToolVersion},
            {"command", command},
            {"args", args},
            {"config_sha256", sha256_hex(cfg.dump())}};
}

void attach_file(RunOutput& run, const std::string& name, const CsvTable& table, const std::string& title) {
    const std::string hash = run.manifest.at("config_sha256").get<std::string>();
    OutputFile f{name, render_csv(table, {"herald " + title, std::string("version ") + kToolVersion,
                                          "config_sha256 " + hash})};
    run.manifest["outputs"].push_back({{"file", f.name}, {"sha256", sha256_hex(f.content)}});
    run.files.push_back(std::move(f));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct CzPoint {
    double C = 0.0;
    double a = 0.0;
    SystemParams params;
    CalibrationResult calibration;
    std::vector<GateReport> reports;
    std::vector<TimeSeries> series;
    ValidityReport validity;
};

}  // namespace

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    auto num = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ParameterError("not a number: '" + s + "'");
        }
    };
    if (const auto dots = text.find(".."); dots != std::string::npos) {
        const double lo = num(text.substr(0, dots));
        std::string rest = text.substr(dots + 2);
        int n = 8;
        if (const auto colon = rest.find(':'); colon != std::string::npos) {
            n = static_cast<int>(num(rest.substr(colon + 1)));
            rest = rest.substr(0, colon);
        }
        const double hi = num(rest);
        if (n < 2 || hi < lo) throw ParameterError("range '" + text + "' needs lo <= hi and n >= 2");
        for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
        return out;
    }
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!item.empty()) out.push_back(num(item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (double v : parse_list(text)) {
        if (v != std::round(v)) throw ParameterError("expected integers in '" + text + "'");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

int resolve_jobs(int requested) {
    if (const char* env = std::getenv("HERALD_JOBS"); env && *env) {
        try {
            requested = std::stoi(env);
        } catch (const std::exception&) {
            throw ParameterError(std::string("HERALD_JOBS is not an integer: ") + env);
        }
    }
    if (requested < 0) throw ParameterError("jobs must be >= 0");
    if (requested == 0) requested = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    return requested;
}

json to_json(const CzArgs& a) {
    return {{"C", a.C},
            {"a", a.a},
            {"kappa_ratio", a.kappa_ratio},
            {"alpha", a.alpha},
            {"beta", a.beta},
            {"gamma_g", a.gamma_g},
            {"scheme", a.scheme},
            {"delta_E2", a.delta_E2},
            {"omega_mw_coeff", a.omega_mw_coeff},
            {"omega_ratio", a.omega_ratio},
            {"ramp", a.ramp},
            {"source", a.source},
            {"calibration", a.calibration},
            {"series", a.series}};
}

CzArgs cz_args_from_json(const json& j) {
    CzArgs a;
    j.at("C").get_to(a.C);
    j.at("a").get_to(a.a);
    j.at("kappa_ratio").get_to(a.kappa_ratio);
    j.at("alpha").get_to(a.alpha);
    j.at("beta").get_to(a.beta);
    j.at("gamma_g").get_to(a.gamma_g);
    j.at("scheme").get_to(a.scheme);
    j.at("delta_E2").get_to(a.delta_E2);
    j.at("omega_mw_coeff").get_to(a.omega_mw_coeff);
    j.at("omega_ratio").get_to(a.omega_ratio);
    j.at("ramp").get_to(a.ramp);
    j.at("source").get_to(a.source);
    j.at("calibration").get_to(a.calibration);
    j.at("series").get_to(a.series);
    return a;
}

json to_json(const ToffoliArgs& a) {
    return {{"N", a.N}, {"C", a.C}, {"alpha", a.alpha}, {"beta", a.beta}, {"kappa_ratio", a.kappa_ratio},
            {"input", a.input}};
}

ToffoliArgs toffoli_args_from_json(const json& j) {
    ToffoliArgs a;
    j.at("N").get_to(a.N);
    j.at("C").get_to(a.C);
    j.at("alpha").get_to(a.alpha);
    j.at("beta").get_to(a.beta);
    j.at("kappa_ratio").get_to(a.kappa_ratio);
    j.at("input").get_to(a.input);
    return a;
}

json to_json(const RepeaterArgs& a) {
    return {{"L", a.L}, {"L0", a.L0}, {"p", a.p}, {"eps0", a.eps0}, {"epsg", a.epsg}, {"F_final", a.F_final}};
}

RepeaterArgs repeater_args_from_json(const json& j) {
    RepeaterArgs a;
    j.at("L").get_to(a.L);
    j.at("L0").get_to(a.L0);
    j.at("p").get_to(a.p);
    j.at("eps0").get_to(a.eps0);
    j.at("epsg").get_to(a.epsg);
    j.at("F_final").get_to(a.F_final);
    return a;
}

RunOutput cmd_cz(const CzArgs& args, int jobs) {
    const auto t0 = std::chrono::steady_clock::now();
    if (args.C.empty()) throw ParameterError("cz: --C needs at least one value");
    const bool two_photon = args.scheme == "two-photon" || args.scheme == "B";
    if (!two_photon && args.scheme != "direct" && args.scheme != "A") {
        throw ParameterError("cz: --scheme must be direct or two-photon");
    }
    if (!two_photon && (args.delta_E2 != 0.0 || args.omega_ratio != 0.0)) {
        throw ParameterError("cz: --delta-E2 and --omega-ratio need --scheme two-photon");
    }
    if (two_photon && !(args.delta_E2 > 0.0)) throw ParameterError("cz: two-photon scheme needs --delta-E2 > 0");
    if (args.source != "effective" && args.source != "full" && args.source != "both") {
        throw ParameterError("cz: --source must be effective, full or both");
    }
    const RateSource cal_source = rate_source_from_string(args.calibration);
    std::vector<double> a_values = args.a;
    if (two_photon && args.omega_ratio > 0.0) a_values = {0.0};  // set below from Omega
    if (a_values.empty()) throw ParameterError("cz: --a needs at least one value");
    for (double a : a_values) {
        if (a < 0.0) throw ParameterError("cz: --a must be >= 0");
    }

    std::vector<CzPoint> points;
    for (double C : args.C) {
        for (double a : a_values) {
            CzPoint pt;
            pt.C = C;
            SystemParams p = make_params(C, args.alpha, args.beta, args.kappa_ratio);
            p.gamma_g = args.gamma_g;
            const double sqrtC = std::sqrt(C);
            if (two_photon) {
                p.scheme = Scheme::TwoPhoton;
                p.delta_E2 = args.delta_E2;
                p.omega_mw = args.omega_mw_coeff * p.gamma * std::pow(C, 0.25);
                if (args.omega_ratio > 0.0) {
                    p.omega = args.omega_ratio * p.delta_E2;
                    a = p.omega * p.omega_mw / (2.0 * p.delta_E2 * p.gamma * sqrtC);
                } else {
                    p.omega = 2.0 * p.delta_E2 * a * p.gamma * sqrtC / p.omega_mw;
                }
            } else {
                p.omega = a * p.gamma * sqrtC;
            }
            if (args.ramp > 0.0) p.drive = {RampShape::SinSquared, args.ramp};
            pt.a = a;
            pt.params = p;
            points.push_back(pt);
        }
    }

    const bool eff = args.source != "full", full = args.source != "effective";
    parallel_for(points.size(), jobs, [&](std::size_t i) {
        CzPoint& pt = points[i];
        pt.calibration = equalize_rates(pt.params, cal_source, RateMode::Cz);
        pt.params.delta_E = pt.calibration.delta_E;
        pt.params.delta_e = pt.calibration.delta_e;
        pt.validity = validity_check(pt.params);
        if (eff) pt.reports.push_back(cz_protocol(effective_closed_form(pt.params)));
        if (full) {
            FullSimResult r = simulate_cz_full(pt.params);
            pt.reports.push_back(r.report);
            if (args.series) pt.series.push_back(std::move(r.series));
        }
    });

    RunOutput run;
    run.manifest = base_manifest("cz", to_json(args));
    run.manifest_name = "cz.manifest.json";
    CsvTable table;
    table.columns = {"C", "a", "delta_E", "delta_e", "t_gate", "P_success", "infidelity", "source"};
    json jpoints = json::array();
    for (std::size_t i = 0; i < points.size(); ++i) {
        const CzPoint& pt = points[i];
        for (const auto& r : pt.reports) {
            table.rows.push_back({fmt_d(pt.C), fmt_d(pt.a), fmt_d(pt.params.delta_E), fmt_d(pt.params.delta_e),
                                  fmt_d(r.t_gate), fmt_d(r.P_success), fmt_d(r.infidelity()), r.source});
        }
        json validity = json::array();
        for (const auto& c : pt.validity.criteria) validity.push_back({{"name", c.name}, {"value", c.value}, {"pass", c.pass}});
        jpoints.push_back({{"params", herald::to_json(pt.params)},
                           {"calibration", herald::to_json(pt.calibration)},
                           {"validity", validity}});
    }
    run.manifest["points"] = jpoints;
    run.manifest["tolerances"] = {{"integration", herald::to_json(IntegrationOptions{})},
                                  {"calibration", cal_source == RateSource::EffectiveClosedForm ? 1e-9 : 1e-6}};
    run.manifest["outputs"] = json::array();
    attach_file(run, "cz.csv", table, "cz");
    if (args.series) {
        for (std::size_t i = 0; i < points.size(); ++i) {
            for (const auto& s : points[i].series) attach_file(run, fmt::format("cz_series_{:03d}.csv", i), timeseries_table(s), "cz series");
        }
    }
    run.manifest["wall_time_s"] = seconds_since(t0);
    return run;
}

RunOutput cmd_toffoli(const ToffoliArgs& args, int jobs) {
    const auto t0 = std::chrono::steady_clock::now();
    if (args.N.empty() || args.C.empty()) throw ParameterError("toffoli: --N and --C need at least one value");
    for (int n : args.N) {
        if (n < 2) throw ParameterError("toffoli: N must be >= 2");
    }
    if (args.input != "generic" && args.input != "worst") throw ParameterError("toffoli: --input must be generic or worst");
    const bool worst = args.input == "worst";

    struct Job {
        int N;
        double C;
        ToffoliScaling row;
    };
    std::vector<Job> todo;
    for (double C : args.C) {
        for (int N : args.N) todo.push_back({N, C, {}});
    }
    parallel_for(todo.size(), jobs, [&](std::size_t i) {
        todo[i].row = toffoli_point(todo[i].N, todo[i].C, args.alpha, args.beta, args.kappa_ratio, worst);
    });

    RunOutput run;
    run.manifest = base_manifest("toffoli", to_json(args));
    run.manifest_name = "toffoli.manifest.json";
    CsvTable table;
    table.columns = {"N", "C", "F", "P_success", "k", "d"};
    json jpoints = json::array();
    for (const auto& j : todo) {
        table.rows.push_back({std::to_string(j.N), fmt_d(j.C), fmt_d(1.0 - j.row.error), fmt_d(1.0 - j.row.failure),
                              fmt_d(j.row.k), fmt_d(j.row.d)});
    }
    for (double C : args.C) {
        SystemParams p = make_params(C, args.alpha, args.beta, args.kappa_ratio);
        p.omega = 1.0;
        std::vector<double> alternatives;
        p.delta_E = tune_toffoli_detuning(p, &alternatives);
        jpoints.push_back({{"params", herald::to_json(p)},
                           {"calibration", {{"mode", "toffoli/continuation"}, {"delta_E", p.delta_E},
                                            {"delta_e", 0.0}, {"alternative_roots", alternatives}}}});
    }
    run.manifest["points"] = jpoints;
    run.manifest["tolerances"] = {{"root", 1e-13}};
    run.manifest["outputs"] = json::array();
    attach_file(run, "toffoli.csv", table, "toffoli");
    run.manifest["wall_time_s"] = seconds_since(t0);
    return run;
}

RunOutput cmd_repeater(const RepeaterArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    if (args.L.empty() || args.p.empty()) throw ParameterError("repeater: --L and --p need at least one value");
    const double n_max = max_links(args.F_final, args.eps0, args.epsg);
    RunOutput run;
    run.manifest = base_manifest("repeater", to_json(args));
    run.manifest_name = "repeater.manifest.json";
    CsvTable table;
    table.columns = {"L", "L0", "p", "links", "rate_scaling", "rate_exact", "ratio", "N_max"};
    for (double L : args.L) {
        for (double p : args.p) {
            RepeaterConfig c{L, args.L0, p, args.eps0, args.epsg, args.F_final};
            const double rs = rate_scaling(c);
            const double re = rate_exact(c);
            table.rows.push_back({fmt_d(L), fmt_d(args.L0), fmt_d(p), fmt_d(c.links()), fmt_d(rs), fmt_d(re),
                                  fmt_d(re / rs), std::isinf(n_max) ? "inf" : fmt_d(n_max)});
        }
    }
    run.manifest["points"] = json::array();
    run.manifest["tolerances"] = {{"richardson_points", 1000}};
    run.manifest["outputs"] = json::array();
    attach_file(run, "repeater.csv", table, "repeater");
    run.manifest["wall_time_s"] = seconds_since(t0);
    return run;
}

void write_run(const RunOutput& run, const std::filesystem::path& out) {
    for (const auto& f : run.files) write_text(out / f.name, f.content);
    write_text(out / run.manifest_name, run.manifest.dump(2) + "\n");
}

bool rerun_manifest(const std::filesystem::path& manifest, const std::filesystem::path& out, int jobs,
                    std::vector<std::string>* report) {
    json m;
    try {
        m = json::parse(read_text(manifest));
    } catch (const json::exception& e) {
        throw ParameterError("rerun: bad manifest: " + std::string(e.what()));
    }
    const std::string cmd = m.at("command").get<std::string>();
    RunOutput run;
    if (cmd == "cz") run = cmd_cz(cz_args_from_json(m.at("args")), jobs);
    else if (cmd == "toffoli") run = cmd_toffoli(toffoli_args_from_json(m.at("args")), jobs);
    else if (cmd == "repeater") run = cmd_repeater(repeater_args_from_json(m.at("args")));
    else throw ParameterError("rerun: unknown command '" + cmd + "'");
    write_run(run, out);

    bool same = true;
    for (const auto& rec : m.at("outputs")) {
        const std::string file = rec.at("file").get<std::string>();
        const std::string want = rec.at("sha256").get<std::string>();
        std::string got = "missing";
        for (const auto& o : run.manifest.at("outputs")) {
            if (o.at("file") == file) got = o.at("sha256").get<std::string>();
        }
        const bool ok = got == want;
        same = same && ok;
        if (report) report->push_back(fmt::format("{} {} {}", ok ? "match" : "DIFFER", file, got));
    }
    return same;
}

int run(int argc, char** argv) {
    CLI::App app{"Heralded cavity-QED gate simulations"};
    app.require_subcommand(1);
    int jobs = 0;
    std::string out = ".";
    app.add_option("--jobs", jobs, "worker threads (0: available parallelism; HERALD_JOBS overrides)");
    app.add_option("--out", out, "output directory");

    std::string C_list, a_list, N_list, p_list, L_list;
    CzArgs cz;
    auto* c_cz = app.add_subcommand("cz", "CZ gate sweep over C and drive strength a");
    c_cz->add_option("--C", C_list, "cooperativities, '10,100' or 'lo..hi:n'")->required();
    c_cz->add_option("--a", a_list, "drive strengths a = Omega/(gamma sqrt C)");
    c_cz->add_option("--kappa-ratio", cz.kappa_ratio, "kappa / gamma");
    c_cz->add_option("--alpha", cz.alpha);
    c_cz->add_option("--beta", cz.beta);
    c_cz->add_option("--gamma-g", cz.gamma_g, "decay back to |g> [gamma]");
    c_cz->add_option("--scheme", cz.scheme)->check(CLI::IsMember({"direct", "two-photon", "A", "B"}));
    c_cz->add_option("--delta-E2", cz.delta_E2, "two-photon: |E2> detuning [gamma]");
    c_cz->add_option("--omega-mw-coeff", cz.omega_mw_coeff, "two-photon: Omega_MW = coeff gamma C^(1/4)");
    c_cz->add_option("--omega-ratio", cz.omega_ratio, "two-photon: Omega = ratio Delta_E2");
    c_cz->add_option("--ramp", cz.ramp, "sin^2 ramp time [1/gamma]");
    c_cz->add_option("--source", cz.source)->check(CLI::IsMember({"effective", "full", "both"}));
    c_cz->add_option("--calibration", cz.calibration)->check(CLI::IsMember({"closed_form", "liouvillian"}));
    c_cz->add_flag("--series", cz.series, "write full-run time series");

    ToffoliArgs tof;
    auto* c_tof = app.add_subcommand("toffoli", "Toffoli gate over N and C");
    c_tof->add_option("--N", N_list)->required();
    c_tof->add_option("--C", C_list)->required();
    c_tof->add_option("--alpha", tof.alpha);
    c_tof->add_option("--beta", tof.beta);
    c_tof->add_option("--kappa-ratio", tof.kappa_ratio);
    c_tof->add_option("--input", tof.input)->check(CLI::IsMember({"generic", "worst"}));

    RepeaterArgs rep;
    auto* c_rep = app.add_subcommand("repeater", "repeater rate scaling and link budget");
    c_rep->add_option("--L", L_list)->required();
    c_rep->add_option("--L0", rep.L0);
    c_rep->add_option("--p", p_list)->required();
    c_rep->add_option("--eps0", rep.eps0);
    c_rep->add_option("--epsg", rep.epsg);
    c_rep->add_option("--F-final", rep.F_final);

    std::string manifest;
    auto* c_rerun = app.add_subcommand("rerun", "re-execute a manifest and compare checksums");
    c_rerun->add_option("manifest", manifest)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        const int nj = resolve_jobs(jobs);
        RunOutput result;
        if (*c_cz) {
            cz.C = parse_list(C_list);
            cz.a = parse_list(a_list);
            result = cmd_cz(cz, nj);
        } else if (*c_tof) {
            tof.N = parse_int_list(N_list);
            tof.C = parse_list(C_list);
            result = cmd_toffoli(tof, nj);
        } else if (*c_rep) {
            rep.L = parse_list(L_list);
            rep.p = parse_list(p_list);
            result = cmd_repeater(rep);
        } else {
            std::vector<std::string> lines;
            const bool ok = rerun_manifest(manifest, out, nj, &lines);
            for (const auto& l : lines) std::cout << l << "\n";
            return ok ? kOk : kMismatch;
        }
        write_run(result, out);
        for (const auto& f : result.files) std::cout << (std::filesystem::path(out) / f.name).string() << "\n";
        std::cout << (std::filesystem::path(out) / result.manifest_name).string() << "\n";
        return kOk;
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
}

}  // namespace herald::cli
