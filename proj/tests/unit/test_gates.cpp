#include <doctest.h>

#include <cmath>
#include <numbers>

#include "herald/dynamics.hpp"
#include "herald/effective.hpp"
#include "herald/error.hpp"
#include "herald/gates.hpp"

using namespace herald;
using std::numbers::pi;

namespace {

SystemParams cz_params(double C, double alpha = 1.0, double beta = 1.0, double a = 0.25) {
    SystemParams p = make_params(C, alpha, beta);
    const CzDetunings d = cz_analytic_detunings(C, alpha, beta);
    p.delta_E = d.delta_E;
    p.delta_e = d.delta_e;
    p.omega = a * std::sqrt(C);
    return p;
}

SystemParams toffoli_tuned(double C) {
    SystemParams p = make_params(C);
    p.omega = 1.0;
    p.delta_e = 0.0;
    p.delta_E = tune_toffoli_detuning(p);
    return p;
}

double rel_spread(const EffectiveModel& eff, int top) {
    double lo = 1e300, hi = 0.0, mean = 0.0;
    for (int n = 0; n <= top; ++n) {
        const double g = eff.sector(n).Gamma;
        lo = std::min(lo, g);
        hi = std::max(hi, g);
        mean += g / (top + 1);
    }
    return (hi - lo) / mean;
}

// Effective density matrix of a uniform superposition, scored with fixed angles.
std::pair<double, double> oracle_outcome(const EffectiveModel& eff, const Eigen::VectorXcd& target, double t,
                                         double phi) {
    const int N = eff.n_qubits;
    const Eigen::Index d = Eigen::Index{1} << N;
    const Eigen::VectorXcd psi0 = Eigen::VectorXcd::Constant(d, std::pow(0.5, 0.5 * N));
    const Eigen::MatrixXcd rho = effective_conditional_state(eff, psi0, t);
    const double P = rho.trace().real();
    const std::vector<double> phases(static_cast<std::size_t>(N), phi);
    return {P, corrected_fidelity(rho / P, target, phases)};
}

}  // namespace

TEST_CASE("analytic CZ detunings") {
    const CzDetunings d = cz_analytic_detunings(100.0);
    CHECK(d.delta_E == doctest::Approx(0.5 * std::sqrt(401.0)).epsilon(1e-14));
    CHECK(d.delta_e == doctest::Approx(100.0 / std::sqrt(401.0)).epsilon(1e-14));
    CHECK(d.delta_E == doctest::Approx(10.0125).epsilon(1e-5));
    CHECK(d.delta_e == doctest::Approx(4.9938).epsilon(1e-4));
    CHECK_THROWS_AS(cz_analytic_detunings(0.0), ParameterError);
    CHECK_THROWS_AS(cz_analytic_detunings(10.0, -1.0), ParameterError);
    // large C: Delta_E -> gamma sqrt(alpha beta C), Delta_e -> gamma sqrt(alpha C / beta) / 2
    const CzDetunings big = cz_analytic_detunings(1e8, 2.0, 0.5);
    CHECK(big.delta_E / std::sqrt(1e8) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(big.delta_e / std::sqrt(1e8) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("analytic detunings equalize all three rates") {
    for (double C : {10.0, 100.0, 1000.0}) {
        for (double alpha : {0.5, 1.0, 2.0}) {
            for (double beta : {0.5, 1.0, 2.0}) {
                CAPTURE(C);
                CAPTURE(alpha);
                CAPTURE(beta);
                CHECK(rel_spread(effective_closed_form(cz_params(C, alpha, beta)), 2) < 1e-9);
            }
        }
    }
}

TEST_CASE("equal rates give a perfect heralded CZ") {
    for (double C : {10.0, 100.0, 1000.0}) {
        const GateReport r = cz_protocol(effective_closed_form(cz_params(C)));
        CHECK(r.fidelity == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.P_success > 0.0);
        CHECK(r.P_success < 1.0);
        CHECK(r.phases.size() == 2);
    }
}

TEST_CASE("CZ outcome agrees with the effective density matrix") {
    for (double C : {10.0, 300.0}) {
        SystemParams p = cz_params(C);
        p.delta_E *= 1.1;  // unequal rates, so F < 1
        const EffectiveModel eff = effective_closed_form(p);
        const GateReport r = cz_protocol(eff);
        const auto [P, F] = oracle_outcome(eff, cz_target_state(), r.t_gate, r.phases[0]);
        CHECK(r.P_success == doctest::Approx(P).epsilon(1e-12));
        CHECK(r.fidelity == doctest::Approx(F).epsilon(1e-12));
        CHECK(r.fidelity < 1.0 - 1e-6);
        // the prescribed angles are the optimal ones up to the rate mismatch
        const double best = optimize_phases(effective_conditional_state(
                                                eff, Eigen::VectorXcd::Constant(4, 0.5), r.t_gate) / P,
                                            cz_target_state())
                                .fidelity;
        CHECK(best >= r.fidelity - 1e-12);
        CHECK(best - r.fidelity < 1e-3);
    }
}

TEST_CASE("CZ asymptotes") {
    {
        const double C = 1e6;
        const GateReport r = cz_protocol(effective_closed_form(cz_params(C)));
        CHECK((1.0 - r.P_success) * std::sqrt(C) == doctest::Approx(15.0 * pi / 8.0).epsilon(0.02));
        const AsymptoticLimits lim = asymptotic_limits(cz_params(C));
        CHECK(lim.cz_failure * std::sqrt(C) == doctest::Approx(15.0 * pi / 8.0).epsilon(1e-12));
    }
    {
        const double C = 1e4;
        const SystemParams p = cz_params(C);
        const GateReport r = cz_protocol(effective_closed_form(p));
        const double ratio = r.t_gate * 2.0 * p.omega * p.omega / (15.0 * pi * std::sqrt(C));
        CHECK(ratio > 0.95);
        CHECK(ratio < 1.05);
    }
    // general alpha, beta
    const double C = 1e6, al = 2.0, be = 0.5;
    const GateReport r = cz_protocol(effective_closed_form(cz_params(C, al, be)));
    const double want = pi * (8 * be * be + 6 * be * al + al * al) / (8 * std::pow(be, 1.5) * std::sqrt(al));
    CHECK((1.0 - r.P_success) * std::sqrt(C) == doctest::Approx(want).epsilon(0.02));
}

TEST_CASE("gate time scales as 1/Omega^2") {
    const GateReport a = cz_protocol(effective_closed_form(cz_params(100.0, 1, 1, 0.1)));
    const GateReport b = cz_protocol(effective_closed_form(cz_params(100.0, 1, 1, 0.2)));
    CHECK(a.t_gate / b.t_gate == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(a.P_success == doctest::Approx(b.P_success).epsilon(1e-12));
}

TEST_CASE("no drive, no gate") {
    SystemParams p = cz_params(100.0);
    p.omega = 0.0;
    CHECK_THROWS_AS(cz_protocol(effective_closed_form(p)), SingularParametersError);
    CHECK_THROWS_AS(toffoli_protocol(effective_closed_form(p)), SingularParametersError);
    p.n_qubits = 3;
    p.omega = 1.0;
    CHECK_THROWS_AS(cz_protocol(effective_closed_form(p)), ParameterError);
}

TEST_CASE("sector outcome of identical sectors") {
    SectorCoefficients s;
    s.delta = 0.3;
    s.Gamma = 0.01;
    const PhaseGateOutcome o = sector_gate_outcome({s, s}, {0.5, 0.5}, {1.0, 1.0}, 10.0);
    CHECK(o.fidelity == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(o.P_success == doctest::Approx(std::exp(-0.1)).epsilon(1e-14));
    CHECK_THROWS_AS(sector_gate_outcome({s, s}, {1.0}, {1.0, 1.0}, 1.0), ParameterError);
    CHECK_THROWS_AS(sector_gate_outcome({s}, {1.0}, {1.0}, -1.0), ParameterError);
}

TEST_CASE("Toffoli tuning equalizes Gamma_0 and Gamma_1") {
    for (double C : {30.0, 100.0, 1e4}) {
        SystemParams p = make_params(C);
        p.omega = 1.0;
        std::vector<double> alt;
        p.delta_E = tune_toffoli_detuning(p, &alt);
        const double g0 = sector_closed_form(p, 0).Gamma, g1 = sector_closed_form(p, 1).Gamma;
        CHECK(std::abs(g0 - g1) / g0 < 1e-10);
        for (double x : alt) {
            SystemParams q = p;
            q.delta_E = x;
            const double a0 = sector_closed_form(q, 0).Gamma, a1 = sector_closed_form(q, 1).Gamma;
            CHECK(std::abs(a0 - a1) / (a0 + a1) < 1e-8);
        }
    }
}

TEST_CASE("Toffoli outcome agrees with the effective density matrix") {
    SystemParams p = toffoli_tuned(100.0);
    for (int N : {2, 3, 4}) {
        p.n_qubits = N;
        const EffectiveModel eff = effective_closed_form(p);
        const GateReport r = toffoli_protocol(eff);
        const Eigen::Index d = Eigen::Index{1} << N;
        Eigen::VectorXcd target = Eigen::VectorXcd::Constant(d, -std::pow(0.5, 0.5 * N));
        target(0) *= -1.0;
        const auto [P, F] = oracle_outcome(eff, target, r.t_gate, 0.0);
        CHECK(r.P_success == doctest::Approx(P).epsilon(1e-12));
        CHECK(r.fidelity == doctest::Approx(F).epsilon(1e-12));
    }
}

TEST_CASE("Toffoli generic ordering at C=100") {
    const auto rows = toffoli_scaling({5, 10, 15}, 100.0);
    REQUIRE(rows.size() == 3);
    CHECK(rows[2].error < rows[1].error);
    CHECK(rows[1].error < rows[0].error);
    const ToffoliBound up = toffoli_upper_bound(toffoli_tuned(100.0));
    CHECK(std::abs(rows[0].failure / (1.0 - up.P_success) - 1.0) < 0.05);
}

TEST_CASE("worst-case Toffoli approaches the large-N bound") {
    const double C = 1e5;
    const ToffoliBound up = toffoli_upper_bound(toffoli_tuned(C));
    CHECK((1.0 - up.fidelity) * C == doctest::Approx(pi * pi / 32.0).epsilon(0.05));
    const double e5 = toffoli_point(5, C, 1, 1, 100, true).error;
    const double e40 = toffoli_point(40, C, 1, 1, 100, true).error;
    CHECK(std::abs(e40 - (1.0 - up.fidelity)) < std::abs(e5 - (1.0 - up.fidelity)));
    CHECK_THROWS_AS(toffoli_point(1, C), ParameterError);
}

TEST_CASE("Rb-87 error budget") {
    auto params = [](double C, double d2) {
        SystemParams p = cz_params(C);
        p.scheme = Scheme::TwoPhoton;
        p.gamma_g = 1.0;
        p.delta_E2 = d2;
        p.omega = d2 / 8.0;
        p.omega_mw = 4.0 * std::pow(C, 0.25);
        return p;
    };
    const ErrorBudget b = rb87_error_budget(params(100.0, 100.0));
    CHECK(b.n_scat == doctest::Approx(12.0 * 10.0 / 160.0).epsilon(1e-12));
    CHECK(b.crosstalk_mw.value > 0.0);
    CHECK(b.crosstalk_drive.value >= 0.0);
    CHECK(b.adiabaticity_ratio < 1.0);
    CHECK(rb87_error_budget(params(3000.0, 100.0)).open_transition.value == doctest::Approx(2e-3).epsilon(1e-12));
    CHECK(rb87_error_budget(params(1.0, 100.0)).open_transition.value < 1e-4);
    const ErrorBudget corner = rb87_error_budget(params(1000.0, 400.0));
    WARN_MESSAGE(corner.crosstalk_mw.value <= 1e-4, "microwave crosstalk above 1e-4 at C=1000, Delta_E2=400");
    CHECK(corner.crosstalk_mw.value < 1e-2);
    CHECK_THROWS_AS(rb87_error_budget(cz_params(100.0)), ParameterError);
}
