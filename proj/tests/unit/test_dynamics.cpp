#include <doctest.h>

#include <cmath>
#include <numbers>

#include "herald/dynamics.hpp"
#include "herald/effective.hpp"
#include "herald/error.hpp"
#include "herald/gates.hpp"
#include "herald/models.hpp"

using namespace herald;

namespace {

SystemParams cz_params(double C, double a) {
    SystemParams p = make_params(C);
    const CzDetunings d = cz_analytic_detunings(C);
    p.delta_E = d.delta_E;
    p.delta_e = d.delta_e;
    p.omega = a * std::sqrt(C);
    return p;
}

Eigen::MatrixXcd plus_plus(const ModelSplit& m) {
    BasisLabel g;
    g.aux = AuxLevel::g;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(m.basis->dim()));
    for (int c = 0; c < 4; ++c) {
        g.qubits = {(c >> 1) & 1 ? QubitLevel::one : QubitLevel::zero, c & 1 ? QubitLevel::one : QubitLevel::zero};
        psi(static_cast<Eigen::Index>(m.basis->index(g))) = 0.5;
    }
    return psi * psi.adjoint();
}

double angle_gap(double a, double b) {
    return std::abs(std::remainder(a - b, 2.0 * std::numbers::pi));
}

}  // namespace

TEST_CASE("undriven system is stationary") {
    SystemParams p = cz_params(30.0, 0.25);
    p.omega = 0.0;
    const ModelSplit m = build_model(p);
    const TimeSeries ts = integrate_master_equation(m, plus_plus(m), {25.0, 50.0, 100.0});
    const Eigen::MatrixXcd q0 = Eigen::MatrixXcd::Constant(4, 4, 0.25);
    for (std::size_t i = 0; i < ts.times.size(); ++i) {
        CHECK((ts.conditional[i] - q0).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(std::abs(ts.success[i] - 1.0) < 1e-10);
    }
}

TEST_CASE("driven run keeps trace and positivity") {
    const SystemParams p = cz_params(10.0, 0.25);
    const ModelSplit m = build_model(p);
    std::vector<double> samples;
    for (int i = 1; i <= 40; ++i) samples.push_back(2.5 * i);
    const TimeSeries ts = integrate_master_equation(m, plus_plus(m), samples);
    CHECK(ts.max_trace_drift < 1e-8);
    CHECK(ts.min_eigenvalue > -1e-9);
    CHECK(ts.subspace_dim < m.basis->dim());
    for (std::size_t i = 0; i < ts.times.size(); ++i) {
        CHECK(ts.unconditional[i].trace().real() <= 1.0 + 1e-8);
        CHECK(ts.unconditional[i].trace().real() >= ts.success[i] - 1e-12);
        CHECK(ts.success[i] <= 1.0 + 1e-12);
    }
    CHECK(ts.success.back() < ts.success.front());
}

TEST_CASE("invalid initial states are rejected") {
    const SystemParams p = cz_params(10.0, 0.25);
    const ModelSplit m = build_model(p);
    Eigen::MatrixXcd rho = plus_plus(m);
    CHECK_THROWS_AS(integrate_master_equation(m, 2.0 * rho, {1.0}), ParameterError);
    rho(0, 1) += 0.1;
    CHECK_THROWS_AS(integrate_master_equation(m, rho, {1.0}), ParameterError);
    CHECK_THROWS_AS(integrate_master_equation(m, plus_plus(m), {}), ParameterError);
}

TEST_CASE("ramped drive cannot be sampled past the pulse") {
    SystemParams p = cz_params(10.0, 0.25);
    p.drive = {RampShape::SinSquared, 5.0};
    const ModelSplit m = build_model(p);
    IntegrationOptions o;
    o.pulse_length = 20.0;
    CHECK_THROWS_AS(integrate_master_equation(m, plus_plus(m), {10.0, 30.0}, o), ParameterError);
}

TEST_CASE("ideal CZ state has unit fidelity") {
    const Eigen::VectorXcd v = cz_target_state();
    CHECK(std::abs(v.norm() - 1.0) < 1e-15);
    const Eigen::MatrixXcd rho = v * v.adjoint();
    CHECK(corrected_fidelity(rho, v, {0.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-14));
    const PhaseOptimum po = optimize_phases(rho, v);
    CHECK(po.fidelity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(angle_gap(po.phases[0], 0.0) < 1e-6);
    CHECK(angle_gap(po.phases[1], 0.0) < 1e-6);
}

TEST_CASE("local phases are recovered") {
    const Eigen::VectorXcd v = cz_target_state();
    for (auto [a, b] : {std::pair{0.3, -1.2}, std::pair{2.9, 2.0}, std::pair{-3.0, 0.01}}) {
        Eigen::VectorXcd w = v;
        for (int i = 0; i < 4; ++i) w(i) *= std::exp(std::complex<double>(0.0, ((i >> 1) & 1) * a + (i & 1) * b));
        const PhaseOptimum po = optimize_phases(w * w.adjoint(), v);
        CHECK(po.fidelity == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(angle_gap(po.phases[0], a) < 1e-6);
        CHECK(angle_gap(po.phases[1], b) < 1e-6);
    }
    CHECK_THROWS_AS(corrected_fidelity(Eigen::MatrixXcd::Identity(4, 4) / 4.0, v, {0.0}), ParameterError);
}

TEST_CASE("undriven sector has no heralded decay") {
    SystemParams p = cz_params(100.0, 0.05);
    p.omega = 0.0;
    CHECK(sector_decay_rate(p, "10").Gamma == 0.0);
    CHECK_THROWS_AS(sector_decay_rate(p, "1x"), ParameterError);
    CHECK_THROWS_AS(sector_decay_rate(p, ""), ParameterError);
}

TEST_CASE("Liouvillian rates approach the effective rates as a^2") {
    auto gap = [](double a, const char* cfg, int n) {
        const SystemParams p = cz_params(100.0, a);
        const double exact = sector_decay_rate(p, cfg).Gamma;
        const double eff = sector_closed_form(p, n).Gamma;
        return (exact - eff) / eff;
    };
    for (auto [cfg, n] : {std::pair{"00", 0}, std::pair{"10", 1}, std::pair{"11", 2}}) {
        const double g1 = gap(0.05, cfg, n);
        const double g2 = gap(0.1, cfg, n);
        CHECK(std::abs(g1) < 1e-2);
        CHECK(std::abs(g2 / g1) == doctest::Approx(4.0).epsilon(0.05));
    }
}

TEST_CASE("photon cutoff is converged") {
    for (int cutoff : {1, 2}) {
        SystemParams p = cz_params(100.0, 0.25);
        p.photon_cutoff = cutoff;
        const CutoffReport r = cutoff_convergence(p, 10.0);
        CHECK(r.dim_high > r.dim_low);
        CHECK(r.deviation < 1e-8);
    }
    SystemParams p = cz_params(100.0, 0.25);
    p.omega = 0.0;
    CHECK(cutoff_convergence(p, 10.0).deviation < 1e-12);
}

TEST_CASE("full CZ run at C=100") {
    const SystemParams p = cz_params(100.0, 0.25);
    FullSimResult r = simulate_cz_full(p);
    const GateReport eff = cz_protocol(effective_closed_form(p));
    CHECK(r.report.source == "full");
    CHECK(r.report.fidelity > 1.0 - 4e-5);
    CHECK(std::abs(r.report.t_gate / eff.t_gate - 1.0) < 0.05);
    CHECK(std::abs((1.0 - r.report.P_success) / (1.0 - eff.P_success) - 1.0) < 0.05);
    CHECK(r.series.max_trace_drift < 1e-8);

    // the herald helps: the unconditioned state is worse
    const std::size_t k = static_cast<std::size_t>(
        std::max_element(r.series.fidelity.begin(), r.series.fidelity.end()) - r.series.fidelity.begin());
    const double f_unc = optimize_phases(r.series.unconditional[k], cz_target_state()).fidelity;
    CHECK(r.series.fidelity[k] >= f_unc);
}

TEST_CASE("full run needs a conditional phase") {
    SystemParams p = cz_params(100.0, 0.25);
    p.omega = 0.0;
    CHECK_THROWS_AS(simulate_cz_full(p), SingularParametersError);
    p = cz_params(100.0, 0.25);
    p.n_qubits = 3;
    CHECK_THROWS_AS(simulate_cz_full(p), ParameterError);
}
