#include "herald/gates.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_roots.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "herald/error.hpp"

namespace herald {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

double wrap_angle(double x) {
    x = std::fmod(x + kPi, 2.0 * kPi);
    if (x < 0.0) x += 2.0 * kPi;
    return x - kPi;
}

double binomial(int n, int k) {
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

// Brent root of f on [a, b]; f(a) and f(b) must differ in sign.
double brent_root(const std::function<double(double)>& f, double a, double b) {
    gsl_function gf;
    gf.function = [](double x, void* p) { return (*static_cast<const std::function<double(double)>*>(p))(x); };
    gf.params = const_cast<std::function<double(double)>*>(&f);
    gsl_root_fsolver* s = gsl_root_fsolver_alloc(gsl_root_fsolver_brent);
    gsl_root_fsolver_set(s, &gf, a, b);
    double root = 0.5 * (a + b);
    int status = GSL_CONTINUE;
    for (int it = 0; it < 200 && status == GSL_CONTINUE; ++it) {
        gsl_root_fsolver_iterate(s);
        root = gsl_root_fsolver_root(s);
        status = gsl_root_test_interval(gsl_root_fsolver_x_lower(s), gsl_root_fsolver_x_upper(s), 0.0, 1e-15);
    }
    gsl_root_fsolver_free(s);
    if (status != GSL_SUCCESS) throw ConvergenceError("brent_root: no convergence");
    return root;
}

struct GslQuiet {
    gsl_error_handler_t* old = gsl_set_error_handler_off();
    ~GslQuiet() { gsl_set_error_handler(old); }
};

}  // namespace

CzDetunings cz_analytic_detunings(double C, double alpha, double beta, double gamma) {
    if (!(C > 0.0) || !(alpha > 0.0) || !(beta > 0.0) || !(gamma > 0.0)) {
        throw ParameterError("cz_analytic_detunings: C, alpha, beta and gamma must be > 0");
    }
    CzDetunings d;
    d.delta_E = 0.5 * gamma * std::sqrt(beta) * std::sqrt(4.0 * alpha * C + beta);
    d.delta_e = alpha * C * gamma * gamma / (2.0 * d.delta_E);
    return d;
}

PhaseGateOutcome sector_gate_outcome(const std::vector<SectorCoefficients>& sectors,
                                     const std::vector<double>& weights, const std::vector<cplx>& target,
                                     double t, double phi) {
    if (weights.size() != sectors.size() || target.size() != sectors.size()) {
        throw ParameterError("sector_gate_outcome: one weight and one target phase per sector");
    }
    if (t < 0.0) throw ParameterError("sector_gate_outcome: t must be >= 0");
    PhaseGateOutcome out;
    double overlap = 0.0;
    const std::size_t ns = sectors.size();
    for (std::size_t n = 0; n < ns; ++n) {
        if (weights[n] == 0.0) continue;
        const auto& a = sectors[n];
        out.P_success += weights[n] * std::exp(-(a.Gamma) * t);
        for (std::size_t m = 0; m < ns; ++m) {
            if (weights[m] == 0.0) continue;
            const auto& b = sectors[m];
            const cplx rate = -I * (a.delta - b.delta) - 0.5 * (a.Gamma + b.Gamma) -
                              0.5 * (std::norm(a.rg) + std::norm(b.rg)) + a.rg * std::conj(b.rg);
            const double dn = static_cast<double>(n) - static_cast<double>(m);
            const cplx term = weights[n] * weights[m] * std::conj(target[n]) * target[m] *
                              std::exp(-I * phi * dn) * std::exp(rate * t);
            overlap += term.real();
        }
    }
    out.fidelity = out.P_success > 0.0 ? overlap / out.P_success : 0.0;
    return out;
}

GateReport cz_protocol(const EffectiveModel& eff) {
    if (eff.n_qubits != 2 || eff.sectors.size() != 3) throw ParameterError("cz_protocol: needs N = 2");
    const double d0 = eff.sectors[0].delta, d1 = eff.sectors[1].delta, d2 = eff.sectors[2].delta;
    const double curv = d2 - 2.0 * d1 + d0;
    if (curv == 0.0 || !std::isfinite(curv)) {
        throw SingularParametersError("cz_protocol: Delta_2 - 2 Delta_1 + Delta_0 = 0, no gate");
    }
    GateReport rep;
    rep.source = "effective";
    rep.t_gate = std::abs(kPi / curv);
    const double phi = wrap_angle(-(d1 - d0) * rep.t_gate);
    rep.phases = {phi, phi};
    const PhaseGateOutcome o =
        sector_gate_outcome(eff.sectors, {0.25, 0.5, 0.25}, {1.0, 1.0, -1.0}, rep.t_gate, phi);
    rep.P_success = o.P_success;
    rep.fidelity = o.fidelity;
    rep.metadata["global_stark_shift"] = eff.global_stark_shift;
    return rep;
}

GateReport toffoli_protocol(const EffectiveModel& eff, bool worst_case) {
    const int N = eff.n_qubits;
    if (N < 2) throw ParameterError("toffoli_protocol: needs N >= 2");
    const double d10 = eff.sectors[1].delta - eff.sectors[0].delta;
    if (d10 == 0.0 || !std::isfinite(d10)) throw SingularParametersError("toffoli_protocol: Delta_1 = Delta_0");
    GateReport rep;
    rep.source = "effective";
    // |Delta_1 - Delta_0| t = pi: the relative phase, not Delta_1 alone, sets the gate
    rep.t_gate = kPi / std::abs(d10);

    std::vector<double> w(static_cast<std::size_t>(N + 1), 0.0);
    if (worst_case) {
        w.front() = 0.5;
        w.back() = 0.5;
    } else {
        for (int n = 0; n <= N; ++n) w[static_cast<std::size_t>(n)] = binomial(N, n) * std::pow(0.5, N);
    }
    std::vector<cplx> target(static_cast<std::size_t>(N + 1), cplx{-1.0});
    target[0] = 1.0;
    const PhaseGateOutcome o = sector_gate_outcome(eff.sectors, w, target, rep.t_gate);
    rep.fidelity = o.fidelity;
    rep.P_success = o.P_success;
    rep.phases.assign(static_cast<std::size_t>(N), 0.0);
    rep.metadata["global_stark_shift"] = eff.global_stark_shift;
    return rep;
}

ToffoliBound toffoli_upper_bound(const SystemParams& params) {
    const SectorCoefficients s0 = sector_closed_form(params, 0.0);
    const SectorCoefficients s1 = sector_closed_form(params, 1.0);
    const SectorCoefficients si = sector_large_n_limit(params);
    const double d10 = s1.delta - s0.delta;
    if (d10 == 0.0) throw SingularParametersError("toffoli_upper_bound: Delta_1 = Delta_0");
    ToffoliBound b;
    b.t_gate = kPi / std::abs(d10);
    SectorCoefficients top = si;
    top.n = 1.0;  // sector_gate_outcome only uses n through the angle phi = 0
    const PhaseGateOutcome o = sector_gate_outcome({s0, top}, {0.5, 0.5}, {1.0, -1.0}, b.t_gate);
    b.fidelity = o.fidelity;
    b.P_success = o.P_success;
    return b;
}

double tune_toffoli_detuning(const SystemParams& params, std::vector<double>* alternatives) {
    SystemParams p = params;
    if (!(p.omega > 0.0)) p.omega = p.gamma;
    const double C = p.cooperativity();
    const CzDetunings cz = cz_analytic_detunings(C, p.alpha(), p.beta(), p.gamma);

    auto f_at = [&](double delta_E, double delta_e) {
        SystemParams q = p;
        q.delta_E = delta_E;
        q.delta_e = delta_e;
        const double g0 = sector_closed_form(q, 0.0).Gamma;
        const double g1 = sector_closed_form(q, 1.0).Gamma;
        return (g0 - g1) / (g0 + g1);
    };

    GslQuiet quiet;
    double x = cz.delta_E;
    constexpr int kSteps = 100;
    for (int s = 1; s <= kSteps; ++s) {
        const double de = cz.delta_e * (1.0 - static_cast<double>(s) / kSteps);
        auto f = [&](double dE) { return f_at(dE, de); };
        // secant from the previous root, Brent on an expanding bracket if it stalls
        double x0 = x, x1 = x * (1.0 + 1e-3) + 1e-6;
        double f0 = f(x0), f1 = f(x1);
        bool ok = false;
        for (int it = 0; it < 60; ++it) {
            if (f1 == f0) break;
            const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
            x0 = x1;
            f0 = f1;
            x1 = x2;
            f1 = f(x1);
            if (std::abs(x1 - x0) <= 1e-13 * std::max(1.0, std::abs(x1))) {
                ok = std::abs(x1 - x) < 0.5 * std::abs(x) + p.gamma;
                break;
            }
        }
        if (!ok) {
            double h = 1e-3 * std::max(std::abs(x), p.gamma);
            double a = x - h, b = x + h;
            while (f(a) * f(b) > 0.0 && h < 10.0 * std::abs(x)) {
                h *= 2.0;
                a = x - h;
                b = x + h;
            }
            if (f(a) * f(b) > 0.0) throw ConvergenceError("tune_toffoli_detuning: lost the root branch");
            x1 = brent_root(f, a, b);
        }
        x = x1;
    }

    if (alternatives) {
        alternatives->clear();
        auto f = [&](double dE) { return f_at(dE, 0.0); };
        const double span = 5.0 * std::abs(cz.delta_E) + 5.0 * p.gamma;
        constexpr int kGrid = 2000;
        double xa = -span, fa = f(xa);
        for (int i = 1; i <= kGrid; ++i) {
            const double xb = -span + 2.0 * span * i / kGrid;
            const double fb = f(xb);
            if (std::isfinite(fa) && std::isfinite(fb) && fa * fb < 0.0) {
                const double r = brent_root(f, xa, xb);
                if (std::abs(r - x) > 1e-6 * std::max(1.0, std::abs(x))) alternatives->push_back(r);
            }
            xa = xb;
            fa = fb;
        }
    }
    return x;
}

namespace {

ToffoliScaling toffoli_row(const SystemParams& tuned, int N, bool worst_case) {
    if (N < 2) throw ParameterError("toffoli: N must be >= 2");
    SystemParams p = tuned;
    p.n_qubits = N;
    const GateReport rep = toffoli_protocol(effective_closed_form(p), worst_case);
    const double C = p.cooperativity(), alpha = p.alpha(), beta = p.beta();
    ToffoliScaling s;
    s.N = N;
    s.error = 1.0 - rep.fidelity;
    s.failure = 1.0 - rep.P_success;
    s.k = s.error * C * (alpha + beta) / (alpha * kPi * kPi);
    s.d = (s.failure * std::sqrt(C) * 2.0 * std::sqrt(alpha) * std::sqrt(alpha + beta) / kPi - 2.0 * beta) / alpha;
    s.asymptotic = C >= 1e3;
    return s;
}

SystemParams toffoli_params(double C, double alpha, double beta, double kappa_over_gamma) {
    SystemParams p = make_params(C, alpha, beta, kappa_over_gamma);
    p.omega = 1.0;  // F and P do not depend on Omega in the effective theory
    p.delta_e = 0.0;
    p.delta_E = tune_toffoli_detuning(p);
    return p;
}

}  // namespace

ToffoliScaling toffoli_point(int N, double C, double alpha, double beta, double kappa_over_gamma,
                             bool worst_case) {
    return toffoli_row(toffoli_params(C, alpha, beta, kappa_over_gamma), N, worst_case);
}

std::vector<ToffoliScaling> toffoli_scaling(const std::vector<int>& Ns, double C, double alpha, double beta,
                                            double kappa_over_gamma) {
    const SystemParams base = toffoli_params(C, alpha, beta, kappa_over_gamma);
    std::vector<ToffoliScaling> out;
    for (int N : Ns) out.push_back(toffoli_row(base, N, false));
    return out;
}

ErrorBudget rb87_error_budget(const SystemParams& p, double delta_g, double delta_23) {
    p.validate();
    if (p.scheme != Scheme::TwoPhoton) throw ParameterError("rb87_error_budget: needs the TwoPhoton scheme");
    ErrorBudget b;
    b.delta_g = delta_g * p.gamma;
    b.delta_23 = delta_23 * p.gamma;
    const double C = p.cooperativity();
    const double mw2 = p.omega_mw * p.omega_mw;

    // |f> -> |E> by the laser, |E> -> |E2> by the microwave, then gamma_g to |g>.
    // Rate from fourth-order effective operators, weighted by the expected time
    // a failed run spends in |f> (half the gate, times the failure probability).
    const double detuning = b.delta_g - p.delta_E2 - b.delta_23;
    double rate = 0.0;
    if (detuning != 0.0) {
        rate = p.gamma_g * p.omega * p.omega * mw2 / (16.0 * std::pow(detuning, 4));
    }
    double t_gate = 0.0, failure = 0.0;
    try {
        const GateReport cz = cz_protocol(effective_closed_form(p));
        t_gate = cz.t_gate;
        failure = 1.0 - cz.P_success;
    } catch (const NumericalError&) {
        t_gate = 0.0;
    }
    b.crosstalk_drive = {rate * failure * 0.5 * t_gate, "Delta_g >> |Delta_E| (C <~ 1e4), off-resonant f-E pumping"};

    const double mw_det = b.delta_g - (p.delta_E2 - p.delta_E + b.delta_23);
    b.crosstalk_mw = {mw_det != 0.0 ? mw2 / (mw_det * mw_det) : std::numeric_limits<double>::infinity(),
                      "Omega_MW << Delta_g, microwave coupling of hyperfine ground states"};

    // Leakage of a linearly polarized cavity: ~5e-5 at C = 1, peak ~2e-3 at C ~ 3000,
    // falling as 1/sqrt(C) beyond.
    constexpr double kCross = 3000.0;
    const double amp = 4e-3 * std::sqrt(kCross);
    b.open_transition = {amp * std::sqrt(C) / (C + kCross), "linearly polarized cavity, Rb-87 hyperfine gaps"};

    if (mw2 > 0.0) {
        b.n_scat = 12.0 * std::sqrt(C) * p.gamma * p.gamma / mw2;
        b.adiabaticity_ratio = p.delta_E2 != 0.0
                                   ? 3.0 * std::sqrt(C) * p.gamma * p.gamma * p.omega * p.omega /
                                         (p.delta_E2 * p.delta_E2 * mw2)
                                   : std::numeric_limits<double>::infinity();
    }
    return b;
}

}  // namespace herald
