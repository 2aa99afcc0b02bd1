#include "herald/calibrate.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "herald/dynamics.hpp"
#include "herald/effective.hpp"
#include "herald/error.hpp"
#include "herald/gates.hpp"

namespace herald {

namespace {

double spread(const std::vector<double>& g) {
    const auto [lo, hi] = std::minmax_element(g.begin(), g.end());
    double mean = 0.0;
    for (double x : g) mean += x;
    mean /= static_cast<double>(g.size());
    return mean > 0.0 ? (*hi - *lo) / mean : std::numeric_limits<double>::infinity();
}

Eigen::VectorXd residual_vector(const std::vector<double>& g) {
    double mean = 0.0;
    for (double x : g) mean += x;
    mean /= static_cast<double>(g.size());
    Eigen::VectorXd r(static_cast<Eigen::Index>(g.size() - 1));
    for (std::size_t i = 0; i + 1 < g.size(); ++i) r(static_cast<Eigen::Index>(i)) = (g[i] - g[i + 1]) / mean;
    return r;
}

std::string mode_name(RateSource s, RateMode m) {
    return std::string(m == RateMode::Cz ? "cz" : "toffoli") + "/" + to_string(s);
}

}  // namespace

std::string to_string(RateSource source) {
    return source == RateSource::EffectiveClosedForm ? "closed_form" : "liouvillian";
}

RateSource rate_source_from_string(const std::string& name) {
    if (name == "closed_form" || name == "effective") return RateSource::EffectiveClosedForm;
    if (name == "liouvillian") return RateSource::SectorLiouvillian;
    throw ParameterError("unknown rate source '" + name + "'");
}

std::vector<double> sector_rates(const SystemParams& params, RateSource source, RateMode mode,
                                 double liouvillian_a) {
    const int top = mode == RateMode::Cz ? 2 : 1;
    std::vector<double> g;
    if (source == RateSource::EffectiveClosedForm) {
        for (int n = 0; n <= top; ++n) g.push_back(sector_closed_form(params, n).Gamma);
        return g;
    }
    SystemParams p = params;
    p.omega = liouvillian_a * p.gamma * std::sqrt(p.cooperativity());
    if (p.scheme == Scheme::TwoPhoton) p.omega *= 2.0 * p.delta_E2 / p.omega_mw;  // same effective drive
    const char* configs[] = {"00", "10", "11"};
    for (int n = 0; n <= top; ++n) g.push_back(sector_decay_rate(p, configs[n]).Gamma);
    return g;
}

CalibrationResult equalize_rates_from(const SystemParams& params, RateSource source, RateMode mode,
                                      double seed_E, double seed_e, const CalibrationOptions& opt) {
    params.validate();
    const double tol = opt.tolerance > 0.0 ? opt.tolerance
                                           : (source == RateSource::EffectiveClosedForm ? 1e-9 : 1e-6);
    SystemParams p = params;
    if (!(p.omega > 0.0)) p.omega = p.gamma;  // closed-form Gamma_n ratios do not depend on Omega
    const bool two_d = mode == RateMode::Cz;
    const Eigen::Index dim = two_d ? 2 : 1;

    auto rates_at = [&](const Eigen::VectorXd& x) {
        SystemParams q = p;
        q.delta_E = x(0);
        q.delta_e = two_d ? x(1) : p.delta_e;
        return sector_rates(q, source, mode, opt.liouvillian_a);
    };
    auto residual_at = [&](const Eigen::VectorXd& x) { return residual_vector(rates_at(x)); };

    Eigen::VectorXd x(dim);
    x(0) = seed_E;
    if (two_d) x(1) = seed_e;

    CalibrationResult res;
    res.mode = mode_name(source, mode);
    Eigen::VectorXd r = residual_at(x);
    double best_norm = r.lpNorm<Eigen::Infinity>();
    Eigen::VectorXd best = x;

    auto finish = [&](int it) {
        res.delta_E = best(0);
        res.delta_e = two_d ? best(1) : p.delta_e;
        res.iterations = it;
        res.residual = spread(rates_at(best));
        return res;
    };

    for (int it = 0; it <= opt.max_iterations; ++it) {
        if (best_norm < tol) return finish(it);
        if (it == opt.max_iterations) break;

        Eigen::MatrixXd J(dim, dim);
        for (Eigen::Index j = 0; j < dim; ++j) {
            Eigen::VectorXd xp = x;
            const double h = opt.fd_step * std::max(std::abs(x(j)), p.gamma);
            xp(j) += h;
            J.col(j) = (residual_at(xp) - r) / h;
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
        if (!lu.isInvertible() || std::abs(lu.determinant()) < 1e-300) {
            throw SingularParametersError("equalize_rates: singular Jacobian");
        }
        const Eigen::VectorXd step = lu.solve(r);

        // backtrack until the residual drops
        double damp = 1.0;
        bool moved = false;
        for (int k = 0; k < 40; ++k) {
            const Eigen::VectorXd xn = x - damp * step;
            Eigen::VectorXd rn;
            try {
                rn = residual_at(xn);
            } catch (const NumericalError&) {
                damp *= 0.5;
                continue;
            }
            if (rn.allFinite() && rn.lpNorm<Eigen::Infinity>() < r.lpNorm<Eigen::Infinity>()) {
                x = xn;
                r = rn;
                moved = true;
                break;
            }
            damp *= 0.5;
        }
        if (!moved) break;
        if (r.lpNorm<Eigen::Infinity>() < best_norm) {
            best_norm = r.lpNorm<Eigen::Infinity>();
            best = x;
        }
    }
    if (best_norm < tol) return finish(opt.max_iterations);
    throw ConvergenceError("equalize_rates: no convergence, best residual " + std::to_string(best_norm));
}

CalibrationResult equalize_rates(const SystemParams& params, RateSource source, RateMode mode,
                                 const CalibrationOptions& options) {
    const CzDetunings cz = cz_analytic_detunings(params.cooperativity(), params.alpha(), params.beta(), params.gamma);
    if (mode == RateMode::Cz) return equalize_rates_from(params, source, mode, cz.delta_E, cz.delta_e, options);
    SystemParams p = params;
    const double seed = p.delta_e == 0.0 ? tune_toffoli_detuning(p) : cz.delta_E;
    return equalize_rates_from(params, source, mode, seed, p.delta_e, options);
}

namespace {

struct TradeoffObjective {
    SystemParams params;
    double lambda = 0.0;

    double operator()(double dE, double de, double* err = nullptr, double* fail = nullptr) const {
        SystemParams q = params;
        q.delta_E = dE;
        q.delta_e = de;
        try {
            const GateReport r = cz_protocol(effective_closed_form(q));
            const double e = std::max(0.0, 1.0 - r.fidelity);
            const double f = 1.0 - r.P_success;
            if (err) *err = e;
            if (fail) *fail = f;
            const double v = lambda * e + (1.0 - lambda) * f;
            return std::isfinite(v) ? v : 1e3;
        } catch (const NumericalError&) {
            return 1e3;
        }
    }
};

double nm_trampoline(const gsl_vector* v, void* data) {
    const auto* obj = static_cast<const TradeoffObjective*>(data);
    return (*obj)(gsl_vector_get(v, 0), gsl_vector_get(v, 1));
}

}  // namespace

CalibrationResult tradeoff_search(const SystemParams& params, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw ParameterError("tradeoff_search: lambda must lie in [0, 1]");
    params.validate();
    if (params.n_qubits != 2) throw ParameterError("tradeoff_search: needs N = 2");
    TradeoffObjective obj{params, lambda};
    if (!(obj.params.omega > 0.0)) obj.params.omega = obj.params.gamma;
    const CzDetunings cz = cz_analytic_detunings(params.cooperativity(), params.alpha(), params.beta(), params.gamma);

    gsl_error_handler_t* old = gsl_set_error_handler_off();
    const gsl_multimin_fminimizer_type* T = gsl_multimin_fminimizer_nmsimplex2;
    gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(T, 2);
    gsl_vector* x = gsl_vector_alloc(2);
    gsl_vector* step = gsl_vector_alloc(2);
    gsl_multimin_function fn{&nm_trampoline, 2, &obj};

    const double scales[] = {-4.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 4.0};
    double best_v = std::numeric_limits<double>::infinity(), best_E = cz.delta_E, best_e = cz.delta_e;
    int total_iter = 0;
    auto run = [&](double x0, double x1) {
        gsl_vector_set(x, 0, x0);
        gsl_vector_set(x, 1, x1);
        gsl_vector_set(step, 0, 0.1 * std::abs(x0) + 0.1 * params.gamma);
        gsl_vector_set(step, 1, 0.1 * std::abs(x1) + 0.1 * params.gamma);
        gsl_multimin_fminimizer_set(s, &fn, x, step);
        int status = GSL_CONTINUE;
        for (int it = 0; it < 2000 && status == GSL_CONTINUE; ++it) {
            if (gsl_multimin_fminimizer_iterate(s)) break;
            ++total_iter;
            status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-10 * (1.0 + std::abs(x0)));
        }
        if (s->fval < best_v) {
            best_v = s->fval;
            best_E = gsl_vector_get(s->x, 0);
            best_e = gsl_vector_get(s->x, 1);
        }
    };
    run(cz.delta_E, cz.delta_e);
    for (double a : scales) {
        for (double b : scales) run(a * cz.delta_E, b * cz.delta_e);
    }
    // polish the winner
    run(best_E, best_e);

    gsl_vector_free(step);
    gsl_vector_free(x);
    gsl_multimin_fminimizer_free(s);
    gsl_set_error_handler(old);

    if (!std::isfinite(best_v) || best_v >= 1e3) throw ConvergenceError("tradeoff_search: no admissible point");
    CalibrationResult res;
    res.delta_E = best_E;
    res.delta_e = best_e;
    res.lambda = lambda;
    res.iterations = total_iter;
    res.mode = "tradeoff";
    obj(best_E, best_e, &res.error, &res.failure);
    SystemParams q = obj.params;
    q.delta_E = best_E;
    q.delta_e = best_e;
    res.residual = spread(sector_rates(q, RateSource::EffectiveClosedForm, RateMode::Cz));
    return res;
}

bool ValidityReport::all_pass() const {
    return std::all_of(criteria.begin(), criteria.end(), [](const ValidityCriterion& c) { return c.pass; });
}

ValidityReport validity_check(const SystemParams& p, double threshold) {
    ValidityReport rep;
    rep.threshold = threshold;
    auto ratio = [](double num, double den) {
        if (num == 0.0) return 0.0;
        return den == 0.0 ? std::numeric_limits<double>::infinity() : std::abs(num / den);
    };
    auto add = [&](std::string name, double v) { rep.criteria.push_back({std::move(name), v, v < threshold}); };
    if (p.scheme == Scheme::DirectDrive) {
        add("Omega/(4 Delta_E)", ratio(p.omega, 4.0 * p.delta_E));
        add("Omega/g", ratio(p.omega, p.g));
    } else {
        add("Omega/(4 Delta_E2)", ratio(p.omega, 4.0 * p.delta_E2));
        add("Omega Omega_MW/(Delta_E2 g)", ratio(p.omega * p.omega_mw, p.delta_E2 * p.g));
        const double C = p.g * p.g / (p.gamma * p.kappa);
        add("3 sqrt(C) gamma^2 Omega^2/(Delta_E2^2 Omega_MW^2)",
            ratio(3.0 * std::sqrt(C) * p.gamma * p.gamma * p.omega * p.omega,
                  p.delta_E2 * p.delta_E2 * p.omega_mw * p.omega_mw));
    }
    return rep;
}

}  // namespace herald
