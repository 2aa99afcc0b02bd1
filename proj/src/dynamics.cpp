#include "herald/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <numbers>

#include "herald/effective.hpp"
#include "herald/error.hpp"

namespace herald {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

// Where each compact index lands in the qubit matrices.
struct QubitMap {
    std::vector<Eigen::Index> qubit;   // computational index, -1 if a qubit is in e/o~
    std::vector<int> photons;
    std::vector<char> aux_g;
};

QubitMap map_qubits(const Basis& basis, const std::vector<std::size_t>& support) {
    QubitMap m;
    for (auto idx : support) {
        const BasisLabel l = basis.label(idx);
        Eigen::Index q = 0;
        bool ok = true;
        for (auto lv : l.qubits) {
            if (lv == QubitLevel::zero) q = 2 * q;
            else if (lv == QubitLevel::one) q = 2 * q + 1;
            else ok = false;
        }
        m.qubit.push_back(ok ? q : -1);
        m.photons.push_back(l.photons);
        m.aux_g.push_back(l.aux == AuxLevel::g ? 1 : 0);
    }
    return m;
}

// Reduced qubit matrix: sum over matching photon numbers (and aux levels when
// `only_g` is false) of rho entries whose qubits are all in {0,1}.
Eigen::MatrixXcd reduce(const Eigen::MatrixXcd& rho, const QubitMap& m, const std::vector<std::size_t>& support,
                        const Basis& basis, int n_qubits, bool only_g) {
    const Eigen::Index dq = Eigen::Index{1} << n_qubits;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dq, dq);
    const auto n = static_cast<Eigen::Index>(support.size());
    std::vector<int> aux(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        aux[static_cast<std::size_t>(i)] = static_cast<int>(basis.label(support[static_cast<std::size_t>(i)]).aux);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto si = static_cast<std::size_t>(i);
        if (m.qubit[si] < 0 || (only_g && !m.aux_g[si])) continue;
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto sj = static_cast<std::size_t>(j);
            if (m.qubit[sj] < 0 || m.photons[sj] != m.photons[si] || aux[sj] != aux[si]) continue;
            out(m.qubit[si], m.qubit[sj]) += rho(i, j);
        }
    }
    return out;
}

double golden_max(const std::function<double(double)>& f, double lo, double hi, double tol) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - r * (b - a), x2 = a + r * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

double wrap_angle(double x) {
    x = std::fmod(x + kPi, 2.0 * kPi);
    if (x < 0.0) x += 2.0 * kPi;
    return x - kPi;
}

Eigen::MatrixXcd lagrange3(const std::array<double, 3>& t, const std::array<const Eigen::MatrixXcd*, 3>& y,
                           double x) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(y[0]->rows(), y[0]->cols());
    for (int i = 0; i < 3; ++i) {
        double w = 1.0;
        for (int j = 0; j < 3; ++j) {
            if (j != i) w *= (x - t[static_cast<std::size_t>(j)]) / (t[static_cast<std::size_t>(i)] - t[static_cast<std::size_t>(j)]);
        }
        out += w * *y[static_cast<std::size_t>(i)];
    }
    return out;
}

}  // namespace

TimeSeries integrate_master_equation(const ModelSplit& model, const Eigen::MatrixXcd& rho0,
                                     const std::vector<double>& sample_times,
                                     const IntegrationOptions& opt) {
    const auto d = static_cast<Eigen::Index>(model.basis->dim());
    if (rho0.rows() != d || rho0.cols() != d) {
        throw ParameterError("integrate_master_equation: rho0 does not match the model basis");
    }
    if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > 1e-12 || std::abs(rho0.trace() - 1.0) > 1e-12) {
        throw ParameterError("integrate_master_equation: rho0 must be Hermitian with unit trace");
    }
    if (sample_times.empty() || !(sample_times.back() > 0.0)) {
        throw ParameterError("integrate_master_equation: t_max must be > 0");
    }
    const bool ramped = model.params.drive.shape == RampShape::SinSquared && model.params.drive.t_ramp > 0.0;
    if (ramped && sample_times.back() > opt.pulse_length) {
        throw ParameterError("integrate_master_equation: samples extend past the ramped pulse");
    }

    std::vector<std::size_t> seeds;
    for (Eigen::Index i = 0; i < d; ++i) {
        if (rho0.row(i).cwiseAbs().maxCoeff() > 0.0) seeds.push_back(static_cast<std::size_t>(i));
    }
    const std::vector<std::size_t> support = invariant_subspace(model, seeds);
    const CompactModel cm = compact(model, support);
    const auto n = cm.dim();

    Eigen::MatrixXcd rho(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            rho(i, j) = rho0(static_cast<Eigen::Index>(cm.support[static_cast<std::size_t>(i)]),
                             static_cast<Eigen::Index>(cm.support[static_cast<std::size_t>(j)]));
        }
    }

    Eigen::MatrixXcd h0 = cm.H_e;
    for (const auto& l : cm.lindblads) h0 -= 0.5 * I * (l.adjoint() * l);
    const Eigen::MatrixXcd w = cm.V + cm.V.adjoint();
    std::vector<Eigen::MatrixXcd> l_adj;
    for (const auto& l : cm.lindblads) l_adj.push_back(l.adjoint());

    const DriveSchedule drive = model.params.drive;
    const double pulse = opt.pulse_length;
    Eigen::MatrixXcd a(n, n), lr(n, n);
    Dop853Rhs rhs = [&](double t, const Eigen::MatrixXcd& y, Eigen::MatrixXcd& dy) {
        a.noalias() = h0 * y;
        if (ramped) {
            const double u = envelope_value(drive, std::clamp(t, 0.0, pulse), pulse);
            a.noalias() += u * (w * y);
        } else {
            a.noalias() += w * y;
        }
        dy = -I * a + I * a.adjoint();
        for (std::size_t k = 0; k < cm.lindblads.size(); ++k) {
            lr.noalias() = cm.lindblads[k] * y;
            dy.noalias() += lr * l_adj[k];
        }
    };

    const int nq = model.params.n_qubits;
    const QubitMap qmap = map_qubits(*model.basis, cm.support);
    TimeSeries ts;
    ts.subspace_dim = static_cast<std::size_t>(n);
    ts.min_eigenvalue = 0.0;
    int sample_no = 0;
    Dop853Observer observe = [&](double t, Eigen::MatrixXcd& y) {
        y = 0.5 * (y + y.adjoint()).eval();
        const double drift = std::abs(y.trace().real() - 1.0);
        ts.max_trace_drift = std::max(ts.max_trace_drift, drift);
        if (drift > opt.trace_tolerance) {
            throw IntegrationError("integrate_master_equation: trace drift " + std::to_string(drift) +
                                   " exceeds tolerance");
        }
        if (opt.positivity_every > 0 && sample_no % opt.positivity_every == 0) {
            const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(y, Eigen::EigenvaluesOnly);
            const double lmin = es.eigenvalues()(0);
            ts.min_eigenvalue = std::min(ts.min_eigenvalue, lmin);
            if (lmin < -opt.positivity_tolerance) {
                throw IntegrationError("integrate_master_equation: density matrix lost positivity");
            }
        }
        ++sample_no;
        ts.times.push_back(t);
        ts.conditional.push_back(reduce(y, qmap, cm.support, *model.basis, nq, true));
        ts.unconditional.push_back(reduce(y, qmap, cm.support, *model.basis, nq, false));
        ts.success.push_back(ts.conditional.back().trace().real());
        return true;
    };

    Dop853Options dopt;
    dopt.rtol = opt.rtol;
    dopt.atol = opt.atol;
    ts.stats = dop853_integrate(rhs, rho, 0.0, sample_times, observe, dopt);
    return ts;
}

double corrected_fidelity(const Eigen::MatrixXcd& rho, const Eigen::VectorXcd& target,
                          const std::vector<double>& phases) {
    const Eigen::Index dim = target.size();
    if (rho.rows() != dim || rho.cols() != dim) throw ParameterError("corrected_fidelity: size mismatch");
    int nq = 0;
    while ((Eigen::Index{1} << nq) < dim) ++nq;
    if (static_cast<int>(phases.size()) != nq) throw ParameterError("corrected_fidelity: one phase per qubit");
    Eigen::VectorXcd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        double ph = 0.0;
        for (int k = 0; k < nq; ++k) {
            if ((i >> (nq - 1 - k)) & 1) ph += phases[static_cast<std::size_t>(k)];
        }
        // rotated target U|target>; F = v^dag rho v
        v(i) = std::exp(I * ph) * target(i);
    }
    return (v.adjoint() * rho * v)(0, 0).real();
}

PhaseOptimum optimize_phases(const Eigen::MatrixXcd& rho, const Eigen::VectorXcd& target, double angle_tol) {
    int nq = 0;
    while ((Eigen::Index{1} << nq) < target.size()) ++nq;
    std::vector<std::vector<double>> seeds;
    const double s = kPi / 2.0;
    for (double a : {s, -s}) {
        for (double b : {s, -s}) {
            std::vector<double> seed(static_cast<std::size_t>(nq), 0.0);
            seed[0] = a;
            if (nq > 1) seed[1] = b;
            seeds.push_back(seed);
        }
    }

    PhaseOptimum best;
    best.fidelity = -1.0;
    for (auto phases : seeds) {
        double f_old = corrected_fidelity(rho, target, phases);
        for (int sweep = 0; sweep < 200; ++sweep) {
            for (int k = 0; k < nq; ++k) {
                auto fk = [&](double x) {
                    auto p = phases;
                    p[static_cast<std::size_t>(k)] = x;
                    return corrected_fidelity(rho, target, p);
                };
                // coarse bracket on 8 points, then golden section inside it
                const double x0 = phases[static_cast<std::size_t>(k)];
                double bx = x0, bf = fk(x0);
                for (int j = 1; j < 8; ++j) {
                    const double x = x0 + j * kPi / 4.0;
                    const double fx = fk(x);
                    if (fx > bf) {
                        bf = fx;
                        bx = x;
                    }
                }
                const double xm = golden_max(fk, bx - kPi / 4.0, bx + kPi / 4.0, angle_tol);
                if (fk(xm) >= bf) bx = xm;
                phases[static_cast<std::size_t>(k)] = wrap_angle(bx);
            }
            const double f_new = corrected_fidelity(rho, target, phases);
            const bool done = std::abs(f_new - f_old) < 1e-15;
            f_old = f_new;
            if (done) break;
        }
        if (f_old > best.fidelity) {
            best.fidelity = f_old;
            best.phases = phases;
        }
    }
    return best;
}

Eigen::VectorXcd cz_target_state() {
    Eigen::VectorXcd v(4);
    v << 0.5, 0.5, 0.5, -0.5;
    return v;
}

GateReport extract_gate_report(TimeSeries& series, const Eigen::VectorXcd& target) {
    const std::size_t ns = series.times.size();
    if (ns < 3) throw ParameterError("extract_gate_report: need at least three samples");
    series.fidelity.assign(ns, 0.0);
    std::vector<std::vector<double>> phases(ns);
    for (std::size_t i = 0; i < ns; ++i) {
        const double p = series.success[i];
        if (!(p > 0.0)) continue;
        const PhaseOptimum opt = optimize_phases(series.conditional[i] / p, target);
        series.fidelity[i] = opt.fidelity;
        phases[i] = opt.phases;
    }
    const auto it = std::max_element(series.fidelity.begin(), series.fidelity.end());
    const auto k = static_cast<std::size_t>(it - series.fidelity.begin());
    if (k == 0 || k == ns - 1) {
        throw InconclusiveWindowError("extract_gate_report: fidelity maximum at the edge of the window");
    }

    GateReport rep;
    rep.source = "full";
    rep.t_gate = series.times[k];
    rep.fidelity = series.fidelity[k];
    rep.P_success = series.success[k];
    rep.phases = phases[k];

    // Vertex of the parabola through the three samples around the maximum.
    const double t0 = series.times[k - 1], t1 = series.times[k], t2 = series.times[k + 1];
    const double f0 = series.fidelity[k - 1], f1 = series.fidelity[k], f2 = series.fidelity[k + 1];
    const double den = (t0 - t1) * (t0 - t2) * (t1 - t2);
    const double A = (t2 * (f1 - f0) + t1 * (f0 - f2) + t0 * (f2 - f1)) / den;
    const double B = (t2 * t2 * (f0 - f1) + t1 * t1 * (f2 - f0) + t0 * t0 * (f1 - f2)) / den;
    if (A < 0.0) {
        const double ts = std::clamp(-B / (2.0 * A), t0, t2);
        const Eigen::MatrixXcd rho = lagrange3({t0, t1, t2},
                                               {&series.conditional[k - 1], &series.conditional[k],
                                                &series.conditional[k + 1]},
                                               ts);
        const double p = rho.trace().real();
        if (p > 0.0) {
            const PhaseOptimum opt = optimize_phases(rho / p, target);
            if (opt.fidelity >= rep.fidelity) {
                rep.t_gate = ts;
                rep.fidelity = opt.fidelity;
                rep.P_success = p;
                rep.phases = opt.phases;
            }
        }
    }
    rep.metadata["samples"] = static_cast<double>(ns);
    rep.metadata["subspace_dim"] = static_cast<double>(series.subspace_dim);
    rep.metadata["max_trace_drift"] = series.max_trace_drift;
    rep.metadata["min_eigenvalue"] = series.min_eigenvalue;
    rep.metadata["steps_accepted"] = static_cast<double>(series.stats.accepted);
    rep.metadata["steps_rejected"] = static_cast<double>(series.stats.rejected);
    return rep;
}

SectorRate sector_decay_rate(const SystemParams& params, const std::string& config) {
    if (config.empty()) throw ParameterError("sector_decay_rate: empty qubit configuration");
    SystemParams p = params;
    p.n_qubits = static_cast<int>(config.size());
    p.drive = {};
    BasisLabel seed;
    seed.aux = AuxLevel::g;
    for (char c : config) {
        if (c == '0') seed.qubits.push_back(QubitLevel::zero);
        else if (c == '1') seed.qubits.push_back(QubitLevel::one);
        else throw ParameterError("sector_decay_rate: configuration must contain only 0 and 1");
    }
    const ModelSplit m = build_model(p);
    const Eigen::MatrixXcd h = m.hamiltonian().matrix;

    // Hamiltonian-connected component of the seed
    const auto d = static_cast<Eigen::Index>(m.basis->dim());
    std::vector<char> seen(static_cast<std::size_t>(d), 0);
    std::deque<Eigen::Index> queue{static_cast<Eigen::Index>(m.basis->index(seed))};
    seen[static_cast<std::size_t>(queue.front())] = 1;
    std::vector<Eigen::Index> comp;
    while (!queue.empty()) {
        const Eigen::Index j = queue.front();
        queue.pop_front();
        comp.push_back(j);
        for (Eigen::Index i = 0; i < d; ++i) {
            if (!seen[static_cast<std::size_t>(i)] && h(i, j) != cplx{0.0}) {
                seen[static_cast<std::size_t>(i)] = 1;
                queue.push_back(i);
            }
        }
    }
    std::sort(comp.begin(), comp.end());
    const auto ns = static_cast<Eigen::Index>(comp.size());

    auto take = [&](const Eigen::MatrixXcd& mat) {
        Eigen::MatrixXcd out(ns, ns);
        for (Eigen::Index i = 0; i < ns; ++i) {
            for (Eigen::Index j = 0; j < ns; ++j) out(i, j) = mat(comp[static_cast<std::size_t>(i)], comp[static_cast<std::size_t>(j)]);
        }
        return out;
    };

    const Eigen::MatrixXcd hs = take(h);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(ns, ns);
    Eigen::MatrixXcd hnh = hs;
    std::vector<Eigen::MatrixXcd> jumps;
    for (const auto& l : m.lindblads) {
        // loss out of the component counts through L^dag L on the full space
        hnh -= 0.5 * I * take(l.op.matrix.adjoint() * l.op.matrix);
        jumps.push_back(take(l.op.matrix));
    }
    // column-major vec: vec(A X B) = (B^T kron A) vec(X)
    const Eigen::Index n2 = ns * ns;
    Eigen::MatrixXcd liou = Eigen::MatrixXcd::Zero(n2, n2);
    auto kron = [&](const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
        Eigen::MatrixXcd out(A.rows() * B.rows(), A.cols() * B.cols());
        for (Eigen::Index i = 0; i < A.rows(); ++i) {
            for (Eigen::Index j = 0; j < A.cols(); ++j) out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
        }
        return out;
    };
    liou += -I * kron(id, hnh) + I * kron(hnh.conjugate(), id);
    for (const auto& l : jumps) {
        if (l.cwiseAbs().maxCoeff() > 0.0) liou += kron(l.conjugate(), l);
    }

    const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(liou, false);
    if (es.info() != Eigen::Success) throw ConvergenceError("sector_decay_rate: eigensolver failed");
    const auto& ev = es.eigenvalues();

    SectorRate r;
    r.space_dim = static_cast<std::size_t>(ns);
    Eigen::Index best = -1;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (std::abs(ev(i).real()) < 1e-12) continue;
        if (best < 0 || std::abs(ev(i).real()) < std::abs(ev(best).real())) best = i;
    }
    if (best < 0) return r;  // nothing decays: the drive does not couple out of |g>
    r.eigenvalue = ev(best);
    r.Gamma = std::abs(ev(best).real());
    r.next_rate = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (i == best || std::abs(ev(i).real()) < 1e-12) continue;
        // the complex-conjugate partner of a coherence mode is the same decay
        if (std::abs(ev(i) - std::conj(ev(best))) < 1e-9 * std::max(1.0, std::abs(ev(best)))) continue;
        r.next_rate = std::min(r.next_rate, std::abs(ev(i).real()));
    }
    if (r.next_rate <= 1.01 * r.Gamma) {
        throw SpectralAmbiguityError("sector_decay_rate: two slow modes within 1% for configuration " + config);
    }
    return r;
}

CutoffReport cutoff_convergence(const SystemParams& params, double t_short, const IntegrationOptions& opt) {
    if (!(t_short > 0.0)) throw ParameterError("cutoff_convergence: t_short must be > 0");
    CutoffReport rep;
    rep.cutoff = params.photon_cutoff;
    std::vector<double> samples;
    for (int i = 1; i <= 20; ++i) samples.push_back(t_short * i / 20.0);

    auto run = [&](int cutoff, std::size_t& dim) {
        SystemParams p = params;
        p.photon_cutoff = cutoff;
        p.drive = {};
        const ModelSplit m = build_model(p);
        dim = m.basis->dim();
        BasisLabel g;
        g.aux = AuxLevel::g;
        const int nq = p.n_qubits;
        Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
        const double amp = std::pow(0.5, 0.5 * nq);
        for (int c = 0; c < (1 << nq); ++c) {
            g.qubits.clear();
            for (int k = nq - 1; k >= 0; --k) g.qubits.push_back((c >> k) & 1 ? QubitLevel::one : QubitLevel::zero);
            psi(static_cast<Eigen::Index>(m.basis->index(g))) = amp;
        }
        return integrate_master_equation(m, psi * psi.adjoint(), samples, opt);
    };
    const TimeSeries lo = run(params.photon_cutoff, rep.dim_low);
    const TimeSeries hi = run(params.photon_cutoff + 1, rep.dim_high);
    for (std::size_t i = 0; i < lo.times.size(); ++i) {
        rep.deviation = std::max(rep.deviation, (lo.conditional[i] - hi.conditional[i]).cwiseAbs().maxCoeff());
    }
    return rep;
}

FullSimResult simulate_cz_full(const SystemParams& params, const FullSimOptions& opt) {
    if (params.n_qubits != 2) throw ParameterError("simulate_cz_full: the CZ run needs n_qubits = 2");
    const EffectiveModel eff = effective_closed_form(params);
    const double d = eff.sector(2).delta - 2.0 * eff.sector(1).delta + eff.sector(0).delta;
    if (d == 0.0) throw SingularParametersError("simulate_cz_full: no conditional phase (Delta_2 - 2 Delta_1 + Delta_0 = 0)");
    const double t_pred = std::abs(kPi / d);

    const ModelSplit m = build_model(params);
    BasisLabel g;
    g.aux = AuxLevel::g;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(m.basis->dim()));
    for (int c = 0; c < 4; ++c) {
        g.qubits = {(c >> 1) & 1 ? QubitLevel::one : QubitLevel::zero, c & 1 ? QubitLevel::one : QubitLevel::zero};
        psi(static_cast<Eigen::Index>(m.basis->index(g))) = 0.5;
    }
    const Eigen::MatrixXcd rho0 = psi * psi.adjoint();
    const bool ramped = params.drive.shape == RampShape::SinSquared && params.drive.t_ramp > 0.0;

    FullSimResult res;
    res.predicted_t_gate = t_pred;
    IntegrationOptions iopt = opt.integration;
    if (ramped) {
        // the pulse length fixes the gate time; report at its end
        const double t_end = ramped_pulse_length(params.drive, t_pred);
        iopt.pulse_length = t_end;
        std::vector<double> samples;
        const int np = std::max(opt.coarse_points, 3);
        for (int i = 1; i <= np; ++i) samples.push_back(t_end * i / np);
        res.series = integrate_master_equation(m, rho0, samples, iopt);
        const auto& last = res.series.conditional.back();
        const double p = last.trace().real();
        const PhaseOptimum po = optimize_phases(last / p, cz_target_state());
        res.report.source = "full";
        res.report.t_gate = t_end;
        res.report.P_success = p;
        res.report.fidelity = po.fidelity;
        res.report.phases = po.phases;
        res.report.metadata["ramped"] = 1.0;
    } else {
        double window = opt.window;
        for (int attempt = 0;; ++attempt) {
            std::vector<double> samples;
            const double lo = (1.0 - window) * t_pred;
            const double hi = (1.0 + window) * t_pred;
            for (int i = 1; i <= opt.coarse_points; ++i) {
                const double t = lo * i / (opt.coarse_points + 1);
                if (t > 0.0) samples.push_back(t);
            }
            for (int i = 0; i < opt.window_points; ++i) {
                samples.push_back(lo + (hi - lo) * i / (opt.window_points - 1));
            }
            samples.erase(std::remove_if(samples.begin(), samples.end(), [](double t) { return !(t > 0.0); }),
                          samples.end());
            res.series = integrate_master_equation(m, rho0, samples, iopt);
            try {
                res.report = extract_gate_report(res.series, cz_target_state());
                break;
            } catch (const InconclusiveWindowError&) {
                if (attempt >= opt.max_widenings || window >= 0.9) throw;
                window = std::min(2.0 * window, 0.9);
            }
        }
    }
    res.report.metadata["t_gate_effective"] = t_pred;
    res.report.metadata["window"] = opt.window;
    return res;
}

}  // namespace herald
