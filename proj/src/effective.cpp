#include "herald/effective.hpp"

#include <cmath>
#include <numbers>

#include "herald/error.hpp"

namespace herald {

namespace {

constexpr cplx I{0.0, 1.0};

struct Tilde {
    cplx E, e, E2;
    double mw = 0.0;
};

Tilde tilde_detunings(const SystemParams& p) {
    Tilde t;
    // L_g leaves |E> in the direct scheme and |E2> in the two-photon scheme.
    const double width_E = p.scheme == Scheme::DirectDrive ? p.gamma_f + p.gamma_g : p.gamma_f;
    t.E = (p.delta_E - 0.5 * I * width_E) / p.gamma;
    t.e = (p.delta_e - 0.5 * I * p.gamma) / p.gamma;
    if (p.scheme == Scheme::TwoPhoton) {
        t.E2 = (p.delta_E2 - 0.5 * I * p.gamma_g) / p.gamma;
        t.mw = p.omega_mw / p.gamma;
    }
    return t;
}

void require_nonzero(cplx d, const char* what) {
    if (!std::isfinite(d.real()) || !std::isfinite(d.imag()) || std::abs(d) == 0.0) {
        throw SingularParametersError(std::string("degenerate parameters: ") + what + " vanishes");
    }
}

}  // namespace

const SectorCoefficients& EffectiveModel::sector(int n) const {
    if (n < 0 || n >= static_cast<int>(sectors.size())) {
        throw ParameterError("EffectiveModel::sector: n out of range");
    }
    return sectors[static_cast<std::size_t>(n)];
}

SectorCoefficients sector_closed_form(const SystemParams& p, double n) {
    p.validate();
    if (n < 0.0) throw ParameterError("sector_closed_form: n must be >= 0");
    const Tilde t = tilde_detunings(p);
    const double C = p.cooperativity();
    const double Cf = p.aux_cooperativity();
    const double sg = std::sqrt(p.gamma);
    const double om = p.omega;

    const cplx num = 0.5 * I * t.e + n * C;
    const cplx den = t.e * (0.5 * I * t.E + Cf) + n * t.E * C;

    SectorCoefficients s;
    s.n = n;
    if (p.scheme == Scheme::DirectDrive) {
        require_nonzero(den, "sector denominator");
        s.delta = -(om * om / 4.0) * (num / (p.gamma * den)).real();
        s.r0 = 0.5 * om * std::sqrt(Cf) * t.e / (sg * den);
        s.rf = 0.5 * om * num * std::sqrt(p.gamma_f) / (p.gamma * den);
        s.rg = 0.5 * om * num * std::sqrt(p.gamma_g) / (p.gamma * den);
        s.rk = -0.5 * om * std::sqrt(Cf * C) / (sg * den);
    } else {
        const cplx den2 = t.E2 * den - 0.25 * t.mw * t.mw * num;
        require_nonzero(den2, "two-photon sector denominator");
        s.delta = -(om * om / 4.0) * (den / (p.gamma * den2)).real();
        s.r0 = -0.25 * om * t.mw * std::sqrt(Cf) * t.e / (sg * den2);
        s.rf = -0.25 * om * t.mw * num * std::sqrt(p.gamma_f) / (p.gamma * den2);
        s.rk = 0.25 * om * t.mw * std::sqrt(C * Cf) / (sg * den2);
        s.rg = 0.5 * om * den * std::sqrt(p.gamma_g) / (p.gamma * den2);
    }
    if (n == 0.0) s.rk = 0.0;
    s.Gamma = std::norm(s.r0) + std::norm(s.rf) + n * std::norm(s.rk);
    return s;
}

SectorCoefficients sector_large_n_limit(const SystemParams& p) {
    p.validate();
    const Tilde t = tilde_detunings(p);
    const double om = p.omega;
    SectorCoefficients s;
    s.n = std::numeric_limits<double>::infinity();
    if (p.scheme == Scheme::DirectDrive) {
        require_nonzero(t.E, "Delta_E - i gamma_E / 2");
        s.delta = -(om * om / 4.0) * (1.0 / (p.gamma * t.E)).real();
        s.rf = 0.5 * om * std::sqrt(p.gamma_f) / (p.gamma * t.E);
        s.rg = 0.5 * om * std::sqrt(p.gamma_g) / (p.gamma * t.E);
    } else {
        const cplx d = t.E2 * t.E - 0.25 * t.mw * t.mw;
        require_nonzero(d, "two-photon large-n denominator");
        s.delta = -(om * om / 4.0) * (t.E / (p.gamma * d)).real();
        s.rf = -0.25 * om * t.mw * std::sqrt(p.gamma_f) / (p.gamma * d);
        s.rg = 0.5 * om * t.E * std::sqrt(p.gamma_g) / (p.gamma * d);
    }
    s.Gamma = std::norm(s.rf);
    return s;
}

EffectiveModel effective_closed_form(const SystemParams& p) {
    p.validate();
    EffectiveModel m;
    m.scheme = p.scheme;
    m.n_qubits = p.n_qubits;
    const Tilde t = tilde_detunings(p);
    m.tilde_delta_E = t.E;
    m.tilde_delta_e = t.e;
    m.tilde_delta_E2 = t.E2;
    if (p.scheme == Scheme::TwoPhoton && p.delta_E2 != 0.0) {
        m.global_stark_shift = -p.omega * p.omega / (4.0 * p.delta_E2);
    }
    for (int n = 0; n <= p.n_qubits; ++n) m.sectors.push_back(sector_closed_form(p, n));
    return m;
}

GenericEffective effective_generic(const ModelSplit& model) {
    const auto& basis = *model.basis;
    const std::size_t d = basis.dim();
    std::vector<std::size_t> ground, excited;
    for (std::size_t i = 0; i < d; ++i) {
        const BasisLabel l = basis.label(i);
        bool exc = l.aux == AuxLevel::E || l.aux == AuxLevel::E2 || l.photons > 0;
        for (auto q : l.qubits) exc = exc || q == QubitLevel::e;
        (exc ? excited : ground).push_back(i);
    }
    const auto ng = static_cast<Eigen::Index>(ground.size());
    const auto ne = static_cast<Eigen::Index>(excited.size());

    const Eigen::MatrixXcd hnh = no_jump_hamiltonian(model).matrix;
    Eigen::MatrixXcd h_exc(ne, ne), v_plus(ne, ng);
    for (Eigen::Index i = 0; i < ne; ++i) {
        const auto ri = static_cast<Eigen::Index>(excited[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < ne; ++j) {
            h_exc(i, j) = hnh(ri, static_cast<Eigen::Index>(excited[static_cast<std::size_t>(j)]));
        }
        for (Eigen::Index j = 0; j < ng; ++j) {
            v_plus(i, j) = model.V.matrix(ri, static_cast<Eigen::Index>(ground[static_cast<std::size_t>(j)]));
        }
    }

    // Only the block reachable from V|ground> matters; unreachable excited
    // states (e.g. undriven aux levels) may make H_exc singular.
    std::vector<Eigen::Index> live;
    {
        std::vector<char> seen(static_cast<std::size_t>(ne), 0);
        std::vector<Eigen::Index> stack;
        for (Eigen::Index i = 0; i < ne; ++i) {
            if (v_plus.row(i).cwiseAbs().maxCoeff() > 0.0) {
                seen[static_cast<std::size_t>(i)] = 1;
                stack.push_back(i);
            }
        }
        while (!stack.empty()) {
            const Eigen::Index j = stack.back();
            stack.pop_back();
            for (Eigen::Index i = 0; i < ne; ++i) {
                if (!seen[static_cast<std::size_t>(i)] && (h_exc(i, j) != cplx{0.0} || h_exc(j, i) != cplx{0.0})) {
                    seen[static_cast<std::size_t>(i)] = 1;
                    stack.push_back(i);
                }
            }
        }
        for (Eigen::Index i = 0; i < ne; ++i) {
            if (seen[static_cast<std::size_t>(i)]) live.push_back(i);
        }
    }
    const auto nl = static_cast<Eigen::Index>(live.size());
    Eigen::MatrixXcd h_live(nl, nl), v_live(nl, ng);
    for (Eigen::Index i = 0; i < nl; ++i) {
        for (Eigen::Index j = 0; j < nl; ++j) h_live(i, j) = h_exc(live[i], live[j]);
        v_live.row(i) = v_plus.row(live[i]);
    }

    Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(nl, ng);
    if (nl > 0) {
        const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h_live);
        const auto& sv = svd.singularValues();
        const double smin = sv(sv.size() - 1);
        if (!(smin > 0.0) || sv(0) / smin > 1e12) {
            throw SingularParametersError("effective_generic: no-jump Hamiltonian is numerically singular");
        }
        x = h_live.partialPivLu().solve(v_live);
    }

    GenericEffective out;
    out.ground = ground;
    const Eigen::MatrixXcd vx = v_live.adjoint() * x;
    out.H_eff = -0.5 * (vx + vx.adjoint());
    for (const auto& l : model.lindblads) {
        Eigen::MatrixXcd l_live(static_cast<Eigen::Index>(d), nl);
        for (Eigen::Index i = 0; i < nl; ++i) {
            l_live.col(i) = l.op.matrix.col(static_cast<Eigen::Index>(excited[static_cast<std::size_t>(live[i])]));
        }
        out.L_eff.push_back(l_live * x);
    }

    // Read the sector coefficients off |g, 1..1 0..0, 0>.
    const SystemParams& p = model.params;
    EffectiveModel& eff = out.model;
    eff.scheme = p.scheme;
    eff.n_qubits = p.n_qubits;
    const Tilde t = tilde_detunings(p);
    eff.tilde_delta_E = t.E;
    eff.tilde_delta_e = t.e;
    eff.tilde_delta_E2 = t.E2;
    if (p.scheme == Scheme::TwoPhoton && p.delta_E2 != 0.0) {
        eff.global_stark_shift = -p.omega * p.omega / (4.0 * p.delta_E2);
    }

    auto ground_pos = [&](const BasisLabel& l) -> Eigen::Index {
        const std::size_t idx = basis.index(l);
        for (std::size_t j = 0; j < ground.size(); ++j) {
            if (ground[j] == idx) return static_cast<Eigen::Index>(j);
        }
        throw NumericalError("effective_generic: label is not a ground state");
    };

    for (int n = 0; n <= p.n_qubits; ++n) {
        BasisLabel src;
        src.aux = AuxLevel::g;
        src.qubits.assign(static_cast<std::size_t>(p.n_qubits), QubitLevel::zero);
        for (int k = 0; k < n; ++k) src.qubits[static_cast<std::size_t>(k)] = QubitLevel::one;
        const Eigen::Index col = ground_pos(src);

        BasisLabel to_f = src;
        to_f.aux = AuxLevel::f;
        const auto fi = static_cast<Eigen::Index>(basis.index(to_f));
        const auto gi = static_cast<Eigen::Index>(basis.index(src));

        SectorCoefficients s;
        s.n = n;
        s.delta = out.H_eff(col, col).real();
        s.r0 = out.L_eff[0](fi, col);
        s.rg = out.L_eff[1](gi, col);
        s.rf = out.L_eff[2](fi, col);
        if (n > 0) {
            BasisLabel to_o = to_f;
            to_o.qubits[0] = QubitLevel::otilde;
            s.rk = out.L_eff[3](static_cast<Eigen::Index>(basis.index(to_o)), col);
        }
        double gamma_total = 0.0;
        for (std::size_t j = 0; j < out.L_eff.size(); ++j) {
            if (j == 1) continue;  // L_g is undetectable
            gamma_total += out.L_eff[j].col(col).squaredNorm();
        }
        s.Gamma = gamma_total;
        eff.sectors.push_back(s);
    }
    return out;
}

AsymptoticLimits asymptotic_limits(const SystemParams& p) {
    p.validate();
    using std::numbers::pi;
    AsymptoticLimits a;
    const double C = p.cooperativity();
    const double al = p.alpha();
    const double be = p.beta();
    double om = p.omega;
    if (p.scheme == Scheme::TwoPhoton) {
        a.omega_tilde = p.delta_E2 != 0.0 ? p.omega * p.omega_mw / (2.0 * p.delta_E2) : 0.0;
        a.gamma_g_tilde = p.delta_E2 != 0.0
                              ? p.gamma_g * p.omega_mw * p.omega_mw / (4.0 * p.delta_E2 * p.delta_E2)
                              : 0.0;
        om = a.omega_tilde;
    }
    const double g2 = p.gamma * p.gamma;
    a.delta_0 = p.delta_E * om * om / (16.0 * g2 * C * C);
    a.delta_n = om * om / (4.0 * p.gamma * std::sqrt(C));
    if (om > 0.0) {
        a.t_cz = 15.0 * pi * std::sqrt(C) * p.gamma / (2.0 * om * om);
        a.toffoli_time = 4.0 * pi * std::sqrt(C) * p.gamma / (om * om);
    }
    a.cz_failure = pi * (8.0 * be * be + 6.0 * be * al + al * al) /
                   (8.0 * std::pow(be, 1.5) * std::sqrt(al) * std::sqrt(C));
    return a;
}

std::vector<cplx> conditional_sector_evolution(const EffectiveModel& eff,
                                               const std::vector<cplx>& c0, double t) {
    if (t < 0.0) throw ParameterError("conditional_sector_evolution: t must be >= 0");
    if (c0.size() != eff.sectors.size()) {
        throw ParameterError("conditional_sector_evolution: need one amplitude per sector");
    }
    std::vector<cplx> c(c0.size());
    for (std::size_t n = 0; n < c0.size(); ++n) {
        const auto& s = eff.sectors[n];
        c[n] = c0[n] * std::exp(-I * s.delta * t - 0.5 * s.Gamma * t);
    }
    return c;
}

Eigen::MatrixXcd effective_conditional_state(const EffectiveModel& eff, const Eigen::VectorXcd& psi0,
                                             double t) {
    if (t < 0.0) throw ParameterError("effective_conditional_state: t must be >= 0");
    const Eigen::Index dim = Eigen::Index{1} << eff.n_qubits;
    if (psi0.size() != dim) throw ParameterError("effective_conditional_state: state size is not 2^N");
    std::vector<int> sector(static_cast<std::size_t>(dim));
    for (Eigen::Index i = 0; i < dim; ++i) {
        sector[static_cast<std::size_t>(i)] = __builtin_popcountll(static_cast<unsigned long long>(i));
    }
    Eigen::MatrixXcd rho(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const auto& a = eff.sector(sector[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < dim; ++j) {
            const auto& b = eff.sector(sector[static_cast<std::size_t>(j)]);
            const cplx rate = -I * (a.delta - b.delta) - 0.5 * (a.Gamma + b.Gamma) -
                              0.5 * (std::norm(a.rg) + std::norm(b.rg)) + a.rg * std::conj(b.rg);
            rho(i, j) = psi0(i) * std::conj(psi0(j)) * std::exp(rate * t);
        }
    }
    return rho;
}

ResidualError two_photon_residual_error(const SystemParams& p) {
    p.validate();
    if (p.scheme != Scheme::TwoPhoton) {
        throw ParameterError("two_photon_residual_error: needs the TwoPhoton scheme");
    }
    using std::numbers::pi;
    const double al = p.alpha();
    const double be = p.beta();
    const double C = p.cooperativity();
    const double gg = p.gamma_g / p.gamma;
    const double d2 = p.delta_E2 / p.gamma;
    const double mw2 = p.omega_mw * p.omega_mw / (p.gamma * p.gamma);
    ResidualError r;
    r.quartic = (al * al - 4.0 * al * be - 6.0 * be * be) * pi * pi / (128.0 * be * be) *
                std::pow(gg, 4) / std::pow(d2, 4);
    r.microwave = (al * al + 4.0 * al * be + 6.0 * be * be) * pi /
                  (16.0 * std::sqrt(al * be) * (al + 2.0 * be) * (al + 5.0 * be)) * gg * mw2 /
                  (d2 * d2 * std::sqrt(C));
    return r;
}

}  // namespace herald
