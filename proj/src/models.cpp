#include "herald/models.hpp"

#include <algorithm>
#include <deque>

namespace herald {

OperatorRep ModelSplit::hamiltonian() const {
    return {H_e.matrix + V.matrix + V.matrix.adjoint(), basis};
}

ModelSplit build_model(const SystemParams& params) {
    params.validate();
    ModelSplit m;
    m.params = params;
    m.basis = build_space(params);
    const auto& b = m.basis;

    const OperatorRep a = annihilation(b);
    const OperatorRep sEE = aux_transition(b, AuxLevel::E, AuxLevel::E);
    const OperatorRep sEf = aux_transition(b, AuxLevel::E, AuxLevel::f);

    Eigen::MatrixXcd h = params.delta_E * sEE.matrix;
    const Eigen::MatrixXcd aux_cav = a.matrix * sEf.matrix;  // a|E><f|, factors commute
    h += params.g_f * (aux_cav + aux_cav.adjoint());

    for (int k = 0; k < params.n_qubits; ++k) {
        const OperatorRep see = qubit_transition(b, k, QubitLevel::e, QubitLevel::e);
        const OperatorRep se1 = qubit_transition(b, k, QubitLevel::e, QubitLevel::one);
        h += params.delta_e * see.matrix;
        const Eigen::MatrixXcd q_cav = a.matrix * se1.matrix;
        h += params.g * (q_cav + q_cav.adjoint());
    }

    AuxLevel driven = AuxLevel::E;
    if (params.scheme == Scheme::TwoPhoton) {
        driven = AuxLevel::E2;
        h += params.delta_E2 * aux_transition(b, AuxLevel::E2, AuxLevel::E2).matrix;
        const Eigen::MatrixXcd mw = aux_transition(b, AuxLevel::E, AuxLevel::E2).matrix;
        h += 0.5 * params.omega_mw * (mw + mw.adjoint());
    }
    m.H_e = {std::move(h), b};

    OperatorRep v = aux_transition(b, driven, AuxLevel::g);
    v.matrix *= 0.5 * params.omega;
    m.V = std::move(v);
    m.lindblads = lindblad_set(params, b);
    return m;
}

OperatorRep no_jump_hamiltonian(const ModelSplit& model) {
    Eigen::MatrixXcd h = model.H_e.matrix;
    for (const auto& l : model.lindblads) {
        h -= cplx(0.0, 0.5) * (l.op.matrix.adjoint() * l.op.matrix);
    }
    return {std::move(h), model.basis};
}

std::vector<std::size_t> invariant_subspace(const ModelSplit& model,
                                            const std::vector<std::size_t>& seeds) {
    std::vector<const Eigen::MatrixXcd*> ops;
    std::vector<Eigen::MatrixXcd> owned;
    owned.reserve(2 + 2 * model.lindblads.size());
    owned.push_back(model.H_e.matrix + model.V.matrix + model.V.matrix.adjoint());
    for (const auto& l : model.lindblads) {
        owned.push_back(l.op.matrix);
        owned.push_back(l.op.matrix.adjoint() * l.op.matrix);
    }
    for (const auto& o : owned) ops.push_back(&o);

    const std::size_t d = model.basis->dim();
    std::vector<char> seen(d, 0);
    std::deque<std::size_t> queue;
    for (auto s : seeds) {
        if (s < d && !seen[s]) {
            seen[s] = 1;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        const auto j = static_cast<Eigen::Index>(queue.front());
        queue.pop_front();
        for (const auto* op : ops) {
            for (Eigen::Index i = 0; i < op->rows(); ++i) {
                if ((*op)(i, j) != cplx{0.0} && !seen[static_cast<std::size_t>(i)]) {
                    seen[static_cast<std::size_t>(i)] = 1;
                    queue.push_back(static_cast<std::size_t>(i));
                }
            }
        }
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < d; ++i) {
        if (seen[i]) out.push_back(i);
    }
    return out;
}

namespace {

Eigen::MatrixXcd take(const Eigen::MatrixXcd& m, const std::vector<std::size_t>& idx) {
    const auto n = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXcd out(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            out(i, j) = m(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(i)]),
                          static_cast<Eigen::Index>(idx[static_cast<std::size_t>(j)]));
        }
    }
    return out;
}

}  // namespace

CompactModel compact(const ModelSplit& model, const std::vector<std::size_t>& support) {
    CompactModel c;
    c.support = support;
    std::sort(c.support.begin(), c.support.end());
    c.H_e = take(model.H_e.matrix, c.support);
    c.V = take(model.V.matrix, c.support);
    for (const auto& l : model.lindblads) {
        Eigen::MatrixXcd lr = take(l.op.matrix, c.support);
        if (lr.cwiseAbs().maxCoeff() > 0.0) c.lindblads.push_back(std::move(lr));
    }
    return c;
}

}  // namespace herald
