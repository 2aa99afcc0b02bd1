#include "herald/space.hpp"

#include <cmath>

#include "herald/error.hpp"

namespace herald {

namespace {

constexpr const char* kAuxNames[] = {"g", "f", "E", "E2"};
constexpr const char* kQubitNames[] = {"0", "1", "e", "o"};

std::size_t ipow4(int n) {
    std::size_t r = 1;
    for (int i = 0; i < n; ++i) r *= 4;
    return r;
}

}  // namespace

std::string to_string(const BasisLabel& label) {
    std::string s = "|";
    s += kAuxNames[static_cast<int>(label.aux)];
    s += ',';
    for (auto q : label.qubits) s += kQubitNames[static_cast<int>(q)];
    s += ',' + std::to_string(label.photons) + ">";
    return s;
}

Basis::Basis(Scheme scheme, int n_qubits, int photon_cutoff)
    : scheme_(scheme), n_qubits_(n_qubits), cutoff_(photon_cutoff) {
    if (n_qubits < 1) throw ParameterError("Basis: n_qubits must be >= 1");
    if (photon_cutoff < 1) throw ParameterError("Basis: photon_cutoff must be >= 1");
    if (n_qubits > 12) throw ParameterError("Basis: n_qubits > 12 is too large for a dense basis");
    qubit_block_ = ipow4(n_qubits);
    dim_ = static_cast<std::size_t>(aux_levels()) * qubit_block_ *
           static_cast<std::size_t>(cutoff_ + 1);
}

BasisLabel Basis::label(std::size_t index) const {
    if (index >= dim_) throw ParameterError("Basis::label: index out of range");
    const std::size_t nph = static_cast<std::size_t>(cutoff_ + 1);
    BasisLabel l;
    l.photons = static_cast<int>(index % nph);
    std::size_t rest = index / nph;
    l.qubits.resize(static_cast<std::size_t>(n_qubits_));
    for (int k = n_qubits_ - 1; k >= 0; --k) {
        l.qubits[static_cast<std::size_t>(k)] = static_cast<QubitLevel>(rest % 4);
        rest /= 4;
    }
    l.aux = static_cast<AuxLevel>(rest);
    return l;
}

bool Basis::contains(const BasisLabel& l) const {
    const int aux = static_cast<int>(l.aux);
    return aux >= 0 && aux < aux_levels() && l.photons >= 0 && l.photons <= cutoff_ &&
           static_cast<int>(l.qubits.size()) == n_qubits_;
}

std::size_t Basis::index(const BasisLabel& l) const {
    if (!contains(l)) throw ParameterError("Basis::index: label not in basis: " + to_string(l));
    std::size_t idx = static_cast<std::size_t>(l.aux);
    for (auto q : l.qubits) idx = idx * 4 + static_cast<std::size_t>(q);
    return idx * static_cast<std::size_t>(cutoff_ + 1) + static_cast<std::size_t>(l.photons);
}

BasisPtr build_space(const SystemParams& params) {
    return std::make_shared<const Basis>(params.scheme, params.n_qubits, params.photon_cutoff);
}

bool OperatorRep::is_hermitian(double tol) const {
    if (matrix.rows() != matrix.cols()) return false;
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

OperatorRep map_operator(
    const BasisPtr& basis,
    const std::function<std::optional<std::pair<BasisLabel, cplx>>(const BasisLabel&)>& rule) {
    const auto d = static_cast<Eigen::Index>(basis->dim());
    OperatorRep op{Eigen::MatrixXcd::Zero(d, d), basis};
    for (Eigen::Index j = 0; j < d; ++j) {
        auto image = rule(basis->label(static_cast<std::size_t>(j)));
        if (!image || !basis->contains(image->first)) continue;
        op.matrix(static_cast<Eigen::Index>(basis->index(image->first)), j) += image->second;
    }
    return op;
}

OperatorRep zero_operator(const BasisPtr& basis) {
    const auto d = static_cast<Eigen::Index>(basis->dim());
    return {Eigen::MatrixXcd::Zero(d, d), basis};
}

OperatorRep identity_operator(const BasisPtr& basis) {
    const auto d = static_cast<Eigen::Index>(basis->dim());
    return {Eigen::MatrixXcd::Identity(d, d), basis};
}

OperatorRep aux_transition(const BasisPtr& basis, AuxLevel to, AuxLevel from) {
    return map_operator(basis, [&](const BasisLabel& l) -> std::optional<std::pair<BasisLabel, cplx>> {
        if (l.aux != from) return std::nullopt;
        BasisLabel out = l;
        out.aux = to;
        return std::make_pair(out, cplx{1.0});
    });
}

OperatorRep qubit_transition(const BasisPtr& basis, int k, QubitLevel to, QubitLevel from) {
    if (k < 0 || k >= basis->n_qubits()) throw ParameterError("qubit_transition: qubit out of range");
    const auto kk = static_cast<std::size_t>(k);
    return map_operator(basis, [&](const BasisLabel& l) -> std::optional<std::pair<BasisLabel, cplx>> {
        if (l.qubits[kk] != from) return std::nullopt;
        BasisLabel out = l;
        out.qubits[kk] = to;
        return std::make_pair(out, cplx{1.0});
    });
}

OperatorRep annihilation(const BasisPtr& basis) {
    return map_operator(basis, [](const BasisLabel& l) -> std::optional<std::pair<BasisLabel, cplx>> {
        if (l.photons == 0) return std::nullopt;
        BasisLabel out = l;
        out.photons -= 1;
        return std::make_pair(out, cplx{std::sqrt(static_cast<double>(l.photons))});
    });
}

std::optional<int> sector_of(const BasisLabel& label) {
    int n = 0;
    for (auto q : label.qubits) {
        if (q == QubitLevel::one) ++n;
        else if (q != QubitLevel::zero) return std::nullopt;
    }
    return n;
}

OperatorRep projector_sector(int n, const BasisPtr& basis) {
    if (n < 0 || n > basis->n_qubits()) throw ParameterError("projector_sector: n out of range");
    OperatorRep p = zero_operator(basis);
    for (std::size_t i = 0; i < basis->dim(); ++i) {
        auto s = sector_of(basis->label(i));
        if (s && *s == n) p.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
    }
    return p;
}

OperatorRep projector_leaked(const BasisPtr& basis) {
    OperatorRep p = zero_operator(basis);
    for (std::size_t i = 0; i < basis->dim(); ++i) {
        if (!sector_of(basis->label(i))) {
            p.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
        }
    }
    return p;
}

std::vector<NamedOperator> lindblad_set(const SystemParams& params, const BasisPtr& basis) {
    params.validate();
    std::vector<NamedOperator> out;
    OperatorRep a = annihilation(basis);
    a.matrix *= std::sqrt(params.kappa);
    out.push_back({"L0", std::move(a)});

    const AuxLevel g_source = params.scheme == Scheme::TwoPhoton ? AuxLevel::E2 : AuxLevel::E;
    OperatorRep lg = aux_transition(basis, AuxLevel::g, g_source);
    lg.matrix *= std::sqrt(params.gamma_g);
    out.push_back({"Lg", std::move(lg)});

    OperatorRep lf = aux_transition(basis, AuxLevel::f, AuxLevel::E);
    lf.matrix *= std::sqrt(params.gamma_f);
    out.push_back({"Lf", std::move(lf)});

    for (int k = 0; k < params.n_qubits; ++k) {
        OperatorRep lk = qubit_transition(basis, k, QubitLevel::otilde, QubitLevel::e);
        lk.matrix *= std::sqrt(params.gamma);
        out.push_back({"L" + std::to_string(k + 1), std::move(lk)});
    }
    return out;
}

}  // namespace herald
