#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "herald/models.hpp"

using namespace herald;

namespace {

SystemParams params_a(double omega = 0.7) {
    SystemParams p = make_params(10.0, 1.3, 0.8, 100.0);
    p.gamma_g = 0.2;
    p.omega = omega;
    p.delta_E = 2.1;
    p.delta_e = -0.4;
    return p;
}

SystemParams params_b() {
    SystemParams p = params_a();
    p.scheme = Scheme::TwoPhoton;
    p.omega_mw = 3.0;
    p.delta_E2 = 25.0;
    return p;
}

Eigen::Index idx(const ModelSplit& m, AuxLevel aux, std::vector<QubitLevel> q, int ph) {
    return static_cast<Eigen::Index>(m.basis->index({aux, std::move(q), ph}));
}

}  // namespace

TEST_CASE("hamiltonians are hermitian") {
    for (const SystemParams& p : {params_a(), params_b()}) {
        const ModelSplit m = build_model(p);
        const auto h = m.hamiltonian().matrix;
        CHECK((h - h.adjoint()).norm() < 1e-12);
        CHECK(m.H_e.is_hermitian());
    }
}

TEST_CASE("matrix elements") {
    const SystemParams p = params_a();
    const ModelSplit m = build_model(p);
    const auto h = m.hamiltonian().matrix;
    using Q = QubitLevel;
    CHECK(std::abs(h(idx(m, AuxLevel::E, {Q::zero, Q::zero}, 0), idx(m, AuxLevel::f, {Q::zero, Q::zero}, 1)) - p.g_f) < 1e-14);
    CHECK(std::abs(h(idx(m, AuxLevel::g, {Q::e, Q::zero}, 0), idx(m, AuxLevel::g, {Q::one, Q::zero}, 1)) - p.g) < 1e-14);
    CHECK(std::abs(h(idx(m, AuxLevel::E, {Q::one, Q::one}, 0), idx(m, AuxLevel::g, {Q::one, Q::one}, 0)) - p.omega / 2) < 1e-14);
    CHECK(std::abs(h(idx(m, AuxLevel::E, {Q::one, Q::e}, 1), idx(m, AuxLevel::E, {Q::one, Q::e}, 1)) - (p.delta_E + p.delta_e)) < 1e-14);

    const SystemParams pb = params_b();
    const ModelSplit mb = build_model(pb);
    const auto hb = mb.hamiltonian().matrix;
    CHECK(std::abs(hb(idx(mb, AuxLevel::E2, {Q::zero, Q::one}, 0), idx(mb, AuxLevel::g, {Q::zero, Q::one}, 0)) - pb.omega / 2) < 1e-14);
    CHECK(std::abs(hb(idx(mb, AuxLevel::E, {Q::zero, Q::one}, 0), idx(mb, AuxLevel::E2, {Q::zero, Q::one}, 0)) - pb.omega_mw / 2) < 1e-14);
    CHECK(std::abs(hb(idx(mb, AuxLevel::E2, {Q::zero, Q::one}, 0), idx(mb, AuxLevel::E2, {Q::zero, Q::one}, 0)) - pb.delta_E2) < 1e-14);
    // no direct laser coupling g -> E in the two-photon scheme
    CHECK(std::abs(hb(idx(mb, AuxLevel::E, {Q::zero, Q::one}, 0), idx(mb, AuxLevel::g, {Q::zero, Q::one}, 0))) == 0.0);
}

TEST_CASE("drive acts only out of |g>") {
    for (const SystemParams& p : {params_a(), params_b()}) {
        const ModelSplit m = build_model(p);
        for (Eigen::Index j = 0; j < m.V.matrix.cols(); ++j) {
            if (m.V.matrix.col(j).norm() > 0.0) CHECK(m.basis->label(static_cast<std::size_t>(j)).aux == AuxLevel::g);
        }
    }
}

TEST_CASE("undriven ground manifold is stationary") {
    const ModelSplit m = build_model(params_a(0.0));
    CHECK(m.V.matrix.norm() == 0.0);
    const auto h = m.hamiltonian().matrix;
    using Q = QubitLevel;
    for (AuxLevel aux : {AuxLevel::g, AuxLevel::f}) {
        for (Q a : {Q::zero, Q::one}) {
            for (Q b : {Q::zero, Q::one}) {
                const Eigen::Index i = idx(m, aux, {a, b}, 0);
                // f with a qubit in |1> and no photon is not coupled either: the cavity is empty
                CHECK(h.col(i).norm() == 0.0);
            }
        }
    }
}

TEST_CASE("H_e conserves the qubit sector") {
    const ModelSplit m = build_model(params_b());
    for (int n = 0; n <= 2; ++n) {
        const auto pn = projector_sector(n, m.basis).matrix;
        const Eigen::MatrixXcd leak = projector_leaked(m.basis).matrix;
        // H_e maps sector n into sector n plus excited-qubit states reached from it
        const Eigen::MatrixXcd out = (Eigen::MatrixXcd::Identity(pn.rows(), pn.cols()) - pn - leak) * m.H_e.matrix * pn;
        CHECK(out.norm() < 1e-14);
    }
}

TEST_CASE("no-jump hamiltonian") {
    SystemParams p = params_a();
    const ModelSplit m = build_model(p);
    const auto hnh = no_jump_hamiltonian(m).matrix;
    using Q = QubitLevel;
    const Eigen::Index e = idx(m, AuxLevel::E, {Q::zero, Q::zero}, 0);
    CHECK(std::abs(hnh(e, e) - cplx(p.delta_E, -(p.gamma_f + p.gamma_g) / 2)) < 1e-14);

    const Eigen::MatrixXcd anti = cplx(0.0, -0.5) * (hnh - hnh.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(anti);
    CHECK(es.eigenvalues().maxCoeff() < 1e-12);

    // the anti-hermitian part is exactly the decay term; without decay H_NH = H_e
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(hnh.rows(), hnh.cols());
    for (const auto& l : m.lindblads) sum += l.op.matrix.adjoint() * l.op.matrix;
    CHECK((hnh - m.H_e.matrix + cplx(0.0, 0.5) * sum).norm() < 1e-13);
}

TEST_CASE("invariant subspace is closed and small") {
    const ModelSplit m = build_model(params_a());
    using Q = QubitLevel;
    std::vector<std::size_t> seeds;
    for (Q a : {Q::zero, Q::one}) {
        for (Q b : {Q::zero, Q::one}) seeds.push_back(m.basis->index({AuxLevel::g, {a, b}, 0}));
    }
    const auto support = invariant_subspace(m, seeds);
    CHECK(support.size() < m.basis->dim() / 4);
    std::vector<char> in(m.basis->dim(), 0);
    for (auto i : support) in[i] = 1;
    std::vector<Eigen::MatrixXcd> ops = {m.hamiltonian().matrix};
    for (const auto& l : m.lindblads) {
        ops.push_back(l.op.matrix);
        ops.push_back(l.op.matrix.adjoint() * l.op.matrix);
    }
    for (const auto& op : ops) {
        for (auto j : support) {
            for (Eigen::Index i = 0; i < op.rows(); ++i) {
                if (op(i, static_cast<Eigen::Index>(j)) != cplx{0.0}) CHECK(in[static_cast<std::size_t>(i)]);
            }
        }
    }
    // photons never exceed one: the drive only acts from |g>, where the cavity is empty
    for (auto i : support) CHECK(m.basis->label(i).photons <= 1);
}
