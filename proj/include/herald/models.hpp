#pragma once

#include <vector>

#include "herald/params.hpp"
#include "herald/space.hpp"

namespace herald {

// Rotating-frame model split into the undriven part H_e and the weak drive V.
// The full Hamiltonian is H(t) = H_e + u(t) (V + V^dagger).
struct ModelSplit {
    SystemParams params;
    BasisPtr basis;
    OperatorRep H_e;
    OperatorRep V;  // (Omega/2)|E><g| or (Omega/2)|E2><g|
    std::vector<NamedOperator> lindblads;

    OperatorRep hamiltonian() const;  // H_e + V + V^dagger
};

ModelSplit build_model(const SystemParams& params);

// H_NH = H_e - (i/2) sum_j L_j^dagger L_j
OperatorRep no_jump_hamiltonian(const ModelSplit& model);

// Basis indices closed under H_e, V, V^dagger, every L_j and every L_j^dagger L_j,
// grown from `seeds`. The master equation maps operators supported on this
// set to operators supported on it, so evolution restricted to it is exact.
std::vector<std::size_t> invariant_subspace(const ModelSplit& model,
                                            const std::vector<std::size_t>& seeds);

// The model's matrices restricted to a list of basis indices.
struct CompactModel {
    std::vector<std::size_t> support;  // indices into the full basis
    Eigen::MatrixXcd H_e;
    Eigen::MatrixXcd V;
    std::vector<Eigen::MatrixXcd> lindblads;

    Eigen::Index dim() const { return H_e.rows(); }
};

CompactModel compact(const ModelSplit& model, const std::vector<std::size_t>& support);

}  // namespace herald
