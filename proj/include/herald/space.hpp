#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "herald/params.hpp"

namespace herald {

using cplx = std::complex<double>;

enum class AuxLevel : int { g = 0, f = 1, E = 2, E2 = 3 };
enum class QubitLevel : int { zero = 0, one = 1, e = 2, otilde = 3 };

inline constexpr int kQubitLevels = 4;

struct BasisLabel {
    AuxLevel aux = AuxLevel::g;
    std::vector<QubitLevel> qubits;  // qubit k = 1..N stored at k-1
    int photons = 0;

    bool operator==(const BasisLabel&) const = default;
};

std::string to_string(const BasisLabel& label);

// Product basis  aux (x) qubit_1 (x) ... (x) qubit_N (x) cavity.
// Ordering: aux slowest, then qubit 1 ... qubit N, photon number fastest.
class Basis {
public:
    Basis(Scheme scheme, int n_qubits, int photon_cutoff);

    Scheme scheme() const { return scheme_; }
    int n_qubits() const { return n_qubits_; }
    int photon_cutoff() const { return cutoff_; }
    int aux_levels() const { return scheme_ == Scheme::TwoPhoton ? 4 : 3; }
    std::size_t dim() const { return dim_; }

    BasisLabel label(std::size_t index) const;
    std::size_t index(const BasisLabel& label) const;
    bool contains(const BasisLabel& label) const;

private:
    Scheme scheme_;
    int n_qubits_;
    int cutoff_;
    std::size_t qubit_block_;  // 4^N
    std::size_t dim_;
};

using BasisPtr = std::shared_ptr<const Basis>;

// Builds the basis for a parameter set; rejects N < 1 and cutoff < 1.
BasisPtr build_space(const SystemParams& params);

// Dense operator with the basis it acts on.
struct OperatorRep {
    Eigen::MatrixXcd matrix;
    BasisPtr basis;

    std::size_t dim() const { return static_cast<std::size_t>(matrix.rows()); }
    bool is_hermitian(double tol = 1e-12) const;
    OperatorRep adjoint() const { return {matrix.adjoint(), basis}; }
};

struct NamedOperator {
    std::string name;
    OperatorRep op;
};

// Builds an operator column by column: for every basis state `rule` returns
// the image state and amplitude, or nothing when the state is annihilated.
// Images outside the truncated space are dropped.
OperatorRep map_operator(
    const BasisPtr& basis,
    const std::function<std::optional<std::pair<BasisLabel, cplx>>(const BasisLabel&)>& rule);

OperatorRep zero_operator(const BasisPtr& basis);
OperatorRep identity_operator(const BasisPtr& basis);

// |to><from| on the auxiliary atom.
OperatorRep aux_transition(const BasisPtr& basis, AuxLevel to, AuxLevel from);
// |to><from| on qubit k (0-based).
OperatorRep qubit_transition(const BasisPtr& basis, int k, QubitLevel to, QubitLevel from);
// Truncated cavity annihilation operator.
OperatorRep annihilation(const BasisPtr& basis);

// Number of qubits in |1> when no qubit is in |e> or |o~>; nullopt otherwise.
std::optional<int> sector_of(const BasisLabel& label);

// Orthogonal projector onto states with exactly n qubits in |1> and no qubit
// in |e> or |o~> (any aux level, any photon number).
OperatorRep projector_sector(int n, const BasisPtr& basis);
// Projector onto states with at least one qubit in |e> or |o~>.
OperatorRep projector_leaked(const BasisPtr& basis);

// L0 = sqrt(kappa) a, Lg, Lf, and L_k = sqrt(gamma) |o~>_k<e| for every qubit.
// Lg is present (possibly as the zero operator) so the list layout is fixed:
// [L0, Lg, Lf, L1, ..., LN].
std::vector<NamedOperator> lindblad_set(const SystemParams& params, const BasisPtr& basis);

}  // namespace herald
