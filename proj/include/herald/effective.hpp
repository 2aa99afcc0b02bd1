#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "herald/models.hpp"
#include "herald/params.hpp"

namespace herald {

// Effective quantities of the sector with n qubits in |1>. Rates in gamma,
// decay coefficients in sqrt(gamma). rk is the coefficient of one coupled
// qubit; the sector carries n identical copies of it.
struct SectorCoefficients {
    double n = 0.0;
    double delta = 0.0;  // energy shift Delta_n
    cplx r0{}, rg{}, rf{}, rk{};
    double Gamma = 0.0;  // |r0|^2 + |rf|^2 + n |rk|^2
};

struct EffectiveModel {
    Scheme scheme = Scheme::DirectDrive;
    int n_qubits = 0;
    std::vector<SectorCoefficients> sectors;  // n = 0..N
    cplx tilde_delta_E{}, tilde_delta_e{}, tilde_delta_E2{};
    // Ground-state light shift from the off-resonant |g>-|E2> drive. Common to
    // every sector, so it only contributes a global phase; reported, unused.
    double global_stark_shift = 0.0;

    const SectorCoefficients& sector(int n) const;
};

// Closed-form sector coefficients; n may be any real >= 0 so the large-n
// behaviour can be probed. Throws SingularParametersError on a zero
// denominator.
SectorCoefficients sector_closed_form(const SystemParams& params, double n);
// n -> infinity limit of sector_closed_form (r0 and sqrt(n) rk vanish).
SectorCoefficients sector_large_n_limit(const SystemParams& params);
EffectiveModel effective_closed_form(const SystemParams& params);

struct GenericEffective {
    EffectiveModel model;
    std::vector<std::size_t> ground;     // basis indices of the ground manifold
    Eigen::MatrixXcd H_eff;              // ground x ground
    std::vector<Eigen::MatrixXcd> L_eff; // full x ground, same order as model.lindblads
};

// Numerical effective operators: H_eff = -1/2 V^dag (H_NH^-1 + h.c.) V and
// L_eff = L H_NH^-1 V, with H_NH inverted on the excited manifold.
GenericEffective effective_generic(const ModelSplit& model);

struct AsymptoticLimits {
    double delta_0 = 0.0;         // Delta_E Omega^2 / (16 gamma^2 C^2)
    double delta_n = 0.0;         // Omega^2 / (4 gamma sqrt(C)), n > 0
    double omega_tilde = 0.0;     // Omega Omega_MW / (2 Delta_E2), TwoPhoton
    double gamma_g_tilde = 0.0;   // gamma_g Omega_MW^2 / (4 Delta_E2^2), TwoPhoton
    double t_cz = 0.0;            // 15 pi sqrt(C) gamma / (2 Omega^2)
    double cz_failure = 0.0;      // pi (8b^2 + 6ab + a^2) / (8 b^1.5 sqrt(a) sqrt(C))
    double toffoli_time = 0.0;    // 4 pi sqrt(C) gamma / Omega^2
};

// Leading-order expressions for reporting. For TwoPhoton the drive entering
// the gate formulas is omega_tilde.
AsymptoticLimits asymptotic_limits(const SystemParams& params);

// c_n(t) = c_n(0) exp(-i Delta_n t - Gamma_n t / 2), one amplitude per sector.
std::vector<cplx> conditional_sector_evolution(const EffectiveModel& eff,
                                               const std::vector<cplx>& c0, double t);

// Unnormalized |g>-conditioned qubit density matrix in the computational
// basis (qubit 1 most significant), including the undetectable L_g channel.
// Its trace is the success probability.
Eigen::MatrixXcd effective_conditional_state(const EffectiveModel& eff,
                                             const Eigen::VectorXcd& psi0, double t);

struct ResidualError {
    double quartic = 0.0;    // ~ gamma_g^4 / Delta_E2^4
    double microwave = 0.0;  // ~ gamma_g Omega_MW^2 / (Delta_E2^2 sqrt(C))
    double total() const { return quartic + microwave; }
};

// Undetectable error of the two-photon scheme to leading order.
ResidualError two_photon_residual_error(const SystemParams& params);

}  // namespace herald
