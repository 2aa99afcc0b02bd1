#pragma once

#include <string>
#include <vector>

#include "herald/effective.hpp"
#include "herald/gate_report.hpp"

namespace herald {

struct CzDetunings {
    double delta_E = 0.0;
    double delta_e = 0.0;
};

// Delta_E = (gamma/2) sqrt(beta) sqrt(4 alpha C + beta), Delta_e = alpha C gamma^2 / (2 Delta_E).
// These make Gamma_0 = Gamma_1 = Gamma_2 exactly.
CzDetunings cz_analytic_detunings(double C, double alpha = 1.0, double beta = 1.0, double gamma = 1.0);

// Effective-theory CZ gate for input |++>: t = |pi / (Delta_2 - 2 Delta_1 + Delta_0)|,
// target-side angles phi_k = -(Delta_1 - Delta_0) t (wrapped to (-pi, pi]),
// P_success and F from the |g>-conditioned effective density matrix.
GateReport cz_protocol(const EffectiveModel& eff);

struct PhaseGateOutcome {
    double fidelity = 0.0;
    double P_success = 0.0;
};

// Effective-model outcome of a phase gate whose input amplitudes depend only
// on the sector. weights[n] is the input probability of sector n, target[n]
// the ideal phase factor of sector n, and every qubit gets the same
// target-side angle phi. Includes the undetectable L_g dephasing.
PhaseGateOutcome sector_gate_outcome(const std::vector<SectorCoefficients>& sectors,
                                     const std::vector<double>& weights, const std::vector<cplx>& target,
                                     double t, double phi = 0.0);

// Toffoli with Delta_e = 0: t solves (Delta_1 - Delta_0) t = pi, sectors n >= 1
// target a pi phase relative to n = 0. Input: uniform superposition of all
// 2^N computational states (the generic input) unless `worst_case`, which
// uses (|0...0> + |1...1>)/sqrt(2).
GateReport toffoli_protocol(const EffectiveModel& eff, bool worst_case = false);

// Upper bound for the worst-case input in the N -> infinity limit: sector N
// replaced by the large-n limit of the closed form.
struct ToffoliBound {
    double t_gate = 0.0;
    double fidelity = 0.0;
    double P_success = 0.0;
};
ToffoliBound toffoli_upper_bound(const SystemParams& params);

// Delta_E with Gamma_0 = Gamma_1 at Delta_e = 0. The root is followed from the
// CZ analytic point (where Gamma_0 = Gamma_1 holds at the CZ Delta_e) while
// Delta_e is lowered to 0. `alternatives` receives other roots of a coarse scan.
double tune_toffoli_detuning(const SystemParams& params, std::vector<double>* alternatives = nullptr);

struct ToffoliScaling {
    int N = 0;
    double k = 0.0;  // (1 - F_gen) C (alpha + beta) / (alpha pi^2)
    // from 1 - P_gen = (d alpha + 2 beta) pi / (2 sqrt(alpha) sqrt(alpha + beta) sqrt(C))
    double d = 0.0;
    double error = 0.0;
    double failure = 0.0;
    bool asymptotic = false;  // C large enough for the ratios to be meaningful
};

// One Toffoli point with Gamma_0 = Gamma_1 tuning; k and d use the same
// formulas for either input.
ToffoliScaling toffoli_point(int N, double C, double alpha = 1.0, double beta = 1.0,
                             double kappa_over_gamma = 100.0, bool worst_case = false);

// Generic-input Toffoli performance for each N with Gamma_0 = Gamma_1 tuning.
std::vector<ToffoliScaling> toffoli_scaling(const std::vector<int>& Ns, double C, double alpha = 1.0,
                                            double beta = 1.0, double kappa_over_gamma = 100.0);

struct ErrorEstimate {
    double value = 0.0;
    std::string regime;
};

struct ErrorBudget {
    ErrorEstimate crosstalk_drive;
    ErrorEstimate crosstalk_mw;
    ErrorEstimate open_transition;
    double n_scat = 0.0;            // 12 sqrt(C) gamma^2 / Omega_MW^2
    double adiabaticity_ratio = 0.0; // 3 sqrt(C) gamma^2 Omega^2 / (Delta_E2^2 Omega_MW^2)
    double delta_g = 1000.0;        // [gamma]
    double delta_23 = 44.0;         // [gamma]
};

// Order-of-magnitude estimates for Rb-87 (advisory; never folded into F).
ErrorBudget rb87_error_budget(const SystemParams& params, double delta_g = 1000.0, double delta_23 = 44.0);

}  // namespace herald
