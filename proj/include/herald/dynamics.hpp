#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "herald/dop853.hpp"
#include "herald/gate_report.hpp"
#include "herald/models.hpp"

namespace herald {

struct IntegrationOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    // Drive pulse length for a ramped envelope; ignored for a Flat drive.
    double pulse_length = 0.0;
    double trace_tolerance = 1e-8;
    double positivity_tolerance = 1e-9;
    int positivity_every = 10;  // check positivity at every k-th sample
};

// Sampled output of a master-equation run. The qubit matrices live on the
// computational subspace {|0>,|1>}^N, qubit 1 most significant.
struct TimeSeries {
    std::vector<double> times;
    std::vector<double> success;                 // P_g(t)
    std::vector<double> fidelity;                // F(t), empty until a target is applied
    std::vector<Eigen::MatrixXcd> conditional;   // <g|rho|g> traced over the cavity (unnormalized)
    std::vector<Eigen::MatrixXcd> unconditional; // traced over aux atom and cavity
    double max_trace_drift = 0.0;
    double min_eigenvalue = 0.0;
    std::size_t subspace_dim = 0;
    Dop853Stats stats;
};

// Integrates d rho/dt = -i[H(t), rho] + sum_j D[L_j] rho from t = 0 and
// samples at `sample_times`. rho0 lives on the full basis of `model`.
// Evolution runs on the smallest invariant subspace containing rho0.
TimeSeries integrate_master_equation(const ModelSplit& model, const Eigen::MatrixXcd& rho0,
                                     const std::vector<double>& sample_times,
                                     const IntegrationOptions& options = {});

// <psi|rho|psi> for the rotated target |psi> = prod_k U_k(phi_k) |target>,
// U_k(phi) = exp(i phi |1><1|_k). rho must be normalized.
double corrected_fidelity(const Eigen::MatrixXcd& rho, const Eigen::VectorXcd& target,
                          const std::vector<double>& phases);

struct PhaseOptimum {
    std::vector<double> phases;
    double fidelity = 0.0;
};

// Alternating golden-section search over the angles, restarted from
// quadrant seeds (+-pi/2 on each of the first two qubits).
PhaseOptimum optimize_phases(const Eigen::MatrixXcd& rho, const Eigen::VectorXcd& target,
                             double angle_tol = 1e-10);

Eigen::VectorXcd cz_target_state();  // (|00> + |01> + |10> - |11>) / 2

// Fills series.fidelity and returns the report at argmax F(t), refined by a
// quadratic fit through the best sample and its neighbours. Throws
// InconclusiveWindowError when the maximum is the first or last sample.
GateReport extract_gate_report(TimeSeries& series, const Eigen::VectorXcd& target);

struct SectorRate {
    double Gamma = 0.0;
    cplx eigenvalue{};
    double next_rate = 0.0;  // |Re| of the next slowest distinct mode
    std::size_t space_dim = 0;
};

// Heralded decay rate of one classical qubit configuration (e.g. "01") from
// the Liouvillian on the Hamiltonian-connected component of |g, config, 0>.
SectorRate sector_decay_rate(const SystemParams& params, const std::string& config);

struct CutoffReport {
    int cutoff = 0;
    double deviation = 0.0;  // max |delta rho_q| between cutoff and cutoff + 1
    std::size_t dim_low = 0;
    std::size_t dim_high = 0;
};

// Repeats a short integration of the |++>-input gate at two cutoffs.
CutoffReport cutoff_convergence(const SystemParams& params, double t_short = 10.0,
                                const IntegrationOptions& options = {});

struct FullSimOptions {
    IntegrationOptions integration{};
    double window = 0.2;      // relative half-width around the predicted gate time
    int window_points = 400;
    int coarse_points = 40;   // samples before the window
    int max_widenings = 2;
};

struct FullSimResult {
    GateReport report;
    TimeSeries series;
    double predicted_t_gate = 0.0;
};

// Full master-equation CZ run for N = 2, input |g>|++>|0>, target the CZ
// state. The sampling window is centred on the effective-theory gate time.
FullSimResult simulate_cz_full(const SystemParams& params, const FullSimOptions& options = {});

}  // namespace herald
