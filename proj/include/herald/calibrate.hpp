#pragma once

#include <string>
#include <vector>

#include "herald/params.hpp"

namespace herald {

enum class RateSource { EffectiveClosedForm, SectorLiouvillian };
// Cz: Gamma_0 = Gamma_1 = Gamma_2 in (Delta_E, Delta_e).
// Toffoli: Gamma_0 = Gamma_1 in Delta_E at the given Delta_e.
enum class RateMode { Cz, Toffoli };

struct CalibrationResult {
    double delta_E = 0.0;  // [gamma]
    double delta_e = 0.0;
    double residual = 0.0;  // (max Gamma - min Gamma) / mean Gamma
    int iterations = 0;
    std::string mode;
    // Filled by tradeoff_search; zero otherwise.
    double lambda = 0.0;
    double error = 0.0;
    double failure = 0.0;
};

struct CalibrationOptions {
    double tolerance = 0.0;       // 0: 1e-9 closed form, 1e-6 Liouvillian
    int max_iterations = 200;
    double fd_step = 1e-6;        // relative
    double liouvillian_a = 0.05;  // drive a = Omega / (gamma sqrt(C)) used for the rates
};

std::string to_string(RateSource source);
RateSource rate_source_from_string(const std::string& name);

// Heralded rates Gamma_n of the sectors the mode equalizes.
std::vector<double> sector_rates(const SystemParams& params, RateSource source, RateMode mode,
                                 double liouvillian_a = 0.05);

// Damped Newton with a forward-difference Jacobian, seeded from the CZ
// analytic detunings (Cz) or from the followed Toffoli root (Toffoli).
// Throws ConvergenceError after max_iterations, SingularParametersError on a
// singular Jacobian.
CalibrationResult equalize_rates(const SystemParams& params, RateSource source, RateMode mode = RateMode::Cz,
                                 const CalibrationOptions& options = {});

// Same, starting from (seed_E, seed_e) instead of the analytic seed.
CalibrationResult equalize_rates_from(const SystemParams& params, RateSource source, RateMode mode,
                                      double seed_E, double seed_e, const CalibrationOptions& options = {});

// Minimizes lambda (1 - F) + (1 - lambda) (1 - P) of the effective CZ gate
// over (Delta_E, Delta_e) with Nelder-Mead restarts around the analytic point.
CalibrationResult tradeoff_search(const SystemParams& params, double lambda);

struct ValidityCriterion {
    std::string name;
    double value = 0.0;
    bool pass = true;
};

struct ValidityReport {
    double threshold = 0.25;
    std::vector<ValidityCriterion> criteria;
    bool all_pass() const;
};

// Adiabaticity checks. DirectDrive: Omega/(4 Delta_E), Omega/g.
// TwoPhoton: Omega/(4 Delta_E2), Omega Omega_MW/(Delta_E2 g),
// 3 sqrt(C) gamma^2 Omega^2 / (Delta_E2^2 Omega_MW^2).
ValidityReport validity_check(const SystemParams& params, double threshold = 0.25);

}  // namespace herald
