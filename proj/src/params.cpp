#include "herald/params.hpp"

#include <cmath>
#include <numbers>

#include "herald/error.hpp"

namespace herald {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw ParameterError(std::string("SystemParams: ") + what);
}

}  // namespace

void SystemParams::validate() const {
    require(n_qubits >= 1, "n_qubits must be >= 1");
    require(photon_cutoff >= 1, "photon_cutoff must be >= 1");
    require(std::isfinite(gamma) && gamma > 0.0, "gamma must be > 0");
    require(std::isfinite(kappa) && kappa > 0.0, "kappa must be > 0");
    require(std::isfinite(gamma_f) && gamma_f > 0.0, "gamma_f must be > 0");
    require(std::isfinite(gamma_g) && gamma_g >= 0.0, "gamma_g must be >= 0");
    require(std::isfinite(g) && g >= 0.0, "g must be finite and >= 0");
    require(std::isfinite(g_f) && g_f >= 0.0, "g_f must be finite and >= 0");
    require(std::isfinite(omega) && omega >= 0.0, "omega must be finite and >= 0");
    require(std::isfinite(delta_E) && std::isfinite(delta_e), "detunings must be finite");
    require(std::isfinite(drive.t_ramp) && drive.t_ramp >= 0.0, "t_ramp must be >= 0");
    if (scheme == Scheme::TwoPhoton) {
        require(std::isfinite(omega_mw) && omega_mw > 0.0, "TwoPhoton scheme needs omega_mw > 0");
        require(std::isfinite(delta_E2), "TwoPhoton scheme needs a finite delta_E2");
    } else {
        require(omega_mw == 0.0, "omega_mw is only meaningful for the TwoPhoton scheme");
        require(delta_E2 == 0.0, "delta_E2 is only meaningful for the TwoPhoton scheme");
    }
}

SystemParams make_params(double cooperativity, double alpha, double beta, double kappa_over_gamma,
                         double gamma) {
    if (!(cooperativity > 0.0) || !(alpha > 0.0) || !(beta > 0.0) || !(kappa_over_gamma > 0.0) ||
        !(gamma > 0.0)) {
        throw ParameterError("make_params: C, alpha, beta, kappa/gamma and gamma must be > 0");
    }
    SystemParams p;
    p.gamma = gamma;
    p.kappa = kappa_over_gamma * gamma;
    p.g = std::sqrt(cooperativity * gamma * p.kappa);
    p.g_f = std::sqrt(alpha * cooperativity * gamma * p.kappa);
    p.gamma_f = beta * gamma;
    return p;
}

double envelope_value(const DriveSchedule& schedule, double t, double t_total) {
    if (schedule.t_ramp < 0.0) throw ParameterError("envelope_value: t_ramp must be >= 0");
    if (t_total < 2.0 * schedule.t_ramp) {
        throw ParameterError("envelope_value: pulse shorter than its two ramps");
    }
    if (t < 0.0 || t > t_total) throw ParameterError("envelope_value: t outside [0, t_total]");
    if (schedule.shape == RampShape::Flat || schedule.t_ramp == 0.0) return 1.0;

    const double half_pi = 0.5 * std::numbers::pi;
    if (t < schedule.t_ramp) {
        const double s = std::sin(half_pi * t / schedule.t_ramp);
        return s * s;
    }
    if (t > t_total - schedule.t_ramp) {
        const double s = std::sin(half_pi * (t_total - t) / schedule.t_ramp);
        return s * s;
    }
    return 1.0;
}

double ramped_pulse_length(const DriveSchedule& schedule, double flat_duration) {
    if (schedule.shape == RampShape::Flat || schedule.t_ramp == 0.0) return flat_duration;
    // Each sin^2 ramp contributes int sin^4 = 3/8 t_ramp to the integral of u^2.
    const double total = flat_duration + 1.25 * schedule.t_ramp;
    if (total < 2.0 * schedule.t_ramp) {
        throw ParameterError("ramped_pulse_length: ramps longer than the gate");
    }
    return total;
}

std::string to_string(Scheme scheme) {
    return scheme == Scheme::DirectDrive ? "direct" : "two-photon";
}

Scheme scheme_from_string(const std::string& name) {
    if (name == "direct" || name == "A" || name == "a") return Scheme::DirectDrive;
    if (name == "two-photon" || name == "B" || name == "b") return Scheme::TwoPhoton;
    throw ParameterError("unknown scheme '" + name + "' (expected direct|two-photon)");
}

}  // namespace herald
