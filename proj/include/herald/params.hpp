#pragma once

#include <string>

namespace herald {

// Level scheme of the auxiliary atom.
//   DirectDrive: |g> --Omega--> |E> <--g_f--> |f>
//   TwoPhoton:   |g> --Omega--> |E2> --Omega_MW--> |E> <--g_f--> |f>
enum class Scheme { DirectDrive, TwoPhoton };

enum class RampShape { Flat, SinSquared };

struct DriveSchedule {
    RampShape shape = RampShape::Flat;
    double t_ramp = 0.0;  // [1/gamma]
};

// Physical parameters of one gate configuration. Every rate, coupling and
// detuning is expressed in the same frequency unit as `gamma` (normally
// gamma = 1); times are in 1/gamma. Only rotating-frame detunings appear.
//
// Cooperativities and the auxiliary-atom ratios alpha, beta are derived on
// demand from g, g_f, gamma, gamma_f and kappa; they are never stored.
struct SystemParams {
    Scheme scheme = Scheme::DirectDrive;
    int n_qubits = 2;

    double gamma = 1.0;    // qubit excited-state linewidth, |e> -> |o~>
    double kappa = 100.0;  // cavity linewidth
    double g = 0.0;        // qubit-cavity coupling
    double g_f = 0.0;      // auxiliary |E>-|f> cavity coupling
    double gamma_f = 1.0;  // |E> -> |f>
    double gamma_g = 0.0;  // |E> -> |g| (DirectDrive) or |E2> -> |g> (TwoPhoton)

    double omega = 0.0;     // laser drive amplitude
    double omega_mw = 0.0;  // microwave |E>-|E2> amplitude (TwoPhoton only)

    double delta_E = 0.0;
    double delta_e = 0.0;
    double delta_E2 = 0.0;  // TwoPhoton only

    int photon_cutoff = 2;
    DriveSchedule drive{};

    double cooperativity() const { return g * g / (gamma * kappa); }
    double aux_cooperativity() const { return g_f * g_f / (gamma * kappa); }
    double alpha() const { return aux_cooperativity() / cooperativity(); }
    double beta() const { return gamma_f / gamma; }

    // Throws ParameterError when an invariant is violated.
    void validate() const;
};

// Builds parameters from the dimensionless description used throughout the
// analysis: C, alpha = C_f/C, beta = gamma_f/gamma and kappa in units of
// gamma. Drive and detunings are left at zero.
SystemParams make_params(double cooperativity, double alpha = 1.0, double beta = 1.0,
                         double kappa_over_gamma = 100.0, double gamma = 1.0);

// Drive envelope u(t) in [0, 1] for a pulse of total length t_total.
// SinSquared rises as sin^2(pi t / (2 t_ramp)), holds at 1 and falls
// symmetrically over the last t_ramp.
double envelope_value(const DriveSchedule& schedule, double t, double t_total);

// Pulse length whose integrated squared envelope equals `flat_duration`.
// The accumulated AC Stark phase scales with Omega^2, so this keeps the
// phase budget of a flat pulse of length `flat_duration`.
double ramped_pulse_length(const DriveSchedule& schedule, double flat_duration);

std::string to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& name);

}  // namespace herald
