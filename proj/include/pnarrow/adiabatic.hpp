#pragma once

// Adiabatic-evolution estimates of the line width: eigenenergy splitting,
// nonadiabatic coupling, the border detuning where adiabaticity sets in, the
// power-law exponent for Lorentzian-power tails and the truncation artifact.
//
// Only exponents and unscaled border detunings are exposed. The
// proportionality between the border detuning and the line width is unknown,
// so absolute widths are never predicted here.

#include "pnarrow/pulse.hpp"

namespace pnarrow {

struct AdiabaticDiagnostics {
    double t_m = 0.0;               ///< time of maximal |d theta/dt| (ns), in [0, t_c]
    double theta_dot_max = 0.0;     ///< |d theta/dt| at t_m (rad/ns)
    double epsilon_at_tm = 0.0;     ///< eigensplitting at t_m (rad/ns)
    double border_detuning = 0.0;   ///< Delta_b (rad/ns), >= 0
    /// |lhs - rhs| / lhs of the border equation at Delta_b.
    double relative_residual = 0.0;
};

/// sqrt(Omega^2 + Delta^2).
double eigensplitting(double rabi, double detuning);

/// d theta/dt with theta = 1/2 arctan(Omega/Delta).
/// Throws SingularConfiguration for Delta = 0.
double mixing_angle_rate(const PulseSpec& spec, double detuning, double t);

/// argmax of |d theta/dt| over [0, t_c]; returns t_c when the maximum sits on the edge.
double nonadiabatic_peak_time(const PulseSpec& spec, double detuning);

/// lhs - rhs of the border condition
///     sqrt(Omega(t_m)^2 + Delta^2) = |Delta dOmega/dt(t_m)| / (Omega(t_m)^2 + Delta^2)
/// with t_m evaluated at this Delta. Negative where adiabaticity is violated.
double border_residual(const PulseSpec& spec, double detuning);

/// Outermost positive detuning solving the border condition.
///
/// Scans log(Delta) over [1e-6, 1e3] / T, then bisects the outermost sign
/// change to relative tolerance 1e-8. Returns 0 if the condition holds at
/// every scanned detuning. Throws NoRoot if it fails at the upper end of the
/// bracket or the envelope is flat (rectangular).
double border_detuning(const PulseSpec& spec);

AdiabaticDiagnostics adiabatic_diagnostics(const PulseSpec& spec);

/// nu = 1 / (2n - 1) for a Lorentzian power n > 1/2.
double predicted_exponent(double n);

/// Cut-off artifact P_c = Omega_c^2 / (Omega_c^2 + Delta^2) * (1 - p_ideal).
double truncation_artifact(double edge_rabi, double detuning, double p_ideal);

}  // namespace pnarrow
