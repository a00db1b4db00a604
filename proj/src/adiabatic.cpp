#include "pnarrow/adiabatic.hpp"

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "pnarrow/errors.hpp"

namespace pnarrow {

namespace {

constexpr int kPeakScanPoints = 4000;
constexpr int kBorderScanPoints = 300;
constexpr double kBorderLow = 1e-6;
constexpr double kBorderHigh = 1e3;

void require_detuning(double detuning) {
    if (!std::isfinite(detuning)) {
        throw InvalidArgument("detuning must be finite");
    }
    if (detuning == 0.0) {
        throw SingularConfiguration("mixing angle is undefined at zero detuning");
    }
}

// |d theta/dt| up to the constant factor |Delta| / 2.
double coupling_profile(const PulseSpec& spec, double detuning, double t) {
    const double omega = spec.rabi(t);
    return std::abs(spec.rabi_derivative(t)) / (omega * omega + detuning * detuning);
}

}  // namespace

double eigensplitting(double rabi, double detuning) { return std::hypot(rabi, detuning); }

double mixing_angle_rate(const PulseSpec& spec, double detuning, double t) {
    require_detuning(detuning);
    if (!std::isfinite(t) || std::abs(t) > spec.half_duration()) {
        throw InvalidArgument("time lies outside the pulse support");
    }
    const double omega = spec.rabi(t);
    return spec.rabi_derivative(t) * detuning / (2.0 * (omega * omega + detuning * detuning));
}

double nonadiabatic_peak_time(const PulseSpec& spec, double detuning) {
    require_detuning(detuning);
    if (!(spec.peak_rabi() > 0.0)) {
        throw InvalidArgument("peak Rabi frequency must be positive");
    }
    if (spec.shape().kind() == ShapeKind::Rectangular) {
        throw UnsupportedShape("rectangular pulse has no interior nonadiabatic coupling");
    }
    const double width = spec.width();
    const double t_c = spec.half_duration();
    if (t_c == 0.0) return 0.0;

    // Scan on t = T sinh(s) so that the core and far tails are both resolved.
    const double s_edge = std::asinh(t_c / width);
    const auto time_at = [&](int i) {
        return i == kPeakScanPoints ? t_c : width * std::sinh(s_edge * i / kPeakScanPoints);
    };
    int best = 0;
    double best_value = -1.0;
    for (int i = 0; i <= kPeakScanPoints; ++i) {
        const double v = coupling_profile(spec, detuning, time_at(i));
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    if (best == kPeakScanPoints) return t_c;

    const double lo = time_at(std::max(best - 1, 0));
    const double hi = time_at(best + 1);
    const auto negated = [&](double t) { return -coupling_profile(spec, detuning, t); };
    const auto [t_m, value] = boost::math::tools::brent_find_minima(negated, lo, hi, 40);
    (void)value;
    if (t_c - t_m <= 1e-9 * width) return t_c;
    return t_m;
}

double border_residual(const PulseSpec& spec, double detuning) {
    const double t_m = nonadiabatic_peak_time(spec, detuning);
    const double omega = spec.rabi(t_m);
    const double lhs = eigensplitting(omega, detuning);
    const double rhs = std::abs(detuning * spec.rabi_derivative(t_m)) / (omega * omega + detuning * detuning);
    return lhs - rhs;
}

AdiabaticDiagnostics adiabatic_diagnostics(const PulseSpec& spec) {
    if (!(spec.peak_rabi() > 0.0)) {
        throw InvalidArgument("peak Rabi frequency must be positive");
    }
    const double width = spec.width();
    const double low = kBorderLow / width;
    const double high = kBorderHigh / width;
    if (spec.shape().kind() == ShapeKind::Rectangular) {
        // dOmega/dt vanishes inside the support: the condition never fails.
        throw NoRoot("rectangular envelope has zero nonadiabatic coupling", eigensplitting(spec.peak_rabi(), low),
                     eigensplitting(spec.peak_rabi(), high));
    }

    std::vector<double> detunings(kBorderScanPoints + 1);
    std::vector<double> residuals(kBorderScanPoints + 1);
    const double log_low = std::log(low);
    const double log_step = (std::log(high) - log_low) / kBorderScanPoints;
    for (int i = 0; i <= kBorderScanPoints; ++i) {
        detunings[i] = std::exp(log_low + log_step * i);
        residuals[i] = border_residual(spec, detunings[i]);
    }
    if (residuals.back() <= 0.0) {
        throw NoRoot("adiabatic condition still violated at the top of the detuning bracket",
                     residuals.front(), residuals.back());
    }

    AdiabaticDiagnostics out;
    int violated = -1;
    for (int i = kBorderScanPoints; i >= 0; --i) {
        if (residuals[i] < 0.0) {
            violated = i;
            break;
        }
    }
    if (violated < 0) {
        return out;
    }

    double lo = detunings[violated];
    double hi = detunings[violated + 1];
    while (hi / lo - 1.0 > 1e-10) {
        const double mid = std::sqrt(lo * hi);
        if (border_residual(spec, mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double border = std::sqrt(lo * hi);
    out.border_detuning = border;
    out.t_m = nonadiabatic_peak_time(spec, border);
    out.epsilon_at_tm = eigensplitting(spec.rabi(out.t_m), border);
    out.theta_dot_max = std::abs(mixing_angle_rate(spec, border, out.t_m));
    out.relative_residual = std::abs(border_residual(spec, border)) / out.epsilon_at_tm;
    return out;
}

double border_detuning(const PulseSpec& spec) { return adiabatic_diagnostics(spec).border_detuning; }

double predicted_exponent(double n) {
    if (!std::isfinite(n) || n <= 0.5) {
        throw InvalidArgument("Lorentzian power must exceed 1/2, got " + std::to_string(n));
    }
    return 1.0 / (2.0 * n - 1.0);
}

double truncation_artifact(double edge_rabi, double detuning, double p_ideal) {
    if (!(p_ideal >= 0.0 && p_ideal <= 1.0)) {
        throw InvalidArgument("ideal probability must lie in [0, 1]");
    }
    const double w2 = edge_rabi * edge_rabi;
    const double denom = w2 + detuning * detuning;
    if (denom == 0.0) return 0.0;
    return w2 / denom * (1.0 - p_ideal);
}

}  // namespace pnarrow
