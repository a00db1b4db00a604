#include "pnarrow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <utility>

#include "pnarrow/adiabatic.hpp"
#include "pnarrow/dynamics.hpp"
#include "pnarrow/io.hpp"
#include "pnarrow/pulse.hpp"
#include "pnarrow/spectro.hpp"
#include "pnarrow/units.hpp"

namespace pnarrow {

namespace {

constexpr double pi = std::numbers::pi;

using Outcome = std::pair<bool, std::string>;

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
    char buffer[160];
    std::snprintf(buffer, sizeof buffer, format, a, b, c);
    return buffer;
}

std::vector<Shape> smooth_shapes() {
    return {Shape::lorentzian_power(0.6), Shape::lorentzian_power(1.0), Shape::lorentzian_power(2.0),
            Shape::sech(), Shape::gaussian()};
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

// ---- pulse ---------------------------------------------------------------

Outcome shape_examples() {
    const double a = shape_value(Shape::lorentzian_power(1), 1, 0);
    const double b = shape_value(Shape::lorentzian_power(1), 1, 1);
    const double c = shape_value(Shape::lorentzian_power(2), 1, 1);
    const double d = shape_value(Shape::sech(), 1, 0);
    const double e = shape_derivative(Shape::lorentzian_power(1), 1, 1);
    const double g = shape_derivative(Shape::gaussian(), 2, 2);
    const bool ok = a == 1.0 && std::abs(b - 0.5) < 1e-15 && std::abs(c - 0.25) < 1e-15 && d == 1.0 &&
                    std::abs(e + 0.5) < 1e-14 && std::abs(g + 0.5 * std::exp(-0.5)) < 1e-14;
    return {ok, fmt("f(L1,1)=%.15g f(L2,1)=%.15g f'(G,2)=%.8g", b, c, g)};
}

Outcome shape_evenness() {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> t_dist(-10.0, 10.0), w_dist(0.5, 3.0);
    auto shapes = smooth_shapes();
    shapes.push_back(Shape::rectangular());
    std::size_t bad = 0;
    for (const auto& s : shapes) {
        for (int i = 0; i < 200; ++i) {
            const double t = t_dist(rng), w = w_dist(rng);
            if (shape_value(s, w, t) != shape_value(s, w, -t)) ++bad;
            if (s.kind() != ShapeKind::Rectangular &&
                shape_derivative(s, w, t) != -shape_derivative(s, w, -t)) ++bad;
        }
    }
    return {bad == 0, std::to_string(bad) + " asymmetric evaluations"};
}

Outcome lorentzian_tails() {
    std::size_t bad = 0;
    for (const double n : {0.55, 1.0, 2.0, 5.0}) {
        const auto s = Shape::lorentzian_power(n);
        double prev = shape_value(s, 1.0, 0.0);
        for (int i = 1; i <= 2000; ++i) {
            const double v = shape_value(s, 1.0, 0.01 * i * i / 10.0);
            if (!(v < prev)) ++bad;
            prev = v;
        }
    }
    return {bad == 0, std::to_string(bad) + " non-decreasing steps"};
}

Outcome cut_consistency() {
    double worst = 0.0;
    for (const auto& s : smooth_shapes()) {
        for (const double cut : {0.5, 0.1, 1e-3, 1e-6}) {
            const double t_c = cutoff_time(s, 1.7, cut);
            worst = std::max(worst, std::abs(shape_value(s, 1.7, t_c) / cut - 1.0));
        }
    }
    return {worst <= 1e-10, fmt("max rel error %.3e", worst)};
}

Outcome area_monotone_in_cut() {
    std::size_t bad = 0;
    for (const auto& s : smooth_shapes()) {
        double prev = 0.0;
        for (const double cut : {0.9, 0.5, 0.1, 1e-2, 1e-3, 1e-5, 1e-8}) {
            const double a = pulse_area(PulseSpec(s, 1.0, 1.0, cut));
            if (a < prev) ++bad;
            prev = a;
        }
    }
    return {bad == 0, std::to_string(bad) + " decreases"};
}

Outcome derivative_finite_difference() {
    std::mt19937_64 rng(5);
    double worst = 0.0;
    for (const auto& s : smooth_shapes()) {
        const double w = 1.3;
        std::uniform_real_distribution<double> t_dist(-6.0 * w, 6.0 * w);
        for (int i = 0; i < 100; ++i) {
            const double t = t_dist(rng);
            const double h = 1e-6 * w;
            const double fd = (shape_value(s, w, t + h) - shape_value(s, w, t - h)) / (2.0 * h);
            const double err = std::abs(shape_derivative(s, w, t) - fd) / (std::abs(fd) + 1e-4);
            worst = std::max(worst, err);
        }
    }
    return {worst <= 1e-5, fmt("max rel deviation %.3e", worst)};
}

Outcome area_examples() {
    const double rect = pulse_area(PulseSpec(Shape::rectangular(), 1.0, pi / 2, 1.0));
    const double wide = pulse_area(PulseSpec(Shape::lorentzian_power(1), 1.0, 1.0, 1e-9));
    const double half = pulse_area(PulseSpec(Shape::lorentzian_power(1), 1.0, 1.0, 0.5));
    const bool ok = std::abs(rect - pi) < 1e-12 && std::abs(wide - pi) < 1e-4 && std::abs(half - pi / 2) < 1e-10 * pi;
    return {ok, fmt("rect %.12g, L1(1e-9) %.8g, L1(0.5) %.12g", rect, wide, half)};
}

Outcome area_round_trip() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> n_dist(0.55, 3.0), w_dist(0.5, 30.0), lc(-9.0, -0.1), a_dist(0.1, 30.0);
    std::uniform_int_distribution<int> kind(0, 3);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const Shape shapes[] = {Shape::lorentzian_power(n_dist(rng)), Shape::sech(), Shape::gaussian(),
                                Shape::rectangular()};
        const Shape s = shapes[kind(rng)];
        const double w = w_dist(rng), cut = std::pow(10.0, lc(rng)), a = a_dist(rng);
        const double rabi = amplitude_for_area(s, w, cut, a);
        worst = std::max(worst, std::abs(pulse_area(PulseSpec(s, w, rabi, cut)) / a - 1.0));
    }
    return {worst <= 1e-9, fmt("max rel error %.3e", worst)};
}

Outcome sampling_examples() {
    const auto rect = sample(PulseSpec(Shape::rectangular(), 1.0, 1.0, 1.0), {0.5});
    bool ok = rect.samples.size() == 4 &&
              std::all_of(rect.samples.begin(), rect.samples.end(), [](double v) { return v == 1.0; });
    SampleOptions hw;
    hw.granularity = kHardwareGranularity;
    const auto lor = sample(PulseSpec(Shape::lorentzian_power(1), 21.33, 1.0, 0.005), hw);
    ok = ok && lor.samples.size() == 2704 && std::abs(lor.duration() - 600.89) < 0.01;
    return {ok, fmt("rect count %.0f, L1 eps=0.005 count %.0f duration %.4f ns", double(rect.samples.size()),
                    double(lor.samples.size()), lor.duration())};
}

Outcome sampling_order() {
    // Support of 8 T: every dt below tiles it exactly, leaving only the hold error.
    const PulseSpec spec(Shape::gaussian(), 1.0, 1.0, 1e-3, 8.0);
    const double exact = pulse_area(spec);
    std::vector<double> errors;
    for (const double dt : {0.2, 0.1, 0.05}) errors.push_back(std::abs(sample(spec, {dt}).area() - exact));
    const double r1 = errors[0] / errors[1], r2 = errors[1] / errors[2];
    const bool ok = std::abs(r1 / 4.0 - 1.0) < 0.1 && std::abs(r2 / 4.0 - 1.0) < 0.1;
    return {ok, fmt("error ratios %.4f %.4f", r1, r2)};
}

// ---- dynamics ------------------------------------------------------------

Outcome oracle_examples() {
    const bool ok = std::abs(rabi_rect_oracle(pi, 0, 1) - 1) < 1e-15 &&
                    std::abs(rabi_rect_oracle(1, 1, pi / std::sqrt(2.0)) - 0.5) < 1e-15 &&
                    rabi_rect_oracle(0, 5, 7) == 0.0 && std::abs(rosen_zener_oracle(1, 1, 0) - 1) < 1e-15 &&
                    std::abs(rosen_zener_oracle(1, 1, 1) - std::pow(1.0 / std::cosh(pi / 2), 2)) < 1e-15 &&
                    rosen_zener_oracle(2, 1, 0.3) < 1e-30;
    return {ok, fmt("RZ(1,1,1)=%.6f", rosen_zener_oracle(1, 1, 1))};
}

Outcome rect_examples() {
    const double p_pi = propagate(PulseSpec(Shape::rectangular(), 0.5, pi, 1.0), 0.0).p_excite;
    const double omega = 1.0, duration = pi / (std::sqrt(2.0) * omega);
    const double p_half = propagate(PulseSpec(Shape::rectangular(), duration / 2, omega, 1.0), omega).p_excite;
    const bool ok = std::abs(p_pi - 1.0) < 1e-10 && std::abs(p_half - 0.5) < 1e-10;
    return {ok, fmt("pi pulse %.12f, off-resonant %.12f", p_pi, p_half)};
}

Outcome rect_oracle_grid() {
    const double width = 1.0;
    const double duration = 2.0 * width;
    const double max_rabi = 9.0 * pi / duration;
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double rabi = max_rabi * i / 19.0;
        Propagator prop(PulseSpec(Shape::rectangular(), width, rabi, 1.0));
        for (int j = 0; j < 20; ++j) {
            const double delta = (-5.0 + 10.0 * j / 19.0) / width;
            worst = std::max(worst, std::abs(prop(delta).p_excite - rabi_rect_oracle(rabi, delta, duration)));
        }
    }
    return {worst <= 1e-10, fmt("max deviation %.3e", worst)};
}

Outcome rosen_zener_grid(const SweepOptions& options) {
    const auto detunings = linspace(-3.0, 3.0, 61);
    double worst = 0.0;
    for (const double area : {1.0, 3.0, 7.0}) {
        const double rabi = area / pi;  // untruncated sech area is pi Omega_0 T
        const auto profile = spectral_profile(PulseSpec(Shape::sech(), 1.0, rabi, 1e-6), detunings, options);
        for (std::size_t k = 0; k < detunings.size(); ++k) {
            worst = std::max(worst, std::abs(profile.probabilities[k] - rosen_zener_oracle(rabi, 1.0, detunings[k])));
        }
    }
    const double single = propagate(PulseSpec(Shape::sech(), 1.0, 1.0, 1e-6), 1.0).p_excite;
    const bool ok = worst <= 1e-4 && std::abs(single - 0.15883) < 1e-4;
    return {ok, fmt("max deviation %.3e, area-pi at DT=1: %.6f", worst, single)};
}

Outcome unitarity_symmetry() {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> w_dist(0.5, 5.0), a_dist(0.1, 9.0 * pi), d_dist(-4.0, 4.0), lc(-6.0, -0.5);
    std::uniform_int_distribution<int> kind(0, 4);
    double norm_err = 0.0, sym_err = 0.0;
    for (int i = 0; i < 200; ++i) {
        const Shape shapes[] = {Shape::lorentzian_power(1), Shape::lorentzian_power(0.75), Shape::sech(),
                                Shape::gaussian(), Shape::rectangular()};
        const Shape s = shapes[kind(rng)];
        const double w = w_dist(rng), cut = std::pow(10.0, lc(rng));
        const PulseSpec spec(s, w, amplitude_for_area(s, w, cut, a_dist(rng)), cut);
        const double delta = d_dist(rng) / w;
        Propagator prop(spec);
        const auto plus = prop(delta);
        const auto minus = prop(-delta);
        norm_err = std::max(norm_err, std::abs(plus.final_state.norm() - 1.0));
        sym_err = std::max(sym_err, std::abs(plus.p_excite - minus.p_excite));
    }
    return {norm_err <= 1e-10 && sym_err <= 1e-10, fmt("norm error %.3e, asymmetry %.3e", norm_err, sym_err)};
}

Outcome area_theorem() {
    double worst = 0.0;
    auto shapes = smooth_shapes();
    shapes.push_back(Shape::rectangular());
    for (const auto& s : shapes) {
        for (const double area : {0.5, pi, 2.5 * pi, 7.0 * pi}) {
            const PulseSpec spec(s, 1.0, amplitude_for_area(s, 1.0, 1e-3, area), 1e-3);
            const double expected = std::pow(std::sin(pulse_area(spec) / 2.0), 2);
            worst = std::max(worst, std::abs(propagate(spec, 0.0).p_excite - expected));
        }
    }
    return {worst <= 1e-8, fmt("max deviation %.3e", worst)};
}

Outcome convergence_rates() {
    const double rect = convergence_probe(PulseSpec(Shape::rectangular(), 1.0, 2.3, 1.0), 0.7, 0.1);
    const auto g = Shape::gaussian();
    const PulseSpec spec(g, 1.0, amplitude_for_area(g, 1.0, 1e-3, 3 * pi), 1e-3);
    const double r = convergence_probe(spec, 1.3, 0.05) / convergence_probe(spec, 1.3, 0.025);
    std::vector<double> lor;
    const PulseSpec lspec(Shape::lorentzian_power(1), 1.0, 3.0, 1e-3);
    for (const double dt : {0.1, 0.05, 0.025, 0.0125}) lor.push_back(convergence_probe(lspec, 0.8, dt));
    const bool monotone = std::is_sorted(lor.rbegin(), lor.rend());
    const bool ok = rect < 1e-13 && std::abs(r - 4.0) < 0.4 && monotone;
    return {ok, fmt("rect %.2e, gaussian halving ratio %.4f, lorentzian estimates decreasing: %.0f", rect, r, monotone)};
}

Outcome shot_noise() {
    const double a = shot_average(0.3, 1024, 42), b = shot_average(0.3, 1024, 42);
    const double ends = shot_average(0.0, 1024, 1) + (1.0 - shot_average(1.0, 1024, 1));
    const bool ok = a == b && std::abs(a - 0.3) < 5 * std::sqrt(0.3 * 0.7 / 1024) && ends == 0.0;
    return {ok, fmt("mean of 1024 shots at p=0.3: %.5f", a)};
}

// ---- adiabatic -----------------------------------------------------------

Outcome eigensplitting_bounds() {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> d(-10.0, 10.0);
    bool ok = eigensplitting(3, 4) == 5 && eigensplitting(0, -2.5) == 2.5 && eigensplitting(1.5, 0) == 1.5;
    for (int i = 0; i < 1000; ++i) {
        const double a = d(rng), b = d(rng), e = eigensplitting(a, b);
        ok = ok && e >= std::max(std::abs(a), std::abs(b)) && e <= std::abs(a) + std::abs(b);
    }
    return {ok, "examples and bounds on 1000 random pairs"};
}

Outcome mixing_rate() {
    const auto s = Shape::lorentzian_power(1);
    const PulseSpec spec(s, 1.0, 1.0, 1e-3);
    const double v = mixing_angle_rate(spec, 1.0, 1.0);
    const double h = 1e-6;
    const auto theta = [&](double t) { return 0.5 * std::atan(spec.rabi(t) / 1.0); };
    const double fd = (theta(1.0 + h) - theta(1.0 - h)) / (2 * h);
    bool ok = std::abs(v + 0.2) < 1e-14 && std::abs(v - fd) < 1e-8 && mixing_angle_rate(spec, 1.0, 0.0) == 0.0 &&
              mixing_angle_rate(PulseSpec(s, 1.0, 0.0, 1e-3), 1.0, 1.0) == 0.0;
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> t(-1.0, 1.0), dd(0.01, 5.0);
    for (const auto& shape : smooth_shapes()) {
        const PulseSpec p(shape, 1.0, 2.0, 1e-6);
        for (int i = 0; i < 100; ++i) {
            const double x = t(rng) * p.half_duration(), delta = dd(rng);
            const double r = mixing_angle_rate(p, delta, x);
            ok = ok && r == -mixing_angle_rate(p, delta, -x) &&
                 std::abs(r) <= std::abs(p.rabi_derivative(x)) / (2.0 * delta) * (1 + 1e-12);
        }
    }
    return {ok, fmt("rate at (L1, t=1) %.15g, finite difference %.12g", v, fd)};
}

Outcome peak_time() {
    const double lor = nonadiabatic_peak_time(PulseSpec(Shape::lorentzian_power(1), 1.0, 1e-4, 1e-6), 1.0);
    const double gau = nonadiabatic_peak_time(PulseSpec(Shape::gaussian(), 1.0, 1e-4, 1e-6), 1.0);
    const PulseSpec short_pulse(Shape::lorentzian_power(1), 1.0, 1.0, 0.9);
    const double edge = nonadiabatic_peak_time(short_pulse, 1.0);
    const bool ok = std::abs(lor - 1.0 / std::sqrt(3.0)) < 1e-6 && std::abs(gau - 1.0) < 1e-6 &&
                    edge == short_pulse.half_duration();
    return {ok, fmt("L1 %.9f (1/sqrt3 = 0.577350269), gaussian %.9f, truncated %.6f", lor, gau, edge)};
}

Outcome border_scaling() {
    const auto border = [](double n, double rabi) {
        return adiabatic_diagnostics(PulseSpec(Shape::lorentzian_power(n), 1.0, rabi, 1e-6));
    };
    const auto a = border(1.0, 20.0), b = border(1.0, 40.0);
    const double halving = a.border_detuning / b.border_detuning;
    const auto c = border(0.75, 4.0), d = border(0.75, 40.0);
    const double slope = std::log(d.border_detuning / c.border_detuning) / std::log(10.0);
    double residual = std::max({a.relative_residual, b.relative_residual, c.relative_residual, d.relative_residual});
    bool decreasing = true;
    double prev = std::numeric_limits<double>::infinity();
    for (const double rabi : {5.0, 10.0, 20.0, 40.0, 80.0, 160.0}) {
        const auto diag = border(1.0, rabi);
        residual = std::max(residual, diag.relative_residual);
        decreasing = decreasing && diag.border_detuning < prev;
        prev = diag.border_detuning;
    }
    const bool ok = std::abs(halving - 2.0) < 0.2 && std::abs(slope + 2.0) < 0.1 && residual < 1e-6 && decreasing;
    return {ok, fmt("n=1 ratio %.4f, n=3/4 slope %.4f, worst residual %.2e", halving, slope, residual)};
}

Outcome exponents() {
    const bool ok = std::abs(predicted_exponent(2) - 1.0 / 3) < 1e-15 && predicted_exponent(1) == 1.0 &&
                    std::abs(predicted_exponent(0.6) - 5.0) < 1e-12 && std::abs(predicted_exponent(0.75) - 2) < 1e-15;
    return {ok, "nu = 1/3, 1, 2, 5 for n = 2, 1, 3/4, 3/5"};
}

Outcome artifact_law() {
    bool ok = truncation_artifact(0.3, 0.0, 1.0) == 0.0 && truncation_artifact(0.7, 0.7, 0.0) == 0.5;
    double prev = 2.0;
    for (int i = 0; i <= 100; ++i) {
        const double v = truncation_artifact(0.1, 0.05 * i, 0.2);
        ok = ok && v < prev;
        prev = v;
    }
    const double d1 = 1e4, d2 = 1e5;
    const double slope = std::log(truncation_artifact(1.0, d2, 0) / truncation_artifact(1.0, d1, 0)) / std::log(d2 / d1);
    ok = ok && std::abs(slope + 2.0) < 1e-6;
    return {ok, fmt("far-wing slope %.9f", slope)};
}

// ---- spectro -------------------------------------------------------------

Outcome fwhm_triangle() {
    const auto x = linspace(-3.0, 3.0, 61);
    std::vector<double> y;
    for (const double v : x) y.push_back(std::max(0.0, 1.0 - std::abs(v) / 1.5));
    const auto r = fwhm(x, y);
    return {std::abs(r.fwhm - 1.5) < 1e-12, fmt("fwhm %.15g (expected 1.5)", r.fwhm)};
}

Outcome sech_no_broadening(const SweepOptions& options) {
    const double expected = 4.0 / pi * std::acosh(std::sqrt(2.0));
    std::vector<double> widths;
    for (const double area : {1.0, 3.0, 5.0, 7.0}) {
        const auto s = Shape::sech();
        const PulseSpec spec(s, 1.0, amplitude_for_area(s, 1.0, 1e-6, area * pi), 1e-6);
        widths.push_back(resolve_fwhm(spec, options).fwhm);
    }
    const auto [lo, hi] = std::minmax_element(widths.begin(), widths.end());
    const bool ok = std::abs(widths[0] / expected - 1.0) < 1e-3 && *hi / *lo - 1.0 < 0.01;
    return {ok, fmt("area-pi %.6f (closed form %.6f), spread %.3e", widths[0], expected, *hi / *lo - 1.0)};
}

// The central lobe at odd areas widens as sqrt(Omega_0); the linear law belongs to
// the Omega_0^2 / (Omega_0^2 + Delta^2) envelope.
Outcome rect_broadening(const SweepOptions& options) {
    std::vector<ScalingPoint> points;
    for (const double area : {11.0, 21.0, 41.0, 61.0, 81.0, 111.0}) {
        const double rabi = area * pi / 2.0;
        points.push_back({rabi, resolve_fwhm(PulseSpec(Shape::rectangular(), 1.0, rabi, 1.0), options).fwhm});
    }
    const auto fit = fit_scaling(points);
    return {std::abs(fit.exponent + 0.5) <= 0.05, fmt("exponent %.4f, r^2 %.6f", fit.exponent, fit.r_squared)};
}

Outcome synthetic_fits() {
    std::vector<ScalingPoint> down, up;
    for (const double w : {1.0, 2.0, 4.0, 8.0}) {
        down.push_back({w, 3.0 / w});
        up.push_back({w, 3.0 * w});
    }
    const auto a = fit_scaling(down), b = fit_scaling(up);
    const bool ok = std::abs(a.exponent - 1) < 1e-12 && std::abs(a.r_squared - 1) < 1e-12 &&
                    std::abs(b.exponent + 1) < 1e-12 && a.points == 4;
    return {ok, fmt("nu %.12g and %.12g", a.exponent, b.exponent)};
}

Outcome profile_examples(const SweepOptions& options) {
    const auto detunings = linspace(-8.0, 8.0, 81);
    const double width = 1.0;
    const auto rect = spectral_profile(PulseSpec(Shape::rectangular(), width, pi / 2, 1.0), detunings, options);
    double worst = 0.0;
    for (std::size_t i = 0; i < detunings.size(); ++i) {
        worst = std::max(worst, std::abs(rect.probabilities[i] - rabi_rect_oracle(pi / 2, detunings[i], 2.0)));
    }
    const auto zero = spectral_profile(PulseSpec(Shape::gaussian(), 1.0, 0.0, 1e-3), detunings, options);
    const bool zeros = std::all_of(zero.probabilities.begin(), zero.probabilities.end(), [](double p) { return p == 0.0; });
    return {worst <= 1e-10 && zeros, fmt("rect lineshape deviation %.3e", worst)};
}

Outcome landscape_properties(unsigned workers) {
    const auto s = Shape::lorentzian_power(1);
    const double width = 1.0, cut = 0.01;
    const double top = amplitude_for_area(s, width, cut, 9.5 * pi);
    const auto rabi = linspace(top / 60.0, top, 60);
    const auto detunings = linspace(-4.0, 4.0, 41);
    SweepOptions serial;
    serial.workers = 1;
    SweepOptions parallel;
    parallel.workers = std::max(2u, workers);
    const auto a = excitation_landscape(s, width, cut, rabi, detunings, serial);
    const auto b = excitation_landscape(s, width, cut, rabi, detunings, parallel);
    const bool identical = a.probabilities == b.probabilities;

    double asym = 0.0;
    for (std::size_t r = 0; r < rabi.size(); ++r) {
        for (std::size_t c = 0; c < detunings.size(); ++c) {
            asym = std::max(asym, std::abs(a.at(r, c) - a.at(r, detunings.size() - 1 - c)));
        }
    }
    // Resonant column maxima against odd areas.
    const std::size_t centre = detunings.size() / 2;
    std::size_t misplaced = 0;
    const double step = rabi[1] - rabi[0];
    for (int k = 0; k < 5; ++k) {
        const double target = amplitude_for_area(s, width, cut, (2 * k + 1) * pi);
        const auto nearest = static_cast<std::size_t>(std::lround((target - rabi[0]) / step));
        std::size_t best = nearest;
        for (std::size_t r = nearest > 2 ? nearest - 2 : 0; r <= std::min(nearest + 2, rabi.size() - 1); ++r) {
            if (a.at(r, centre) > a.at(best, centre)) best = r;
        }
        if (std::abs(rabi[best] - target) > step) ++misplaced;
    }
    const bool ok = identical && asym <= 1e-10 && misplaced == 0;
    return {ok, fmt("worker-count identical %.0f, asymmetry %.2e, misplaced maxima %.0f", identical, asym,
                    double(misplaced))};
}

Outcome fwhm_subsampling(const SweepOptions& options) {
    const auto s = Shape::lorentzian_power(1);
    const PulseSpec spec(s, 1.0, amplitude_for_area(s, 1.0, 0.005, 3 * pi), 0.005);
    const auto fine = linspace(-3.0, 3.0, 241);
    const auto profile = spectral_profile(spec, fine, options);
    std::vector<double> x, y;
    for (std::size_t i = 0; i < fine.size(); i += 2) {
        x.push_back(fine[i]);
        y.push_back(profile.probabilities[i]);
    }
    const double a = fwhm(profile).fwhm, b = fwhm(x, y).fwhm;
    const double grid = fine[1] - fine[0];
    return {std::abs(a - b) <= 2 * grid, fmt("full %.6f, subsampled %.6f, grid %.4f", a, b, grid)};
}

Outcome slices(const SweepOptions& options) {
    const auto l1 = Shape::lorentzian_power(1);
    const double cut = 0.01;
    const auto rabi = linspace(0.05, amplitude_for_area(l1, 1.0, cut, 9 * pi), 50);
    const auto resonant = rabi_slice(l1, 1.0, cut, 0.0, rabi, options);
    double area_dev = 0.0;
    for (std::size_t i = 0; i < rabi.size(); ++i) {
        const double a = pulse_area(PulseSpec(l1, 1.0, rabi[i], cut));
        area_dev = std::max(area_dev, std::abs(resonant[i] - std::pow(std::sin(a / 2), 2)));
    }
    const auto rect = rabi_slice(Shape::rectangular(), 1.0, 1.0, 1.5, rabi, options);
    double rect_dev = 0.0;
    for (std::size_t i = 0; i < rabi.size(); ++i) {
        rect_dev = std::max(rect_dev, std::abs(rect[i] - rabi_rect_oracle(rabi[i], 1.5, 2.0)));
    }
    // Power damping for n = 3/5 at 12.5 MHz.
    const auto s = Shape::lorentzian_power(0.6);
    const double width = 5.33, cut5 = 0.005;
    const auto grid = linspace(0.0, amplitude_for_area(s, width, cut5, 9 * pi), 201);
    const auto damped = rabi_slice(s, width, cut5, mhz_to_rad_per_ns(12.5), std::span(grid).subspan(1), options);
    std::vector<double> crests;
    for (std::size_t i = 1; i + 1 < damped.size(); ++i) {
        if (damped[i] > damped[i - 1] && damped[i] >= damped[i + 1]) crests.push_back(damped[i]);
    }
    const bool decaying = crests.size() >= 2 && std::is_sorted(crests.rbegin(), crests.rend());
    const bool ok = area_dev <= 1e-8 && rect_dev <= 1e-10 && decaying;
    return {ok, fmt("area theorem %.2e, rect %.2e, n=3/5 crests decaying %.0f", area_dev, rect_dev, decaying)};
}

Outcome residual_self_difference(const SweepOptions& options) {
    const PulseSpec spec(Shape::lorentzian_power(1), 1.0, 3.0, 0.02);
    try {
        (void)truncation_residual(spec, 0.02, 1.0, 10.0, options);
    } catch (const Inconclusive&) {
        return {true, "inconclusive as required"};
    }
    return {false, "self-difference produced a fit"};
}

Outcome residual_law(const SweepOptions& options) {
    const auto s = Shape::lorentzian_power(1);
    const double width = 21.33, cut = 0.02;
    const PulseSpec spec(s, width, amplitude_for_area(s, width, cut, 9 * pi), cut);
    const double omega_c = spec.edge_rabi();
    const auto env = truncation_residual(spec, 1e-6, 10 * omega_c, 100 * omega_c, options);
    const auto env4 = truncation_residual(spec.with_peak_rabi(4 * spec.peak_rabi()), 1e-6, 40 * omega_c,
                                          400 * omega_c, options);
    const double ratio = env4.envelope_at(80 * omega_c) / env.envelope_at(80 * omega_c);
    const bool ok = std::abs(env.slope() + 2.0) <= 0.2 && std::abs(ratio / 16.0 - 1.0) <= 0.25;
    return {ok, fmt("slope %.4f, x4 amplitude raises envelope x%.3f", env.slope(), ratio)};
}

Outcome lorentzian_scaling(const SweepOptions& options) {
    const auto s = Shape::lorentzian_power(1);
    const double cut = 1e-4;
    std::vector<ScalingPoint> points;
    bool floor_ok = true;
    for (const double area : {3.0, 5.0, 7.0, 9.0, 11.0, 13.0, 15.0}) {
        const PulseSpec spec(s, 1.0, amplitude_for_area(s, 1.0, cut, area * pi), cut);
        const double w = resolve_fwhm(spec, options).fwhm;
        floor_ok = floor_ok && spec.edge_rabi() < w / 5.0;
        points.push_back({spec.peak_rabi(), w});
    }
    const auto fit = fit_scaling(points);
    const bool ok = floor_ok && std::abs(fit.exponent - 1.0) <= 0.25;
    return {ok, fmt("n=1 exponent %.4f (predicted 1), edge floor respected %.0f", fit.exponent, floor_ok)};
}

// ---- units and artifacts -------------------------------------------------

Outcome unit_boundary() {
    const double rad = mhz_to_rad_per_ns(35.0);
    const double back = rad_per_ns_to_mhz(0.2199114857512855);
    const bool ok = std::abs(rad - 0.2199114857512855) < 1e-12 && std::abs(back - 35.0) < 1e-12 &&
                    std::abs(mhz_to_rad_per_ns(-35.0) + rad) < 1e-12;
    return {ok, fmt("35 MHz = %.13f rad/ns", rad)};
}

Outcome artifact_round_trips(const SweepOptions& options) {
    const auto s = Shape::lorentzian_power(1);
    const auto rabi = linspace(0.5, 3.0, 4);
    const auto detunings = linspace(-2.0, 2.0, 9);
    const auto land = excitation_landscape(s, 1.0, 0.01, rabi, detunings, options);

    const auto csv = io::landscape_from_table(io::parse_csv(io::to_csv(io::landscape_table(land))), s, 1.0, 0.01);
    double csv_err = 0.0;
    for (std::size_t i = 0; i < land.probabilities.size(); ++i) {
        csv_err = std::max(csv_err, std::abs(csv.probabilities[i] - land.probabilities[i]));
    }
    const bool axes = csv.rabi_amplitudes.size() == rabi.size() && csv.detunings.size() == detunings.size();
    const auto json = io::landscape_from_json(io::Json::parse(io::to_json(land).dump()));
    double json_err = 0.0;
    for (std::size_t i = 0; i < land.detunings.size(); ++i) {
        json_err = std::max(json_err, std::abs(json.detunings[i] - land.detunings[i]));
    }
    const bool exact = json.probabilities == land.probabilities;
    const bool ok = axes && csv_err <= 5e-9 && json_err <= 1e-15 && exact;
    return {ok, fmt("CSV max deviation %.2e, JSON axis deviation %.2e", csv_err, json_err)};
}

Outcome export_round_trip() {
    const auto s = Shape::lorentzian_power(1);
    const double width = 21.33, cut = 0.005;
    double worst = 0.0;
    for (const double area : {1.0, 3.0, 7.0}) {
        const PulseSpec spec(s, width, amplitude_for_area(s, width, cut, area * pi), cut);
        const auto doc = io::Json::parse(io::export_document(spec, sample(spec), spec.peak_rabi()).dump());
        const auto pulse = io::samples_from_document(doc);
        PropagationOptions hw;
        hw.hardware_mode = true;
        for (const double mhz : {0.0, 5.0, 12.5, 25.0}) {
            const double delta = mhz_to_rad_per_ns(mhz);
            worst = std::max(worst, std::abs(propagate_samples(pulse, delta).p_excite - propagate(spec, delta).p_excite));
        }
    }
    return {worst <= 1e-3, fmt("max deviation %.3e", worst)};
}

}  // namespace

std::vector<Check> run_verification(unsigned workers, const std::function<void(const Check&)>& on_check) {
    SweepOptions options;
    options.workers = workers;
    const std::vector<std::pair<std::string, std::function<Outcome()>>> checks{
        {"pulse: shape values and derivatives", shape_examples},
        {"pulse: evenness", shape_evenness},
        {"pulse: lorentzian tails decrease", lorentzian_tails},
        {"pulse: cutoff consistency", cut_consistency},
        {"pulse: area grows as cutoff drops", area_monotone_in_cut},
        {"pulse: derivative vs finite difference", derivative_finite_difference},
        {"pulse: area examples", area_examples},
        {"pulse: amplitude/area round trip", area_round_trip},
        {"pulse: sampling examples", sampling_examples},
        {"pulse: hold error is second order", sampling_order},
        {"dynamics: oracle values", oracle_examples},
        {"dynamics: rectangular examples", rect_examples},
        {"dynamics: rectangular oracle grid", rect_oracle_grid},
        {"dynamics: sech vs Rosen-Zener", [&] { return rosen_zener_grid(options); }},
        {"dynamics: unitarity and symmetry", unitarity_symmetry},
        {"dynamics: resonant area theorem", area_theorem},
        {"dynamics: step-halving estimates", convergence_rates},
        {"dynamics: shot averaging", shot_noise},
        {"adiabatic: eigensplitting", eigensplitting_bounds},
        {"adiabatic: mixing angle rate", mixing_rate},
        {"adiabatic: nonadiabatic peak time", peak_time},
        {"adiabatic: border detuning scaling", border_scaling},
        {"adiabatic: predicted exponents", exponents},
        {"adiabatic: truncation artifact", artifact_law},
        {"spectro: fwhm of a triangle", fwhm_triangle},
        {"spectro: sech width constant", [&] { return sech_no_broadening(options); }},
        {"spectro: rectangular broadening", [&] { return rect_broadening(options); }},
        {"spectro: synthetic scaling fits", synthetic_fits},
        {"spectro: profile examples", [&] { return profile_examples(options); }},
        {"spectro: landscape determinism and maxima", [&] { return landscape_properties(workers); }},
        {"spectro: fwhm under subsampling", [&] { return fwhm_subsampling(options); }},
        {"spectro: rabi slices", [&] { return slices(options); }},
        {"spectro: residual of identical cutoffs", [&] { return residual_self_difference(options); }},
        {"spectro: truncation residual law", [&] { return residual_law(options); }},
        {"spectro: lorentzian n=1 scaling", [&] { return lorentzian_scaling(options); }},
        {"cli: MHz boundary", unit_boundary},
        {"cli: CSV and JSON round trip", [&] { return artifact_round_trips(options); }},
        {"cli: exported samples re-simulate", export_round_trip},
    };
    std::vector<Check> out;
    for (const auto& [name, body] : checks) {
        Check check{name, false, {}};
        try {
            std::tie(check.passed, check.detail) = body();
        } catch (const std::exception& e) {
            check.detail = std::string("threw: ") + e.what();
        }
        if (on_check) on_check(check);
        out.push_back(std::move(check));
    }
    return out;
}

}  // namespace pnarrow
