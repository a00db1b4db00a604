#pragma once

// Pulse shapes, truncation geometry and discrete sampling.
//
// Times are in ns, Rabi frequencies in rad/ns. The pulse width is a single
// parameter T; the same quantity is often written tau in the literature.

#include <optional>
#include <string>
#include <vector>

namespace pnarrow {

/// Hardware amplitude discretisation interval (ns).
inline constexpr double kHardwareDt = 2.0 / 9.0;
/// Hardware pulse lengths are whole multiples of this many samples.
inline constexpr int kHardwareGranularity = 16;

enum class ShapeKind { LorentzianPower, Rectangular, Sech, Gaussian };

/// Peak-normalized, even pulse envelope f(t) with f(0) = 1.
///
/// - LorentzianPower(n): [1 + (t/T)^2]^(-n), requires n > 1/2
/// - Rectangular: 1 for |t| <= T, else 0
/// - Sech: sech(t/T)
/// - Gaussian: exp(-t^2 / (2 T^2))
class Shape {
public:
    static Shape lorentzian_power(double n);
    static Shape rectangular();
    static Shape sech();
    static Shape gaussian();

    ShapeKind kind() const noexcept { return kind_; }
    /// Lorentzian power n; zero for the other families.
    double power() const noexcept { return power_; }
    /// "lorentzian", "rect", "sech" or "gaussian".
    std::string name() const;

    friend bool operator==(const Shape&, const Shape&) = default;

private:
    Shape(ShapeKind kind, double power) : kind_(kind), power_(power) {}

    ShapeKind kind_;
    double power_;
};

/// Parses the names produced by Shape::name(); `n` is used for "lorentzian".
Shape shape_from_name(const std::string& name, double n);

double shape_value(const Shape& shape, double width, double t);

/// Analytic df/dt. Throws UnsupportedShape for Rectangular.
double shape_derivative(const Shape& shape, double width, double t);

/// Time t_c >= 0 with f(t_c) = cut. Rectangular returns T regardless of cut.
double cutoff_time(const Shape& shape, double width, double cut);

/// Fully determines Omega(t) = peak_rabi * f(t) on [-t_c, t_c], zero outside.
///
/// Truncated pulses are not renormalized: the envelope keeps the value
/// cut * peak_rabi at the edges and jumps to zero.
class PulseSpec {
public:
    PulseSpec(Shape shape, double width, double peak_rabi, double cutoff_fraction = 1e-3,
              std::optional<double> duration = std::nullopt);

    const Shape& shape() const noexcept { return shape_; }
    double width() const noexcept { return width_; }
    double peak_rabi() const noexcept { return peak_rabi_; }
    double cutoff_fraction() const noexcept { return cutoff_fraction_; }
    const std::optional<double>& duration_override() const noexcept { return duration_; }

    /// t_c; the support is [-t_c, t_c].
    double half_duration() const noexcept { return half_duration_; }
    double duration() const noexcept { return 2.0 * half_duration_; }

    double rabi(double t) const;
    double rabi_derivative(double t) const;
    /// Omega_c = Omega(t_c), the height of the truncation jump.
    double edge_rabi() const;

    PulseSpec with_peak_rabi(double peak_rabi) const;
    PulseSpec with_cutoff_fraction(double cut) const;

private:
    Shape shape_;
    double width_;
    double peak_rabi_;
    double cutoff_fraction_;
    std::optional<double> duration_;
    double half_duration_;
};

/// Integral of f over the support, in units of ns.
double envelope_integral(const Shape& shape, double width, double half_duration);

/// Pulse area A = Omega_0 * integral of f over the support (radians).
double pulse_area(const PulseSpec& spec);

/// Omega_0 giving area `area` for the given geometry.
double amplitude_for_area(const Shape& shape, double width, double cut, double area);

enum class SampleMode {
    Midpoint,  ///< zero-order hold: one value per interval, taken at its midpoint
    Endpoint,  ///< values at interval edges, linearly interpolated
};

struct SampleOptions {
    double dt = kHardwareDt;
    SampleMode mode = SampleMode::Midpoint;
    /// Interval count is rounded to the nearest positive multiple of this.
    int granularity = 1;
};

struct SampledPulse {
    double dt = kHardwareDt;
    double start_time = 0.0;
    SampleMode mode = SampleMode::Midpoint;
    /// Midpoint: one value per interval. Endpoint: interval count + 1 node values.
    std::vector<double> samples;

    std::size_t interval_count() const noexcept;
    double duration() const noexcept { return dt * static_cast<double>(interval_count()); }
    /// Held Rabi frequency on interval i.
    double interval_value(std::size_t i) const;
    double area() const;
};

/// Discretizes the pulse on a window centred at t = 0.
///
/// With granularity 1 the interval count is ceil(duration / dt). Larger
/// granularity rounds to the nearest multiple, shortening or lengthening the
/// window symmetrically.
SampledPulse sample(const PulseSpec& spec, const SampleOptions& options = {});

}  // namespace pnarrow
