#include "pnarrow/pulse.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <string>

#include "pnarrow/errors.hpp"

namespace pnarrow {

namespace {

void require_finite(double value, const char* what) {
    if (!std::isfinite(value)) {
        throw InvalidArgument(std::string(what) + " must be finite");
    }
}

void require_width(double width) {
    require_finite(width, "pulse width");
    if (width <= 0.0) {
        throw InvalidArgument("pulse width must be positive");
    }
}

void require_cut(double cut) {
    if (!(cut > 0.0 && cut <= 1.0)) {
        throw InvalidArgument("cutoff fraction must lie in (0, 1], got " + std::to_string(cut));
    }
}

}  // namespace

Shape Shape::lorentzian_power(double n) {
    if (!std::isfinite(n) || n <= 0.5) {
        throw InvalidArgument("Lorentzian power must exceed 1/2, got " + std::to_string(n));
    }
    return Shape(ShapeKind::LorentzianPower, n);
}

Shape Shape::rectangular() { return Shape(ShapeKind::Rectangular, 0.0); }
Shape Shape::sech() { return Shape(ShapeKind::Sech, 0.0); }
Shape Shape::gaussian() { return Shape(ShapeKind::Gaussian, 0.0); }

std::string Shape::name() const {
    switch (kind_) {
        case ShapeKind::LorentzianPower: return "lorentzian";
        case ShapeKind::Rectangular: return "rect";
        case ShapeKind::Sech: return "sech";
        case ShapeKind::Gaussian: return "gaussian";
    }
    return "unknown";
}

Shape shape_from_name(const std::string& name, double n) {
    if (name == "lorentzian") return Shape::lorentzian_power(n);
    if (name == "rect" || name == "rectangular") return Shape::rectangular();
    if (name == "sech") return Shape::sech();
    if (name == "gaussian") return Shape::gaussian();
    throw InvalidArgument("unknown shape '" + name + "'");
}

double shape_value(const Shape& shape, double width, double t) {
    require_width(width);
    require_finite(t, "time");
    const double x = t / width;
    switch (shape.kind()) {
        case ShapeKind::LorentzianPower: return std::pow(1.0 + x * x, -shape.power());
        case ShapeKind::Rectangular: return std::abs(t) <= width ? 1.0 : 0.0;
        case ShapeKind::Sech: return 1.0 / std::cosh(x);
        case ShapeKind::Gaussian: return std::exp(-0.5 * x * x);
    }
    return 0.0;
}

double shape_derivative(const Shape& shape, double width, double t) {
    require_width(width);
    require_finite(t, "time");
    const double x = t / width;
    switch (shape.kind()) {
        case ShapeKind::LorentzianPower: {
            const double n = shape.power();
            return -2.0 * n * x / width * std::pow(1.0 + x * x, -n - 1.0);
        }
        case ShapeKind::Rectangular:
            throw UnsupportedShape("rectangular pulse has no pointwise derivative");
        case ShapeKind::Sech: return -std::tanh(x) / std::cosh(x) / width;
        case ShapeKind::Gaussian: return -x / width * std::exp(-0.5 * x * x);
    }
    return 0.0;
}

double cutoff_time(const Shape& shape, double width, double cut) {
    require_width(width);
    require_cut(cut);
    switch (shape.kind()) {
        case ShapeKind::LorentzianPower:
            // cut^(-1/n) - 1 without cancellation near cut = 1
            return width * std::sqrt(std::expm1(-std::log(cut) / shape.power()));
        case ShapeKind::Rectangular: return width;
        case ShapeKind::Sech: return width * std::acosh(1.0 / cut);
        case ShapeKind::Gaussian: return width * std::sqrt(-2.0 * std::log(cut));
    }
    return 0.0;
}

PulseSpec::PulseSpec(Shape shape, double width, double peak_rabi, double cutoff_fraction,
                     std::optional<double> duration)
    : shape_(shape),
      width_(width),
      peak_rabi_(peak_rabi),
      cutoff_fraction_(cutoff_fraction),
      duration_(duration),
      half_duration_(0.0) {
    require_width(width);
    require_finite(peak_rabi, "peak Rabi frequency");
    if (peak_rabi < 0.0) {
        throw InvalidArgument("peak Rabi frequency must be non-negative");
    }
    require_cut(cutoff_fraction);
    if (duration_) {
        require_finite(*duration_, "duration");
        if (*duration_ <= 0.0) {
            throw InvalidArgument("duration override must be positive");
        }
        half_duration_ = 0.5 * *duration_;
    } else {
        half_duration_ = cutoff_time(shape_, width_, cutoff_fraction_);
    }
}

double PulseSpec::rabi(double t) const {
    if (std::abs(t) > half_duration_) return 0.0;
    return peak_rabi_ * shape_value(shape_, width_, t);
}

double PulseSpec::rabi_derivative(double t) const {
    if (std::abs(t) > half_duration_) return 0.0;
    return peak_rabi_ * shape_derivative(shape_, width_, t);
}

double PulseSpec::edge_rabi() const {
    return peak_rabi_ * shape_value(shape_, width_, half_duration_);
}

PulseSpec PulseSpec::with_peak_rabi(double peak_rabi) const {
    return PulseSpec(shape_, width_, peak_rabi, cutoff_fraction_, duration_);
}

PulseSpec PulseSpec::with_cutoff_fraction(double cut) const {
    return PulseSpec(shape_, width_, peak_rabi_, cut, duration_);
}

double envelope_integral(const Shape& shape, double width, double half_duration) {
    require_width(width);
    if (!(half_duration >= 0.0)) {
        throw InvalidArgument("half duration must be non-negative");
    }
    if (shape.kind() == ShapeKind::Rectangular) {
        return 2.0 * std::min(half_duration, width);
    }
    using boost::math::quadrature::gauss_kronrod;
    const auto f = [&](double t) { return shape_value(shape, width, t); };
    // Panels double in length away from the core so that slowly decaying
    // tails are integrated at comparable relative accuracy.
    double total = 0.0;
    double a = 0.0;
    double b = std::min(width, half_duration);
    while (a < half_duration) {
        total += gauss_kronrod<double, 31>::integrate(f, a, b, 20, 1e-12);
        a = b;
        b = std::min(2.0 * b, half_duration);
    }
    return 2.0 * total;
}

double pulse_area(const PulseSpec& spec) {
    return spec.peak_rabi() * envelope_integral(spec.shape(), spec.width(), spec.half_duration());
}

double amplitude_for_area(const Shape& shape, double width, double cut, double area) {
    require_finite(area, "area");
    if (area < 0.0) {
        throw InvalidArgument("pulse area must be non-negative");
    }
    const double integral = envelope_integral(shape, width, cutoff_time(shape, width, cut));
    if (!(integral > 0.0)) {
        throw InvalidArgument("pulse has zero support");
    }
    return area / integral;
}

std::size_t SampledPulse::interval_count() const noexcept {
    if (mode == SampleMode::Endpoint) {
        return samples.empty() ? 0 : samples.size() - 1;
    }
    return samples.size();
}

double SampledPulse::interval_value(std::size_t i) const {
    if (mode == SampleMode::Endpoint) {
        return 0.5 * (samples[i] + samples[i + 1]);
    }
    return samples[i];
}

double SampledPulse::area() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < interval_count(); ++i) {
        sum += interval_value(i);
    }
    return sum * dt;
}

SampledPulse sample(const PulseSpec& spec, const SampleOptions& options) {
    require_finite(options.dt, "sampling interval");
    if (options.dt <= 0.0) {
        throw InvalidArgument("sampling interval must be positive");
    }
    if (options.granularity < 1) {
        throw InvalidArgument("sample granularity must be at least 1");
    }
    const double duration = spec.duration();
    if (options.dt > duration) {
        throw DegenerateSampling("sampling interval " + std::to_string(options.dt) +
                                 " ns exceeds pulse duration " + std::to_string(duration) + " ns");
    }
    const double exact = duration / options.dt;
    std::size_t count = 0;
    if (options.granularity == 1) {
        count = static_cast<std::size_t>(std::ceil(exact - 1e-9));
    } else {
        const double g = options.granularity;
        count = static_cast<std::size_t>(std::max(1.0, std::round(exact / g)) * g);
    }

    SampledPulse out;
    out.dt = options.dt;
    out.mode = options.mode;
    out.start_time = -0.5 * static_cast<double>(count) * options.dt;
    if (options.mode == SampleMode::Midpoint) {
        out.samples.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            out.samples.push_back(spec.rabi(out.start_time + (static_cast<double>(i) + 0.5) * options.dt));
        }
    } else {
        out.samples.reserve(count + 1);
        for (std::size_t i = 0; i <= count; ++i) {
            out.samples.push_back(spec.rabi(out.start_time + static_cast<double>(i) * options.dt));
        }
    }
    return out;
}

}  // namespace pnarrow
