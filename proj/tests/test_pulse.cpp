#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pnarrow/errors.hpp"
#include "pnarrow/pulse.hpp"

using namespace pnarrow;
using doctest::Approx;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("shape values") {
    CHECK(shape_value(Shape::lorentzian_power(1), 1, 0) == 1.0);
    CHECK(shape_value(Shape::lorentzian_power(1), 1, 1) == Approx(0.5).epsilon(1e-15));
    CHECK(shape_value(Shape::lorentzian_power(2), 1, 1) == Approx(0.25).epsilon(1e-15));
    CHECK(shape_value(Shape::sech(), 1, 0) == 1.0);
    CHECK(shape_value(Shape::gaussian(), 2, 2) == Approx(std::exp(-0.5)));
    CHECK(shape_value(Shape::rectangular(), 1, 1.0) == 1.0);
    CHECK(shape_value(Shape::rectangular(), 1, 1.0000001) == 0.0);
}

TEST_CASE("shape construction and names") {
    CHECK_THROWS_AS(Shape::lorentzian_power(0.5), InvalidArgument);
    CHECK_THROWS_AS(Shape::lorentzian_power(0.2), InvalidArgument);
    CHECK_THROWS_AS(Shape::lorentzian_power(NAN), InvalidArgument);
    CHECK(shape_from_name("lorentzian", 0.75) == Shape::lorentzian_power(0.75));
    CHECK(shape_from_name("rect", 0) == Shape::rectangular());
    CHECK(Shape::gaussian().name() == "gaussian");
    CHECK_THROWS_AS(shape_from_name("triangle", 1), InvalidArgument);
    CHECK_THROWS_AS(shape_value(Shape::sech(), 0.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(shape_value(Shape::sech(), 1.0, INFINITY), InvalidArgument);
}

TEST_CASE("derivatives") {
    CHECK(shape_derivative(Shape::lorentzian_power(1), 1, 0) == 0.0);
    CHECK(shape_derivative(Shape::lorentzian_power(1), 1, 1) == Approx(-0.5).epsilon(1e-14));
    CHECK(shape_derivative(Shape::gaussian(), 2, 2) == Approx(-0.5 * std::exp(-0.5)).epsilon(1e-14));
    CHECK_THROWS_AS(shape_derivative(Shape::rectangular(), 1, 0.3), UnsupportedShape);

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> t_dist(-8.0, 8.0);
    for (const auto& s : {Shape::lorentzian_power(0.6), Shape::lorentzian_power(1.5), Shape::sech(), Shape::gaussian()}) {
        for (int i = 0; i < 100; ++i) {
            const double t = t_dist(rng), h = 1e-6;
            const double fd = (shape_value(s, 1.0, t + h) - shape_value(s, 1.0, t - h)) / (2 * h);
            CHECK(std::abs(shape_derivative(s, 1.0, t) - fd) <= 1e-5 * std::abs(fd) + 1e-9);
        }
    }
}

TEST_CASE("cutoff times") {
    CHECK(cutoff_time(Shape::lorentzian_power(1), 1, 0.5) == Approx(1.0).epsilon(1e-14));
    CHECK(cutoff_time(Shape::lorentzian_power(1), 1, 0.02) == Approx(7.0).epsilon(1e-14));
    const double t_c = cutoff_time(Shape::lorentzian_power(1), 21.33, 0.005);
    CHECK(t_c == Approx(300.9).epsilon(1e-3));
    CHECK(cutoff_time(Shape::rectangular(), 2.5, 0.1) == 2.5);
    CHECK(cutoff_time(Shape::sech(), 1, 1.0) == 0.0);
    CHECK_THROWS_AS(cutoff_time(Shape::sech(), 1, 0.0), InvalidArgument);
    CHECK_THROWS_AS(cutoff_time(Shape::sech(), 1, 1.5), InvalidArgument);
    for (const auto& s : {Shape::lorentzian_power(0.7), Shape::sech(), Shape::gaussian()}) {
        for (const double cut : {0.9, 1e-2, 1e-9}) {
            CHECK(shape_value(s, 3.0, cutoff_time(s, 3.0, cut)) == Approx(cut).epsilon(1e-10));
        }
    }
}

TEST_CASE("pulse spec support") {
    const PulseSpec spec(Shape::lorentzian_power(1), 1.0, 2.0, 0.5);
    CHECK(spec.half_duration() == Approx(1.0));
    CHECK(spec.rabi(0.0) == 2.0);
    CHECK(spec.rabi(1.0) == Approx(1.0));
    CHECK(spec.rabi(1.0001) == 0.0);
    CHECK(spec.edge_rabi() == Approx(1.0));
    const PulseSpec fixed(Shape::gaussian(), 1.0, 1.0, 1e-3, 8.0);
    CHECK(fixed.half_duration() == 4.0);
    CHECK_THROWS_AS(PulseSpec(Shape::gaussian(), -1.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(PulseSpec(Shape::gaussian(), 1.0, -1.0), InvalidArgument);
    CHECK_THROWS_AS(PulseSpec(Shape::gaussian(), 1.0, 1.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(PulseSpec(Shape::gaussian(), 1.0, 1.0, 1.01), InvalidArgument);
}

TEST_CASE("pulse areas") {
    CHECK(pulse_area(PulseSpec(Shape::rectangular(), 1.0, pi / 2, 1.0)) == Approx(pi).epsilon(1e-14));
    CHECK(pulse_area(PulseSpec(Shape::lorentzian_power(1), 1.0, 1.0, 1e-9)) == Approx(pi).epsilon(1e-4));
    CHECK(pulse_area(PulseSpec(Shape::lorentzian_power(1), 1.0, 1.0, 0.5)) == Approx(pi / 2).epsilon(1e-10));
    // Closed forms: 2T atan(t_c/T) and untruncated sqrt(2 pi) T.
    const double t_c = cutoff_time(Shape::lorentzian_power(1), 3.0, 0.01);
    CHECK(envelope_integral(Shape::lorentzian_power(1), 3.0, t_c) == Approx(6.0 * std::atan(t_c / 3.0)).epsilon(1e-10));
    CHECK(envelope_integral(Shape::gaussian(), 1.0, 40.0) == Approx(std::sqrt(2 * pi)).epsilon(1e-12));
    CHECK(envelope_integral(Shape::sech(), 1.0, 60.0) == Approx(pi).epsilon(1e-12));
    // Slow n -> 1/2 tails.
    const double n = 0.55;
    const double tc = cutoff_time(Shape::lorentzian_power(n), 1.0, 1e-6);
    const double full = std::sqrt(pi) * std::tgamma(n - 0.5) / std::tgamma(n);
    CHECK(envelope_integral(Shape::lorentzian_power(n), 1.0, tc) < full);
    CHECK(envelope_integral(Shape::lorentzian_power(n), 1.0, tc) > 0.5 * full);
}

TEST_CASE("amplitude for area") {
    CHECK(amplitude_for_area(Shape::rectangular(), 1.0, 1.0, pi) == Approx(pi / 2));
    CHECK(amplitude_for_area(Shape::lorentzian_power(1), 1.0, 0.5, pi) == Approx(2.0).epsilon(1e-10));
    CHECK(amplitude_for_area(Shape::gaussian(), 1.0, 0.1, 0.0) == 0.0);
    CHECK_THROWS_AS(amplitude_for_area(Shape::gaussian(), 1.0, 0.1, -1.0), InvalidArgument);
    CHECK_THROWS_AS(amplitude_for_area(Shape::gaussian(), 1.0, 1.0, pi), InvalidArgument);
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const Shape s = Shape::lorentzian_power(0.55 + 3 * u(rng));
        const double w = 0.5 + 20 * u(rng), cut = std::pow(10.0, -8 * u(rng) - 0.1), a = 30 * u(rng) + 0.1;
        CHECK(pulse_area(PulseSpec(s, w, amplitude_for_area(s, w, cut, a), cut)) == Approx(a).epsilon(1e-9));
    }
}

TEST_CASE("area grows as the cutoff drops") {
    for (const auto& s : {Shape::lorentzian_power(0.8), Shape::sech(), Shape::gaussian()}) {
        double prev = 0.0;
        for (const double cut : {0.7, 0.3, 1e-2, 1e-4, 1e-7}) {
            const double a = pulse_area(PulseSpec(s, 1.0, 1.0, cut));
            CHECK(a >= prev);
            prev = a;
        }
    }
}

TEST_CASE("sampling") {
    const auto rect = sample(PulseSpec(Shape::rectangular(), 1.0, 1.0, 1.0), {0.5});
    REQUIRE(rect.samples.size() == 4);
    for (const double v : rect.samples) CHECK(v == 1.0);
    CHECK(rect.start_time == -1.0);
    CHECK(rect.area() == Approx(2.0));

    const PulseSpec lor(Shape::lorentzian_power(1), 21.33, 1.0, 0.005);
    const auto plain = sample(lor);
    CHECK(plain.samples.size() == 2709);
    CHECK(plain.dt == kHardwareDt);
    SampleOptions hw;
    hw.granularity = kHardwareGranularity;
    const auto grid = sample(lor, hw);
    CHECK(grid.samples.size() == 2704);
    CHECK(grid.duration() == Approx(600.89).epsilon(2e-5));
    const auto short_pulse = sample(PulseSpec(Shape::lorentzian_power(1), 21.33, 1.0, 0.5), hw);
    CHECK(short_pulse.duration() == Approx(42.67).epsilon(1e-3));

    for (const double v : plain.samples) CHECK(v >= 0.0);
    CHECK_THROWS_AS(sample(PulseSpec(Shape::rectangular(), 1.0, 1.0, 1.0), {3.0}), DegenerateSampling);
    CHECK_THROWS_AS(sample(lor, {-0.1}), InvalidArgument);
}

TEST_CASE("endpoint sampling interpolates") {
    const PulseSpec spec(Shape::gaussian(), 1.0, 2.0, 1e-3, 8.0);
    SampleOptions opt{0.1, SampleMode::Endpoint};
    const auto p = sample(spec, opt);
    CHECK(p.samples.size() == p.interval_count() + 1);
    CHECK(p.interval_value(0) == Approx(0.5 * (p.samples[0] + p.samples[1])));
    CHECK(p.area() == Approx(pulse_area(spec)).epsilon(1e-3));
}

TEST_CASE("hold error is second order on a tiled support") {
    const PulseSpec spec(Shape::gaussian(), 1.0, 1.0, 1e-3, 8.0);
    const double exact = pulse_area(spec);
    const double e1 = std::abs(sample(spec, {0.2}).area() - exact);
    const double e2 = std::abs(sample(spec, {0.1}).area() - exact);
    const double e3 = std::abs(sample(spec, {0.05}).area() - exact);
    CHECK(e1 / e2 == Approx(4.0).epsilon(0.1));
    CHECK(e2 / e3 == Approx(4.0).epsilon(0.1));
}
