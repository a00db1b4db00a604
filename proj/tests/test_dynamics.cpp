#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pnarrow/dynamics.hpp"
#include "pnarrow/errors.hpp"

using namespace pnarrow;
using doctest::Approx;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("closed-form oracles") {
    CHECK(rabi_rect_oracle(pi, 0, 1) == Approx(1.0).epsilon(1e-15));
    CHECK(rabi_rect_oracle(1, 1, pi / std::sqrt(2.0)) == Approx(0.5).epsilon(1e-15));
    CHECK(rabi_rect_oracle(0, 5, 7) == 0.0);
    CHECK_THROWS_AS(rabi_rect_oracle(1, 1, -1), InvalidArgument);
    CHECK(rosen_zener_oracle(1, 1, 0) == Approx(1.0));
    CHECK(rosen_zener_oracle(1, 1, 1) == Approx(0.158830).epsilon(1e-5));
    CHECK(rosen_zener_oracle(2, 1, 0.4) < 1e-30);
    CHECK_THROWS_AS(rosen_zener_oracle(1, 0, 1), InvalidArgument);
}

TEST_CASE("held step is unitary") {
    TwoLevelState s;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 10000; ++i) apply_held_step(s, std::abs(u(rng)), u(rng), std::abs(u(rng)));
    CHECK(std::abs(s.norm() - 1.0) < 1e-12);
}

TEST_CASE("rectangular pulses match the flat-pulse solution") {
    CHECK(propagate(PulseSpec(Shape::rectangular(), 0.5, pi, 1.0), 0.0).p_excite == Approx(1.0).epsilon(1e-10));
    const double duration = pi / std::sqrt(2.0);
    CHECK(propagate(PulseSpec(Shape::rectangular(), duration / 2, 1.0, 1.0), 1.0).p_excite ==
          Approx(0.5).epsilon(1e-10));
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double rabi = 9 * pi / 2 * i / 19.0;
        for (int j = 0; j < 20; ++j) {
            const double delta = -5.0 + 10.0 * j / 19.0;
            const auto r = propagate(PulseSpec(Shape::rectangular(), 1.0, rabi, 1.0), delta);
            worst = std::max(worst, std::abs(r.p_excite - rabi_rect_oracle(rabi, delta, 2.0)));
        }
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("sech pulses match Rosen-Zener") {
    CHECK(std::abs(propagate(PulseSpec(Shape::sech(), 1.0, 1.0, 1e-6), 1.0).p_excite - 0.15883) < 1e-4);
    double worst = 0.0;
    for (const double area : {1.0, 3.0, 7.0}) {
        Propagator prop(PulseSpec(Shape::sech(), 2.0, area / 2.0, 1e-6));
        for (int k = 0; k <= 60; ++k) {
            const double delta = (-3.0 + 0.1 * k) / 2.0;
            worst = std::max(worst, std::abs(prop(delta).p_excite -
                                             rosen_zener_oracle(prop.spec().peak_rabi(), 2.0, delta)));
        }
    }
    CHECK(worst <= 1e-4);
}

TEST_CASE("result fields are consistent") {
    const auto r = propagate(PulseSpec(Shape::gaussian(), 1.0, 3.0, 1e-4), 0.7);
    CHECK(r.p_excite == Approx(r.final_state.excited()));
    CHECK(r.p_excite >= 0.0);
    CHECK(r.p_excite <= 1.0);
    CHECK(r.est_error < 1e-8);
    CHECK(r.step_count > 0);
}

TEST_CASE("symmetry in detuning and area theorem") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const Shape shapes[] = {Shape::lorentzian_power(0.7), Shape::sech(), Shape::gaussian()};
        const Shape s = shapes[i % 3];
        const PulseSpec spec(s, 0.5 + u(rng), 10 * u(rng), std::pow(10.0, -5 * u(rng)));
        const double delta = 4 * u(rng);
        Propagator prop(spec);
        CHECK(std::abs(prop(delta).p_excite - prop(-delta).p_excite) <= 1e-10);
        CHECK(prop(0.0).p_excite == Approx(std::pow(std::sin(pulse_area(spec) / 2), 2)).epsilon(1e-8));
    }
}

TEST_CASE("zero amplitude leaves the ground state") {
    CHECK(propagate(PulseSpec(Shape::gaussian(), 1.0, 0.0, 1e-3), 0.3).p_excite == 0.0);
}

TEST_CASE("step-halving estimates") {
    CHECK(convergence_probe(PulseSpec(Shape::rectangular(), 1.0, 2.0, 1.0), 0.4, 0.3) < 1e-13);
    const PulseSpec g(Shape::gaussian(), 1.0, 4.0, 1e-3);
    const double ratio = convergence_probe(g, 1.3, 0.05) / convergence_probe(g, 1.3, 0.025);
    CHECK(ratio == Approx(4.0).epsilon(0.1));
    CHECK_THROWS_AS(convergence_probe(g, 1.3, 0.0), InvalidArgument);
}

TEST_CASE("step budget") {
    PropagationOptions opt;
    opt.max_steps = 10;
    CHECK_THROWS_AS(propagate(PulseSpec(Shape::lorentzian_power(1), 1.0, 3.0, 1e-3), 0.5, opt), ResourceLimit);
}

TEST_CASE("hardware mode propagates the 2/9 ns hold") {
    const PulseSpec spec(Shape::lorentzian_power(1), 21.33, 0.05, 0.005);
    PropagationOptions hw;
    hw.hardware_mode = true;
    const auto a = propagate(spec, 0.02, hw);
    const auto b = propagate_samples(sample(spec), 0.02);
    CHECK(a.p_excite == b.p_excite);
    CHECK(std::abs(a.p_excite - propagate(spec, 0.02).p_excite) < 1e-3);
}

TEST_CASE("shot noise") {
    PropagationOptions opt;
    opt.shot_noise = true;
    opt.seed = 9;
    const PulseSpec spec(Shape::gaussian(), 1.0, 2.0, 1e-3);
    const auto a = propagate(spec, 0.4, opt);
    const auto b = propagate(spec, 0.4, opt);
    CHECK(a.p_excite == b.p_excite);
    CHECK(std::abs(a.p_excite * 1024 - std::round(a.p_excite * 1024)) < 1e-9);
    CHECK(shot_average(1.0, 16, 3) == 1.0);
    CHECK_THROWS_AS(shot_average(0.5, 0, 3), InvalidArgument);
}

TEST_CASE("trajectory ends at the final probability") {
    const PulseSpec spec(Shape::rectangular(), 1.0, pi / 2, 1.0);
    const auto path = trajectory(spec, 0.0, 0.01);
    REQUIRE(!path.empty());
    CHECK(path.back().p_excite == Approx(1.0).epsilon(1e-10));
    CHECK(path.back().time == Approx(1.0));
}

TEST_CASE("non-finite detuning is rejected") {
    CHECK_THROWS_AS(propagate(PulseSpec(Shape::gaussian(), 1.0, 1.0), NAN), InvalidArgument);
}
