#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pnarrow/adiabatic.hpp"
#include "pnarrow/spectro.hpp"

using namespace pnarrow;

// Narrowing exponent once the truncation floor is out of the way.
TEST_CASE("lorentzian narrowing exponents with a negligible edge") {
    struct Case {
        double n;
        double cut;
    };
    for (const auto& c : {Case{1.0, 1e-4}, Case{0.75, 1e-8}, Case{2.0 / 3.0, 1e-10}}) {
        CAPTURE(c.n);
        const auto s = Shape::lorentzian_power(c.n);
        std::vector<ScalingPoint> points;
        for (const double area : {3.0, 7.0, 11.0, 15.0}) {
            CAPTURE(area);
            const PulseSpec spec(s, 1.0, amplitude_for_area(s, 1.0, c.cut, area * std::numbers::pi), c.cut);
            const double w = resolve_fwhm(spec).fwhm;
            CHECK(spec.edge_rabi() < w / 5.0);
            points.push_back({spec.peak_rabi(), w});
        }
        const auto fit = fit_scaling(points);
        const double nu = predicted_exponent(c.n);
        MESSAGE("n=" << c.n << " exponent " << fit.exponent << " predicted " << nu);
        CHECK(fit.exponent >= 0.75 * nu);
        CHECK(fit.exponent <= 1.25 * nu);
    }
}
