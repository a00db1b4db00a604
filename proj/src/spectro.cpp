#include "pnarrow/spectro.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

namespace pnarrow {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Each cell draws shots from its own stream so that results do not depend on
// evaluation order.
PropagationOptions cell_options(const PropagationOptions& base, std::size_t cell) {
    PropagationOptions out = base;
    out.seed = splitmix64(base.seed ^ splitmix64(cell));
    return out;
}

void require_grid(std::span<const double> grid, const char* what) {
    if (grid.empty()) {
        throw InvalidArgument(std::string(what) + " grid is empty");
    }
    for (const double v : grid) {
        if (!std::isfinite(v)) {
            throw InvalidArgument(std::string(what) + " grid contains a non-finite value");
        }
    }
}

void require_increasing(std::span<const double> grid, const char* what) {
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw InvalidArgument(std::string(what) + " grid must be strictly increasing");
        }
    }
}

void require_budget(std::size_t cells, const SweepOptions& options) {
    if (cells > options.max_cells) {
        throw ResourceLimit("sweep of " + std::to_string(cells) + " cells exceeds the budget of " +
                            std::to_string(options.max_cells));
    }
}

double interpolate_crossing(double x0, double y0, double x1, double y1, double level) {
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0);
}

}  // namespace

unsigned resolve_workers(unsigned requested) {
    if (requested > 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body) {
    if (count == 0) return;
    const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(resolve_workers(workers), count));
    std::vector<std::exception_ptr> failures(count);
    std::atomic<std::size_t> next{0};
    const auto run = [&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            try {
                body(i);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    if (threads == 1) {
        run();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(run);
    }
    for (std::size_t i = 0; i < count; ++i) {
        if (!failures[i]) continue;
        std::string message = "grid cell " + std::to_string(i) + ": ";
        try {
            std::rethrow_exception(failures[i]);
        } catch (const std::exception& e) {
            message += e.what();
        } catch (...) {
            message += "unknown error";
        }
        throw GridError(i, failures[i], message);
    }
}

SpectralProfile spectral_profile(const PulseSpec& spec, std::span<const double> detunings,
                                 const SweepOptions& options) {
    require_grid(detunings, "detuning");
    require_increasing(detunings, "detuning");
    require_budget(detunings.size(), options);
    SpectralProfile out{{detunings.begin(), detunings.end()}, std::vector<double>(detunings.size()), spec,
                        pulse_area(spec)};
    const auto table = EnvelopeTable::for_spec(spec);
    const Propagator shared(spec, options.propagation, table);
    parallel_for(detunings.size(), options.workers, [&](std::size_t i) {
        if (options.propagation.shot_noise) {
            out.probabilities[i] = Propagator(spec, cell_options(options.propagation, i), table)(detunings[i]).p_excite;
        } else {
            out.probabilities[i] = shared(detunings[i]).p_excite;
        }
    });
    return out;
}

Landscape excitation_landscape(const Shape& shape, double width, double cut,
                               std::span<const double> rabi_amplitudes,
                               std::span<const double> detunings, const SweepOptions& options) {
    require_grid(rabi_amplitudes, "Rabi");
    require_grid(detunings, "detuning");
    const std::size_t cols = detunings.size();
    const std::size_t cells = rabi_amplitudes.size() * cols;
    if (cols != 0 && cells / cols != rabi_amplitudes.size()) {
        throw ResourceLimit("landscape size overflows");
    }
    require_budget(cells, options);

    Landscape out;
    out.shape = shape;
    out.width = width;
    out.cutoff_fraction = cut;
    out.detunings.assign(detunings.begin(), detunings.end());
    out.rabi_amplitudes.assign(rabi_amplitudes.begin(), rabi_amplitudes.end());
    out.probabilities.assign(cells, 0.0);

    std::vector<PulseSpec> rows;
    rows.reserve(rabi_amplitudes.size());
    for (const double rabi : rabi_amplitudes) rows.emplace_back(shape, width, rabi, cut);
    const auto table = EnvelopeTable::for_spec(rows.front());
    std::vector<Propagator> propagators;
    propagators.reserve(rows.size());
    for (const auto& spec : rows) propagators.emplace_back(spec, options.propagation, table);

    parallel_for(cells, options.workers, [&](std::size_t cell) {
        const std::size_t r = cell / cols;
        const std::size_t c = cell % cols;
        if (options.propagation.shot_noise) {
            out.probabilities[cell] =
                Propagator(rows[r], cell_options(options.propagation, cell), table)(detunings[c]).p_excite;
        } else {
            out.probabilities[cell] = propagators[r](detunings[c]).p_excite;
        }
    });
    return out;
}

std::vector<double> rabi_slice(const Shape& shape, double width, double cut, double detuning,
                               std::span<const double> rabi_amplitudes, const SweepOptions& options) {
    const double single[] = {detuning};
    return excitation_landscape(shape, width, cut, rabi_amplitudes, single, options).probabilities;
}

FwhmResult fwhm(std::span<const double> detunings, std::span<const double> probabilities) {
    if (detunings.size() != probabilities.size()) {
        throw InvalidArgument("profile axes differ in length");
    }
    if (detunings.size() < 3) {
        throw Inconclusive("profile needs at least three samples");
    }
    require_increasing(detunings, "detuning");
    const auto peak_it = std::max_element(probabilities.begin(), probabilities.end());
    const auto peak = static_cast<std::size_t>(peak_it - probabilities.begin());
    const double top = *peak_it;
    if (!(top > 0.0)) {
        throw Inconclusive("profile has no positive maximum");
    }
    if (peak == 0 || peak + 1 == probabilities.size()) {
        throw Inconclusive("profile maximum lies on the grid boundary; widen the detuning grid");
    }
    const double half = 0.5 * top;

    FwhmResult out;
    out.peak_detuning = detunings[peak];
    out.peak_probability = top;

    std::size_t right = peak + 1;
    while (right < probabilities.size() && probabilities[right] >= half) ++right;
    std::size_t left = peak;
    while (left > 0 && probabilities[left - 1] >= half) --left;
    if (right == probabilities.size() || left == 0) {
        throw Inconclusive("profile never falls below half maximum inside the grid");
    }
    --left;
    out.right_cross = interpolate_crossing(detunings[right - 1], probabilities[right - 1], detunings[right],
                                           probabilities[right], half);
    out.left_cross = interpolate_crossing(detunings[left], probabilities[left], detunings[left + 1],
                                          probabilities[left + 1], half);
    out.fwhm = out.right_cross - out.left_cross;
    return out;
}

FwhmResult fwhm(const SpectralProfile& profile) { return fwhm(profile.detunings, profile.probabilities); }

FwhmResult resolve_fwhm(const PulseSpec& spec, const SweepOptions& options, double initial_half_window,
                        double rel_tol) {
    constexpr std::size_t kHalfPoints = 64;
    double window = initial_half_window > 0.0 ? initial_half_window : 4.0 / spec.width();
    const double max_window = 1e4 / spec.width();

    for (int attempt = 0; attempt < 60; ++attempt) {
        std::vector<double> half_grid(kHalfPoints + 1);
        for (std::size_t i = 0; i <= kHalfPoints; ++i) {
            half_grid[i] = window * static_cast<double>(i) / kHalfPoints;
        }
        const auto half_profile = spectral_profile(spec, half_grid, options);
        const auto& p = half_profile.probabilities;

        const auto peak_it = std::max_element(p.begin(), p.end());
        if (peak_it != p.begin()) {
            // Off-centre maximum: fall back to the mirrored grid estimate.
            std::vector<double> det;
            std::vector<double> prob;
            for (std::size_t i = kHalfPoints; i > 0; --i) {
                det.push_back(-half_grid[i]);
                prob.push_back(p[i]);
            }
            det.insert(det.end(), half_grid.begin(), half_grid.end());
            prob.insert(prob.end(), p.begin(), p.end());
            if (std::distance(p.begin(), peak_it) + 1 == static_cast<std::ptrdiff_t>(p.size())) {
                window *= 2.0;
                continue;
            }
            return fwhm(det, prob);
        }
        const double half = 0.5 * p.front();
        if (!(half > 0.0)) {
            throw Inconclusive("profile vanishes on resonance");
        }
        std::size_t j = 1;
        while (j <= kHalfPoints && p[j] >= half) ++j;
        if (j > kHalfPoints) {
            if (window > max_window) {
                throw Inconclusive("profile does not fall to half maximum within the search range");
            }
            window *= 2.0;
            continue;
        }
        const double estimate = interpolate_crossing(half_grid[j - 1], p[j - 1], half_grid[j], p[j], half);
        if (estimate < window / 5.0) {
            window = 2.5 * estimate;
            continue;
        }

        const Propagator propagator(spec, options.propagation);
        const auto residual = [&](double d) { return propagator(d).p_excite - half; };
        double crossing = estimate;
        const double lo = half_grid[j - 1];
        const double hi = half_grid[j];
        const double f_lo = p[j - 1] - half;
        const double f_hi = p[j] - half;
        if (f_lo != 0.0 && f_hi != 0.0 && !options.propagation.shot_noise) {
            std::uintmax_t iterations = 60;
            const auto tol = [&](double a, double b) { return std::abs(b - a) <= rel_tol * std::abs(a); };
            const auto [a, b] = boost::math::tools::toms748_solve(residual, lo, hi, f_lo, f_hi, tol, iterations);
            crossing = 0.5 * (a + b);
        }
        FwhmResult out;
        out.peak_detuning = 0.0;
        out.peak_probability = p.front();
        out.left_cross = -crossing;
        out.right_cross = crossing;
        out.fwhm = 2.0 * crossing;
        return out;
    }
    throw Inconclusive("adaptive width search did not settle");
}

ScalingFit fit_scaling(std::span<const ScalingPoint> points) {
    if (points.size() < 3) {
        throw InvalidArgument("scaling fit needs at least three points");
    }
    double mx = 0.0;
    double my = 0.0;
    for (const auto& pt : points) {
        if (!(pt.rabi > 0.0) || !(pt.fwhm > 0.0) || !std::isfinite(pt.rabi) || !std::isfinite(pt.fwhm)) {
            throw InvalidArgument("scaling fit needs positive finite values");
        }
        mx += std::log(pt.rabi);
        my += std::log(pt.fwhm);
    }
    const double count = static_cast<double>(points.size());
    mx /= count;
    my /= count;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (const auto& pt : points) {
        const double dx = std::log(pt.rabi) - mx;
        const double dy = std::log(pt.fwhm) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) {
        throw InvalidArgument("scaling fit needs at least two distinct Rabi frequencies");
    }
    const double slope = sxy / sxx;
    ScalingFit fit;
    fit.exponent = -slope;
    fit.intercept = my - slope * mx;
    fit.points = points.size();
    fit.r_squared = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
    return fit;
}

std::vector<PeakWidth> peak_widths(const Shape& shape, double width, double cut,
                                   std::span<const double> rabi_amplitudes,
                                   std::span<const double> detunings, const SweepOptions& options) {
    require_grid(rabi_amplitudes, "Rabi");
    const auto [lo_it, hi_it] = std::minmax_element(rabi_amplitudes.begin(), rabi_amplitudes.end());
    const double lo = *lo_it * (1.0 - 1e-12);
    const double hi = *hi_it * (1.0 + 1e-12);
    std::vector<PeakWidth> out;
    for (int k = 0; k < 5; ++k) {
        PeakWidth peak;
        peak.area_over_pi = 2.0 * k + 1.0;
        peak.peak_rabi = amplitude_for_area(shape, width, cut, peak.area_over_pi * std::numbers::pi);
        if (peak.peak_rabi < lo || peak.peak_rabi > hi) continue;
        const auto profile = spectral_profile(PulseSpec(shape, width, peak.peak_rabi, cut), detunings, options);
        try {
            peak.width = fwhm(profile);
        } catch (const Inconclusive& e) {
            peak.failure = e.what();
        }
        out.push_back(std::move(peak));
    }
    return out;
}

std::vector<CutoffLevel> cutoff_study(const Shape& shape, double width, std::span<const double> cuts,
                                      std::span<const double> rabi_amplitudes,
                                      std::span<const double> detunings, const SweepOptions& options) {
    if (cuts.empty()) {
        throw InvalidArgument("cutoff list is empty");
    }
    std::vector<CutoffLevel> out;
    out.reserve(cuts.size());
    for (const double cut : cuts) {
        CutoffLevel level;
        level.cutoff_fraction = cut;
        level.landscape = excitation_landscape(shape, width, cut, rabi_amplitudes, detunings, options);
        level.peaks = peak_widths(shape, width, cut, rabi_amplitudes, detunings, options);
        out.push_back(std::move(level));
    }
    return out;
}

double ResidualEnvelope::envelope_at(double detuning) const {
    return std::exp(fit.intercept) * std::pow(detuning, -fit.exponent);
}

ResidualEnvelope truncation_residual(const PulseSpec& spec, double reference_cut, double low, double high,
                                     const SweepOptions& options, std::size_t points) {
    if (!(low > 0.0 && high > low)) {
        throw InvalidArgument("detuning window must satisfy 0 < low < high");
    }
    if (!(reference_cut <= spec.cutoff_fraction())) {
        throw InvalidArgument("reference cutoff must not exceed the pulse cutoff");
    }
    const PulseSpec reference = spec.with_cutoff_fraction(reference_cut);
    if (points == 0) {
        // The two edge jumps interfere with phase 2 Delta t_c.
        const double period = std::numbers::pi / spec.half_duration();
        points = std::max<std::size_t>(200, static_cast<std::size_t>(std::ceil(16.0 * (high - low) / period)) + 1);
    }
    require_budget(points, options);

    ResidualEnvelope out;
    out.edge_rabi = spec.edge_rabi();
    out.detunings.resize(points);
    for (std::size_t i = 0; i < points; ++i) {
        out.detunings[i] = low + (high - low) * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    const auto truncated = spectral_profile(spec, out.detunings, options);
    const auto untruncated = spectral_profile(reference, out.detunings, options);
    out.excess.resize(points);
    double largest = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
        out.excess[i] = truncated.probabilities[i] - untruncated.probabilities[i];
        largest = std::max(largest, std::abs(out.excess[i]));
    }
    if (largest < 1e-6) {
        throw Inconclusive("truncation excess is below 1e-6 across the window");
    }

    std::vector<ScalingPoint> crests;
    const auto& e = out.excess;
    const auto& d = out.detunings;
    for (std::size_t i = 1; i + 1 < points; ++i) {
        if (!(e[i] > e[i - 1] && e[i] >= e[i + 1] && e[i] > 0.0)) continue;
        // Vertex of the parabola through the three samples.
        const double curvature = e[i - 1] - 2.0 * e[i] + e[i + 1];
        double x = d[i];
        double y = e[i];
        if (curvature < 0.0) {
            const double offset = 0.5 * (e[i - 1] - e[i + 1]) / curvature;
            const double step = d[i + 1] - d[i];
            x = d[i] + offset * step;
            y = e[i] - 0.25 * (e[i - 1] - e[i + 1]) * offset;
        }
        out.crest_detunings.push_back(x);
        out.crest_values.push_back(y);
        crests.push_back({x, y});
    }
    if (crests.size() < 3) {
        throw Inconclusive("fewer than three oscillation crests in the detuning window");
    }
    out.fit = fit_scaling(crests);
    return out;
}

double truncation_residual_slope(const PulseSpec& spec, double reference_cut, double low, double high,
                                 const SweepOptions& options) {
    return truncation_residual(spec, reference_cut, low, high, options).slope();
}

}  // namespace pnarrow
