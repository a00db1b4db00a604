#include "pnarrow/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "pnarrow/errors.hpp"

namespace pnarrow {

namespace {

// Tables above this many entries are recomputed rather than cached.
constexpr std::size_t kMaxCachedSteps = std::size_t{1} << 23;

void require_detuning(double detuning) {
    if (!std::isfinite(detuning)) {
        throw InvalidArgument("detuning must be finite");
    }
}

// Step boundaries are uniform in s with t = T sinh(s), so steps near the
// core have length ~ core_step and grow linearly with |t| in the tails.
StepGrid graded_grid(const Shape& shape, double width, double half_duration, std::size_t steps) {
    StepGrid grid;
    grid.envelope.resize(steps);
    grid.length.resize(steps);
    const double s_edge = std::asinh(half_duration / width);
    const double ds = 2.0 * s_edge / static_cast<double>(steps);
    const auto boundary = [&](std::size_t k) {
        if (k == 0) return -half_duration;
        if (k == steps) return half_duration;
        return width * std::sinh(-s_edge + static_cast<double>(k) * ds);
    };
    // The envelope and the mesh are even; fill the first half and mirror.
    const std::size_t half = (steps + 1) / 2;
    for (std::size_t k = 0; k < half; ++k) {
        const double left = boundary(k);
        const double right = (2 * k + 1 == steps) ? -left : boundary(k + 1);
        const double v = shape_value(shape, width, 0.5 * (left + right));
        const double h = right - left;
        grid.envelope[k] = grid.envelope[steps - 1 - k] = v;
        grid.length[k] = grid.length[steps - 1 - k] = h;
    }
    return grid;
}

}  // namespace

EnvelopeTable::EnvelopeTable(Shape shape, double width, double half_duration)
    : shape_(shape), width_(width), half_duration_(half_duration) {}

std::shared_ptr<EnvelopeTable> EnvelopeTable::for_spec(const PulseSpec& spec) {
    return std::make_shared<EnvelopeTable>(spec.shape(), spec.width(), spec.half_duration());
}

bool EnvelopeTable::matches(const PulseSpec& spec) const noexcept {
    return spec.shape() == shape_ && spec.width() == width_ &&
           spec.half_duration() == half_duration_;
}

double EnvelopeTable::steps_for(double core_step) const {
    return 2.0 * std::asinh(half_duration_ / width_) * width_ / core_step;
}

std::shared_ptr<const StepGrid> EnvelopeTable::grid(std::size_t steps) const {
    {
        std::lock_guard lock(mutex_);
        if (auto it = cache_.find(steps); it != cache_.end()) return it->second;
    }
    auto values = std::make_shared<const StepGrid>(graded_grid(shape_, width_, half_duration_, steps));
    if (steps <= kMaxCachedSteps) {
        std::lock_guard lock(mutex_);
        cache_.emplace(steps, values);
    }
    return values;
}

Propagator::Propagator(PulseSpec spec, PropagationOptions options,
                       std::shared_ptr<EnvelopeTable> table)
    : spec_(std::move(spec)), options_(options), table_(std::move(table)) {
    if (options_.dt && !(*options_.dt > 0.0)) {
        throw InvalidArgument("step size must be positive");
    }
    if (!(options_.tolerance > 0.0)) {
        throw InvalidArgument("convergence tolerance must be positive");
    }
    if (options_.shot_noise && options_.shots < 1) {
        throw InvalidArgument("shot count must be positive");
    }
    if (!table_ || !table_->matches(spec_)) {
        table_ = EnvelopeTable::for_spec(spec_);
    }
    if (options_.hardware_mode) {
        SampleOptions sampling;
        sampling.dt = kHardwareDt;
        hardware_samples_ = sample(spec_, sampling);
    }
}

std::size_t Propagator::initial_steps() const {
    const double dt = options_.dt.value_or(std::min(kHardwareDt, spec_.width() / 200.0));
    const double exact = table_->steps_for(dt);
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(exact - 1e-9)));
}

TwoLevelState Propagator::evolve(double detuning, std::size_t steps) const {
    require_detuning(detuning);
    if (steps == 0) {
        throw InvalidArgument("step count must be positive");
    }
    if (steps > options_.max_steps) {
        throw ResourceLimit("propagation needs " + std::to_string(steps) +
                            " steps, above the cap of " + std::to_string(options_.max_steps));
    }
    const auto grid = table_->grid(steps);
    const double peak = spec_.peak_rabi();
    TwoLevelState state;
    for (std::size_t k = 0; k < steps; ++k) {
        apply_held_step(state, peak * grid->envelope[k], detuning, grid->length[k]);
    }
    return state;
}

PropagationResult Propagator::operator()(double detuning) const {
    require_detuning(detuning);
    PropagationResult result;
    if (hardware_samples_) {
        result = propagate_samples(*hardware_samples_, detuning);
    } else {
        std::size_t steps = initial_steps();
        TwoLevelState state = evolve(detuning, steps);
        if (options_.refine) {
            for (;;) {
                const std::size_t finer = 2 * steps;
                if (finer > options_.max_steps) {
                    throw ResourceLimit("no convergence to " + std::to_string(options_.tolerance) +
                                        " within " + std::to_string(options_.max_steps) + " steps");
                }
                const TwoLevelState next = evolve(detuning, finer);
                const double err = std::abs(next.excited() - state.excited());
                state = next;
                steps = finer;
                if (err < options_.tolerance) {
                    result.est_error = err;
                    break;
                }
            }
        } else {
            result.est_error = std::abs(evolve(detuning, 2 * steps).excited() - state.excited());
        }
        result.final_state = state;
        result.step_count = steps;
        result.p_excite = std::clamp(state.excited(), 0.0, 1.0);
    }
    if (options_.shot_noise) {
        result.p_excite = shot_average(result.p_excite, options_.shots, options_.seed);
    }
    return result;
}

PropagationResult propagate(const PulseSpec& spec, double detuning,
                            const PropagationOptions& options) {
    return Propagator(spec, options)(detuning);
}

PropagationResult propagate_samples(const SampledPulse& pulse, double detuning, double scale) {
    require_detuning(detuning);
    TwoLevelState state;
    const std::size_t count = pulse.interval_count();
    for (std::size_t i = 0; i < count; ++i) {
        apply_held_step(state, scale * pulse.interval_value(i), detuning, pulse.dt);
    }
    PropagationResult result;
    result.final_state = state;
    result.step_count = count;
    result.p_excite = std::clamp(state.excited(), 0.0, 1.0);
    return result;
}

double convergence_probe(const PulseSpec& spec, double detuning, double dt) {
    if (!(dt > 0.0)) {
        throw InvalidArgument("step size must be positive");
    }
    PropagationOptions options;
    options.dt = dt;
    options.refine = false;
    const Propagator propagator(spec, options);
    const std::size_t steps = propagator.initial_steps();
    return std::abs(propagator.evolve(detuning, steps).excited() -
                    propagator.evolve(detuning, 2 * steps).excited());
}

std::vector<TrajectoryPoint> trajectory(const PulseSpec& spec, double detuning, double dt) {
    require_detuning(detuning);
    if (!(dt > 0.0)) {
        throw InvalidArgument("step size must be positive");
    }
    const auto steps = static_cast<std::size_t>(std::ceil(spec.duration() / dt - 1e-9));
    const double h = spec.duration() / static_cast<double>(steps);
    std::vector<TrajectoryPoint> points;
    points.reserve(steps + 1);
    TwoLevelState state;
    double t = -spec.half_duration();
    points.push_back({t, 0.0});
    for (std::size_t k = 0; k < steps; ++k) {
        apply_held_step(state, spec.rabi(t + 0.5 * h), detuning, h);
        t = -spec.half_duration() + static_cast<double>(k + 1) * h;
        points.push_back({t, state.excited()});
    }
    return points;
}

double rabi_rect_oracle(double peak_rabi, double detuning, double duration) {
    if (duration < 0.0) {
        throw InvalidArgument("duration must be non-negative");
    }
    const double w2 = peak_rabi * peak_rabi + detuning * detuning;
    if (w2 == 0.0) return 0.0;
    const double s = std::sin(0.5 * std::sqrt(w2) * duration);
    return peak_rabi * peak_rabi / w2 * s * s;
}

double rosen_zener_oracle(double peak_rabi, double width, double detuning) {
    if (!(width > 0.0)) {
        throw InvalidArgument("pulse width must be positive");
    }
    constexpr double pi = std::numbers::pi;
    const double s = std::sin(0.5 * pi * peak_rabi * width);
    const double sech = 1.0 / std::cosh(0.5 * pi * detuning * width);
    return s * s * sech * sech;
}

double shot_average(double p, int shots, std::uint64_t seed) {
    if (shots < 1) {
        throw InvalidArgument("shot count must be positive");
    }
    std::mt19937_64 rng(seed);
    std::binomial_distribution<int> draws(shots, std::clamp(p, 0.0, 1.0));
    return static_cast<double>(draws(rng)) / static_cast<double>(shots);
}

}  // namespace pnarrow
