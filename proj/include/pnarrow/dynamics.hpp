#pragma once

// Coherent two-level propagation through a pulse at fixed detuning.
//
// Rotating frame, rotating-wave approximation, real coupling, hbar = 1:
//
//     H(t) = 1/2 [[-Delta, Omega(t)], [Omega(t), Delta]]
//
// The pulse is held constant on each step and the exact 2x2 unitary of the
// held Hamiltonian is applied, so evolution is unitary by construction and
// exact for rectangular pulses.

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "pnarrow/pulse.hpp"

namespace pnarrow {

struct TwoLevelState {
    std::complex<double> c0{1.0, 0.0};
    std::complex<double> c1{0.0, 0.0};

    double norm() const noexcept { return std::norm(c0) + std::norm(c1); }
    double excited() const noexcept { return std::norm(c1); }
};

struct PropagationResult {
    double p_excite = 0.0;
    TwoLevelState final_state;
    std::size_t step_count = 0;
    /// |p(dt) - p(dt/2)| at the accepted step.
    double est_error = 0.0;
};

struct PropagationOptions {
    /// Initial step at the pulse centre (ns). Defaults to min(2/9 ns, T/200).
    std::optional<double> dt;
    /// Halve the step until the step-halving estimate drops below tolerance.
    bool refine = true;
    double tolerance = 1e-8;
    /// Propagate the 2/9 ns zero-order-hold samples, no refinement.
    bool hardware_mode = false;
    std::size_t max_steps = std::size_t{1} << 25;

    /// Replace p by the mean of `shots` Bernoulli draws.
    bool shot_noise = false;
    int shots = 1024;
    std::uint64_t seed = 0;
};

/// Applies the exact propagator of the held Hamiltonian over one step.
inline void apply_held_step(TwoLevelState& state, double omega, double delta, double h) noexcept {
    const double splitting = std::sqrt(omega * omega + delta * delta);
    const double theta = 0.5 * splitting * h;
    const double c = std::cos(theta);
    const double s = splitting > 0.0 ? std::sin(theta) / splitting : 0.5 * h;
    const std::complex<double> diag_plus{c, s * delta};
    const std::complex<double> diag_minus{c, -s * delta};
    const std::complex<double> off{0.0, -s * omega};
    const auto a = state.c0;
    const auto b = state.c1;
    state.c0 = diag_plus * a + off * b;
    state.c1 = off * a + diag_minus * b;
}

/// Held steps over the support: envelope f at each step midpoint and the
/// step length (ns).
struct StepGrid {
    std::vector<double> envelope;
    std::vector<double> length;
};

/// Step grids over the support, cached per step count.
///
/// Steps are graded: the step at the pulse centre is the nominal step and
/// steps grow in proportion to |t| in the wings, where the envelope varies
/// slowly. Grids do not depend on the peak Rabi frequency, so one table
/// serves every row of a landscape. Thread-safe.
class EnvelopeTable {
public:
    EnvelopeTable(Shape shape, double width, double half_duration);

    static std::shared_ptr<EnvelopeTable> for_spec(const PulseSpec& spec);

    bool matches(const PulseSpec& spec) const noexcept;
    std::shared_ptr<const StepGrid> grid(std::size_t steps) const;
    /// Step count (fractional) whose central step equals `core_step`.
    double steps_for(double core_step) const;
    double half_duration() const noexcept { return half_duration_; }

private:
    Shape shape_;
    double width_;
    double half_duration_;
    mutable std::mutex mutex_;
    mutable std::map<std::size_t, std::shared_ptr<const StepGrid>> cache_;
};

/// Reusable propagator bound to one pulse.
class Propagator {
public:
    explicit Propagator(PulseSpec spec, PropagationOptions options = {},
                        std::shared_ptr<EnvelopeTable> table = nullptr);

    PropagationResult operator()(double detuning) const;

    /// Evolution with exactly `steps` graded held steps over the support.
    TwoLevelState evolve(double detuning, std::size_t steps) const;

    std::size_t initial_steps() const;
    const PulseSpec& spec() const noexcept { return spec_; }
    const PropagationOptions& options() const noexcept { return options_; }

private:
    PulseSpec spec_;
    PropagationOptions options_;
    std::shared_ptr<EnvelopeTable> table_;
    std::optional<SampledPulse> hardware_samples_;
};

/// One-shot convenience around Propagator.
PropagationResult propagate(const PulseSpec& spec, double detuning,
                            const PropagationOptions& options = {});

/// Propagates held samples; `scale` converts stored amplitudes to rad/ns.
PropagationResult propagate_samples(const SampledPulse& pulse, double detuning, double scale = 1.0);

/// Step-halving estimate |p(dt) - p(dt/2)|.
double convergence_probe(const PulseSpec& spec, double detuning, double dt);

struct TrajectoryPoint {
    double time;
    double p_excite;
};

/// Excited-state population after every held step (transient excitation).
std::vector<TrajectoryPoint> trajectory(const PulseSpec& spec, double detuning, double dt);

/// Exact flat-pulse solution.
double rabi_rect_oracle(double peak_rabi, double detuning, double duration);

/// Exact solution for an untruncated Omega_0 sech(t/T) pulse.
double rosen_zener_oracle(double peak_rabi, double width, double detuning);

/// Mean of `shots` Bernoulli(p) outcomes from a generator seeded with `seed`.
double shot_average(double p, int shots, std::uint64_t seed);

}  // namespace pnarrow
