#pragma once

// Sweep engine and line-shape measurements.
//
// Every grid cell is an independent propagation. Sweeps run on a worker pool
// and write results by cell index, so output is bit-identical for any worker
// count.

#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pnarrow/dynamics.hpp"
#include "pnarrow/errors.hpp"
#include "pnarrow/pulse.hpp"

namespace pnarrow {

struct SweepOptions {
    PropagationOptions propagation;
    /// 0 selects std::thread::hardware_concurrency().
    unsigned workers = 0;
    /// Upper bound on cells per sweep.
    std::size_t max_cells = 1'000'000;
};

/// A propagation inside a sweep failed; `index` is the flat grid index.
class GridError : public Error {
public:
    GridError(std::size_t index, std::exception_ptr cause, const std::string& what)
        : Error(what), index_(index), cause_(std::move(cause)) {}

    std::size_t index() const noexcept { return index_; }
    const std::exception_ptr& cause() const noexcept { return cause_; }

private:
    std::size_t index_;
    std::exception_ptr cause_;
};

unsigned resolve_workers(unsigned requested);

/// Calls body(i) for i in [0, count) on `workers` threads. The first failure
/// by index is rethrown as GridError after all workers finish.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body);

struct SpectralProfile {
    std::vector<double> detunings;      ///< rad/ns, strictly increasing
    std::vector<double> probabilities;
    PulseSpec spec;
    double area = 0.0;                  ///< rad
};

struct Landscape {
    Shape shape = Shape::gaussian();
    double width = 1.0;
    double cutoff_fraction = 1.0;
    std::vector<double> detunings;         ///< rad/ns
    std::vector<double> rabi_amplitudes;   ///< rad/ns
    /// Row-major [rabi][detuning].
    std::vector<double> probabilities;

    double at(std::size_t rabi_index, std::size_t detuning_index) const {
        return probabilities[rabi_index * detunings.size() + detuning_index];
    }
    std::span<const double> row(std::size_t rabi_index) const {
        return {probabilities.data() + rabi_index * detunings.size(), detunings.size()};
    }
    PulseSpec spec_for_row(std::size_t rabi_index) const {
        return PulseSpec(shape, width, rabi_amplitudes[rabi_index], cutoff_fraction);
    }
};

struct FwhmResult {
    double peak_detuning = 0.0;
    double peak_probability = 0.0;
    double left_cross = 0.0;
    double right_cross = 0.0;
    double fwhm = 0.0;
};

struct ScalingPoint {
    double rabi;   ///< peak Rabi frequency (any positive unit)
    double fwhm;   ///< same unit family
};

/// Least-squares line through (log rabi, log fwhm); exponent = -slope.
struct ScalingFit {
    double exponent = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t points = 0;
};

SpectralProfile spectral_profile(const PulseSpec& spec, std::span<const double> detunings,
                                 const SweepOptions& options = {});

Landscape excitation_landscape(const Shape& shape, double width, double cut,
                               std::span<const double> rabi_amplitudes,
                               std::span<const double> detunings, const SweepOptions& options = {});

/// Excitation vs peak Rabi frequency at one detuning.
std::vector<double> rabi_slice(const Shape& shape, double width, double cut, double detuning,
                               std::span<const double> rabi_amplitudes, const SweepOptions& options = {});

/// Central-lobe width at half of the profile's own maximum.
///
/// Walks outward from the global maximum to the first sample below half on
/// each side and interpolates linearly. Throws Inconclusive when the peak is
/// on the grid boundary or a side never drops below half.
FwhmResult fwhm(std::span<const double> detunings, std::span<const double> probabilities);
FwhmResult fwhm(const SpectralProfile& profile);

/// Width of a profile symmetric about zero detuning, found without a fixed
/// grid: the half-profile window adapts until the crossing is well resolved,
/// then the crossing is solved to relative accuracy `rel_tol`.
FwhmResult resolve_fwhm(const PulseSpec& spec, const SweepOptions& options = {},
                        double initial_half_window = 0.0, double rel_tol = 1e-6);

ScalingFit fit_scaling(std::span<const ScalingPoint> points);

struct PeakWidth {
    double area_over_pi = 0.0;
    double peak_rabi = 0.0;
    std::optional<FwhmResult> width;
    /// Why `width` is empty.
    std::string failure;
};

struct CutoffLevel {
    double cutoff_fraction = 0.0;
    Landscape landscape;
    std::vector<PeakWidth> peaks;
};

/// Profiles at areas pi, 3pi, ..., 9pi that fall inside [min, max] of the
/// Rabi grid, each measured on `detunings`.
std::vector<PeakWidth> peak_widths(const Shape& shape, double width, double cut,
                                   std::span<const double> rabi_amplitudes,
                                   std::span<const double> detunings, const SweepOptions& options = {});

std::vector<CutoffLevel> cutoff_study(const Shape& shape, double width, std::span<const double> cuts,
                                      std::span<const double> rabi_amplitudes,
                                      std::span<const double> detunings, const SweepOptions& options = {});

struct ResidualEnvelope {
    std::vector<double> detunings;       ///< rad/ns
    std::vector<double> excess;          ///< P(truncated) - P(reference)
    std::vector<double> crest_detunings; ///< local maxima of the excess
    std::vector<double> crest_values;
    double edge_rabi = 0.0;              ///< Omega_c of the truncated pulse
    ScalingFit fit;                      ///< log crest vs log detuning; slope = -fit.exponent

    double slope() const noexcept { return -fit.exponent; }
    /// Fitted crest envelope at `detuning`.
    double envelope_at(double detuning) const;
};

/// Far-wing excitation added by truncation, relative to a pulse truncated at
/// `reference_cut`, over detunings [low, high] (rad/ns). Points default to
/// 16 per oscillation period of the excess.
ResidualEnvelope truncation_residual(const PulseSpec& spec, double reference_cut, double low,
                                     double high, const SweepOptions& options = {},
                                     std::size_t points = 0);

double truncation_residual_slope(const PulseSpec& spec, double reference_cut, double low,
                                 double high, const SweepOptions& options = {});

}  // namespace pnarrow
