#pragma once

// Command-line front end. Every frequency accepted or written here is an
// ordinary frequency in MHz; widths and times are in ns.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pnarrow/io.hpp"

namespace pnarrow::cli {

struct RunConfig {
    std::string command;

    std::string shape = "lorentzian";
    std::vector<double> n{1.0};
    /// Unset: 21.33 ns, or the per-n widths in fwhm-table.
    std::optional<double> width_ns;
    double cut = 0.005;
    std::vector<double> cuts{0.5, 0.03, 0.005};

    double delta_min_mhz = -35.0;
    double delta_max_mhz = 35.0;
    int delta_steps = 141;
    /// Fixed detuning of `slice`.
    double delta_mhz = 12.5;

    /// Unset: the amplitude giving area 10 pi, and rabi_max / rabi_steps.
    std::optional<double> rabi_min_mhz;
    std::optional<double> rabi_max_mhz;
    int rabi_steps = 100;
    /// Pulse areas in units of pi; empty selects the command default.
    std::vector<double> areas;

    bool hardware = false;
    bool shot_noise = false;
    int shots = 1024;
    std::uint64_t seed = 0;
    unsigned workers = 0;

    double dt_ns = 2.0 / 9.0;
    /// Export normalization; unset uses the pulse peak.
    std::optional<double> scale_mhz;
    int granularity = 1;
    std::size_t max_samples = 1'000'000;

    std::string out;
    std::string json;
    std::string svg;
};

io::Json to_json(const RunConfig& config);
/// Overlays the keys present in `j` on `base`.
RunConfig config_from_json(const io::Json& j, RunConfig base = {});

/// Pulse width used for Lorentzian power n when no width is given.
double default_width(double n);

/// Fills the command-dependent defaults that a bare RunConfig leaves open.
RunConfig resolve(RunConfig config);

/// Exit codes: 0 success, 1 computation or I/O failure, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pnarrow::cli
