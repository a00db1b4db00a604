#pragma once

// CSV, JSON and SVG artifacts. Frequencies in every artifact are ordinary
// frequencies in MHz; conversion to rad/ns happens in units.hpp only.
//
// CSV: comma separated, header row, '.' decimal point, LF line endings.
// Probabilities carry 9 significant digits, axis values 17 (round-trip).

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pnarrow/pulse.hpp"
#include "pnarrow/spectro.hpp"

namespace pnarrow::io {

using Json = nlohmann::ordered_json;

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column; throws InvalidArgument if missing.
    std::size_t column(std::string_view name) const;
    double number(std::size_t row, std::string_view name) const;
};

std::string format_probability(double p);
std::string format_number(double x);

std::string to_csv(const CsvTable& table);
CsvTable parse_csv(std::string_view text);

/// Long format `omega0_MHz,delta_MHz,p`, one row per cell, rabi-major.
CsvTable landscape_table(const Landscape& landscape);
/// Inverse of landscape_table; the pulse geometry is supplied separately.
Landscape landscape_from_table(const CsvTable& table, const Shape& shape, double width, double cut);

/// `delta_MHz,p`.
CsvTable profile_table(const SpectralProfile& profile);

Json to_json(const PulseSpec& spec);
PulseSpec pulse_spec_from_json(const Json& j);
Json to_json(const SpectralProfile& profile);
SpectralProfile profile_from_json(const Json& j);
Json to_json(const Landscape& landscape);
Landscape landscape_from_json(const Json& j);
Json to_json(const FwhmResult& result);
FwhmResult fwhm_from_json(const Json& j);
Json to_json(const ScalingFit& fit);
ScalingFit scaling_fit_from_json(const Json& j);

/// Hardware-style sample document:
/// {dt_ns, samples: [amplitude / scale], metadata: {shape, n, T_ns, cut, area_rad, ...}}.
Json export_document(const PulseSpec& spec, const SampledPulse& pulse, double scale);
/// Rebuilds the held pulse in rad/ns (samples multiplied back by the scale).
SampledPulse samples_from_document(const Json& document);

std::string sha256_hex(std::string_view data);

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Heatmap of a landscape: Delta/2pi (MHz) horizontal, Omega0/2pi (MHz) vertical.
std::string heatmap_svg(const Landscape& landscape, const std::string& title, const std::string& metadata);
std::string line_plot_svg(const std::vector<PlotSeries>& series, const std::string& title,
                          const std::string& x_label, const std::string& y_label, const std::string& metadata);

/// Writes `content`; throws IoError on failure.
void write_text(const std::filesystem::path& path, std::string_view content);
std::string read_text(const std::filesystem::path& path);

}  // namespace pnarrow::io
