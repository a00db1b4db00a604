#include "pnarrow/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pnarrow/errors.hpp"
#include "pnarrow/units.hpp"

namespace pnarrow::io {

namespace {

std::string printf_string(const char* format, double value) {
    std::array<char, 64> buffer{};
    const int written = std::snprintf(buffer.data(), buffer.size(), format, value);
    return std::string(buffer.data(), static_cast<std::size_t>(std::max(written, 0)));
}

double parse_double(const std::string& field) {
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(field, &consumed);
    } catch (const std::exception&) {
        throw InvalidArgument("not a number: '" + field + "'");
    }
    if (consumed != field.size()) {
        throw InvalidArgument("trailing characters in number: '" + field + "'");
    }
    return value;
}

std::vector<double> to_mhz(const std::vector<double>& rad_per_ns) {
    std::vector<double> out;
    out.reserve(rad_per_ns.size());
    for (const double v : rad_per_ns) out.push_back(rad_per_ns_to_mhz(v));
    return out;
}

std::vector<double> from_mhz(const std::vector<double>& mhz) {
    std::vector<double> out;
    out.reserve(mhz.size());
    for (const double v : mhz) out.push_back(mhz_to_rad_per_ns(v));
    return out;
}

std::string fixed(double value) { return printf_string("%.2f", value); }

std::string tick_label(double value) { return printf_string("%.4g", value); }

std::string escape_xml(std::string_view text) {
    std::string out;
    for (const char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// Viridis, sampled at five anchors.
std::string colour(double value) {
    static constexpr std::array<std::array<double, 3>, 5> anchors{{
        {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
    const double v = std::clamp(value, 0.0, 1.0) * (anchors.size() - 1);
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(v), anchors.size() - 2);
    const double f = v - static_cast<double>(i);
    std::array<int, 3> rgb{};
    for (std::size_t k = 0; k < 3; ++k) {
        rgb[k] = static_cast<int>(std::lround(anchors[i][k] + f * (anchors[i + 1][k] - anchors[i][k])));
    }
    std::array<char, 8> buffer{};
    std::snprintf(buffer.data(), buffer.size(), "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
    return buffer.data();
}

struct Frame {
    double left = 80.0;
    double top = 40.0;
    double width = 520.0;
    double height = 380.0;
};

void svg_open(std::ostringstream& out, const std::string& title, const std::string& metadata) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"680\" height=\"500\" "
           "viewBox=\"0 0 680 500\">\n"
        << "<metadata>" << escape_xml(metadata) << "</metadata>\n"
        << "<rect x=\"0\" y=\"0\" width=\"680\" height=\"500\" fill=\"#ffffff\"/>\n"
        << "<text x=\"340\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">"
        << escape_xml(title) << "</text>\n";
}

void svg_axes(std::ostringstream& out, const Frame& f, double x0, double x1, double y0, double y1,
              const std::string& x_label, const std::string& y_label) {
    out << "<rect x=\"" << fixed(f.left) << "\" y=\"" << fixed(f.top) << "\" width=\"" << fixed(f.width)
        << "\" height=\"" << fixed(f.height) << "\" fill=\"none\" stroke=\"#000000\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double fx = f.left + f.width * k / 4.0;
        const double fy = f.top + f.height - f.height * k / 4.0;
        out << "<line x1=\"" << fixed(fx) << "\" y1=\"" << fixed(f.top + f.height) << "\" x2=\"" << fixed(fx)
            << "\" y2=\"" << fixed(f.top + f.height + 5) << "\" stroke=\"#000000\"/>\n"
            << "<text x=\"" << fixed(fx) << "\" y=\"" << fixed(f.top + f.height + 18)
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
            << tick_label(x0 + (x1 - x0) * k / 4.0) << "</text>\n"
            << "<line x1=\"" << fixed(f.left - 5) << "\" y1=\"" << fixed(fy) << "\" x2=\"" << fixed(f.left)
            << "\" y2=\"" << fixed(fy) << "\" stroke=\"#000000\"/>\n"
            << "<text x=\"" << fixed(f.left - 8) << "\" y=\"" << fixed(fy + 4)
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
            << tick_label(y0 + (y1 - y0) * k / 4.0) << "</text>\n";
    }
    out << "<text x=\"" << fixed(f.left + f.width / 2) << "\" y=\"" << fixed(f.top + f.height + 40)
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">" << escape_xml(x_label)
        << "</text>\n"
        << "<text x=\"20\" y=\"" << fixed(f.top + f.height / 2)
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
        << fixed(f.top + f.height / 2) << ")\">" << escape_xml(y_label) << "</text>\n";
}

}  // namespace

std::size_t CsvTable::column(std::string_view name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw InvalidArgument("CSV has no column '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
}

double CsvTable::number(std::size_t row, std::string_view name) const {
    return parse_double(rows.at(row).at(column(name)));
}

std::string format_probability(double p) { return printf_string("%.9g", p); }

std::string format_number(double x) { return printf_string("%.17g", x); }

std::string to_csv(const CsvTable& table) {
    std::string out;
    const auto append_row = [&](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out += ',';
            out += fields[i];
        }
        out += '\n';
    };
    append_row(table.header);
    for (const auto& row : table.rows) append_row(row);
    return out;
}

CsvTable parse_csv(std::string_view text) {
    CsvTable table;
    std::size_t pos = 0;
    bool first = true;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (;;) {
            const std::size_t comma = line.find(',', start);
            fields.emplace_back(line.substr(start, comma == std::string_view::npos ? line.size() - start : comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (first) {
            table.header = std::move(fields);
            first = false;
        } else {
            if (fields.size() != table.header.size()) {
                throw InvalidArgument("CSV row has " + std::to_string(fields.size()) + " fields, header has " +
                                      std::to_string(table.header.size()));
            }
            table.rows.push_back(std::move(fields));
        }
    }
    if (first) {
        throw InvalidArgument("CSV is empty");
    }
    return table;
}

CsvTable landscape_table(const Landscape& landscape) {
    CsvTable table;
    table.header = {"omega0_MHz", "delta_MHz", "p"};
    table.rows.reserve(landscape.probabilities.size());
    for (std::size_t r = 0; r < landscape.rabi_amplitudes.size(); ++r) {
        const std::string omega = format_number(rad_per_ns_to_mhz(landscape.rabi_amplitudes[r]));
        for (std::size_t c = 0; c < landscape.detunings.size(); ++c) {
            table.rows.push_back({omega, format_number(rad_per_ns_to_mhz(landscape.detunings[c])),
                                  format_probability(landscape.at(r, c))});
        }
    }
    return table;
}

Landscape landscape_from_table(const CsvTable& table, const Shape& shape, double width, double cut) {
    const std::size_t omega_col = table.column("omega0_MHz");
    const std::size_t delta_col = table.column("delta_MHz");
    const std::size_t p_col = table.column("p");
    Landscape out;
    out.shape = shape;
    out.width = width;
    out.cutoff_fraction = cut;
    const std::string* previous = nullptr;
    for (const auto& row : table.rows) {
        if (!previous || row[omega_col] != *previous) {
            out.rabi_amplitudes.push_back(mhz_to_rad_per_ns(parse_double(row[omega_col])));
            previous = &row[omega_col];
        }
        if (out.rabi_amplitudes.size() == 1) {
            out.detunings.push_back(mhz_to_rad_per_ns(parse_double(row[delta_col])));
        }
        out.probabilities.push_back(parse_double(row[p_col]));
    }
    if (out.probabilities.size() != out.rabi_amplitudes.size() * out.detunings.size()) {
        throw InvalidArgument("landscape CSV is not a complete rectangular grid");
    }
    return out;
}

CsvTable profile_table(const SpectralProfile& profile) {
    CsvTable table;
    table.header = {"delta_MHz", "p"};
    for (std::size_t i = 0; i < profile.detunings.size(); ++i) {
        table.rows.push_back({format_number(rad_per_ns_to_mhz(profile.detunings[i])),
                              format_probability(profile.probabilities[i])});
    }
    return table;
}

Json to_json(const PulseSpec& spec) {
    Json j;
    j["shape"] = spec.shape().name();
    j["n"] = spec.shape().power();
    j["T_ns"] = spec.width();
    j["peak_rabi_MHz"] = rad_per_ns_to_mhz(spec.peak_rabi());
    j["cut"] = spec.cutoff_fraction();
    if (spec.duration_override()) j["duration_ns"] = *spec.duration_override();
    return j;
}

PulseSpec pulse_spec_from_json(const Json& j) {
    std::optional<double> duration;
    if (j.contains("duration_ns")) duration = j.at("duration_ns").get<double>();
    return PulseSpec(shape_from_name(j.at("shape").get<std::string>(), j.value("n", 1.0)), j.at("T_ns").get<double>(),
                     mhz_to_rad_per_ns(j.at("peak_rabi_MHz").get<double>()), j.at("cut").get<double>(), duration);
}

Json to_json(const SpectralProfile& profile) {
    Json j;
    j["spec"] = to_json(profile.spec);
    j["area_rad"] = profile.area;
    j["delta_MHz"] = to_mhz(profile.detunings);
    j["p"] = profile.probabilities;
    return j;
}

SpectralProfile profile_from_json(const Json& j) {
    SpectralProfile out{from_mhz(j.at("delta_MHz").get<std::vector<double>>()), j.at("p").get<std::vector<double>>(),
                        pulse_spec_from_json(j.at("spec")), j.at("area_rad").get<double>()};
    if (out.detunings.size() != out.probabilities.size()) {
        throw InvalidArgument("profile axes differ in length");
    }
    return out;
}

Json to_json(const Landscape& landscape) {
    Json j;
    j["shape"] = landscape.shape.name();
    j["n"] = landscape.shape.power();
    j["T_ns"] = landscape.width;
    j["cut"] = landscape.cutoff_fraction;
    j["omega0_MHz"] = to_mhz(landscape.rabi_amplitudes);
    j["delta_MHz"] = to_mhz(landscape.detunings);
    Json rows = Json::array();
    for (std::size_t r = 0; r < landscape.rabi_amplitudes.size(); ++r) {
        const auto row = landscape.row(r);
        rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    j["p"] = std::move(rows);
    return j;
}

Landscape landscape_from_json(const Json& j) {
    Landscape out;
    out.shape = shape_from_name(j.at("shape").get<std::string>(), j.value("n", 1.0));
    out.width = j.at("T_ns").get<double>();
    out.cutoff_fraction = j.at("cut").get<double>();
    out.rabi_amplitudes = from_mhz(j.at("omega0_MHz").get<std::vector<double>>());
    out.detunings = from_mhz(j.at("delta_MHz").get<std::vector<double>>());
    const auto& rows = j.at("p");
    if (rows.size() != out.rabi_amplitudes.size()) {
        throw InvalidArgument("landscape row count does not match the Rabi axis");
    }
    for (const auto& row : rows) {
        auto values = row.get<std::vector<double>>();
        if (values.size() != out.detunings.size()) {
            throw InvalidArgument("landscape row length does not match the detuning axis");
        }
        out.probabilities.insert(out.probabilities.end(), values.begin(), values.end());
    }
    return out;
}

Json to_json(const FwhmResult& result) {
    Json j;
    j["peak_delta_MHz"] = rad_per_ns_to_mhz(result.peak_detuning);
    j["peak_p"] = result.peak_probability;
    j["left_MHz"] = rad_per_ns_to_mhz(result.left_cross);
    j["right_MHz"] = rad_per_ns_to_mhz(result.right_cross);
    j["fwhm_MHz"] = rad_per_ns_to_mhz(result.fwhm);
    return j;
}

FwhmResult fwhm_from_json(const Json& j) {
    FwhmResult out;
    out.peak_detuning = mhz_to_rad_per_ns(j.at("peak_delta_MHz").get<double>());
    out.peak_probability = j.at("peak_p").get<double>();
    out.left_cross = mhz_to_rad_per_ns(j.at("left_MHz").get<double>());
    out.right_cross = mhz_to_rad_per_ns(j.at("right_MHz").get<double>());
    out.fwhm = mhz_to_rad_per_ns(j.at("fwhm_MHz").get<double>());
    return out;
}

Json to_json(const ScalingFit& fit) {
    Json j;
    j["exponent"] = fit.exponent;
    j["intercept"] = fit.intercept;
    j["r_squared"] = fit.r_squared;
    j["points"] = fit.points;
    return j;
}

ScalingFit scaling_fit_from_json(const Json& j) {
    ScalingFit fit;
    fit.exponent = j.at("exponent").get<double>();
    fit.intercept = j.at("intercept").get<double>();
    fit.r_squared = j.at("r_squared").get<double>();
    fit.points = j.at("points").get<std::size_t>();
    return fit;
}

Json export_document(const PulseSpec& spec, const SampledPulse& pulse, double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw InvalidArgument("amplitude scale must be positive");
    }
    std::vector<double> normalized;
    normalized.reserve(pulse.samples.size());
    for (const double v : pulse.samples) {
        const double a = v / scale;
        if (a > 1.0 + 1e-12) {
            throw InvalidArgument("amplitude scale is below the pulse peak; samples would exceed 1");
        }
        normalized.push_back(std::min(a, 1.0));
    }
    Json j;
    j["dt_ns"] = pulse.dt;
    j["samples"] = std::move(normalized);
    Json meta;
    meta["shape"] = spec.shape().name();
    meta["n"] = spec.shape().power();
    meta["T_ns"] = spec.width();
    meta["cut"] = spec.cutoff_fraction();
    meta["area_rad"] = pulse_area(spec);
    meta["scale_MHz"] = rad_per_ns_to_mhz(scale);
    meta["start_ns"] = pulse.start_time;
    meta["mode"] = pulse.mode == SampleMode::Midpoint ? "midpoint" : "endpoint";
    j["metadata"] = std::move(meta);
    return j;
}

SampledPulse samples_from_document(const Json& document) {
    SampledPulse out;
    out.dt = document.at("dt_ns").get<double>();
    const auto& meta = document.at("metadata");
    const double scale = mhz_to_rad_per_ns(meta.at("scale_MHz").get<double>());
    out.start_time = meta.value("start_ns", 0.0);
    out.mode = meta.value("mode", std::string("midpoint")) == "endpoint" ? SampleMode::Endpoint : SampleMode::Midpoint;
    for (const auto& v : document.at("samples")) out.samples.push_back(v.get<double>() * scale);
    return out;
}

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0x0f];
    }
    return out;
}

std::string heatmap_svg(const Landscape& landscape, const std::string& title, const std::string& metadata) {
    const Frame f;
    const auto x = to_mhz(landscape.detunings);
    const auto y = to_mhz(landscape.rabi_amplitudes);
    std::ostringstream out;
    svg_open(out, title, metadata);
    const double cell_w = f.width / static_cast<double>(x.size());
    const double cell_h = f.height / static_cast<double>(y.size());
    for (std::size_t r = 0; r < y.size(); ++r) {
        const double top = f.top + f.height - (static_cast<double>(r) + 1.0) * cell_h;
        for (std::size_t c = 0; c < x.size(); ++c) {
            out << "<rect x=\"" << fixed(f.left + static_cast<double>(c) * cell_w) << "\" y=\"" << fixed(top)
                << "\" width=\"" << fixed(cell_w + 0.05) << "\" height=\"" << fixed(cell_h + 0.05) << "\" fill=\""
                << colour(landscape.at(r, c)) << "\"/>\n";
        }
    }
    svg_axes(out, f, x.front(), x.back(), y.front(), y.back(), "Δ/2π (MHz)", "Ω₀/2π (MHz)");
    out << "</svg>\n";
    return out.str();
}

std::string line_plot_svg(const std::vector<PlotSeries>& series, const std::string& title,
                          const std::string& x_label, const std::string& y_label, const std::string& metadata) {
    static constexpr std::array<const char*, 6> palette{"#d62728", "#1f77b4", "#8c564b",
                                                        "#2ca02c", "#9467bd", "#ff7f0e"};
    const Frame f;
    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
    bool any = false;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!any) {
                x0 = x1 = s.x[i];
                y1 = s.y[i];
                any = true;
            }
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y1 = std::max(y1, s.y[i]);
        }
    }
    y0 = 0.0;
    if (x1 == x0) x1 = x0 + 1.0;
    if (y1 <= y0) y1 = y0 + 1.0;
    std::ostringstream out;
    svg_open(out, title, metadata);
    svg_axes(out, f, x0, x1, y0, y1, x_label, y_label);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        out << "<polyline fill=\"none\" stroke=\"" << palette[k % palette.size()] << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (i) out << ' ';
            out << fixed(f.left + (s.x[i] - x0) / (x1 - x0) * f.width) << ','
                << fixed(f.top + f.height - (s.y[i] - y0) / (y1 - y0) * f.height);
        }
        out << "\"/>\n"
            << "<text x=\"" << fixed(f.left + f.width - 8) << "\" y=\"" << fixed(f.top + 16 + 16.0 * k)
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\" fill=\""
            << palette[k % palette.size()] << "\">" << escape_xml(s.label) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

void write_text(const std::filesystem::path& path, std::string_view content) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    file.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!file) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return buffer.str();
}

}  // namespace pnarrow::io
