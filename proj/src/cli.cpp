#include "pnarrow/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>

#include "pnarrow/adiabatic.hpp"
#include "pnarrow/errors.hpp"
#include "pnarrow/spectro.hpp"
#include "pnarrow/units.hpp"
#include "pnarrow/verify.hpp"

namespace pnarrow::cli {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double kDefaultWidth = 21.33;

class UsageError : public Error {
public:
    using Error::Error;
};

template <class T>
io::Json optional_json(const std::optional<T>& v) {
    return v ? io::Json(*v) : io::Json(nullptr);
}

template <class T>
void read_optional(const io::Json& j, const char* key, std::optional<T>& target) {
    if (!j.contains(key)) return;
    if (j.at(key).is_null()) {
        target.reset();
    } else {
        target = j.at(key).get<T>();
    }
}

template <class T>
void read(const io::Json& j, const char* key, T& target) {
    if (j.contains(key)) target = j.at(key).get<T>();
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return out;
}

Shape shape_for(const RunConfig& c, double n) { return shape_from_name(c.shape, n); }

double width_for(const RunConfig& c, double n) { return c.width_ns.value_or(default_width(n)); }

SweepOptions sweep_options(const RunConfig& c) {
    SweepOptions o;
    o.workers = c.workers;
    o.propagation.hardware_mode = c.hardware;
    o.propagation.shot_noise = c.shot_noise;
    o.propagation.shots = c.shots;
    o.propagation.seed = c.seed;
    return o;
}

std::vector<double> detuning_grid(const RunConfig& c) {
    std::vector<double> out;
    for (const double mhz : linspace(c.delta_min_mhz, c.delta_max_mhz, c.delta_steps)) {
        out.push_back(mhz_to_rad_per_ns(mhz));
    }
    return out;
}

double rabi_for_area(const RunConfig& c, double n, double cut, double area_over_pi) {
    return amplitude_for_area(shape_for(c, n), width_for(c, n), cut, area_over_pi * pi);
}

std::vector<double> rabi_grid(const RunConfig& c, double n, double cut) {
    const double top = c.rabi_max_mhz ? mhz_to_rad_per_ns(*c.rabi_max_mhz) : rabi_for_area(c, n, cut, 10.0);
    const double bottom = c.rabi_min_mhz ? mhz_to_rad_per_ns(*c.rabi_min_mhz) : top / c.rabi_steps;
    if (!(top > bottom)) {
        throw UsageError("--rabi-max must exceed --rabi-min");
    }
    return linspace(bottom, top, c.rabi_steps);
}

void validate(const RunConfig& c) {
    if (c.n.empty()) throw UsageError("--n needs at least one value");
    if (c.width_ns && !(*c.width_ns > 0.0)) throw UsageError("--T must be positive");
    if (!(c.cut > 0.0 && c.cut <= 1.0)) throw UsageError("--cut must lie in (0, 1]");
    for (const double cut : c.cuts) {
        if (!(cut > 0.0 && cut <= 1.0)) throw UsageError("--cuts entries must lie in (0, 1]");
    }
    if (c.delta_steps < 2) throw UsageError("--delta-steps must be at least 2");
    if (!(c.delta_max_mhz > c.delta_min_mhz)) throw UsageError("--delta-max must exceed --delta-min");
    if (c.rabi_steps < 2) throw UsageError("--rabi-steps must be at least 2");
    if (c.rabi_min_mhz && *c.rabi_min_mhz < 0.0) throw UsageError("--rabi-min must be non-negative");
    for (const double a : c.areas) {
        if (!(a > 0.0)) throw UsageError("--areas entries must be positive");
    }
    if (c.shots < 1) throw UsageError("--shots must be positive");
    if (!(c.dt_ns > 0.0)) throw UsageError("--dt must be positive");
    if (c.scale_mhz && !(*c.scale_mhz > 0.0)) throw UsageError("--scale must be positive");
    if (c.granularity < 1) throw UsageError("--granularity must be positive");
}

// ---- output --------------------------------------------------------------

io::Json provenance(const RunConfig& c, std::string_view content) {
    io::Json j;
    j["config"] = to_json(c);
    j["sha256"] = io::sha256_hex(content);
    return j;
}

struct Outputs {
    const RunConfig& config;
    std::ostream& out;
    std::string csv_text;

    void csv(const io::CsvTable& table) {
        csv_text = io::to_csv(table);
        if (config.out.empty()) {
            out << csv_text;
            return;
        }
        io::write_text(config.out, csv_text);
        io::write_text(config.out + ".meta.json", provenance(config, csv_text).dump(2) + "\n");
    }

    void json(const io::Json& result) const {
        if (config.json.empty()) return;
        io::Json doc;
        doc["metadata"] = provenance(config, result.dump());
        doc["result"] = result;
        io::write_text(config.json, doc.dump(2) + "\n");
    }

    void svg(const std::function<std::string(const std::string&)>& render) const {
        if (config.svg.empty()) return;
        io::write_text(config.svg, render(provenance(config, csv_text).dump()));
    }
};

std::string area_label(double area_over_pi) {
    return io::format_probability(area_over_pi) + "π";
}

// ---- commands ------------------------------------------------------------

int cmd_profile(const RunConfig& c, Outputs& o, std::ostream& err) {
    const double n = c.n.front();
    const auto detunings = detuning_grid(c);
    const auto options = sweep_options(c);
    io::CsvTable table;
    table.header = {"area_over_pi", "omega0_MHz", "delta_MHz", "p"};
    io::Json profiles = io::Json::array();
    std::vector<io::PlotSeries> series;
    for (const double area : c.areas) {
        const PulseSpec spec(shape_for(c, n), width_for(c, n), rabi_for_area(c, n, c.cut, area), c.cut);
        const auto profile = spectral_profile(spec, detunings, options);
        io::Json entry = io::to_json(profile);
        entry["area_over_pi"] = area;
        try {
            const auto w = fwhm(profile);
            entry["fwhm"] = io::to_json(w);
            err << "# area " << area_label(area) << ": fwhm " << rad_per_ns_to_mhz(w.fwhm) << " MHz\n";
        } catch (const Inconclusive& e) {
            entry["fwhm"] = nullptr;
            err << "# area " << area_label(area) << ": " << e.what() << "\n";
        }
        profiles.push_back(std::move(entry));
        io::PlotSeries s{area_label(area), {}, profile.probabilities};
        for (std::size_t i = 0; i < detunings.size(); ++i) {
            s.x.push_back(rad_per_ns_to_mhz(detunings[i]));
            table.rows.push_back({io::format_number(area), io::format_number(rad_per_ns_to_mhz(spec.peak_rabi())),
                                  io::format_number(s.x.back()), io::format_probability(profile.probabilities[i])});
        }
        series.push_back(std::move(s));
    }
    o.csv(table);
    o.json({{"profiles", profiles}});
    o.svg([&](const std::string& meta) {
        return io::line_plot_svg(series, "Transition probability vs detuning", "Δ/2π (MHz)", "P", meta);
    });
    return 0;
}

int cmd_landscape(const RunConfig& c, Outputs& o, std::ostream& err) {
    const double n = c.n.front();
    const auto shape = shape_for(c, n);
    const double width = width_for(c, n);
    const auto detunings = detuning_grid(c);
    const auto rabi = rabi_grid(c, n, c.cut);
    const auto options = sweep_options(c);
    const auto land = excitation_landscape(shape, width, c.cut, rabi, detunings, options);
    io::Json peaks = io::Json::array();
    for (const auto& peak : peak_widths(shape, width, c.cut, rabi, detunings, options)) {
        io::Json entry{{"area_over_pi", peak.area_over_pi},
                       {"omega0_MHz", rad_per_ns_to_mhz(peak.peak_rabi)},
                       {"fwhm", peak.width ? io::to_json(*peak.width) : io::Json(nullptr)}};
        if (peak.width) {
            err << "# peak " << area_label(peak.area_over_pi) << ": fwhm "
                << rad_per_ns_to_mhz(peak.width->fwhm) << " MHz\n";
        } else {
            err << "# peak " << area_label(peak.area_over_pi) << ": " << peak.failure << "\n";
        }
        peaks.push_back(std::move(entry));
    }
    o.csv(io::landscape_table(land));
    o.json({{"landscape", io::to_json(land)}, {"peaks", peaks}});
    o.svg([&](const std::string& meta) {
        return io::heatmap_svg(land, c.shape + " n=" + io::format_probability(n) + ", cut " +
                                         io::format_probability(c.cut), meta);
    });
    return 0;
}

int cmd_slice(const RunConfig& c, Outputs& o, std::ostream&) {
    const double n = c.n.front();
    const auto rabi = rabi_grid(c, n, c.cut);
    const auto p = rabi_slice(shape_for(c, n), width_for(c, n), c.cut, mhz_to_rad_per_ns(c.delta_mhz), rabi,
                              sweep_options(c));
    io::CsvTable table;
    table.header = {"omega0_MHz", "p"};
    io::PlotSeries series{"Δ/2π = " + io::format_probability(c.delta_mhz) + " MHz", {}, p};
    for (std::size_t i = 0; i < rabi.size(); ++i) {
        series.x.push_back(rad_per_ns_to_mhz(rabi[i]));
        table.rows.push_back({io::format_number(series.x.back()), io::format_probability(p[i])});
    }
    o.csv(table);
    o.json({{"delta_MHz", c.delta_mhz}, {"omega0_MHz", series.x}, {"p", p}});
    o.svg([&](const std::string& meta) {
        return io::line_plot_svg({series}, "Off-resonant Rabi oscillations", "Ω₀/2π (MHz)", "P", meta);
    });
    return 0;
}

int cmd_fwhm_table(const RunConfig& c, Outputs& o, std::ostream& err) {
    const auto options = sweep_options(c);
    io::CsvTable table;
    table.header = {"n", "area_over_pi", "fwhm_MHz", "ratio_pi_over_7pi"};
    io::Json rows = io::Json::array();
    std::vector<io::PlotSeries> series;
    for (const double n : c.n) {
        const double width = width_for(c, n);
        std::vector<double> widths;
        for (const double area : c.areas) {
            const PulseSpec spec(shape_for(c, n), width, rabi_for_area(c, n, c.cut, area), c.cut);
            widths.push_back(rad_per_ns_to_mhz(resolve_fwhm(spec, options).fwhm));
        }
        const auto pos1 = std::find(c.areas.begin(), c.areas.end(), 1.0);
        const auto pos7 = std::find(c.areas.begin(), c.areas.end(), 7.0);
        std::optional<double> ratio;
        if (pos1 != c.areas.end() && pos7 != c.areas.end()) {
            ratio = widths[pos1 - c.areas.begin()] / widths[pos7 - c.areas.begin()];
        }
        io::PlotSeries s{"n=" + io::format_probability(n), c.areas, widths};
        for (std::size_t i = 0; i < c.areas.size(); ++i) {
            table.rows.push_back({io::format_number(n), io::format_number(c.areas[i]), io::format_number(widths[i]),
                                  ratio ? io::format_number(*ratio) : std::string()});
            rows.push_back({{"n", n}, {"T_ns", width}, {"area_over_pi", c.areas[i]}, {"fwhm_MHz", widths[i]},
                            {"ratio_pi_over_7pi", optional_json(ratio)}});
        }
        err << "# n=" << n << " (T=" << width << " ns)";
        if (ratio) err << ": ratio " << *ratio;
        err << "\n";
        series.push_back(std::move(s));
    }
    o.csv(table);
    o.json({{"rows", rows}});
    o.svg([&](const std::string& meta) {
        return io::line_plot_svg(series, "FWHM vs pulse area", "A/π", "FWHM (MHz)", meta);
    });
    return 0;
}

int cmd_scaling(const RunConfig& c, Outputs& o, std::ostream& err) {
    const double n = c.n.front();
    const auto options = sweep_options(c);
    io::CsvTable table;
    table.header = {"omega0_MHz", "area_over_pi", "fwhm_MHz"};
    std::vector<ScalingPoint> points;
    bool floor_respected = true;
    io::PlotSeries series{"simulated", {}, {}};
    for (const double area : c.areas) {
        const PulseSpec spec(shape_for(c, n), width_for(c, n), rabi_for_area(c, n, c.cut, area), c.cut);
        const auto w = resolve_fwhm(spec, options);
        floor_respected = floor_respected && spec.edge_rabi() < w.fwhm / 5.0;
        points.push_back({spec.peak_rabi(), w.fwhm});
        series.x.push_back(rad_per_ns_to_mhz(spec.peak_rabi()));
        series.y.push_back(rad_per_ns_to_mhz(w.fwhm));
        table.rows.push_back({io::format_number(series.x.back()), io::format_number(area),
                              io::format_number(series.y.back())});
    }
    const auto fit = fit_scaling(points);
    io::Json result{{"fit", io::to_json(fit)}, {"edge_floor_respected", floor_respected}};
    err << "# exponent " << fit.exponent << " (r^2 " << fit.r_squared << ")";
    if (shape_for(c, n).kind() == ShapeKind::LorentzianPower) {
        result["predicted_exponent"] = predicted_exponent(n);
        err << ", predicted " << predicted_exponent(n);
    }
    if (!floor_respected) err << "; truncation edge exceeds fwhm/5 somewhere in the range";
    err << "\n";
    o.csv(table);
    o.json(result);
    o.svg([&](const std::string& meta) {
        return io::line_plot_svg({series}, "FWHM vs peak Rabi frequency", "Ω₀/2π (MHz)", "FWHM (MHz)", meta);
    });
    return 0;
}

int cmd_cutoff_study(const RunConfig& c, Outputs& o, std::ostream& err) {
    const double n = c.n.front();
    const auto shape = shape_for(c, n);
    const double width = width_for(c, n);
    const auto detunings = detuning_grid(c);
    const auto options = sweep_options(c);
    io::CsvTable table;
    table.header = {"eps_cut", "area_over_pi", "omega0_MHz", "fwhm_MHz"};
    io::Json levels = io::Json::array();
    std::vector<io::PlotSeries> series;
    for (const double cut : c.cuts) {
        const auto rabi = rabi_grid(c, n, cut);
        const double one[] = {cut};
        const auto level = cutoff_study(shape, width, one, rabi, detunings, options).front();
        io::Json peaks = io::Json::array();
        io::PlotSeries s{"cut " + io::format_probability(cut), {}, {}};
        for (const auto& peak : level.peaks) {
            const std::string w = peak.width ? io::format_number(rad_per_ns_to_mhz(peak.width->fwhm)) : "";
            table.rows.push_back({io::format_number(cut), io::format_number(peak.area_over_pi),
                                  io::format_number(rad_per_ns_to_mhz(peak.peak_rabi)), w});
            peaks.push_back({{"area_over_pi", peak.area_over_pi},
                             {"fwhm", peak.width ? io::to_json(*peak.width) : io::Json(nullptr)},
                             {"failure", peak.failure}});
            if (peak.width) {
                s.x.push_back(peak.area_over_pi);
                s.y.push_back(rad_per_ns_to_mhz(peak.width->fwhm));
            }
            err << "# cut " << cut << " peak " << area_label(peak.area_over_pi) << ": "
                << (peak.width ? w + " MHz" : peak.failure) << "\n";
        }
        levels.push_back({{"eps_cut", cut}, {"landscape", io::to_json(level.landscape)}, {"peaks", peaks}});
        series.push_back(std::move(s));
    }
    o.csv(table);
    o.json({{"levels", levels}});
    o.svg([&](const std::string& meta) {
        return io::line_plot_svg(series, "Peak FWHM vs truncation", "A/π", "FWHM (MHz)", meta);
    });
    return 0;
}

int cmd_export(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const double n = c.n.front();
    const double area = c.areas.front();
    const PulseSpec spec(shape_for(c, n), width_for(c, n), rabi_for_area(c, n, c.cut, area), c.cut);
    const double expected = spec.duration() / c.dt_ns;
    if (expected > static_cast<double>(c.max_samples)) {
        throw ResourceLimit("pulse needs about " + std::to_string(static_cast<long long>(std::ceil(expected))) +
                            " samples, above the limit of " + std::to_string(c.max_samples));
    }
    SampleOptions so;
    so.dt = c.dt_ns;
    so.granularity = c.granularity;
    const auto pulse = sample(spec, so);
    if (pulse.samples.size() > c.max_samples) {
        throw ResourceLimit("pulse needs " + std::to_string(pulse.samples.size()) + " samples, above the limit of " +
                            std::to_string(c.max_samples));
    }
    const double scale = c.scale_mhz ? mhz_to_rad_per_ns(*c.scale_mhz) : spec.peak_rabi();
    auto doc = io::export_document(spec, pulse, scale);
    doc["metadata"]["area_over_pi"] = area;
    doc["metadata"]["peak_rabi_MHz"] = rad_per_ns_to_mhz(spec.peak_rabi());
    doc["metadata"]["samples_sha256"] = io::sha256_hex(doc["samples"].dump());
    doc["metadata"]["config"] = to_json(c);
    const std::string text = doc.dump(2) + "\n";
    if (c.out.empty()) {
        out << text;
    } else {
        io::write_text(c.out, text);
    }
    err << "# " << pulse.samples.size() << " samples, duration " << pulse.duration() << " ns\n";
    return 0;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
    std::size_t failed = 0;
    run_verification(c.workers, [&](const Check& check) {
        out << (check.passed ? "PASS " : "FAIL ") << check.name << ": " << check.detail << "\n" << std::flush;
        if (!check.passed) ++failed;
    });
    out << (failed == 0 ? "all checks passed" : std::to_string(failed) + " checks failed") << "\n";
    return failed == 0 ? 0 : 1;
}

void add_model_options(CLI::App* sub, RunConfig& c, std::optional<double>& width) {
    sub->add_option("--shape", c.shape, "Pulse family")
        ->check(CLI::IsMember({"lorentzian", "rect", "sech", "gaussian"}));
    sub->add_option("--n", c.n, "Lorentzian power(s), comma separated")->delimiter(',');
    sub->add_option_function<double>("--T", [&](double v) { width = v; }, "Pulse width T (ns)");
    sub->add_option("--cut", c.cut, "Truncation fraction of the peak amplitude, (0, 1]");
}

void add_detuning_options(CLI::App* sub, RunConfig& c) {
    sub->add_option("--delta-min", c.delta_min_mhz, "Lowest detuning Delta/2pi (MHz)");
    sub->add_option("--delta-max", c.delta_max_mhz, "Highest detuning Delta/2pi (MHz)");
    sub->add_option("--delta-steps", c.delta_steps, "Detuning grid points");
}

void add_rabi_options(CLI::App* sub, RunConfig& c) {
    sub->add_option_function<double>("--rabi-min", [&](double v) { c.rabi_min_mhz = v; },
                                     "Lowest peak Rabi frequency Omega0/2pi (MHz)");
    sub->add_option_function<double>("--rabi-max", [&](double v) { c.rabi_max_mhz = v; },
                                     "Highest peak Rabi frequency Omega0/2pi (MHz); default gives area 10pi");
    sub->add_option("--rabi-steps", c.rabi_steps, "Rabi grid points");
}

void add_run_options(CLI::App* sub, RunConfig& c) {
    sub->add_flag("--hardware", c.hardware, "Propagate 2/9 ns zero-order-hold samples");
    sub->add_flag("--shot-noise", c.shot_noise, "Replace probabilities by shot averages");
    sub->add_option("--shots", c.shots, "Shots per average");
    sub->add_option("--seed", c.seed, "Shot-noise seed");
    sub->add_option("--workers", c.workers, "Worker threads (0: all cores)");
    sub->add_option("--out", c.out, "CSV output path (default: stdout)");
    sub->add_option("--json", c.json, "JSON output path");
    sub->add_option("--svg", c.svg, "SVG plot path");
}

void add_areas(CLI::App* sub, RunConfig& c) {
    sub->add_option("--areas", c.areas, "Pulse areas in units of pi, comma separated")->delimiter(',');
}

// --config is consumed before CLI11 sees the arguments, so flags can override it.
std::optional<std::string> take_config_path(std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a path");
            std::string path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            return path;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            std::string path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            return path;
        }
    }
    return std::nullopt;
}

}  // namespace

double default_width(double n) {
    if (n >= 1.0 - 1e-9) return 24.89;
    if (n >= 0.65) return 10.67;
    return 5.33;
}

io::Json to_json(const RunConfig& c) {
    io::Json j;
    j["command"] = c.command;
    j["shape"] = c.shape;
    j["n"] = c.n;
    j["T_ns"] = optional_json(c.width_ns);
    j["cut"] = c.cut;
    j["cuts"] = c.cuts;
    j["delta_min_MHz"] = c.delta_min_mhz;
    j["delta_max_MHz"] = c.delta_max_mhz;
    j["delta_steps"] = c.delta_steps;
    j["delta_MHz"] = c.delta_mhz;
    j["rabi_min_MHz"] = optional_json(c.rabi_min_mhz);
    j["rabi_max_MHz"] = optional_json(c.rabi_max_mhz);
    j["rabi_steps"] = c.rabi_steps;
    j["areas"] = c.areas;
    j["hardware"] = c.hardware;
    j["shot_noise"] = c.shot_noise;
    j["shots"] = c.shots;
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    j["dt_ns"] = c.dt_ns;
    j["scale_MHz"] = optional_json(c.scale_mhz);
    j["granularity"] = c.granularity;
    j["max_samples"] = c.max_samples;
    j["out"] = c.out;
    j["json"] = c.json;
    j["svg"] = c.svg;
    return j;
}

RunConfig config_from_json(const io::Json& j, RunConfig c) {
    if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
    const io::Json known = to_json(RunConfig{});
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) throw InvalidArgument("unknown config key '" + key + "'");
    }
    read(j, "command", c.command);
    read(j, "shape", c.shape);
    if (j.contains("n")) {
        c.n = j.at("n").is_array() ? j.at("n").get<std::vector<double>>() : std::vector<double>{j.at("n").get<double>()};
    }
    read_optional(j, "T_ns", c.width_ns);
    read(j, "cut", c.cut);
    read(j, "cuts", c.cuts);
    read(j, "delta_min_MHz", c.delta_min_mhz);
    read(j, "delta_max_MHz", c.delta_max_mhz);
    read(j, "delta_steps", c.delta_steps);
    read(j, "delta_MHz", c.delta_mhz);
    read_optional(j, "rabi_min_MHz", c.rabi_min_mhz);
    read_optional(j, "rabi_max_MHz", c.rabi_max_mhz);
    read(j, "rabi_steps", c.rabi_steps);
    read(j, "areas", c.areas);
    read(j, "hardware", c.hardware);
    read(j, "shot_noise", c.shot_noise);
    read(j, "shots", c.shots);
    read(j, "seed", c.seed);
    read(j, "workers", c.workers);
    read(j, "dt_ns", c.dt_ns);
    read_optional(j, "scale_MHz", c.scale_mhz);
    read(j, "granularity", c.granularity);
    read(j, "max_samples", c.max_samples);
    read(j, "out", c.out);
    read(j, "json", c.json);
    read(j, "svg", c.svg);
    return c;
}

RunConfig resolve(RunConfig c) {
    const std::string& cmd = c.command;
    if (c.areas.empty()) {
        if (cmd == "scaling") {
            c.areas = {3, 5, 7, 9, 11, 13, 15};
        } else if (cmd == "export-samples") {
            c.areas = {1};
        } else {
            c.areas = {1, 3, 7};
        }
    }
    if (!c.width_ns && cmd != "fwhm-table") c.width_ns = kDefaultWidth;
    if ((cmd == "landscape" || cmd == "slice") && !c.rabi_max_mhz) {
        c.rabi_max_mhz = rad_per_ns_to_mhz(rabi_for_area(c, c.n.front(), c.cut, 10.0));
    }
    if ((cmd == "landscape" || cmd == "slice") && !c.rabi_min_mhz) {
        c.rabi_min_mhz = *c.rabi_max_mhz / c.rabi_steps;
    }
    return c;
}

int run(const std::vector<std::string>& input, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args = input;
    RunConfig config;
    CLI::App app{"Two-level pulse spectroscopy: power narrowing with Lorentzian-power pulses", "pnarrow"};
    app.require_subcommand(1);
    bool print_config = false;
    std::optional<double> width;

    const std::vector<std::pair<std::string, std::string>> commands{
        {"profile", "Spectral profiles at fixed pulse areas"},
        {"landscape", "Excitation landscape over (Omega0, Delta)"},
        {"slice", "Excitation vs Omega0 at fixed detuning"},
        {"fwhm-table", "Line widths at areas pi, 3pi, 7pi for several Lorentzian powers"},
        {"scaling", "Power-law fit of FWHM vs Omega0"},
        {"cutoff-study", "Peak widths across truncation levels"},
        {"export-samples", "Hardware-style 2/9 ns sample file"},
        {"verify", "Oracle and invariant checks"},
    };
    try {
        if (const auto path = take_config_path(args)) {
            config = config_from_json(io::Json::parse(io::read_text(*path)), config);
        }
        for (const auto& [name, help] : commands) {
            auto* sub = app.add_subcommand(name, help);
            sub->add_flag("--print-config", print_config, "Print the resolved configuration as JSON and exit");
            if (name == "verify") {
                sub->add_option("--workers", config.workers, "Worker threads (0: all cores)");
                continue;
            }
            add_model_options(sub, config, width);
            if (name == "export-samples") {
                add_areas(sub, config);
                sub->add_option("--dt", config.dt_ns, "Sample interval (ns)");
                sub->add_option_function<double>("--scale", [&](double v) { config.scale_mhz = v; },
                                                 "Amplitude normalization Omega/2pi (MHz); default: pulse peak");
                sub->add_option("--granularity", config.granularity, "Sample count multiple (16 on hardware)");
                sub->add_option("--max-samples", config.max_samples, "Upper limit on the sample count");
                sub->add_option("--out", config.out, "JSON output path (default: stdout)");
                continue;
            }
            add_run_options(sub, config);
            if (name == "profile" || name == "landscape" || name == "cutoff-study") add_detuning_options(sub, config);
            if (name == "landscape" || name == "slice" || name == "cutoff-study") add_rabi_options(sub, config);
            if (name == "profile" || name == "fwhm-table" || name == "scaling") add_areas(sub, config);
            if (name == "slice") sub->add_option("--delta", config.delta_mhz, "Fixed detuning Delta/2pi (MHz)");
            if (name == "cutoff-study") {
                sub->add_option("--cuts", config.cuts, "Truncation fractions, comma separated")->delimiter(',');
            }
        }
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    config.command = app.get_subcommands().front()->get_name();
    if (width) config.width_ns = width;
    try {
        validate(config);
        config = resolve(config);
        validate(config);
        if (print_config) {
            out << to_json(config).dump(2) << "\n";
            return 0;
        }
        Outputs outputs{config, out, {}};
        const std::string& cmd = config.command;
        if (cmd == "profile") return cmd_profile(config, outputs, err);
        if (cmd == "landscape") return cmd_landscape(config, outputs, err);
        if (cmd == "slice") return cmd_slice(config, outputs, err);
        if (cmd == "fwhm-table") return cmd_fwhm_table(config, outputs, err);
        if (cmd == "scaling") return cmd_scaling(config, outputs, err);
        if (cmd == "cutoff-study") return cmd_cutoff_study(config, outputs, err);
        if (cmd == "export-samples") return cmd_export(config, out, err);
        return cmd_verify(config, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\nRun with --help for usage.\n";
        return 2;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\nRun with --help for usage.\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace pnarrow::cli
