#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "orbitpool/geometry.hpp"
#include "orbitpool/signature.hpp"

namespace orbitpool {

enum class RunStatus { ok = 0, config_error = 1, bound_violation = 2 };

struct RunResult {
    RunStatus status = RunStatus::ok;
    std::string detail;  // offending report path on violations

    void merge(const RunResult& other) {
        if (static_cast<int>(other.status) > static_cast<int>(status)) *this = other;
    }
};

/// A validated experiment description. All randomness downstream derives
/// from `seed`; rerunning an identical config byte-reproduces every output.
struct ExperimentConfig {
    std::string experiment;
    std::uint64_t seed = 1;
    std::string output_dir = "out";

    double half_width = 6.0;
    int resolution = 512;
    Interp interp = Interp::bicubic;

    GroupId group = GroupId::se2;
    std::optional<PoolingRegion> region;

    QuadratureSpec quadrature{9, 9, 9};
    MonteCarloSpec monte_carlo{1'000'000, 0, 65536};
    bool monte_carlo_seed_set = false;

    Json image = Json::object();
    double margin = 0.3;

    int instances = 0;  // 0 = experiment default
    double displacement_fraction = 0.3;

    std::vector<LieAlgebraElement> generators;
    RateMethod rate_method = RateMethod::slope_fit;

    std::vector<double> sweep_scales;
    std::vector<double> sweep_times;

    int templates = 4;
    std::vector<Nonlinearity> nonlinearities;
    int rotations = 20;

    bool plots = false;
};

namespace config_detail {

inline void require_keys(const Json& obj, const std::string& where,
                         const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw InvalidArgument("config: unknown key '" + where + it.key() + "'");
    }
}

inline double number_at(const Json& obj, const std::string& where, const char* key,
                        double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number())
        throw InvalidArgument("config: '" + where + key + "' must be a number");
    return obj.at(key).get<double>();
}

inline Interval interval_at(const Json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key))
        throw InvalidArgument("config: missing required key '" + where + key + "'");
    const Json& j = obj.at(key);
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw InvalidArgument("config: '" + where + key + "' must be [lo, hi]");
    Interval iv{j[0].get<double>(), j[1].get<double>()};
    if (!(iv.hi > iv.lo))
        throw InvalidArgument("config: '" + where + key + "' must have lo < hi");
    return iv;
}

inline GroupId parse_group(const std::string& name) {
    if (name == "translations") return GroupId::translations;
    if (name == "rotations") return GroupId::rotations;
    if (name == "se2") return GroupId::se2;
    if (name == "shear") return GroupId::shear;
    throw InvalidArgument("config: unknown group '" + name + "'");
}

inline PoolingRegion parse_region(const Json& j, GroupId group) {
    if (!j.is_object()) throw InvalidArgument("config: 'region' must be an object");
    switch (group) {
        case GroupId::translations:
            require_keys(j, "region.", {"tx", "ty"});
            return PoolingRegion::translations_box(interval_at(j, "region.", "tx"),
                                                   interval_at(j, "region.", "ty"));
        case GroupId::rotations:
            require_keys(j, "region.", {"theta"});
            return PoolingRegion::rotations_arc(interval_at(j, "region.", "theta"));
        case GroupId::se2:
            require_keys(j, "region.", {"theta", "tx", "ty"});
            return PoolingRegion::se2_box(interval_at(j, "region.", "theta"),
                                          interval_at(j, "region.", "tx"),
                                          interval_at(j, "region.", "ty"));
        case GroupId::shear:
            require_keys(j, "region.", {"shear", "tx", "ty"});
            return PoolingRegion::shear_box(interval_at(j, "region.", "shear"),
                                            interval_at(j, "region.", "tx"),
                                            interval_at(j, "region.", "ty"));
    }
    throw InvalidArgument("config: unknown group");
}

inline LieAlgebraElement parse_generator(const Json& j, GroupId group, const std::string& where) {
    require_keys(j, where, {"zeta", "vx", "vy", "shear_rate"});
    double zeta = number_at(j, where, "zeta", 0.0);
    double vx = number_at(j, where, "vx", 0.0);
    double vy = number_at(j, where, "vy", 0.0);
    double sr = number_at(j, where, "shear_rate", 0.0);
    switch (group) {
        case GroupId::translations:
            if (zeta != 0.0 || sr != 0.0)
                throw InvalidArgument("config: translation generators need zeta = shear_rate = 0");
            return LieAlgebraElement::translation(vx, vy);
        case GroupId::rotations:
            if (vx != 0.0 || vy != 0.0 || sr != 0.0)
                throw InvalidArgument("config: rotation generators allow only zeta");
            return LieAlgebraElement::rotation(zeta);
        case GroupId::se2:
            if (sr != 0.0) throw InvalidArgument("config: se2 generators have no shear_rate");
            return LieAlgebraElement::se2(zeta, vx, vy);
        case GroupId::shear:
            if (zeta != 0.0) throw InvalidArgument("config: shear generators have no zeta");
            return LieAlgebraElement::shear(sr, vx, vy);
    }
    throw InvalidArgument("config: unknown group");
}

inline const std::set<std::string> kImageKeys = {"kind",      "sigma", "center", "orientation",
                                                 "frequency", "phase", "amplitude", "modes"};

inline void validate_image(const Json& j) {
    if (!j.is_object()) throw InvalidArgument("config: 'image' must be an object");
    require_keys(j, "image.", kImageKeys);
    if (j.contains("kind")) {
        std::string kind = j.at("kind").get<std::string>();
        static const std::set<std::string> kinds = {"gaussian", "anisotropic_gaussian", "gabor",
                                                    "bandlimited_noise", "mixed"};
        if (!kinds.count(kind)) throw InvalidArgument("config: unknown image kind '" + kind + "'");
    }
}

// Builds an ImageSpec from the config image object; randomized fields come
// from the per-instance seed when the sweep asks for variety.
inline ImageSpec image_spec_from(const Json& j, const std::string& forced_kind,
                                 std::uint64_t seed) {
    ImageSpec spec;
    std::string kind = forced_kind.empty() ? j.value("kind", std::string("gaussian")) : forced_kind;
    if (kind == "gaussian") spec.kind = ImageSpec::Kind::gaussian;
    else if (kind == "anisotropic_gaussian") spec.kind = ImageSpec::Kind::anisotropic_gaussian;
    else if (kind == "gabor") spec.kind = ImageSpec::Kind::gabor;
    else if (kind == "bandlimited_noise") spec.kind = ImageSpec::Kind::bandlimited_noise;
    else throw InvalidArgument("config: unknown image kind '" + kind + "'");

    if (j.contains("sigma")) {
        const Json& s = j.at("sigma");
        if (s.is_number()) {
            spec.sigma_x = spec.sigma_y = s.get<double>();
        } else if (s.is_array() && s.size() == 2) {
            spec.sigma_x = s[0].get<double>();
            spec.sigma_y = s[1].get<double>();
        } else {
            throw InvalidArgument("config: 'image.sigma' must be a number or [sx, sy]");
        }
    } else {
        spec.sigma_x = spec.sigma_y = 0.8;
    }
    if (j.contains("center")) {
        const Json& c = j.at("center");
        if (!c.is_array() || c.size() != 2)
            throw InvalidArgument("config: 'image.center' must be [x, y]");
        spec.center_x = c[0].get<double>();
        spec.center_y = c[1].get<double>();
    }
    spec.orientation = j.value("orientation", 0.0);
    spec.frequency = j.value("frequency", spec.kind == ImageSpec::Kind::gabor ? 0.8 : 0.6);
    spec.phase = j.value("phase", 0.0);
    spec.amplitude = j.value("amplitude", 1.0);
    spec.mode_count = j.value("modes", 24);
    spec.seed = seed;
    return spec;
}

}  // namespace config_detail

/// Parses and validates a config document. Unknown keys anywhere are
/// rejected; messages name the offending field.
inline ExperimentConfig parse_config(const Json& root) {
    using namespace config_detail;
    if (!root.is_object()) throw InvalidArgument("config: top level must be an object");
    require_keys(root, "",
                 {"experiment", "seed", "output_dir", "grid", "group", "region", "quadrature",
                  "monte_carlo", "image", "margin", "instances", "displacement_fraction",
                  "generators", "rate_method", "sweep", "templates", "nonlinearities",
                  "rotations", "plots"});

    ExperimentConfig cfg;
    if (!root.contains("experiment"))
        throw InvalidArgument("config: missing required key 'experiment'");
    cfg.experiment = root.at("experiment").get<std::string>();
    static const std::set<std::string> kExperiments = {
        "theorem1_sweep", "theorem2_check", "curvature_se2", "signature_invariance",
        "contraction_profile", "full_suite"};
    if (!kExperiments.count(cfg.experiment))
        throw InvalidArgument("config: unknown experiment '" + cfg.experiment + "'");

    if (root.contains("seed")) cfg.seed = root.at("seed").get<std::uint64_t>();
    cfg.output_dir = root.value("output_dir", std::string("out"));

    if (root.contains("grid")) {
        const Json& g = root.at("grid");
        require_keys(g, "grid.", {"half_width", "resolution", "interpolation"});
        cfg.half_width = number_at(g, "grid.", "half_width", 6.0);
        if (!(cfg.half_width > 0)) throw InvalidArgument("config: 'grid.half_width' must be > 0");
        cfg.resolution = static_cast<int>(number_at(g, "grid.", "resolution", 512));
        std::string interp = g.value("interpolation", std::string("bicubic"));
        if (interp == "bicubic") cfg.interp = Interp::bicubic;
        else if (interp == "bilinear") cfg.interp = Interp::bilinear;
        else throw InvalidArgument("config: 'grid.interpolation' must be bilinear or bicubic");
    }
    if (cfg.resolution < 16)
        throw InvalidArgument(
            "config: degenerate input, 'grid.resolution' below 16 cannot hold a support margin");

    if (root.contains("group")) cfg.group = parse_group(root.at("group").get<std::string>());
    if (root.contains("region")) cfg.region = parse_region(root.at("region"), cfg.group);

    if (root.contains("quadrature")) {
        const Json& q = root.at("quadrature");
        require_keys(q, "quadrature.", {"angle_nodes", "x_nodes", "y_nodes"});
        cfg.quadrature.angle_nodes = static_cast<int>(number_at(q, "quadrature.", "angle_nodes", 9));
        cfg.quadrature.x_nodes = static_cast<int>(number_at(q, "quadrature.", "x_nodes", 9));
        cfg.quadrature.y_nodes = static_cast<int>(number_at(q, "quadrature.", "y_nodes", 9));
        if (cfg.quadrature.angle_nodes < 1 || cfg.quadrature.x_nodes < 1 ||
            cfg.quadrature.y_nodes < 1)
            throw InvalidArgument("config: quadrature node counts must be positive");
    }

    if (root.contains("monte_carlo")) {
        const Json& m = root.at("monte_carlo");
        require_keys(m, "monte_carlo.", {"samples", "seed", "batch"});
        cfg.monte_carlo.sample_count =
            static_cast<std::uint64_t>(number_at(m, "monte_carlo.", "samples", 1'000'000));
        if (cfg.monte_carlo.sample_count < 10'000)
            throw InvalidArgument("config: 'monte_carlo.samples' must be at least 1e4");
        if (m.contains("seed")) {
            cfg.monte_carlo.seed = m.at("seed").get<std::uint64_t>();
            cfg.monte_carlo_seed_set = true;
        }
        cfg.monte_carlo.batch =
            static_cast<std::uint32_t>(number_at(m, "monte_carlo.", "batch", 65536));
    }

    if (root.contains("image")) {
        validate_image(root.at("image"));
        cfg.image = root.at("image");
    }
    cfg.margin = root.value("margin", 0.3);
    cfg.instances = static_cast<int>(number_at(root, "", "instances", 0));
    if (root.contains("instances") && cfg.instances < 1)
        throw InvalidArgument("config: 'instances' must be positive");
    cfg.displacement_fraction = root.value("displacement_fraction", 0.3);
    if (cfg.displacement_fraction <= 0 || cfg.displacement_fraction > 1.0)
        throw InvalidArgument("config: 'displacement_fraction' must be in (0, 1]");

    if (root.contains("generators")) {
        const Json& g = root.at("generators");
        if (!g.is_array() || g.empty())
            throw InvalidArgument("config: 'generators' must be a non-empty array");
        for (std::size_t i = 0; i < g.size(); ++i)
            cfg.generators.push_back(parse_generator(g[i], cfg.group, "generators[]."));
    }
    if (root.contains("rate_method")) {
        std::string rm = root.at("rate_method").get<std::string>();
        if (rm == "closed_form") cfg.rate_method = RateMethod::closed_form;
        else if (rm == "slope_fit") cfg.rate_method = RateMethod::slope_fit;
        else throw InvalidArgument("config: 'rate_method' must be closed_form or slope_fit");
    }

    if (root.contains("sweep")) {
        const Json& s = root.at("sweep");
        require_keys(s, "sweep.", {"region_scales", "flow_times"});
        for (const auto& v : s.value("region_scales", Json::array()))
            cfg.sweep_scales.push_back(v.get<double>());
        for (const auto& v : s.value("flow_times", Json::array()))
            cfg.sweep_times.push_back(v.get<double>());
        for (double a : cfg.sweep_scales)
            if (!(a > 0)) throw InvalidArgument("config: 'sweep.region_scales' must be positive");
    }

    cfg.templates = static_cast<int>(number_at(root, "", "templates", 4));
    if (cfg.templates < 1) throw InvalidArgument("config: 'templates' must be positive");
    if (root.contains("nonlinearities")) {
        for (const auto& v : root.at("nonlinearities"))
            cfg.nonlinearities.push_back(Nonlinearity::parse(v.get<std::string>()));
        if (cfg.nonlinearities.empty())
            throw InvalidArgument("config: 'nonlinearities' must be non-empty");
    }
    cfg.rotations = static_cast<int>(number_at(root, "", "rotations", 20));
    if (cfg.rotations < 1) throw InvalidArgument("config: 'rotations' must be positive");
    cfg.plots = root.value("plots", false);
    return cfg;
}

inline ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("config: cannot open " + path);
    Json root;
    try {
        root = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InvalidArgument(std::string("config: JSON parse error: ") + e.what());
    }
    try {
        return parse_config(root);
    } catch (const Error&) {
        throw;
    } catch (const Json::exception& e) {
        // malformed value types surface as field diagnostics, not crashes
        throw InvalidArgument(std::string("config: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// plotting: minimal deterministic line plots in plain SVG text

struct PlotSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

inline void write_line_plot(const std::string& path, const std::string& title,
                            const std::vector<PlotSeries>& series) {
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            if (first) {
                xmin = xmax = x;
                ymin = ymax = y;
                first = false;
            }
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;

    const double w = 640, h = 400, ml = 60, mr = 20, mt = 40, mb = 40;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
    auto py = [&](double y) { return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb); };
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b"};

    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("write_line_plot: cannot open " + path);
    char buf[256];
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
           "viewBox=\"0 0 640 400\">\n";
    out << "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-size=\"15\" "
                  "font-family=\"sans-serif\">%s</text>\n",
                  title.c_str());
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n", ml,
                  h - mb, w - mr, h - mb);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n", ml,
                  mt, ml, h - mb);
    out << buf;
    // corner labels
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" font-family=\"sans-serif\" "
                  "text-anchor=\"middle\">%.6g</text>\n",
                  ml, h - mb + 16, xmin);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" font-family=\"sans-serif\" "
                  "text-anchor=\"middle\">%.6g</text>\n",
                  w - mr, h - mb + 16, xmax);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" font-family=\"sans-serif\" "
                  "text-anchor=\"end\">%.6g</text>\n",
                  ml - 6, h - mb + 4, ymin);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" font-family=\"sans-serif\" "
                  "text-anchor=\"end\">%.6g</text>\n",
                  ml - 6, mt + 4, ymax);
    out << buf;

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = palette[s % 6];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (auto [x, y] : series[s].points) {
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(x), py(y));
            out << buf;
        }
        out << "\"/>\n";
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" font-family=\"sans-serif\" "
                      "fill=\"%s\">%s</text>\n",
                      w - mr - 150.0, mt + 16.0 * (s + 1), color, series[s].name.c_str());
        out << buf;
    }
    out << "</svg>\n";
}

// ---------------------------------------------------------------------------
// experiment runners

namespace run_detail {

namespace fs = std::filesystem;

inline void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

inline void write_report(const fs::path& path, const VerificationReport& rep) {
    write_text(path, rep.to_json().dump(2) + "\n");
}

inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// per-instance image drawing for the randomized sweeps
inline ImageGrid instance_image(const ExperimentConfig& cfg, int instance) {
    static const char* kMixed[3] = {"gaussian", "gabor", "bandlimited_noise"};
    std::string kind = cfg.image.value("kind", std::string("mixed"));
    std::string forced;
    if (kind == "mixed") forced = kMixed[instance % 3];
    std::uint64_t image_seed = CounterRng(cfg.seed, 1000 + instance).key();
    ImageSpec spec = config_detail::image_spec_from(cfg.image, forced, image_seed);
    if (!cfg.image.contains("sigma")) spec.sigma_x = spec.sigma_y = 0.8;
    // jitter the center and orientation so instances differ
    CounterRng jitter(cfg.seed, 3000 + instance);
    spec.center_x += jitter.uniform(0, -0.25, 0.25);
    spec.center_y += jitter.uniform(1, -0.25, 0.25);
    if (spec.kind != ImageSpec::Kind::gaussian) spec.orientation = jitter.uniform(2, 0.0, kPi);
    return synthesize(spec, cfg.half_width, cfg.resolution, cfg.margin);
}

inline MonteCarloSpec instance_mc(const ExperimentConfig& cfg, int instance) {
    MonteCarloSpec mc = cfg.monte_carlo;
    std::uint64_t base = cfg.monte_carlo_seed_set ? cfg.monte_carlo.seed : cfg.seed;
    mc.seed = CounterRng(base, 600 + instance).key();
    return mc;
}

// random displacement staying within displacement_fraction of each side
inline GroupElement instance_displacement(const ExperimentConfig& cfg,
                                          const PoolingRegion& region, int instance) {
    CounterRng rng(cfg.seed, 2000 + instance);
    double frac = cfg.displacement_fraction;
    auto span = [&](AxisKind kind) {
        const Interval* iv = region.axis(kind);
        return iv ? iv->length() : 0.0;
    };
    double dx = rng.uniform(10, -1.0, 1.0) * frac * span(AxisKind::trans_x);
    double dy = rng.uniform(11, -1.0, 1.0) * frac * span(AxisKind::trans_y);
    double dth = rng.uniform(12, -1.0, 1.0) * frac * span(AxisKind::angle) * 0.5;
    double dsh = rng.uniform(13, -1.0, 1.0) * frac * span(AxisKind::shear) * 0.5;
    switch (region.group()) {
        case GroupId::translations: return GroupElement::translation(dx, dy);
        case GroupId::rotations: return GroupElement::rotation(dth);
        case GroupId::se2: return GroupElement::se2(dth, dx, dy);
        case GroupId::shear: return GroupElement::shear(dsh, dx, dy);
    }
    throw InvalidArgument("instance_displacement: unknown group");
}

// measured slack budgets for one run configuration; the quadrature budget is
// evaluated at a reduced grid (node error is set by the region geometry, not
// by the image resolution)
struct MeasuredBudgets {
    double quadrature = 0.0;
    double interpolation = 0.0;
};

inline MeasuredBudgets measure_budgets(const ExperimentConfig& cfg, const PoolingRegion& region,
                                       const ImageGrid& probe_image,
                                       const GroupElement& probe_displacement) {
    MeasuredBudgets b;
    int budget_n = std::min(cfg.resolution, 192);
    ImageSpec spec = config_detail::image_spec_from(cfg.image, "gaussian",
                                                    CounterRng(cfg.seed, 777).key());
    if (!cfg.image.contains("sigma")) spec.sigma_x = spec.sigma_y = 0.8;
    ImageGrid small = synthesize(spec, cfg.half_width, budget_n, cfg.margin);
    b.quadrature = measure_quadrature_budget(small, region, cfg.quadrature, cfg.interp);
    b.interpolation = measure_interpolation_budget(probe_image, probe_displacement, cfg.interp);
    return b;
}

inline PoolingRegion default_region(GroupId group) {
    switch (group) {
        case GroupId::translations: return PoolingRegion::translations_box({0, 1}, {0, 1});
        case GroupId::rotations: return PoolingRegion::rotations_arc({-kPi, kPi});
        case GroupId::se2: return PoolingRegion::se2_box({-0.5, 0.5}, {0, 1}, {0, 1});
        case GroupId::shear: return PoolingRegion::shear_box({-0.5, 0.5}, {0, 1}, {0, 1});
    }
    throw InvalidArgument("default_region: unknown group");
}

struct Summary {
    Json meta = Json::object();
    int total = 0;
    int passed = 0;
    std::string first_failure;

    void add(const VerificationReport& rep, const std::string& path) {
        ++total;
        if (rep.pass) ++passed;
        else if (first_failure.empty()) first_failure = path;
    }

    Json to_json() const {
        Json j = meta;
        j["instances"] = total;
        j["passed"] = passed;
        j["all_pass"] = passed == total;
        if (!first_failure.empty()) j["first_failure"] = first_failure;
        return j;
    }
};

// --- theorem 1 sweep --------------------------------------------------------

inline RunResult run_theorem1_sweep(const ExperimentConfig& cfg, const fs::path& dir) {
    PoolingRegion region = cfg.region ? *cfg.region : default_region(cfg.group);
    int instances = cfg.instances > 0 ? cfg.instances : 100;
    fs::create_directories(dir / "reports");

    ImageGrid first = instance_image(cfg, 0);
    GroupElement probe = instance_displacement(cfg, region, 0);
    MeasuredBudgets budgets = measure_budgets(cfg, region, first, probe);

    CheckOptions opts;
    opts.interp = cfg.interp;
    opts.eps_quadrature = budgets.quadrature;
    opts.eps_interpolation = budgets.interpolation;
    opts.experiment = "theorem1_sweep";

    Summary summary;
    summary.meta =
        Json{{"experiment", "theorem1_sweep"},
             {"group", group_name(region.group())},
             {"seed", cfg.seed},
             {"epsilon_quadrature", budgets.quadrature},
             {"epsilon_interpolation", budgets.interpolation}};

    std::string csv = "instance,measured_lhs,analytic_rhs,ratio,epsilon_total,pass\n";
    std::vector<PlotSeries> plot(1);
    plot[0].name = "lhs/rhs";
    RunResult result;

    for (int i = 0; i < instances; ++i) {
        ImageGrid f = i == 0 ? first : instance_image(cfg, i);
        GroupElement g = instance_displacement(cfg, region, i);
        VerificationReport rep =
            theorem1_check(f, g, region, cfg.quadrature, instance_mc(cfg, i), opts);
        rep.provenance["instance"] = i;

        char name[64];
        std::snprintf(name, sizeof name, "reports/theorem1_%03d.json", i);
        write_report(dir / name, rep);
        summary.add(rep, name);
        csv += std::to_string(i) + "," + fmt(rep.measured_lhs) + "," + fmt(rep.analytic_rhs) +
               "," + fmt(rep.ratio()) + "," + fmt(rep.epsilon.total()) + "," +
               (rep.pass ? "1" : "0") + "\n";
        plot[0].points.push_back({static_cast<double>(i), rep.ratio()});
        if (!rep.pass && result.status == RunStatus::ok)
            result = {RunStatus::bound_violation, (dir / name).string()};
    }

    // near the identity the translation-box ratio approaches 4 eps / sqrt(mu)
    const Interval* bx = region.axis(AxisKind::trans_x);
    const Interval* by = region.axis(AxisKind::trans_y);
    if (region.group() == GroupId::translations && bx->length() == by->length()) {
        double mu = haar_measure(region);
        Json rows = Json::array();
        bool all_ok = true;
        for (double eps : {0.01, 0.005, 0.002}) {
            double ratio = symdiff_measure(region, GroupElement::translation(eps, eps),
                                           SymdiffMethod::exact)
                               .value /
                           mu;
            double asymptote = 4.0 * eps / std::sqrt(mu);
            double rel = std::abs(ratio - asymptote) / asymptote;
            bool ok = rel <= 0.01;
            all_ok = all_ok && ok;
            rows.push_back(Json{{"displacement", eps},
                                {"ratio", ratio},
                                {"asymptote", asymptote},
                                {"relative_gap", rel},
                                {"pass", ok}});
        }
        Json doc = Json{{"check", "translation_asymptotic"}, {"rows", rows}, {"pass", all_ok}};
        write_text(dir / "translation_asymptotic.json", doc.dump(2) + "\n");
        if (!all_ok && result.status == RunStatus::ok)
            result = {RunStatus::bound_violation, (dir / "translation_asymptotic.json").string()};
    }

    write_text(dir / "summary.csv", csv);
    write_text(dir / "summary.json", summary.to_json().dump(2) + "\n");
    if (cfg.plots) write_line_plot((dir / "ratio.svg").string(), "contraction bound ratio", plot);
    return result;
}

// --- theorem 2 sweep --------------------------------------------------------

inline std::pair<LieAlgebraElement, LieAlgebraElement> instance_generators(
    const ExperimentConfig& cfg, int instance) {
    if (cfg.generators.size() >= 2) return {cfg.generators[0], cfg.generators[1]};
    CounterRng rng(cfg.seed, 4000 + instance);
    // every fifth pair commutes, exercising the zero-bracket floor
    if (instance % 5 == 4) {
        return {LieAlgebraElement::se2(0, rng.uniform(0, -1, 1), rng.uniform(1, -1, 1)),
                LieAlgebraElement::se2(0, rng.uniform(2, -1, 1), rng.uniform(3, -1, 1))};
    }
    return {LieAlgebraElement::se2(rng.uniform(0, -1, 1), rng.uniform(1, -1, 1),
                                   rng.uniform(2, -1, 1)),
            LieAlgebraElement::se2(rng.uniform(3, -1, 1), rng.uniform(4, -1, 1),
                                   rng.uniform(5, -1, 1))};
}

inline RunResult run_theorem2_check(const ExperimentConfig& cfg, const fs::path& dir) {
    if (cfg.group != GroupId::se2)
        throw InvalidArgument("config: theorem2_check runs on the se2 group");
    PoolingRegion region = cfg.region ? *cfg.region : default_region(cfg.group);
    int instances = cfg.instances > 0 ? cfg.instances : 50;
    fs::create_directories(dir / "reports");

    ImageGrid first = instance_image(cfg, 0);
    MeasuredBudgets budgets =
        measure_budgets(cfg, region, first, instance_displacement(cfg, region, 0));

    CheckOptions opts;
    opts.interp = cfg.interp;
    opts.eps_quadrature = budgets.quadrature;
    opts.eps_interpolation = budgets.interpolation;
    opts.rate_method = cfg.rate_method;
    opts.experiment = "theorem2_check";

    Summary summary;
    summary.meta = Json{{"experiment", "theorem2_check"},
                        {"group", group_name(region.group())},
                        {"seed", cfg.seed},
                        {"epsilon_quadrature", budgets.quadrature},
                        {"epsilon_interpolation", budgets.interpolation}};
    std::string csv = "instance,measured_lhs,analytic_rhs,ratio,epsilon_total,commuting,pass\n";
    RunResult result;

    for (int i = 0; i < instances; ++i) {
        ImageGrid f = i == 0 ? first : instance_image(cfg, i);
        auto [xi, eta] = instance_generators(cfg, i);
        VerificationReport rep =
            theorem2_check(f, xi, eta, region, cfg.quadrature, instance_mc(cfg, i), opts);
        rep.provenance["instance"] = i;
        bool commuting = bracket(xi, eta).is_zero();

        char name[64];
        std::snprintf(name, sizeof name, "reports/theorem2_%03d.json", i);
        write_report(dir / name, rep);
        summary.add(rep, name);
        csv += std::to_string(i) + "," + fmt(rep.measured_lhs) + "," + fmt(rep.analytic_rhs) +
               "," + fmt(rep.ratio()) + "," + fmt(rep.epsilon.total()) + "," +
               (commuting ? "1" : "0") + "," + (rep.pass ? "1" : "0") + "\n";
        if (!rep.pass && result.status == RunStatus::ok)
            result = {RunStatus::bound_violation, (dir / name).string()};
    }

    write_text(dir / "summary.csv", csv);
    write_text(dir / "summary.json", summary.to_json().dump(2) + "\n");
    return result;
}

// --- curvature (se2 worked example) ----------------------------------------

inline RunResult run_curvature_se2(const ExperimentConfig& cfg, const fs::path& dir) {
    PoolingRegion region =
        cfg.region ? *cfg.region : PoolingRegion::se2_box({-0.5, 0.5}, {0, 1}, {0, 1});
    if (region.group() != GroupId::se2)
        throw InvalidArgument("config: curvature_se2 needs an se2 region");
    const Interval* bx = region.axis(AxisKind::trans_x);
    const Interval* by = region.axis(AxisKind::trans_y);
    if (bx->length() != by->length())
        throw InvalidArgument("config: curvature_se2 needs a square translation box");
    double a = bx->length();
    fs::create_directories(dir / "reports");

    LieAlgebraElement xi = LieAlgebraElement::se2(1, 0, 0);
    LieAlgebraElement eta = LieAlgebraElement::se2(0, 1, 0);
    if (cfg.generators.size() >= 2) {
        xi = cfg.generators[0];
        eta = cfg.generators[1];
    }

    // image calibrated so the pooled fields are close to orthonormal for the
    // default generators; unit L2 norm always enforced
    Json image = cfg.image.empty()
                     ? Json{{"kind", "gaussian"}, {"sigma", 0.42}, {"center", Json::array({1.25, 0.0})}}
                     : cfg.image;
    ImageSpec spec = config_detail::image_spec_from(image, "", CounterRng(cfg.seed, 50).key());
    ImageGrid raw = synthesize(spec, cfg.half_width, cfg.resolution, cfg.margin);
    ImageGrid f = scaled(raw, 1.0 / norm2(raw));

    ExperimentConfig budget_cfg = cfg;
    budget_cfg.image = image;
    MeasuredBudgets budgets =
        measure_budgets(budget_cfg, region, f, GroupElement::se2(0.05, 0.1 * a, 0.1 * a));

    CheckOptions opts;
    opts.interp = cfg.interp;
    opts.rate_method =
        cfg.rate_method == RateMethod::slope_fit ? RateMethod::closed_form : cfg.rate_method;
    opts.experiment = "curvature_se2";

    MonteCarloSpec mc = instance_mc(cfg, 0);
    CurvatureEstimate est = sectional_curvature(f, xi, eta, region, cfg.quadrature, mc, opts);

    // the closed-form curvature bound (zeta (x'-y') - zeta' (x-y))^2 / a^2
    double br = xi.zeta() * (eta.vx() - eta.vy()) - eta.zeta() * (xi.vx() - xi.vy());
    double closed_form_bound = br * br / (a * a);

    VerificationReport rep;
    rep.experiment = "curvature_se2";
    rep.check = "curvature_bound";
    rep.measured_lhs = est.kappa_hat;
    rep.analytic_rhs = closed_form_bound;
    rep.epsilon.quadrature = 2.0 * budgets.quadrature;
    rep.epsilon.interpolation = 2.0 * budgets.interpolation;
    rep.epsilon.monte_carlo = 2.0 * est.rate.fit_residual;
    rep.provenance = Json{{"grid", detail::grid_json(f, cfg.interp)},
                          {"quadrature", detail::quad_json(cfg.quadrature)},
                          {"region", detail::region_json(region)},
                          {"xi", detail::algebra_json(xi)},
                          {"xi_prime", detail::algebra_json(eta)},
                          {"gram", Json::array({est.gram_xx, est.gram_xy, est.gram_yy})},
                          {"gram_det", est.gram_det},
                          {"bracket_norm", est.bracket_norm},
                          {"bound_gram_normalized", est.bound},
                          {"rate_value", est.rate.value},
                          {"field_norms", Json::array({std::sqrt(est.gram_xx),
                                                       std::sqrt(est.gram_yy)})},
                          {"image_norm", norm2(f)},
                          {"bracket_sign_convention", "minus_pooled_generator_of_bracket"}};
    rep.finalize();
    write_report(dir / "reports" / "curvature_worked_example.json", rep);

    // flat abelian directions
    CurvatureEstimate flat =
        sectional_curvature(f, LieAlgebraElement::se2(0, 1, 0), LieAlgebraElement::se2(0, 0, 1),
                            region, cfg.quadrature, mc, opts);
    VerificationReport flat_rep;
    flat_rep.experiment = "curvature_se2";
    flat_rep.check = "abelian_flatness";
    flat_rep.measured_lhs = flat.kappa_hat;
    flat_rep.analytic_rhs = 0.0;
    flat_rep.noise_floor = 1e-8;
    flat_rep.provenance = Json{{"gram_det", flat.gram_det}};
    flat_rep.finalize();
    write_report(dir / "reports" / "curvature_abelian.json", flat_rep);

    Json summary = Json{{"experiment", "curvature_se2"},
                        {"kappa_hat", est.kappa_hat},
                        {"closed_form_bound", closed_form_bound},
                        {"gram_det", est.gram_det},
                        {"seed", cfg.seed},
                        {"all_pass", rep.pass && flat_rep.pass}};
    write_text(dir / "summary.json", summary.dump(2) + "\n");

    if (!rep.pass) return {RunStatus::bound_violation,
                           (dir / "reports" / "curvature_worked_example.json").string()};
    if (!flat_rep.pass)
        return {RunStatus::bound_violation, (dir / "reports" / "curvature_abelian.json").string()};
    return {};
}

// --- signature invariance ----------------------------------------------------

inline RunResult run_signature_invariance(const ExperimentConfig& cfg, const fs::path& dir) {
    PoolingRegion region =
        cfg.region ? *cfg.region : PoolingRegion::rotations_arc({-kPi, kPi});
    if (region.group() != GroupId::rotations)
        throw InvalidArgument("config: signature_invariance runs on the rotations group");
    fs::create_directories(dir / "reports");

    QuadratureSpec quad = cfg.quadrature;
    if (quad.angle_nodes < 32) quad.angle_nodes = 64;  // a full circle needs resolution

    std::vector<Nonlinearity> nonlins =
        cfg.nonlinearities.empty()
            ? std::vector<Nonlinearity>{Nonlinearity::sigmoid(), Nonlinearity::relu(),
                                        Nonlinearity::modulus(), Nonlinearity::tanh(),
                                        Nonlinearity::abs_power(2.0)}
            : cfg.nonlinearities;

    TemplateSet templates = draw_templates(cfg.templates, cfg.half_width, cfg.resolution,
                                           CounterRng(cfg.seed, 60).key());

    Json image = cfg.image.empty()
                     ? Json{{"kind", "gaussian"}, {"sigma", 0.8}, {"center", Json::array({1.2, 0.0})}}
                     : cfg.image;
    ImageSpec spec = config_detail::image_spec_from(image, "", CounterRng(cfg.seed, 61).key());
    ImageGrid f = synthesize(spec, cfg.half_width, cfg.resolution, cfg.margin);

    Signature sig = signature(f, templates, nonlins, region, quad, cfg.interp);
    write_signature_csv((dir / "signature.csv").string(), sig, nonlins);

    // the abs_power(2) channel, rescaled by the node count, is the squared
    // L2-pooled response; the identity must hold on the same nodes
    auto responses = template_responses(f, templates, region, quad, cfg.interp);
    double node_count = static_cast<double>(responses[0].size());
    std::vector<Nonlinearity> sq = {Nonlinearity::abs_power(2.0)};
    Signature sig_sq = signature(f, templates, sq, region, quad, cfg.interp);
    double worst_identity = 0.0;
    for (std::size_t k = 0; k < templates.size(); ++k) {
        double l2 = 0.0;
        for (double q : responses[k]) l2 += q * q;
        l2 = std::sqrt(l2);
        double via_sig = std::sqrt(node_count * sig_sq.at(k, 0));
        worst_identity = std::max(worst_identity, std::abs(via_sig - l2) / (l2 + 1e-300));
    }
    VerificationReport ident;
    ident.experiment = "signature_invariance";
    ident.check = "l2_pooling_identity";
    ident.measured_lhs = worst_identity;
    ident.analytic_rhs = 0.0;
    ident.noise_floor = 1e-10;
    ident.provenance = Json{{"templates", cfg.templates}, {"nodes", node_count}};
    ident.finalize();
    write_report(dir / "reports" / "l2_pooling_identity.json", ident);

    RunResult result;
    if (!ident.pass)
        result = {RunStatus::bound_violation,
                  (dir / "reports" / "l2_pooling_identity.json").string()};

    std::string csv = "instance,rotation,invariance_error,pass\n";
    Summary summary;
    summary.meta = Json{{"experiment", "signature_invariance"}, {"seed", cfg.seed}};
    summary.add(ident, "reports/l2_pooling_identity.json");
    CounterRng rot_rng(cfg.seed, 62);
    for (int i = 0; i < cfg.rotations; ++i) {
        double angle = rot_rng.uniform(i, -kPi, kPi);
        double err = invariance_error(f, GroupElement::rotation(angle), templates, nonlins,
                                      region, quad, cfg.interp);
        VerificationReport rep;
        rep.experiment = "signature_invariance";
        rep.check = "full_circle_invariance";
        rep.measured_lhs = err;
        rep.analytic_rhs = 0.0;
        rep.noise_floor = 1e-2;
        rep.provenance = Json{{"rotation", angle}, {"instance", i},
                              {"quadrature", detail::quad_json(quad)}};
        rep.finalize();
        char name[64];
        std::snprintf(name, sizeof name, "reports/invariance_%03d.json", i);
        write_report(dir / name, rep);
        summary.add(rep, name);
        csv += std::to_string(i) + "," + fmt(angle) + "," + fmt(err) + "," +
               (rep.pass ? "1" : "0") + "\n";
        if (!rep.pass && result.status == RunStatus::ok)
            result = {RunStatus::bound_violation, (dir / name).string()};
    }
    write_text(dir / "errors.csv", csv);
    write_text(dir / "summary.json", summary.to_json().dump(2) + "\n");
    return result;
}

// --- contraction profile ------------------------------------------------------

inline RunResult run_contraction_profile(const ExperimentConfig& cfg, const fs::path& dir) {
    if (cfg.group != GroupId::translations && cfg.group != GroupId::se2)
        throw InvalidArgument("config: contraction_profile supports translations or se2");
    fs::create_directories(dir);

    std::vector<double> scales =
        cfg.sweep_scales.empty() ? std::vector<double>{0.5, 0.75, 1.0, 1.5, 2.0}
                                 : cfg.sweep_scales;
    std::vector<double> times = cfg.sweep_times.empty()
                                    ? std::vector<double>{0.0, 0.025, 0.05, 0.1}
                                    : cfg.sweep_times;
    LieAlgebraElement xi = cfg.generators.empty()
                               ? (cfg.group == GroupId::translations
                                      ? LieAlgebraElement::translation(1, 0)
                                      : LieAlgebraElement::se2(0, 1, 0))
                               : cfg.generators[0];

    double theta_hw = 0.3;
    if (cfg.region) {
        const Interval* th = cfg.region->axis(AxisKind::angle);
        if (th) theta_hw = 0.5 * th->length();
    }
    auto family = [&](double a) {
        if (cfg.group == GroupId::translations)
            return PoolingRegion::translations_box({0, a}, {0, a});
        return PoolingRegion::se2_box({-theta_hw, theta_hw}, {0, a}, {0, a});
    };

    // wide sweeps travel far; the default image leaves room for the largest
    // region displacement
    Json image = cfg.image.empty() ? Json{{"kind", "gaussian"}, {"sigma", 0.55}} : cfg.image;
    ImageSpec spec = config_detail::image_spec_from(image, "", CounterRng(cfg.seed, 70).key());
    ImageGrid f = synthesize(spec, cfg.half_width, cfg.resolution, cfg.margin);

    ExperimentConfig budget_cfg = cfg;
    budget_cfg.image = image;
    double tmax = *std::max_element(times.begin(), times.end());
    MeasuredBudgets budgets = measure_budgets(budget_cfg, family(scales.front()), f,
                                              exponential(xi, tmax > 0 ? tmax : 0.05));

    CheckOptions opts;
    opts.interp = cfg.interp;
    opts.eps_quadrature = budgets.quadrature;
    opts.eps_interpolation = budgets.interpolation;
    opts.experiment = "contraction_profile";

    auto rows = contraction_profile(f, family, scales, xi, times, cfg.quadrature,
                                    instance_mc(cfg, 0), opts);

    double eps = budgets.quadrature + budgets.interpolation;
    std::string csv = "region_scale,flow_time,raw,pooled,ratio,theorem1_rhs,bound_pass\n";
    RunResult result;
    bool all_pass = true;
    for (const auto& r : rows) {
        bool ok = r.flow_time == 0.0 || r.pooled <= r.theorem1_rhs * (1.0 + eps);
        all_pass = all_pass && ok;
        csv += fmt(r.region_scale) + "," + fmt(r.flow_time) + "," + fmt(r.raw) + "," +
               fmt(r.pooled) + "," + fmt(r.ratio) + "," + fmt(r.theorem1_rhs) + "," +
               (ok ? "1" : "0") + "\n";
    }
    write_text(dir / "profile.csv", csv);

    Json summary = Json{{"experiment", "contraction_profile"},
                        {"seed", cfg.seed},
                        {"epsilon_quadrature", budgets.quadrature},
                        {"epsilon_interpolation", budgets.interpolation},
                        {"rows", rows.size()},
                        {"all_pass", all_pass}};
    write_text(dir / "summary.json", summary.dump(2) + "\n");

    if (cfg.plots) {
        std::vector<PlotSeries> series;
        for (double t : times) {
            if (t == 0.0) continue;
            PlotSeries s;
            char label[48];
            std::snprintf(label, sizeof label, "t = %g", t);
            s.name = label;
            for (const auto& r : rows)
                if (r.flow_time == t) s.points.push_back({r.region_scale, r.ratio});
            series.push_back(std::move(s));
        }
        write_line_plot((dir / "ratio.svg").string(), "pooled/raw contraction ratio", series);
    }

    if (!all_pass) return {RunStatus::bound_violation, (dir / "profile.csv").string()};
    return {};
}

// --- full suite ---------------------------------------------------------------

inline RunResult run_single(const ExperimentConfig& cfg, const fs::path& dir);

inline RunResult run_full_suite(const ExperimentConfig& cfg, const fs::path& dir) {
    struct Entry {
        const char* name;
        std::function<void(ExperimentConfig&)> tweak;
    };
    const Entry entries[] = {
        {"theorem1_translations",
         [](ExperimentConfig& c) {
             c.experiment = "theorem1_sweep";
             c.group = GroupId::translations;
             c.region = PoolingRegion::translations_box({0, 1}, {0, 1});
             if (c.instances == 0) c.instances = 20;
         }},
        {"theorem1_se2",
         [](ExperimentConfig& c) {
             c.experiment = "theorem1_sweep";
             c.group = GroupId::se2;
             c.region = PoolingRegion::se2_box({-0.3, 0.3}, {0, 1}, {0, 1});
             if (c.instances == 0) c.instances = 10;
             c.quadrature = QuadratureSpec{7, 7, 7};
         }},
        {"theorem2_se2",
         [](ExperimentConfig& c) {
             c.experiment = "theorem2_check";
             c.group = GroupId::se2;
             c.region = PoolingRegion::se2_box({-0.4, 0.4}, {0, 1}, {0, 1});
             if (c.instances == 0) c.instances = 10;
             c.quadrature = QuadratureSpec{7, 7, 7};
         }},
        {"curvature_se2",
         [](ExperimentConfig& c) {
             c.experiment = "curvature_se2";
             c.group = GroupId::se2;
             c.region.reset();
             c.image = Json::object();
         }},
        {"signature_invariance",
         [](ExperimentConfig& c) {
             c.experiment = "signature_invariance";
             c.group = GroupId::rotations;
             c.region.reset();
             c.image = Json::object();
             if (c.instances > 0) c.rotations = c.instances;
         }},
        {"contraction_profile",
         [](ExperimentConfig& c) {
             c.experiment = "contraction_profile";
             c.group = GroupId::translations;
             c.region.reset();
             c.image = Json::object();
         }},
    };

    RunResult result;
    Json children = Json::array();
    int k = 0;
    for (const auto& e : entries) {
        ExperimentConfig sub = cfg;
        sub.seed = CounterRng(cfg.seed, 9000 + k++).key();
        sub.image = cfg.image;
        e.tweak(sub);
        RunResult r = run_single(sub, dir / e.name);
        children.push_back(Json{{"name", e.name}, {"status", static_cast<int>(r.status)}});
        result.merge(r);
    }
    Json summary = Json{{"experiment", "full_suite"},
                        {"seed", cfg.seed},
                        {"children", children},
                        {"all_pass", result.status == RunStatus::ok}};
    write_text(dir / "summary.json", summary.dump(2) + "\n");
    return result;
}

inline RunResult run_single(const ExperimentConfig& cfg, const fs::path& dir) {
    fs::create_directories(dir);
    if (cfg.experiment == "theorem1_sweep") return run_theorem1_sweep(cfg, dir);
    if (cfg.experiment == "theorem2_check") return run_theorem2_check(cfg, dir);
    if (cfg.experiment == "curvature_se2") return run_curvature_se2(cfg, dir);
    if (cfg.experiment == "signature_invariance") return run_signature_invariance(cfg, dir);
    if (cfg.experiment == "contraction_profile") return run_contraction_profile(cfg, dir);
    if (cfg.experiment == "full_suite") return run_full_suite(cfg, dir);
    throw InvalidArgument("config: unknown experiment '" + cfg.experiment + "'");
}

}  // namespace run_detail

/// Runs a validated experiment, writing reports, tables and optional plots
/// under the output directory. Identical configs (including the seed)
/// reproduce identical bytes for any worker count.
inline RunResult run_experiment(const ExperimentConfig& cfg) {
    return run_detail::run_single(cfg, std::filesystem::path(cfg.output_dir));
}

}  // namespace orbitpool
