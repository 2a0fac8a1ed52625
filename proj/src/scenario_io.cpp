#include "rayfront/scenario_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "rayfront/errors.hpp"
#include "rayfront/svg.hpp"
#include "rayfront/transport.hpp"
#include "rayfront/verification.hpp"

namespace fs = std::filesystem;

namespace rayfront::io {

namespace {

struct RawEntry {
    std::string value;
    int line = 0;
    bool used = false;
};

using RawConfig = std::map<std::string, RawEntry>;  // "section.key" -> entry

RawConfig tokenize(const std::string& text) {
    RawConfig raw;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        if (line.front() == '[') {
            if (line.back() != ']')
                fail(ErrorKind::parse_error,
                     "line " + std::to_string(lineno) + ": unterminated section header");
            section = line.substr(1, line.size() - 2);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(ErrorKind::parse_error,
                 "line " + std::to_string(lineno) + ": expected key = value");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || section.empty())
            fail(ErrorKind::parse_error,
                 "line " + std::to_string(lineno) + ": key outside a section");
        raw[section + "." + key] = {value, lineno, false};
    }
    return raw;
}

class ConfigReader {
public:
    explicit ConfigReader(RawConfig raw) : raw_(std::move(raw)) {}

    std::optional<std::string> get(const std::string& key) {
        auto it = raw_.find(key);
        if (it == raw_.end()) return std::nullopt;
        it->second.used = true;
        return it->second.value;
    }

    double get_double(const std::string& key, double fallback) {
        const auto v = get(key);
        if (!v) return fallback;
        try {
            std::size_t pos = 0;
            const double d = std::stod(*v, &pos);
            if (pos != v->size()) throw std::invalid_argument("trailing");
            return d;
        } catch (const std::exception&) {
            fail(ErrorKind::parse_error, "key '" + key + "': not a number: " + *v);
        }
    }

    long get_int(const std::string& key, long fallback) {
        const auto v = get(key);
        if (!v) return fallback;
        try {
            std::size_t pos = 0;
            const long d = std::stol(*v, &pos);
            if (pos != v->size()) throw std::invalid_argument("trailing");
            return d;
        } catch (const std::exception&) {
            fail(ErrorKind::parse_error, "key '" + key + "': not an integer: " + *v);
        }
    }

    void reject_unknown() const {
        for (const auto& [key, entry] : raw_)
            if (!entry.used)
                fail(ErrorKind::parse_error, "line " + std::to_string(entry.line) +
                                                 ": unknown key '" + key + "'");
    }

private:
    RawConfig raw_;
};

void semantic_check(const Config& c) {
    const bool sandpile = c.model != evolution::FlowModel::molding;
    if (sandpile && !(c.t_start > 0.0))
        fail(ErrorKind::parse_error, "key 'time.t_start': sandpile requires t_start > 0");
    if (!(c.t_end > c.t_start))
        fail(ErrorKind::parse_error, "key 'time.t_end': must exceed t_start");
    if (c.marker_count < 32)
        fail(ErrorKind::parse_error, "key 'numerics.markers': must be >= 32");
    if (!(c.cfl > 0.0 && c.cfl < 1.0))
        fail(ErrorKind::parse_error, "key 'numerics.cfl': must lie in (0, 1)");
    if (c.output_stride < 1)
        fail(ErrorKind::parse_error, "key 'output.stride': must be >= 1");
    if (c.test_functions < 1)
        fail(ErrorKind::parse_error, "key 'verify.test_functions': must be >= 1");
    if (c.lipschitz_fields < 1)
        fail(ErrorKind::parse_error, "key 'verify.lipschitz_fields': must be >= 1");
    if (c.plot_frame_stride < 1)
        fail(ErrorKind::parse_error, "key 'output.plot_frame_stride': must be >= 1");
    if (!(c.plot_stroke_width > 0.0))
        fail(ErrorKind::parse_error, "key 'output.plot_stroke_width': must be > 0");
    const ShapeSpec& s = c.shape;
    if (s.kind == "disk") {
        if (!(s.radius > 0.0))
            fail(ErrorKind::parse_error, "key 'geometry.radius': must be > 0");
    } else if (s.kind == "rounded_square") {
        if (!(s.side > 0.0) || !(s.fillet > 0.0) || 2.0 * s.fillet >= s.side)
            fail(ErrorKind::parse_error,
                 "keys 'geometry.side'/'geometry.fillet': need 0 < 2 fillet < side");
    } else if (s.kind == "ellipse") {
        if (!(s.a > 0.0) || !(s.b > 0.0))
            fail(ErrorKind::parse_error, "keys 'geometry.a'/'geometry.b': must be > 0");
    } else if (s.kind == "two_disks") {
        if (!(s.radius1 > 0.0) || !(s.radius2 > 0.0) || !(s.separation > 0.0))
            fail(ErrorKind::parse_error, "two_disks needs positive radii and separation");
        if (c.model != evolution::FlowModel::sandpile_2)
            fail(ErrorKind::parse_error,
                 "key 'geometry.shape': two_disks requires model sandpile_2");
    } else {
        fail(ErrorKind::parse_error, "key 'geometry.shape': unknown shape '" + s.kind + "'");
    }
    if (c.model == evolution::FlowModel::sandpile_2 && s.kind != "two_disks")
        fail(ErrorKind::parse_error, "model sandpile_2 requires shape two_disks");
}

}  // namespace

evolution::Scenario Config::to_scenario() const {
    evolution::Scenario s;
    s.model = model;
    s.initial_fronts = build_initial_fronts(shape, marker_count);
    s.t_start = t_start;
    s.t_end = t_end;
    s.marker_count = marker_count;
    s.cfl = cfl;
    s.output_stride = output_stride;
    return s;
}

Config parse_config(const std::string& text) {
    ConfigReader reader(tokenize(text));
    Config c;

    if (const auto m = reader.get("model.type"))
        c.model = evolution::flow_model_from_name(*m);
    c.shape.kind = reader.get("geometry.shape").value_or("disk");
    c.shape.radius = reader.get_double("geometry.radius", c.shape.radius);
    c.shape.side = reader.get_double("geometry.side", c.shape.side);
    c.shape.fillet = reader.get_double("geometry.fillet", c.shape.fillet);
    c.shape.a = reader.get_double("geometry.a", c.shape.a);
    c.shape.b = reader.get_double("geometry.b", c.shape.b);
    c.shape.radius1 = reader.get_double("geometry.radius1", c.shape.radius1);
    c.shape.radius2 = reader.get_double("geometry.radius2", c.shape.radius2);
    c.shape.separation = reader.get_double("geometry.separation", c.shape.separation);
    c.shape.center.x = reader.get_double("geometry.center_x", 0.0);
    c.shape.center.y = reader.get_double("geometry.center_y", 0.0);

    c.t_start = reader.get_double("time.t_start",
                                  c.model == evolution::FlowModel::molding ? 0.0 : 1.0);
    c.t_end = reader.get_double("time.t_end", c.t_start + 1.0);

    c.marker_count = int(reader.get_int("numerics.markers", c.marker_count));
    c.cfl = reader.get_double("numerics.cfl", c.cfl);

    if (const auto ids = reader.get("verify.identities")) {
        std::istringstream is(*ids);
        std::string tok;
        while (std::getline(is, tok, ','))
            if (!tok.empty()) c.identities.push_back(tok);
    }
    c.test_functions = int(reader.get_int("verify.test_functions", c.test_functions));
    c.lipschitz_fields =
        int(reader.get_int("verify.lipschitz_fields", c.lipschitz_fields));
    c.seed = std::uint64_t(reader.get_int("verify.seed", long(c.seed)));

    if (const auto dir = reader.get("output.dir")) c.out_dir = *dir;
    c.output_stride = int(reader.get_int("output.stride", c.output_stride));
    c.plot_frame_stride =
        int(reader.get_int("output.plot_frame_stride", c.plot_frame_stride));
    c.plot_stroke_width =
        reader.get_double("output.plot_stroke_width", c.plot_stroke_width);

    reader.reject_unknown();
    semantic_check(c);
    return c;
}

Config load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) fail(ErrorKind::io_error, "cannot read config " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

geom::ConvexFront make_disk(double radius, const Vec2& center, int n) {
    std::vector<Vec2> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double phi = 2.0 * M_PI * double(i) / double(n);
        pts.push_back(center + Vec2{std::cos(phi), std::sin(phi)} * radius);
    }
    return geom::ConvexFront(std::move(pts));
}

geom::ConvexFront make_rounded_square(double side, double fillet, const Vec2& center,
                                      int n) {
    // straight edges plus quarter arcs, sampled by equal arclength starting
    // from the bottom edge midpoint
    const double half = 0.5 * side;
    const double flat = side - 2.0 * fillet;
    const double perimeter = 4.0 * flat + 2.0 * M_PI * fillet;
    const double c = half - fillet;  // fillet center offset

    const auto point_at = [&](double s) -> Vec2 {
        s = std::fmod(s, perimeter);
        // pieces: half bottom edge, arc, right edge, arc, top, arc, left,
        // arc, half bottom
        double rem = s;
        auto arc = [&](const Vec2& cc, double phi0, double frac) {
            const double phi = phi0 + frac * 0.5 * M_PI;
            return cc + Vec2{std::cos(phi), std::sin(phi)} * fillet;
        };
        if (rem < 0.5 * flat) return {rem, -half};
        rem -= 0.5 * flat;
        if (rem < 0.5 * M_PI * fillet)
            return arc({c, -c}, -0.5 * M_PI, rem / (0.5 * M_PI * fillet));
        rem -= 0.5 * M_PI * fillet;
        if (rem < flat) return {half, -c + rem};
        rem -= flat;
        if (rem < 0.5 * M_PI * fillet)
            return arc({c, c}, 0.0, rem / (0.5 * M_PI * fillet));
        rem -= 0.5 * M_PI * fillet;
        if (rem < flat) return {c - rem, half};
        rem -= flat;
        if (rem < 0.5 * M_PI * fillet)
            return arc({-c, c}, 0.5 * M_PI, rem / (0.5 * M_PI * fillet));
        rem -= 0.5 * M_PI * fillet;
        if (rem < flat) return {-half, c - rem};
        rem -= flat;
        if (rem < 0.5 * M_PI * fillet)
            return arc({-c, -c}, M_PI, rem / (0.5 * M_PI * fillet));
        rem -= 0.5 * M_PI * fillet;
        return {-c + rem, -half};
    };

    std::vector<Vec2> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i)
        pts.push_back(center + point_at(perimeter * double(i) / double(n)));
    return geom::ConvexFront(std::move(pts));
}

geom::ConvexFront make_ellipse(double a, double b, const Vec2& center, int n) {
    // dense angular sampling, then equal-arclength resampling
    const int fine = std::max(16 * n, 4096);
    std::vector<Vec2> dense;
    dense.reserve(fine);
    for (int i = 0; i < fine; ++i) {
        const double phi = 2.0 * M_PI * double(i) / double(fine);
        dense.push_back(center + Vec2{a * std::cos(phi), b * std::sin(phi)});
    }
    return evolution::remesh_equal_arclength(geom::ConvexFront(std::move(dense)), n);
}

std::vector<geom::ConvexFront> build_initial_fronts(const ShapeSpec& shape, int n) {
    if (shape.kind == "disk") return {make_disk(shape.radius, shape.center, n)};
    if (shape.kind == "rounded_square")
        return {make_rounded_square(shape.side, shape.fillet, shape.center, n)};
    if (shape.kind == "ellipse")
        return {make_ellipse(shape.a, shape.b, shape.center, n)};
    if (shape.kind == "two_disks") {
        const double off = 0.5 * shape.separation;
        return {make_disk(shape.radius1, shape.center + Vec2{-off, 0.0}, n),
                make_disk(shape.radius2, shape.center + Vec2{off, 0.0}, n)};
    }
    fail(ErrorKind::invalid_parameter, "unknown shape '" + shape.kind + "'");
}

namespace {

std::string state_file(int index, int front) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "state_%04d_f%d.csv", index, front);
    return buf;
}

}  // namespace

void write_trajectory(const evolution::Trajectory& traj, const Config& config,
                      const std::string& dir) {
    fs::create_directories(dir);
    nlohmann::json summary;
    summary["model"] = evolution::flow_model_name(traj.model);
    summary["shape"] = {{"kind", config.shape.kind},
                        {"radius", config.shape.radius},
                        {"side", config.shape.side},
                        {"fillet", config.shape.fillet},
                        {"a", config.shape.a},
                        {"b", config.shape.b},
                        {"radius1", config.shape.radius1},
                        {"radius2", config.shape.radius2},
                        {"separation", config.shape.separation}};
    summary["seed"] = config.seed;
    summary["t_start"] = config.t_start;
    summary["t_end"] = config.t_end;
    summary["plot"] = {{"frame_stride", config.plot_frame_stride},
                       {"stroke_width", config.plot_stroke_width}};

    nlohmann::json times = nlohmann::json::array();
    nlohmann::json files = nlohmann::json::array();
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const auto& state = traj.states[i];
        times.push_back(state.t);
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t k = 0; k < state.fronts.size(); ++k) {
            const std::string name = state_file(int(i), int(k));
            state.fronts[k].save_csv(dir + "/" + name);
            row.push_back(name);
        }
        files.push_back(row);
    }
    summary["times"] = times;
    summary["files"] = files;

    nlohmann::json diags = nlohmann::json::array();
    for (const auto& d : traj.diagnostics)
        diags.push_back({{"t", d.t},
                         {"dt", d.dt},
                         {"max_speed", d.max_speed},
                         {"min_spacing", d.min_spacing},
                         {"convexity_margin", d.convexity_margin},
                         {"clamped_rays", d.clamped_rays}});
    summary["diagnostics"] = diags;
    summary["error"] = traj.error_record ? nlohmann::json(*traj.error_record)
                                         : nlohmann::json(nullptr);

    std::ofstream os(dir + "/summary.json");
    if (!os) fail(ErrorKind::io_error, "cannot write " + dir + "/summary.json");
    os << summary.dump(2) << "\n";
}

LoadedTrajectory load_trajectory(const std::string& dir) {
    std::ifstream is(dir + "/summary.json");
    if (!is) fail(ErrorKind::io_error, "no states found in '" + dir + "'");
    nlohmann::json summary;
    try {
        is >> summary;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::parse_error, std::string("summary.json: ") + e.what());
    }

    LoadedTrajectory out;
    out.model = evolution::flow_model_from_name(summary.at("model").get<std::string>());
    out.trajectory.model = out.model;
    if (summary.contains("shape")) {
        out.shape_kind = summary["shape"].value("kind", "");
        out.shape_radius = summary["shape"].value("radius", 0.0);
    }
    if (summary.contains("plot")) {
        out.plot_frame_stride = std::max(1, summary["plot"].value("frame_stride", 1));
        out.plot_stroke_width = summary["plot"].value("stroke_width", 1.0);
    }
    const auto& times = summary.at("times");
    const auto& files = summary.at("files");
    for (std::size_t i = 0; i < times.size(); ++i) {
        std::vector<geom::ConvexFront> fronts;
        for (const auto& name : files.at(i))
            fronts.push_back(geom::ConvexFront::load_csv(dir + "/" + name.get<std::string>()));
        auto state = evolution::make_state(times.at(i).get<double>(), std::move(fronts));
        evolution::fill_velocities(state, out.model);
        out.trajectory.states.push_back(std::move(state));
    }
    return out;
}

int exit_code_for(const SimError& err) {
    switch (err.kind()) {
        case ErrorKind::parse_error:
        case ErrorKind::invalid_parameter:
        case ErrorKind::io_error:
            return 1;
        case ErrorKind::convexity_loss:
            return 3;
        default:
            return 2;
    }
}

int cmd_run(const Config& config, const std::string& out_dir) {
    const auto traj = evolution::run(config.to_scenario());
    write_trajectory(traj, config, out_dir);
    if (traj.error_record) {
        std::cerr << "run aborted: " << *traj.error_record << "\n";
        return traj.error_kind == ErrorKind::convexity_loss ? 3 : 2;
    }
    std::cout << "stored " << traj.states.size() << " states in " << out_dir << "\n";
    return 0;
}

namespace {

std::vector<verify::TestFunction> default_test_functions(std::mt19937_64& rng,
                                                         const Vec2& center,
                                                         double spread, int count) {
    std::vector<verify::TestFunction> fns;
    fns.push_back(verify::TestFunction::constant(1.0));
    std::array<double, 10> linear{};
    linear[1] = 1.0;  // phi = x
    fns.push_back(verify::TestFunction::polynomial(linear));
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    while (int(fns.size()) < count) {
        if (fns.size() % 2 == 0)
            fns.push_back(verify::TestFunction::gaussian(
                center + Vec2{u(rng), u(rng)} * spread, 0.5 * spread));
        else
            fns.push_back(verify::TestFunction::random_polynomial(rng, 1.0));
    }
    fns.resize(count);
    return fns;
}

int verify_trajectory(const evolution::Trajectory& traj, evolution::FlowModel model,
                      const Config& config, const std::string& out_dir) {
    std::mt19937_64 rng(config.seed);
    std::vector<verify::ResidualReport> reports;

    const bool molding = model == evolution::FlowModel::molding;
    const bool twocone = model == evolution::FlowModel::sandpile_2;

    const auto wants = [&](const std::string& name) {
        return config.identities.empty() ||
               std::find(config.identities.begin(), config.identities.end(), name) !=
                   config.identities.end();
    };

    if (twocone)
        fail(ErrorKind::invalid_parameter,
             "verification identities cover single-front states only");

    const Vec2 center = traj.states.front().fronts[0].centroid();
    const double spread = 0.5 * traj.states.front().fronts[0].diameter();
    const auto phis =
        default_test_functions(rng, center, spread, config.test_functions);

    for (const auto& state : traj.states) {
        if (!molding && wants("mass_balance"))
            for (const auto& phi : phis)
                reports.push_back(verify::mass_balance_residual(state, phi));
        if (!molding && wants("subdifferential_gap"))
            for (int i = 0; i < config.lipschitz_fields; ++i) {
                const auto v =
                    verify::TestFunction::random_cone_max(rng, center, spread);
                reports.push_back(verify::subdifferential_gap(
                    state, [&v](const Vec2& z) { return v.value(z); }));
            }
        if (molding && wants("molding_balance"))
            for (const auto& phi : phis)
                reports.push_back(verify::molding_balance_residual(state, phi));
    }
    if (molding && (wants("space_time_balance") || wants("kinematic"))) {
        if (traj.states.size() >= 16) {
            const verify::TimeBump bump{traj.states.front().t, traj.states.back().t, 6};
            for (const auto& phi : phis) {
                const auto st = verify::spacetime_balance_residual(traj, phi, bump);
                if (wants("space_time_balance")) reports.push_back(st.space_time);
                if (wants("kinematic")) reports.push_back(st.kinematic);
            }
        } else {
            std::cerr << "note: space-time residuals skipped, trajectory has "
                      << traj.states.size() << " states (needs 16); lower the "
                         "output stride\n";
        }
    }

    fs::create_directories(out_dir);
    verify::write_reports_json(reports, out_dir + "/reports.json");

    int failed = 0;
    for (const auto& r : reports)
        if (!r.pass) ++failed;
    std::cout << reports.size() - failed << "/" << reports.size()
              << " residual checks passed\n";
    return failed == 0 ? 0 : 2;
}

}  // namespace

int cmd_verify_config(const Config& config, const std::string& out_dir) {
    const auto traj = evolution::run(config.to_scenario());
    if (traj.error_record) {
        std::cerr << "run aborted: " << *traj.error_record << "\n";
        return 2;
    }
    return verify_trajectory(traj, config.model, config, out_dir);
}

int cmd_verify_dir(const std::string& traj_dir, const std::string& out_dir,
                   std::uint64_t seed) {
    const auto loaded = load_trajectory(traj_dir);
    Config config;
    config.model = loaded.model;
    config.seed = seed;
    return verify_trajectory(loaded.trajectory, loaded.model, config, out_dir);
}

int cmd_probe(const ProbeArgs& args) {
    const transport::CurvatureVector kappa{std::vector<double>(args.kappas)};
    const bool molding = args.model == "molding";
    char buf[96];

    double v;
    if (molding) {
        v = transport::molding_velocity(kappa.kappas.at(0), args.gamma);
        std::snprintf(buf, sizeof buf, "V=%.12g\n", v);
    } else {
        const double f = args.delta
                             ? transport::mean_ray_depth(kappa, args.gamma, *args.delta)
                             : transport::mean_ray_depth(kappa, args.gamma);
        v = f / args.t;
        std::snprintf(buf, sizeof buf, "F=%.12g\nV=%.12g\n", f, v);
    }
    std::cout << buf;

    if (args.s) {
        const double a =
            molding ? transport::molding_density(kappa.kappas.at(0), args.gamma, *args.s)
                    : transport::sandpile_density(kappa, args.gamma, args.t, *args.s);
        std::snprintf(buf, sizeof buf, "a=%.12g\n", a);
        std::cout << buf;
    }
    if (args.grid > 1) {
        if (args.delta && *args.delta > 0.0)
            std::cerr << "note: the density profile covers the whole ray; "
                         "--delta applies to F and V only\n";
        const auto profile = transport::sample_density_profile(
            molding ? transport::Model::molding : transport::Model::sandpile, kappa,
            args.gamma, args.t, args.grid);
        profile.to_csv(std::cout);
    }
    return 0;
}

int cmd_plot(const std::string& traj_dir, const std::string& out_dir) {
    const auto loaded = load_trajectory(traj_dir);
    const auto& states = loaded.trajectory.states;
    if (states.empty()) fail(ErrorKind::io_error, "no states found in '" + traj_dir + "'");
    fs::create_directories(out_dir);

    // bounding box over all fronts, padded
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& st : states)
        for (const auto& f : st.fronts)
            for (const auto& m : f.markers) {
                xmin = std::min(xmin, m.x);
                xmax = std::max(xmax, m.x);
                ymin = std::min(ymin, m.y);
                ymax = std::max(ymax, m.y);
            }
    const double pad = 0.05 * std::max(xmax - xmin, ymax - ymin);
    SvgCanvas overlay(xmin - pad, xmax + pad, ymin - pad, ymax + pad);
    const double t0 = states.front().t, t1 = states.back().t;
    const double stroke = 1.2 * loaded.plot_stroke_width;
    for (std::size_t j = 0; j < states.size(); j += loaded.plot_frame_stride) {
        const auto& st = states[j];
        const double u = t1 > t0 ? (st.t - t0) / (t1 - t0) : 0.0;
        for (const auto& f : st.fronts)
            overlay.polyline(f.markers, SvgCanvas::heat_color(u), stroke, true);
    }
    overlay.save(out_dir + "/fronts.svg");

    // density profiles along a handful of rays of the final state
    {
        const auto& last = states.back();
        const bool molding = loaded.model == evolution::FlowModel::molding;
        double amax = 0.0, gmax = 0.0;
        std::vector<std::vector<Vec2>> curves;
        const auto& rays = last.rays[0];
        const std::size_t stride = std::max<std::size_t>(1, rays.size() / 8);
        for (std::size_t i = 0; i < rays.size(); i += stride) {
            const auto& ray = rays[i];
            std::vector<Vec2> curve;
            for (int k = 0; k <= 100; ++k) {
                const double s = ray.gamma * double(k) / 100.0;
                const double a =
                    molding ? transport::molding_density(ray.kappa, ray.gamma, s)
                            : transport::sandpile_density(
                                  transport::CurvatureVector{ray.kappa}, ray.gamma,
                                  last.t, s);
                curve.push_back({s, a});
                amax = std::max(amax, a);
            }
            gmax = std::max(gmax, ray.gamma);
            curves.push_back(std::move(curve));
        }
        SvgCanvas prof(0.0, gmax * 1.05 + 1e-12, 0.0, amax * 1.1 + 1e-12, 720, 480);
        prof.line({0, 0}, {gmax, 0}, "#888888", 1.0);
        prof.line({0, 0}, {0, amax}, "#888888", 1.0);
        for (std::size_t i = 0; i < curves.size(); ++i)
            prof.polyline(curves[i], SvgCanvas::heat_color(double(i) / curves.size()),
                          1.2);
        prof.text({0.5 * gmax, amax}, "density a(s) along rays, final state");
        prof.save(out_dir + "/density_profiles.svg");
    }

    // radius vs time with the analytic overlay for disk scenarios
    if (loaded.shape_kind == std::string("disk")) {
        std::vector<Vec2> measured;
        double rmax = 0.0;
        for (const auto& st : states) {
            const Vec2 c = st.fronts[0].centroid();
            double mean = 0.0;
            for (const auto& m : st.fronts[0].markers) mean += distance(m, c);
            mean /= double(st.fronts[0].size());
            measured.push_back({st.t, mean});
            rmax = std::max(rmax, mean);
        }
        std::vector<Vec2> analytic;
        const double r0 = measured.front().y;
        for (int k = 0; k <= 200; ++k) {
            const double t = t0 + (t1 - t0) * double(k) / 200.0;
            const double r = loaded.model == evolution::FlowModel::molding
                                 ? r0 * std::exp(0.5 * (t - t0))
                                 : r0 * std::cbrt(t / t0);
            analytic.push_back({t, r});
            rmax = std::max(rmax, r);
        }
        SvgCanvas radius(t0, t1, 0.0, rmax * 1.1, 720, 480);
        radius.line({t0, 0}, {t1, 0}, "#888888", 1.0);
        radius.polyline(analytic, "#bbbbbb", 3.0);
        radius.polyline(measured, "#c03020", 1.2);
        for (const auto& p : measured) radius.circle(p, 2.5, "#c03020");
        radius.text({t0 + 0.05 * (t1 - t0), rmax}, "radius vs time (grey: closed form)");
        radius.save(out_dir + "/radius_vs_time.svg");
    }
    return 0;
}

}  // namespace rayfront::io
