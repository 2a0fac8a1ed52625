#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rayfront/errors.hpp"
#include "rayfront/evolution.hpp"
#include "rayfront/geometry.hpp"

namespace rayfront::io {

// Initial shapes available to scenarios. Corners are always pre-rounded by
// the loader (the flow laws need curvature almost everywhere).
struct ShapeSpec {
    std::string kind;  // disk | rounded_square | ellipse | two_disks
    double radius = 1.0;          // disk
    double side = 2.0;            // rounded_square
    double fillet = 0.2;          // rounded_square corner radius
    double a = 1.0, b = 0.6;      // ellipse semi-axes
    double radius1 = 1.0, radius2 = 1.0, separation = 1.6;  // two_disks
    Vec2 center;
};

struct Config {
    evolution::FlowModel model = evolution::FlowModel::sandpile_1;
    ShapeSpec shape;
    double t_start = 1.0;
    double t_end = 2.0;
    int marker_count = 256;
    double cfl = 0.25;
    int output_stride = 1;

    // [verify]
    std::vector<std::string> identities;  // default: model-appropriate set
    int test_functions = 6;
    int lipschitz_fields = 100;
    std::uint64_t seed = 1;

    // [output]
    std::string out_dir = "out";
    int plot_frame_stride = 1;
    double plot_stroke_width = 1.0;

    evolution::Scenario to_scenario() const;
};

// Sectioned key=value text: [model] [geometry] [time] [numerics] [verify]
// [output]. Unknown keys and sections are rejected with line numbers;
// semantic violations name the offending key.
Config parse_config(const std::string& text);
Config load_config(const std::string& path);

geom::ConvexFront make_disk(double radius, const Vec2& center, int n);
geom::ConvexFront make_rounded_square(double side, double fillet, const Vec2& center,
                                      int n);
geom::ConvexFront make_ellipse(double a, double b, const Vec2& center, int n);
std::vector<geom::ConvexFront> build_initial_fronts(const ShapeSpec& shape, int n);

// Trajectory files: one markers CSV per stored state and front
// (state_0007_f0.csv) plus summary.json with times and diagnostics.
void write_trajectory(const evolution::Trajectory& traj, const Config& config,
                      const std::string& dir);
struct LoadedTrajectory {
    evolution::Trajectory trajectory;
    evolution::FlowModel model;
    std::optional<std::string> shape_kind;
    double shape_radius = 0.0;
    int plot_frame_stride = 1;
    double plot_stroke_width = 1.0;
};
LoadedTrajectory load_trajectory(const std::string& dir);

// CLI entry points; return process exit codes
// (0 ok, 1 usage, 2 numerical failure, 3 convexity loss).
int cmd_run(const Config& config, const std::string& out_dir);
int cmd_verify_config(const Config& config, const std::string& out_dir);
int cmd_verify_dir(const std::string& traj_dir, const std::string& out_dir,
                   std::uint64_t seed);
struct ProbeArgs {
    std::string model = "sandpile";
    std::vector<double> kappas{0.0};
    double gamma = 1.0;
    std::optional<double> delta;
    double t = 1.0;
    std::optional<double> s;
    int grid = 0;  // when > 0, print a profile CSV with this many samples
};
int cmd_probe(const ProbeArgs& args);
int cmd_plot(const std::string& traj_dir, const std::string& out_dir);

int exit_code_for(const SimError& err);

}  // namespace rayfront::io
