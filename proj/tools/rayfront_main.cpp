#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "rayfront/errors.hpp"
#include "rayfront/scenario_io.hpp"

using rayfront::SimError;
namespace io = rayfront::io;

int main(int argc, char** argv) {
    CLI::App app{"2D front evolution for sandpile and compression-molding flow "
                 "laws, with ray-transport identity verification"};
    app.require_subcommand(1);

    std::string config_path, out_dir, traj_dir;
    std::uint64_t seed_flag = 0;
    bool seed_given = false;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* c = cmd->add_option("--config", config_path, "scenario config file");
        if (needs_config) c->required();
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--seed", seed_flag, "override the config RNG seed")
            ->each([&](const std::string&) { seed_given = true; });
    };

    auto* run = app.add_subcommand(
        "run",
        "integrate a scenario and write the trajectory\n"
        "config keys and defaults: [model] type=sandpile_1; [geometry] shape=disk,\n"
        "radius=1, side=2, fillet=0.2, a=1, b=0.6, radius1=1, radius2=1,\n"
        "separation=1.6, center_x=0, center_y=0; [time] t_start=1 (0 for molding),\n"
        "t_end=t_start+1; [numerics] markers=256, cfl=0.25; [verify]\n"
        "test_functions=6, lipschitz_fields=100, seed=1, identities=<all>;\n"
        "[output] dir=out, stride=1, plot_frame_stride=1, plot_stroke_width=1");
    add_common(run, true);

    auto* vfy = app.add_subcommand("verify", "check the balance identities");
    add_common(vfy, false);
    vfy->add_option("--traj", traj_dir, "verify an existing trajectory directory");

    io::ProbeArgs probe_args;
    auto* probe = app.add_subcommand("probe", "evaluate velocity and density formulas");
    probe->add_option("--model", probe_args.model, "sandpile | molding")
        ->check(CLI::IsMember({"sandpile", "molding"}));
    probe->add_option("--kappa", probe_args.kappas, "principal curvature(s)");
    probe->add_option("--gamma", probe_args.gamma, "ray length");
    probe->add_option("--delta", [&probe_args](const std::vector<std::string>& v) {
        probe_args.delta = std::stod(v.at(0));
        return true;
    }, "truncated ray start (two-body)");
    probe->add_option("--t", probe_args.t, "sandpile time");
    probe->add_option("--s", [&probe_args](const std::vector<std::string>& v) {
        probe_args.s = std::stod(v.at(0));
        return true;
    }, "density evaluation depth");
    probe->add_option("--grid", probe_args.grid, "emit a profile CSV with this many samples");

    auto* plot = app.add_subcommand("plot", "emit SVG plots for a trajectory");
    plot->add_option("--traj", traj_dir, "trajectory directory")->required();
    plot->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) {
            auto config = io::load_config(config_path);
            if (seed_given) config.seed = seed_flag;
            return io::cmd_run(config, out_dir.empty() ? config.out_dir : out_dir);
        }
        if (vfy->parsed()) {
            if (!traj_dir.empty()) {
                const std::string out = out_dir.empty() ? traj_dir : out_dir;
                return io::cmd_verify_dir(traj_dir, out, seed_given ? seed_flag : 1);
            }
            if (config_path.empty()) {
                std::cerr << "verify needs --config or --traj\n";
                return 1;
            }
            auto config = io::load_config(config_path);
            if (seed_given) config.seed = seed_flag;
            return io::cmd_verify_config(config,
                                         out_dir.empty() ? config.out_dir : out_dir);
        }
        if (probe->parsed()) return io::cmd_probe(probe_args);
        if (plot->parsed())
            return io::cmd_plot(traj_dir, out_dir.empty() ? traj_dir : out_dir);
    } catch (const SimError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return io::exit_code_for(err);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return 1;
}
