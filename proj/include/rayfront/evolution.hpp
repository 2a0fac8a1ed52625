#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rayfront/errors.hpp"
#include "rayfront/geometry.hpp"

namespace rayfront::evolution {

enum class FlowModel { sandpile_1, sandpile_2, molding };

const char* flow_model_name(FlowModel m);
FlowModel flow_model_from_name(const std::string& name);

// One time slice: the fronts plus their sampled rays.
struct EvolutionState {
    double t = 0.0;
    std::vector<geom::ConvexFront> fronts;          // one, or two for sandpile_2
    std::vector<std::vector<geom::RaySample>> rays;  // per front, per marker
};

struct StepDiagnostics {
    double t = 0.0;
    double dt = 0.0;
    double max_speed = 0.0;
    double min_spacing = 0.0;
    double convexity_margin = 0.0;  // smallest vertex cross product seen
    int clamped_rays = 0;           // rays with kappa*gamma clamped to 1
};

struct Trajectory {
    FlowModel model = FlowModel::sandpile_1;
    std::vector<EvolutionState> states;      // time-ordered stored snapshots
    std::vector<StepDiagnostics> diagnostics;  // one per step taken
    std::optional<std::string> error_record;   // set when the run aborted
    std::optional<ErrorKind> error_kind;
};

struct Scenario {
    FlowModel model = FlowModel::sandpile_1;
    std::vector<geom::ConvexFront> initial_fronts;
    double t_start = 1.0;
    double t_end = 2.0;
    int marker_count = 256;
    double cfl = 0.25;
    int output_stride = 1;

    void validate() const;
};

// Samples rays for every front; velocities left unset.
EvolutionState make_state(double t, std::vector<geom::ConvexFront> fronts);

// Fills RaySample::velocity per the flow law. For sandpile_2 the truncation
// delta is the ray length of the front's own inner normal inside the
// intersection polygon at feet lying on the closed overlap, 0 elsewhere.
// Rays with kappa*gamma discretely above 1 use the clamped admissible gamma;
// the count of such rays is returned.
int fill_velocities(EvolutionState& state, FlowModel model);

// Midpoint (RK2) step: markers displaced by V dt along the outward vertex
// normals with a half-step velocity refresh, then remeshed to equal
// arclength and convexity-checked. Velocities must be filled. dt = 0
// returns the state unchanged.
EvolutionState step(const EvolutionState& state, double dt, FlowModel model);

Trajectory run(const Scenario& scenario);

// Equal-arclength linear resampling to n markers, anchored at markers[0].
geom::ConvexFront remesh_equal_arclength(const geom::ConvexFront& front, std::size_t n);

double min_marker_spacing(const geom::ConvexFront& front);
double max_speed(const EvolutionState& state);

}  // namespace rayfront::evolution
