#include "rayfront/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rayfront/errors.hpp"
#include "rayfront/transport.hpp"

namespace rayfront::evolution {

namespace {

constexpr double kSpeedFloor = 1e-12;  // CFL divisor floor for static fronts

// The velocity laws respond to curvature, which makes the marker scheme a
// discrete diffusion: an explicit step is stable only under the parabolic
// bound dt <= c h^2 / max |dV/dkappa|. The advective bound from the scenario
// CFL number alone lets marker-scale sawteeth grow.
constexpr double kParabolicSafety = 0.2;

double front_tol(const geom::ConvexFront& f) { return 1e-9 * f.diameter(); }

// max |dV/dkappa| over the rays; plane case of each law.
double max_curvature_response(const EvolutionState& state, FlowModel model) {
    double response = 0.0;
    for (const auto& rays : state.rays) {
        for (const auto& r : rays) {
            double g = r.gamma;
            if (r.kappa > 0.0) g = std::min(g, 1.0 / r.kappa);
            double d;
            if (model == FlowModel::molding) {
                d = 0.5 * g * g;
            } else {
                const double u = std::clamp(r.kappa * g, 0.0, 1.0);
                const double den = 1.0 - 0.5 * u;
                d = (g * g / 12.0) / (den * den * state.t);
            }
            response = std::max(response, d);
        }
    }
    return response;
}

}  // namespace

const char* flow_model_name(FlowModel m) {
    switch (m) {
        case FlowModel::sandpile_1: return "sandpile_1";
        case FlowModel::sandpile_2: return "sandpile_2";
        case FlowModel::molding: return "molding";
    }
    return "?";
}

FlowModel flow_model_from_name(const std::string& name) {
    if (name == "sandpile_1" || name == "sandpile") return FlowModel::sandpile_1;
    if (name == "sandpile_2") return FlowModel::sandpile_2;
    if (name == "molding") return FlowModel::molding;
    fail(ErrorKind::parse_error, "unknown model '" + name + "'");
}

void Scenario::validate() const {
    const bool sandpile = model != FlowModel::molding;
    if (sandpile && !(t_start > 0.0))
        fail(ErrorKind::invalid_parameter, "sandpile requires t_start > 0");
    if (!(t_end > t_start))
        fail(ErrorKind::invalid_parameter, "t_end must exceed t_start");
    if (marker_count < 32)
        fail(ErrorKind::invalid_parameter, "marker count must be >= 32");
    if (!(cfl > 0.0 && cfl < 1.0))
        fail(ErrorKind::invalid_parameter, "cfl must lie in (0, 1)");
    if (output_stride < 1)
        fail(ErrorKind::invalid_parameter, "output stride must be >= 1");
    const std::size_t want = model == FlowModel::sandpile_2 ? 2 : 1;
    if (initial_fronts.size() != want)
        fail(ErrorKind::invalid_parameter, "wrong number of initial fronts for model");
    for (const auto& f : initial_fronts) f.validate();
}

EvolutionState make_state(double t, std::vector<geom::ConvexFront> fronts) {
    EvolutionState state;
    state.t = t;
    state.fronts = std::move(fronts);
    state.rays.reserve(state.fronts.size());
    for (const auto& f : state.fronts) state.rays.push_back(geom::sample_rays(f));
    return state;
}

int fill_velocities(EvolutionState& state, FlowModel model) {
    int clamped_total = 0;

    std::optional<geom::ConvexFront> overlap;
    std::optional<geom::TangentBallSolver> overlap_solver;
    if (model == FlowModel::sandpile_2) {
        if (state.fronts.size() != 2)
            fail(ErrorKind::invalid_parameter, "sandpile_2 needs exactly two fronts");
        overlap = geom::intersect(state.fronts[0], state.fronts[1]);
        if (overlap) {
            try {
                overlap_solver.emplace(*overlap);
            } catch (const SimError&) {
                overlap.reset();  // barely-touching bodies: treat as disjoint
            }
        }
    } else if (state.fronts.size() != 1) {
        fail(ErrorKind::invalid_parameter, "single-body model needs exactly one front");
    }

    for (std::size_t k = 0; k < state.fronts.size(); ++k) {
        const geom::ConvexFront* other =
            model == FlowModel::sandpile_2 ? &state.fronts[1 - k] : nullptr;
        for (auto& ray : state.rays[k]) {
            bool clamped = false;
            // Discrete fillets overshoot kappa*gamma = 1 by more than the
            // transport slack; the flow clamps to the admissible bound and
            // counts the event instead of aborting.
            double gamma = ray.gamma;
            if (ray.kappa > 0.0 && ray.kappa * gamma > 1.0) {
                gamma = 1.0 / ray.kappa;
                clamped = ray.kappa * ray.gamma >
                          1.0 + transport::kKappaGammaSlack;
            }
            const transport::CurvatureVector kv{ray.kappa};
            switch (model) {
                case FlowModel::sandpile_1:
                    ray.delta.reset();
                    ray.velocity = transport::sandpile_velocity(kv, gamma, state.t);
                    break;
                case FlowModel::sandpile_2: {
                    double delta = 0.0;
                    if (overlap &&
                        geom::signed_distance(*other, ray.foot) >= -front_tol(*other)) {
                        // foot on the closed overlap: truncate at the
                        // overlap's own ray along this body's normal
                        try {
                            delta = overlap_solver->gamma(ray.foot, ray.inner_normal);
                        } catch (const SimError&) {
                            delta = 0.0;  // normal exits the overlap immediately
                        }
                        delta = std::min(delta, gamma);
                    }
                    ray.delta = delta;
                    ray.velocity =
                        transport::sandpile_velocity(kv, gamma, state.t, delta);
                    break;
                }
                case FlowModel::molding:
                    ray.delta.reset();
                    ray.velocity = transport::molding_velocity(ray.kappa, gamma);
                    break;
            }
            if (clamped) ++clamped_total;
        }
    }
    return clamped_total;
}

geom::ConvexFront remesh_equal_arclength(const geom::ConvexFront& front, std::size_t n) {
    const auto cum = front.cumulative_arclength();
    const double total = cum.back();
    const std::size_t m = front.size();
    std::vector<Vec2> pts;
    pts.reserve(n);
    std::size_t seg = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double target = total * double(i) / double(n);
        while (seg + 1 < m && cum[seg + 1] < target) ++seg;
        const double len = cum[seg + 1] - cum[seg];
        const double u = len > 0.0 ? (target - cum[seg]) / len : 0.0;
        const Vec2& a = front[seg];
        const Vec2& b = front[(seg + 1) % m];
        pts.push_back(a + (b - a) * u);
    }
    return geom::ConvexFront(std::move(pts));
}

double min_marker_spacing(const geom::ConvexFront& front) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = front.size();
    for (std::size_t i = 0; i < n; ++i)
        best = std::min(best, distance(front[i], front[(i + 1) % n]));
    return best;
}

double max_speed(const EvolutionState& state) {
    double vmax = 0.0;
    for (const auto& rays : state.rays)
        for (const auto& r : rays)
            if (r.velocity) vmax = std::max(vmax, std::abs(*r.velocity));
    return vmax;
}

namespace {

std::vector<geom::ConvexFront> displace(const EvolutionState& state, double dt) {
    std::vector<geom::ConvexFront> out;
    out.reserve(state.fronts.size());
    for (std::size_t k = 0; k < state.fronts.size(); ++k) {
        std::vector<Vec2> pts(state.fronts[k].markers);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const auto& ray = state.rays[k][i];
            if (!ray.velocity)
                fail(ErrorKind::invalid_parameter, "step requires filled velocities");
            pts[i] += (-ray.inner_normal) * (*ray.velocity * dt);
        }
        out.emplace_back(std::move(pts));
    }
    return out;
}

}  // namespace

EvolutionState step(const EvolutionState& state, double dt, FlowModel model) {
    if (dt < 0.0) fail(ErrorKind::invalid_parameter, "negative dt");
    if (dt == 0.0) return state;

    double min_spacing = std::numeric_limits<double>::infinity();
    for (const auto& f : state.fronts)
        min_spacing = std::min(min_spacing, min_marker_spacing(f));
    const double vmax = std::max(max_speed(state), kSpeedFloor);
    if (dt * vmax > min_spacing * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "dt = " << dt << " violates the CFL bound " << min_spacing / vmax;
        fail(ErrorKind::invalid_parameter, msg.str());
    }

    // midpoint rule; marker indices stay aligned because remeshing happens
    // only after the full step
    EvolutionState mid = make_state(state.t + 0.5 * dt, displace(state, 0.5 * dt));
    fill_velocities(mid, model);

    EvolutionState out;
    out.t = state.t + dt;
    {
        std::vector<geom::ConvexFront> moved(state.fronts);
        for (std::size_t k = 0; k < moved.size(); ++k) {
            for (std::size_t i = 0; i < moved[k].size(); ++i) {
                const auto& ray = mid.rays[k][i];
                moved[k].markers[i] +=
                    (-ray.inner_normal) * (*ray.velocity * dt);
            }
            moved[k] = remesh_equal_arclength(moved[k], moved[k].size());
            moved[k].validate();  // throws convexity_loss when hypotheses break
        }
        out = make_state(state.t + dt, std::move(moved));
    }
    fill_velocities(out, model);
    return out;
}

Trajectory run(const Scenario& scenario) {
    scenario.validate();
    Trajectory traj;
    traj.model = scenario.model;

    try {
        std::vector<geom::ConvexFront> fronts;
        for (const auto& f : scenario.initial_fronts)
            fronts.push_back(remesh_equal_arclength(f, scenario.marker_count));
        EvolutionState state = make_state(scenario.t_start, std::move(fronts));
        fill_velocities(state, scenario.model);
        traj.states.push_back(state);

        const auto count_clamped = [](const EvolutionState& s) {
            int n = 0;
            for (const auto& rays : s.rays)
                for (const auto& r : rays)
                    if (r.kappa > 0.0 &&
                        r.kappa * r.gamma > 1.0 + transport::kKappaGammaSlack)
                        ++n;
            return n;
        };

        int steps_since_store = 0;
        while (state.t < scenario.t_end * (1.0 - 1e-15)) {
            double min_spacing = std::numeric_limits<double>::infinity();
            for (const auto& f : state.fronts)
                min_spacing = std::min(min_spacing, min_marker_spacing(f));
            const double vmax = std::max(max_speed(state), kSpeedFloor);
            const double response =
                std::max(max_curvature_response(state, scenario.model), kSpeedFloor);
            const double dt = std::min(
                {scenario.cfl * min_spacing / vmax,
                 kParabolicSafety * min_spacing * min_spacing / response,
                 scenario.t_end - state.t});

            EvolutionState next = step(state, dt, scenario.model);

            StepDiagnostics diag;
            diag.t = next.t;
            diag.dt = dt;
            diag.max_speed = vmax;
            diag.min_spacing = min_spacing;
            diag.clamped_rays = count_clamped(next);
            double worst = std::numeric_limits<double>::infinity();
            for (const auto& f : next.fronts) {
                double c = 0.0;
                f.is_convex_ccw(&c);
                worst = std::min(worst, c);
            }
            diag.convexity_margin = worst;
            traj.diagnostics.push_back(diag);

            state = std::move(next);

            if (++steps_since_store >= scenario.output_stride ||
                state.t >= scenario.t_end * (1.0 - 1e-15)) {
                // expansion invariant: new markers sit outside-or-on the
                // previously stored front
                const auto& prev = traj.states.back();
                for (std::size_t k = 0; k < state.fronts.size(); ++k) {
                    for (const auto& m : state.fronts[k].markers) {
                        const double sd = geom::signed_distance(prev.fronts[k], m);
                        if (sd > front_tol(prev.fronts[k]))
                            fail(ErrorKind::convexity_loss,
                                 "expansion invariant violated: marker moved inward");
                    }
                }
                traj.states.push_back(state);
                steps_since_store = 0;
            }
        }
    } catch (const SimError& err) {
        traj.error_record = err.what();
        traj.error_kind = err.kind();
    }
    return traj;
}

}  // namespace rayfront::evolution
