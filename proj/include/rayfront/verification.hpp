#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rayfront/evolution.hpp"
#include "rayfront/geometry.hpp"
#include "rayfront/test_function.hpp"

namespace rayfront::verify {

using ScalarField = std::function<double(const Vec2&)>;
// Ray-aware field: receives the foot index, the depth s along the ray, and
// the ambient point. Lets callers express fields exactly in ray coordinates
// (e.g. the front's own distance function, which is s on its rays).
using RayField = std::function<double(std::size_t, double, const Vec2&)>;

struct ResidualReport {
    std::string identity;
    double t = 0.0;
    double value = 0.0;       // the residual (or gap)
    double scale = 1.0;       // |LHS| + |RHS| + 1
    double quad_error = 0.0;  // coarse-vs-fine quadrature difference
    double tolerance = 0.0;
    bool pass = false;

    std::string to_json() const;
};

// Bulk integral over the body by the ray decomposition:
//   integral = sum_feet w_i  int_0^gamma_i f(y_i + s n_i) (1 - kappa_i s) ds
// with trapezoid arclength weights over the feet and an n-node
// Gauss-Legendre rule along each ray.
double integrate_by_rays(const geom::ConvexFront& front,
                         const std::vector<geom::RaySample>& rays,
                         const ScalarField& f, int nodes = 16);
double integrate_by_rays(const geom::ConvexFront& front,
                         const std::vector<geom::RaySample>& rays,
                         const RayField& f, int nodes = 16);

// Weak mass balance for the sandpile state:
//   int a Dw . Dphi  =  int (w/t - w_t) phi
// with w the distance function, Dw the inner ray direction and w_t the foot
// velocity. Residual tolerance 1e-5 * scale.
ResidualReport mass_balance_residual(const evolution::EvolutionState& state,
                                     const TestFunction& phi);

// Variational inequality for the sandpile state:
//   gap = int (w/t - w_t) (w - v) >= 0   for any 1-Lipschitz v.
// Pass when gap >= -1e-8 * scale.
ResidualReport subdifferential_gap(const evolution::EvolutionState& state,
                                   const ScalarField& v);
ResidualReport subdifferential_gap(const evolution::EvolutionState& state,
                                   const RayField& v);

// Fixed-time molding identity (the r -> 0 boundary form):
//   int_Omega phi  =  int_bdry phi V dH1  +  int_Omega a Du . Dphi.
// Residual tolerance 1e-4 * scale.
ResidualReport molding_balance_residual(const evolution::EvolutionState& state,
                                        const TestFunction& phi);

struct SpaceTimeReports {
    ResidualReport space_time;  // int_0^T int w (phi + phi_t) - a Du . Dphi = 0
    ResidualReport kinematic;   // int_0^T int_bdry phi V + int_0^T int chi phi_t = 0
};

// Time integrals by trapezoid over the stored states; requires at least 16
// of them. phi(x, t) = spatial(x) * bump(t).
SpaceTimeReports spacetime_balance_residual(const evolution::Trajectory& traj,
                                            const TestFunction& spatial,
                                            const TimeBump& bump);

struct ProbeReport {
    double ratio = 0.0;  // max |y - y1| / |x - x1| over the probe circle
    double bound = 0.0;  // 1 + |x - y| / |x - v|, v the upper ray end
    double ratio_over_bound = 0.0;
};

// Local Lipschitz constant of the nearest-point projection at x, probed on a
// circle of radius h, against the ray-position bound. Throws ridge_proximity
// when gamma(x) - d(x) <= 10 h.
ProbeReport projection_lipschitz_probe(const geom::ConvexFront& front, const Vec2& x,
                                       double h, int directions = 32);

void write_reports_json(const std::vector<ResidualReport>& reports,
                        const std::string& path);

}  // namespace rayfront::verify
