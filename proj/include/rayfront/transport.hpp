#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rayfront/vec2.hpp"

namespace rayfront::transport {

// Relative slack allowed on the admissibility bound kappa * gamma <= 1.
inline constexpr double kKappaGammaSlack = 1e-6;

enum class Model { sandpile, molding };

// Principal curvatures kappa_1..kappa_{n-1} of the boundary at the ray foot;
// one entry in the plane.
struct CurvatureVector {
    std::vector<double> kappas;

    CurvatureVector() = default;
    explicit CurvatureVector(double k) : kappas{k} {}
    explicit CurvatureVector(std::vector<double> ks) : kappas(std::move(ks)) {}
    CurvatureVector(std::initializer_list<double> ks) : kappas(ks) {}
};

// Jacobian-weighted mean depth along a ray: the centroid of s under the
// weight prod_i (1 - kappa_i s) over [delta, gamma]. The boundary velocity
// laws are V = mean_ray_depth / t (sandpile) and V = gamma (1 - kappa
// gamma / 2) (molding). Input gamma is clamped to 1/max(kappa) when the
// admissibility bound is exceeded by at most kKappaGammaSlack (relative);
// beyond that an inadmissible_ray error is thrown. clamped, when given,
// reports whether the clamp engaged.
double mean_ray_depth(const CurvatureVector& kappa, double gamma, bool* clamped = nullptr);
double mean_ray_depth(const CurvatureVector& kappa, double gamma, double delta,
                      bool* clamped = nullptr);

double sandpile_velocity(const CurvatureVector& kappa, double gamma, double t,
                         std::optional<double> delta = std::nullopt);
double molding_velocity(double kappa, double gamma);

// Mass transport density on the ray at depth s in [0, gamma].
// Sandpile: vanishes at both ends; molding: V at the foot, 0 at the ridge.
double sandpile_density(const CurvatureVector& kappa, double gamma, double t, double s);
double molding_density(double kappa, double gamma, double s);

// Sampled density profile a(s) on one ray. t is present for sandpile
// profiles and absent for molding.
struct DensityProfile {
    double gamma = 0.0;
    std::optional<double> t;
    std::vector<std::pair<double, double>> samples;  // (s, a)

    void to_csv(std::ostream& os) const;  // header "s,a"
};

DensityProfile sample_density_profile(Model model, const CurvatureVector& kappa,
                                      double gamma, double t, int n_samples = 201);

// Independent oracle: integrates the ray ODE
//   sandpile:  a' = a sum_i kappa_i/(1 - kappa_i s) - s/t + V,  a(0) = 0
//   molding:   a' = a kappa/(1 - kappa s) - 1,                  a(gamma bc) a(0) = V
// with adaptive RK4 at the given local tolerance, in the integrating-factor
// variable b = a prod(1 - kappa_i s) (the forward problem in a itself is
// ill-conditioned as kappa gamma -> 1). The terminal value a(gamma) must
// come out below 1e-7; a residual above 1e-6 throws oracle_inconsistency,
// which is the wrong-velocity signal. velocity_override substitutes V.
DensityProfile integrate_density_ode(Model model, const CurvatureVector& kappa,
                                     double gamma, double t = 1.0,
                                     std::optional<double> velocity_override = std::nullopt,
                                     int n_samples = 201, double local_tol = 1e-10);

// Fitted constants for the structural bounds a <= C1 min(s, gamma-s),
// |a'| <= C2 and (molding) |a - V| <= C3 s, plus the hard flags:
// nonnegativity and the per-model boundary conditions.
struct DensityBoundsReport {
    double c_min_side = 0.0;
    double c_lipschitz = 0.0;
    std::optional<double> c_boundary_gap;
    bool nonnegative = true;
    bool boundary_ok = true;
    std::string detail;
};

DensityBoundsReport fit_density_bounds(const DensityProfile& profile);

}  // namespace rayfront::transport
