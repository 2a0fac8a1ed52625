#include "rayfront/transport.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "rayfront/errors.hpp"
#include "rayfront/quadrature.hpp"

namespace rayfront::transport {

namespace {

double jacobian_weight(const CurvatureVector& kappa, double s) {
    double p = 1.0;
    for (double k : kappa.kappas) p *= 1.0 - k * s;
    return p;
}

// Clamp gamma to the admissibility bound 1/max(kappa); throws beyond the
// relative slack.
double admissible_gamma(const CurvatureVector& kappa, double gamma, bool* clamped) {
    if (clamped) *clamped = false;
    if (!(gamma >= 0.0)) fail(ErrorKind::invalid_parameter, "gamma must be >= 0");
    double kmax = 0.0;
    for (double k : kappa.kappas) kmax = std::max(kmax, k);
    if (kmax <= 0.0) return gamma;
    const double bound = 1.0 / kmax;
    if (gamma <= bound) return gamma;
    if (gamma > bound * (1.0 + kKappaGammaSlack)) {
        std::ostringstream msg;
        msg << "inadmissible ray: kappa*gamma = " << kmax * gamma << " > 1";
        fail(ErrorKind::inadmissible_ray, msg.str());
    }
    if (clamped) *clamped = true;
    return bound;
}

int quadrature_nodes(const CurvatureVector& kappa) {
    // integrands are polynomials of degree <= n = kappas + 1
    return int(kappa.kappas.size()) + 3;
}

}  // namespace

double mean_ray_depth(const CurvatureVector& kappa, double gamma, bool* clamped) {
    return mean_ray_depth(kappa, gamma, 0.0, clamped);
}

double mean_ray_depth(const CurvatureVector& kappa, double gamma, double delta,
                      bool* clamped) {
    if (delta < 0.0) fail(ErrorKind::invalid_parameter, "delta must be >= 0");
    const double g = admissible_gamma(kappa, gamma, clamped);
    const double d = std::min(delta, g);
    if (delta > gamma * (1.0 + 1e-12))
        fail(ErrorKind::invalid_parameter, "delta exceeds gamma");
    if (g == 0.0) return 0.0;
    if (d >= g * (1.0 - 1e-15)) return g;  // continuous limit of the 0/0 case
    const int nodes = quadrature_nodes(kappa);
    const double num = quad::integrate(
        [&](double s) { return s * jacobian_weight(kappa, s); }, d, g, nodes);
    const double den = quad::integrate(
        [&](double s) { return jacobian_weight(kappa, s); }, d, g, nodes);
    return num / den;
}

double sandpile_velocity(const CurvatureVector& kappa, double gamma, double t,
                         std::optional<double> delta) {
    if (!(t > 0.0)) fail(ErrorKind::invalid_parameter, "sandpile time must be > 0");
    const double f = delta ? mean_ray_depth(kappa, gamma, *delta)
                           : mean_ray_depth(kappa, gamma);
    return f / t;
}

double molding_velocity(double kappa, double gamma) {
    bool clamped = false;
    const double g = admissible_gamma(CurvatureVector{kappa}, gamma, &clamped);
    return g * (1.0 - 0.5 * kappa * g);
}

double sandpile_density(const CurvatureVector& kappa, double gamma, double t, double s) {
    if (!(t > 0.0)) fail(ErrorKind::invalid_parameter, "sandpile time must be > 0");
    const double g = admissible_gamma(kappa, gamma, nullptr);
    if (s < -1e-15 * g || s > g * (1.0 + 1e-12))
        fail(ErrorKind::invalid_parameter, "density argument s outside [0, gamma]");
    s = std::clamp(s, 0.0, g);
    if (g == 0.0 || s == 0.0) return 0.0;
    // a = (1/t) [F(gamma) - F(s)] int_0^s P / P(s), the partial-mean
    // difference form: both boundary values vanish identically, without the
    // cancellation-over-P(gamma) the expanded integral form would divide
    const double diff = mean_ray_depth(kappa, g) - mean_ray_depth(kappa, s);
    if (diff == 0.0) return 0.0;  // covers s = gamma, even at kappa gamma = 1
    const int nodes = quadrature_nodes(kappa);
    const double mass = quad::integrate(
        [&](double xi) { return jacobian_weight(kappa, xi); }, 0.0, s, nodes);
    const double p = jacobian_weight(kappa, s);
    if (p <= 0.0) return 0.0;  // degenerate endpoint s = gamma with kappa gamma = 1
    return diff * mass / (t * p);
}

double molding_density(double kappa, double gamma, double s) {
    bool clamped = false;
    const double g = admissible_gamma(CurvatureVector{kappa}, gamma, &clamped);
    if (s < -1e-15 * g || s > g * (1.0 + 1e-12))
        fail(ErrorKind::invalid_parameter, "density argument s outside [0, gamma]");
    s = std::clamp(s, 0.0, g);
    // (gamma-s)/2 * (1 + (1-kappa gamma)/(1-kappa s)); regular at kappa = 0,
    // and the ratio is identically 0 along the degenerate branch kappa g = 1.
    const double num = 1.0 - kappa * g;
    const double den = 1.0 - kappa * s;
    const double ratio = den > 0.0 ? num / den : 0.0;
    return 0.5 * (g - s) * (1.0 + ratio);
}

void DensityProfile::to_csv(std::ostream& os) const {
    os << "s,a\n";
    char buf[80];
    for (const auto& [s, a] : samples) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", s, a);
        os << buf;
    }
}

DensityProfile sample_density_profile(Model model, const CurvatureVector& kappa,
                                      double gamma, double t, int n_samples) {
    DensityProfile profile;
    profile.gamma = gamma;
    if (model == Model::sandpile) profile.t = t;
    profile.samples.reserve(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        const double s = gamma * double(i) / double(n_samples - 1);
        const double a = model == Model::sandpile
                             ? sandpile_density(kappa, gamma, t, s)
                             : molding_density(kappa.kappas.at(0), gamma, s);
        profile.samples.emplace_back(s, a);
    }
    return profile;
}

DensityProfile integrate_density_ode(Model model, const CurvatureVector& kappa,
                                     double gamma, double t,
                                     std::optional<double> velocity_override,
                                     int n_samples, double local_tol) {
    if (model == Model::sandpile && !(t > 0.0))
        fail(ErrorKind::invalid_parameter, "sandpile time must be > 0");
    if (n_samples < 2) fail(ErrorKind::invalid_parameter, "need at least 2 samples");
    const double g = admissible_gamma(kappa, gamma, nullptr);

    const double velocity =
        velocity_override.value_or(model == Model::sandpile
                                       ? sandpile_velocity(kappa, g, t)
                                       : molding_velocity(kappa.kappas.at(0), g));

    // b = a * prod(1 - kappa_i s) turns both ray ODEs into b' = rhs(s):
    //   sandpile: b' = P(s) (V - s/t), b(0) = 0
    //   molding:  b' = -P(s),          b(0) = V
    const auto rhs = [&](double s) {
        const double p = jacobian_weight(kappa, s);
        return model == Model::sandpile ? p * (velocity - s / t) : -p;
    };

    const auto rk4 = [&](double s, double h) {
        const double k1 = rhs(s);
        const double k2 = rhs(s + 0.5 * h);
        const double k4 = rhs(s + h);
        return h / 6.0 * (k1 + 4.0 * k2 + k4);  // k3 == k2: rhs independent of b
    };

    // adaptive step doubling between consecutive output samples
    const auto advance = [&](double b, double s0, double s1) {
        double s = s0;
        double h = (s1 - s0);
        while (s < s1) {
            h = std::min(h, s1 - s);
            const double full = rk4(s, h);
            const double half = rk4(s, 0.5 * h) + rk4(s + 0.5 * h, 0.5 * h);
            const double err = std::abs(full - half) / 15.0;
            const double tol = local_tol * (1.0 + std::abs(b));
            if (err <= tol || h <= 1e-14 * g) {
                b += half + (half - full) / 15.0;
                s += h;
                if (err < 0.1 * tol) h *= 2.0;
            } else {
                h *= 0.5;
            }
        }
        return b;
    };

    DensityProfile profile;
    profile.gamma = g;
    if (model == Model::sandpile) profile.t = t;

    double b = model == Model::sandpile ? 0.0 : velocity;
    double bmax = std::abs(b);
    profile.samples.reserve(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        const double s = g * double(i) / double(n_samples - 1);
        if (i > 0) {
            const double sprev = g * double(i - 1) / double(n_samples - 1);
            b = advance(b, sprev, s);
        }
        bmax = std::max(bmax, std::abs(b));
        const double p = jacobian_weight(kappa, s);
        double a;
        if (p > 1e-12) {
            a = b / p;
        } else {
            // degenerate right endpoint (kappa gamma = 1): the limit value is 0
            a = std::abs(b) <= 1e-9 * (bmax + 1.0) ? 0.0 : b / std::max(p, 1e-12);
        }
        profile.samples.emplace_back(s, a);
    }

    const double terminal = std::abs(profile.samples.back().second);
    if (terminal > 1e-6) {
        std::ostringstream msg;
        msg << "density ODE terminal value a(gamma) = " << terminal
            << " does not vanish; the supplied velocity is inconsistent";
        fail(ErrorKind::oracle_inconsistency, msg.str());
    }
    return profile;
}

DensityBoundsReport fit_density_bounds(const DensityProfile& profile) {
    DensityBoundsReport report;
    if (profile.samples.size() < 3)
        fail(ErrorKind::invalid_parameter, "profile too short for bounds fit");
    const double g = profile.gamma;
    const bool sandpile = profile.t.has_value();
    const double v0 = profile.samples.front().second;  // molding: a(0) = V

    std::ostringstream detail;
    for (std::size_t i = 0; i < profile.samples.size(); ++i) {
        const auto [s, a] = profile.samples[i];
        if (a < -1e-12) {
            report.nonnegative = false;
            detail << "negative sample a(" << s << ") = " << a << "; ";
        }
        // sandpile density vanishes at both ends, molding only at the ridge
        const double side = sandpile ? std::min(s, g - s) : g - s;
        if (side > 1e-12 * g)
            report.c_min_side = std::max(report.c_min_side, a / side);
        if (i > 0) {
            const auto [sp, ap] = profile.samples[i - 1];
            if (s > sp)
                report.c_lipschitz = std::max(report.c_lipschitz, std::abs(a - ap) / (s - sp));
        }
        if (!sandpile && s > 1e-12 * g) {
            const double c3 = std::abs(a - v0) / s;
            report.c_boundary_gap = std::max(report.c_boundary_gap.value_or(0.0), c3);
        }
    }

    const double bc_tol = 1e-9;
    const double a_end = profile.samples.back().second;
    const double a_begin = profile.samples.front().second;
    if (sandpile) {
        report.boundary_ok = std::abs(a_begin) <= bc_tol && std::abs(a_end) <= bc_tol;
    } else {
        report.boundary_ok = std::abs(a_end) <= bc_tol;  // a(0) = V by definition
    }
    if (!report.boundary_ok)
        detail << "boundary conditions violated: a(0) = " << a_begin
               << ", a(gamma) = " << a_end << "; ";
    report.detail = detail.str();
    return report;
}

}  // namespace rayfront::transport
