#pragma once

// Test-only oracles, independent of the library's computation paths:
// dense boundary sampling for distances, Monte Carlo integrals, and the
// closed-form radius laws for disk runs.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "rayfront/geometry.hpp"

namespace oracle {

using rayfront::Vec2;
using rayfront::geom::ConvexFront;

// Unsigned distance to the polyline by dense per-edge sampling.
inline double brute_distance(const ConvexFront& front, const Vec2& p,
                             int per_edge = 64) {
    double best = 1e300;
    const std::size_t n = front.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = front[i];
        const Vec2 b = front[(i + 1) % n];
        for (int k = 0; k <= per_edge; ++k) {
            const Vec2 q = a + (b - a) * (double(k) / per_edge);
            best = std::min(best, rayfront::distance(p, q));
        }
    }
    return best;
}

struct McResult {
    double value;
    double stderr_est;
};

// Bounding-box point cloud with interior flags, so several integrands can
// share one (expensive) classification pass.
struct McCloud {
    std::vector<Vec2> points;
    std::vector<bool> inside;
    double box_area = 0.0;

    McCloud(const ConvexFront& front, int samples, std::uint64_t seed) {
        double xmin = front[0].x, xmax = xmin, ymin = front[0].y, ymax = ymin;
        for (const auto& m : front.markers) {
            xmin = std::min(xmin, m.x);
            xmax = std::max(xmax, m.x);
            ymin = std::min(ymin, m.y);
            ymax = std::max(ymax, m.y);
        }
        box_area = (xmax - xmin) * (ymax - ymin);
        // radius shortcuts around the centroid spare the exact test for
        // most points (the front is convex)
        const Vec2 c = front.centroid();
        double r_in = 1e300, r_out = 0.0;
        for (std::size_t i = 0; i < front.size(); ++i) {
            r_out = std::max(r_out, rayfront::distance(front[i], c));
            const Vec2 a = front[i], b = front[(i + 1) % front.size()];
            const Vec2 e = b - a;
            const double t = std::clamp((c - a).dot(e) / e.norm2(), 0.0, 1.0);
            r_in = std::min(r_in, rayfront::distance(c, a + e * t));
        }
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> ux(xmin, xmax), uy(ymin, ymax);
        points.reserve(samples);
        inside.reserve(samples);
        for (int i = 0; i < samples; ++i) {
            const Vec2 p{ux(rng), uy(rng)};
            points.push_back(p);
            const double rc = rayfront::distance(p, c);
            if (rc < 0.999 * r_in)
                inside.push_back(true);
            else if (rc > 1.001 * r_out)
                inside.push_back(false);
            else
                inside.push_back(rayfront::geom::signed_distance(front, p) > 0.0);
        }
    }

    McResult integrate(const std::function<double(const Vec2&)>& f) const {
        double sum = 0.0, sum2 = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const double v = inside[i] ? f(points[i]) : 0.0;
            sum += v;
            sum2 += v * v;
        }
        const double n = double(points.size());
        const double mean = sum / n;
        const double var = std::max(0.0, sum2 / n - mean * mean);
        return {box_area * mean, box_area * std::sqrt(var / n)};
    }
};

// Monte Carlo integral of f over the interior, bounding-box sampling.
inline McResult monte_carlo_integral(const ConvexFront& front,
                                     const std::function<double(const Vec2&)>& f,
                                     int samples, std::uint64_t seed) {
    return McCloud(front, samples, seed).integrate(f);
}

// Circle-lens area for two radius-R disks with center distance d.
inline double lens_area(double R, double d) {
    return 2.0 * R * R * std::acos(d / (2.0 * R)) -
           0.5 * d * std::sqrt(4.0 * R * R - d * d);
}

// Mean marker radius about the marker centroid.
inline double mean_radius(const ConvexFront& front) {
    const Vec2 c = front.centroid();
    double r = 0.0;
    for (const auto& m : front.markers) r += rayfront::distance(m, c);
    return r / double(front.size());
}

inline double radius_stddev(const ConvexFront& front) {
    const Vec2 c = front.centroid();
    const double mean = mean_radius(front);
    double acc = 0.0;
    for (const auto& m : front.markers) {
        const double d = rayfront::distance(m, c) - mean;
        acc += d * d;
    }
    return std::sqrt(acc / double(front.size()));
}

// Closed-form disk radius laws: dR/dt = R/(3t) and dR/dt = R/2.
inline double sandpile_disk_radius(double r0, double t0, double t) {
    return r0 * std::cbrt(t / t0);
}
inline double molding_disk_radius(double r0, double t0, double t) {
    return r0 * std::exp(0.5 * (t - t0));
}

}  // namespace oracle
