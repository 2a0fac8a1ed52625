#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rayfront/vec2.hpp"

namespace rayfront::geom {

// Closed convex marker polyline, counterclockwise, last marker connects to
// the first. Construction does not validate; call validate() where the
// convexity hypotheses matter.
struct ConvexFront {
    std::vector<Vec2> markers;

    ConvexFront() = default;
    explicit ConvexFront(std::vector<Vec2> m) : markers(std::move(m)) {}

    std::size_t size() const { return markers.size(); }
    const Vec2& operator[](std::size_t i) const { return markers[i]; }

    double area() const;       // shoelace, positive for ccw
    double perimeter() const;
    double diameter() const;   // bounding-box diagonal
    Vec2 centroid() const;

    // Edge i runs from markers[i] to markers[(i+1) % size()].
    Vec2 edge_vector(std::size_t i) const;
    Vec2 outward_edge_normal(std::size_t i) const;
    Vec2 inward_vertex_normal(std::size_t i) const;
    // Angle between the outward normals of the edges adjacent to vertex i.
    double vertex_turning(std::size_t i) const;

    std::vector<double> cumulative_arclength() const;  // size N+1, last = perimeter

    // Largest chord sagitta of the vertex corners: how far the polyline can
    // locally deviate from the smooth curve it samples. Tests use this as the
    // geometric tolerance scale.
    double polygonization_sagitta() const;

    // Throws degenerate_front / convexity_loss when the polyline is not a
    // simple closed convex ccw curve (cross-product tolerance 1e-12 * diam^2).
    void validate() const;
    bool is_convex_ccw(double* worst_cross = nullptr) const;

    void to_csv(std::ostream& os) const;          // header "x,y", 17 digits
    static ConvexFront from_csv(std::istream& is);
    void save_csv(const std::string& path) const;
    static ConvexFront load_csv(const std::string& path);
};

// One boundary foot with the local ray data used by the velocity laws.
struct RaySample {
    Vec2 foot;
    Vec2 inner_normal;
    double kappa = 0.0;      // curvature, positive for convex
    double gamma = 0.0;      // distance-ray length
    double arclength = 0.0;  // foot position along the front
    std::optional<double> delta;     // truncated ray start (two-body mode)
    std::optional<double> velocity;  // outer normal velocity, set by the flow laws
};

struct DilatedFront {
    ConvexFront base;
    double radius = 0.0;
    ConvexFront offset;
    // offset marker index matching each base vertex (the arc midpoint along
    // the vertex bisector, at distance exactly radius from the base vertex).
    std::vector<std::size_t> correspondent;
};

struct Condition1Report {
    bool satisfied = true;
    int probes = 0;
    int violations = 0;
    double worst_margin = 0.0;  // min over probes of |d(c)| - 2r, negative on failure
    Vec2 worst_point;
};

// Signed distance to the polyline: positive inside, negative outside, exact
// point-to-segment minimum over all edges. Valid for any simple polygon.
double signed_distance(const ConvexFront& front, const Vec2& p);

struct NearestPoint {
    Vec2 point;
    double arclength;
};

// All boundary points within tol of the minimum distance, sorted by
// arclength; front() is the designated representative.
std::vector<NearestPoint> nearest_points(const ConvexFront& front, const Vec2& p,
                                         double tol);
NearestPoint nearest_point(const ConvexFront& front, const Vec2& p);

// Inverse circumcircle radius of markers i-1, i, i+1; signed positive for a
// ccw convex corner, 0 for collinear. Throws on coincident markers.
double curvature_at(const ConvexFront& front, std::size_t i);

// Length of the distance ray from boundary point y in inner direction n:
// the radius of the largest interior ball touching at y, i.e.
// sup { s : signed_distance(y + s n) = s } up to the foot's corner wedge.
// Computed exactly as the minimum over marker and edge ball constraints
// (the sites through y itself are excluded, so vertex feet read the curve
// the markers sample). Throws invalid_ray when n is not inner-pointing.
double ray_length_gamma(const ConvexFront& front, const Vec2& y, const Vec2& n);

// Site-precomputed form of ray_length_gamma for repeated queries against
// one front. The front must outlive the solver.
class TangentBallSolver {
public:
    explicit TangentBallSolver(const ConvexFront& front);

    // checked = false skips the on-boundary and inner-pointing guards
    // (safe for feet that are markers with their inward vertex normals).
    double gamma(const Vec2& y, const Vec2& n, bool checked = true) const;

private:
    const ConvexFront* front_;
    std::vector<Vec2> edge_normal_;
    std::vector<double> edge_len2_;
    std::vector<double> sagitta_;
    double diam_ = 0.0;
};

// One RaySample per marker; velocity left unset.
std::vector<RaySample> sample_rays(const ConvexFront& front);

// Minkowski sum with a disk of radius r. Vertex arcs are sampled with
// angular step <= the front's mean turning per vertex, refined further until
// the arc chord sagitta is below max_arc_sagitta (pass <= 0 for no
// refinement beyond the default).
DilatedFront dilate(const ConvexFront& front, double r, double max_arc_sagitta = -1.0);

// Convex polygon clip; empty when the interiors are disjoint.
std::optional<ConvexFront> intersect(const ConvexFront& a, const ConvexFront& b);

// Exterior tangent-ball test: every exterior probe point on a bounding grid
// (resolution diam/200) must admit an exterior disk of radius 2r touching
// the boundary at its nearest point. True for every convex front and r > 0.
Condition1Report check_condition_1(const ConvexFront& front, double r);

}  // namespace rayfront::geom
