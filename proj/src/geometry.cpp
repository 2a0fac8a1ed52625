#include "rayfront/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "rayfront/errors.hpp"

namespace rayfront::geom {

namespace {

constexpr double kOnBoundaryRel = 1e-6;   // on-polyline check for ray feet
constexpr double kGammaTolRel = 1e-9;     // bisection tolerance, relative to diam
constexpr double kConvexTolRel = 1e-12;   // cross-product tolerance, relative to diam^2

// Nearest point on segment [a,b] to p, with the segment parameter in [0,1].
struct SegNearest {
    Vec2 point;
    double u;
    double dist2;
};

SegNearest segment_nearest(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 e = b - a;
    const double len2 = e.norm2();
    double u = 0.0;
    if (len2 > 0.0) u = std::clamp((p - a).dot(e) / len2, 0.0, 1.0);
    const Vec2 q = a + e * u;
    return {q, u, (p - q).norm2()};
}

// Even-odd crossing test; valid for any simple polygon.
bool point_inside(const std::vector<Vec2>& poly, const Vec2& p) {
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double xc = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < xc) inside = !inside;
        }
    }
    return inside;
}

}  // namespace

double ConvexFront::area() const {
    double s = 0.0;
    const std::size_t n = markers.size();
    for (std::size_t i = 0; i < n; ++i) s += markers[i].cross(markers[(i + 1) % n]);
    return 0.5 * s;
}

double ConvexFront::perimeter() const {
    double s = 0.0;
    const std::size_t n = markers.size();
    for (std::size_t i = 0; i < n; ++i) s += distance(markers[i], markers[(i + 1) % n]);
    return s;
}

double ConvexFront::diameter() const {
    if (markers.empty()) return 0.0;
    double xmin = markers[0].x, xmax = xmin, ymin = markers[0].y, ymax = ymin;
    for (const auto& m : markers) {
        xmin = std::min(xmin, m.x);
        xmax = std::max(xmax, m.x);
        ymin = std::min(ymin, m.y);
        ymax = std::max(ymax, m.y);
    }
    return std::hypot(xmax - xmin, ymax - ymin);
}

Vec2 ConvexFront::centroid() const {
    Vec2 c;
    for (const auto& m : markers) c += m;
    return markers.empty() ? c : c / double(markers.size());
}

Vec2 ConvexFront::edge_vector(std::size_t i) const {
    return markers[(i + 1) % markers.size()] - markers[i];
}

Vec2 ConvexFront::outward_edge_normal(std::size_t i) const {
    // ccw polygon: rotating the edge direction by -90 degrees points outward
    const Vec2 e = edge_vector(i).normalized();
    return {e.y, -e.x};
}

Vec2 ConvexFront::inward_vertex_normal(std::size_t i) const {
    const std::size_t n = markers.size();
    const Vec2 np = outward_edge_normal((i + n - 1) % n);
    const Vec2 nc = outward_edge_normal(i);
    Vec2 bis = (np + nc).normalized();
    if (bis.norm2() == 0.0) bis = nc;  // straight angle fallback
    return -bis;
}

double ConvexFront::vertex_turning(std::size_t i) const {
    const std::size_t n = markers.size();
    const Vec2 np = outward_edge_normal((i + n - 1) % n);
    const Vec2 nc = outward_edge_normal(i);
    return std::atan2(std::abs(np.cross(nc)), np.dot(nc));
}

std::vector<double> ConvexFront::cumulative_arclength() const {
    const std::size_t n = markers.size();
    std::vector<double> cum(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        cum[i + 1] = cum[i] + distance(markers[i], markers[(i + 1) % n]);
    return cum;
}

double ConvexFront::polygonization_sagitta() const {
    const std::size_t n = markers.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        worst = std::max(worst, 1.0 - std::cos(0.5 * vertex_turning(i)));
    return worst * diameter();
}

bool ConvexFront::is_convex_ccw(double* worst_cross) const {
    const std::size_t n = markers.size();
    const double tol = kConvexTolRel * diameter() * diameter();
    double worst = std::numeric_limits<double>::infinity();
    bool ok = area() > 0.0;
    for (std::size_t i = 0; i < n && ok; ++i) {
        const Vec2 e0 = markers[i] - markers[(i + n - 1) % n];
        const Vec2 e1 = markers[(i + 1) % n] - markers[i];
        const double c = e0.cross(e1);
        worst = std::min(worst, c);
        if (c < -tol) ok = false;
    }
    if (worst_cross) *worst_cross = worst;
    return ok;
}

void ConvexFront::validate() const {
    if (markers.size() < 3) fail(ErrorKind::degenerate_front, "front needs at least 3 markers");
    const double dedup = 1e-14 * diameter();
    const std::size_t n = markers.size();
    for (std::size_t i = 0; i < n; ++i)
        if (distance(markers[i], markers[(i + 1) % n]) <= dedup)
            fail(ErrorKind::degenerate_front, "coincident consecutive markers");
    double worst = 0.0;
    if (!is_convex_ccw(&worst)) {
        std::ostringstream msg;
        msg << "front is not convex/ccw (worst cross product " << worst << ")";
        fail(ErrorKind::convexity_loss, msg.str());
    }
}

void ConvexFront::to_csv(std::ostream& os) const {
    os << "x,y\n";
    char buf[80];
    for (const auto& m : markers) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", m.x, m.y);
        os << buf;
    }
}

ConvexFront ConvexFront::from_csv(std::istream& is) {
    std::string line;
    std::vector<Vec2> pts;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (lineno == 1 && line.rfind("x,y", 0) == 0) continue;
        double x = 0, y = 0;
        if (std::sscanf(line.c_str(), "%lf,%lf", &x, &y) != 2)
            fail(ErrorKind::parse_error,
                 "markers csv line " + std::to_string(lineno) + ": expected x,y");
        pts.push_back({x, y});
    }
    return ConvexFront(std::move(pts));
}

void ConvexFront::save_csv(const std::string& path) const {
    std::ofstream os(path);
    if (!os) fail(ErrorKind::io_error, "cannot write " + path);
    to_csv(os);
}

ConvexFront ConvexFront::load_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) fail(ErrorKind::io_error, "cannot read " + path);
    return from_csv(is);
}

double signed_distance(const ConvexFront& front, const Vec2& p) {
    const std::size_t n = front.size();
    if (n < 2) fail(ErrorKind::degenerate_front, "signed_distance on empty front");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        best = std::min(best,
                        segment_nearest(p, front[i], front[(i + 1) % n]).dist2);
    }
    const double d = std::sqrt(best);
    return point_inside(front.markers, p) ? d : -d;
}

std::vector<NearestPoint> nearest_points(const ConvexFront& front, const Vec2& p,
                                         double tol) {
    const std::size_t n = front.size();
    double dmin2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        dmin2 = std::min(dmin2, segment_nearest(p, front[i], front[(i + 1) % n]).dist2);
    const double dmin = std::sqrt(dmin2);

    std::vector<NearestPoint> out;
    const double spatial = std::max(tol, 1e-12 * front.diameter());
    const double keep = dmin + tol;
    double arc = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += distance(front[i], front[(i + 1) % n]);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = front[i];
        const Vec2& b = front[(i + 1) % n];
        const double len = distance(a, b);
        const auto sn = segment_nearest(p, a, b);
        if (sn.dist2 <= keep * keep) {
            double arclen = arc + sn.u * len;
            if (arclen >= total) arclen -= total;  // closing edge endpoint wraps to 0
            bool dup = false;
            for (const auto& got : out)
                if (distance(got.point, sn.point) <= spatial) { dup = true; break; }
            if (!dup) out.push_back({sn.point, arclen});
        }
        arc += len;
    }
    std::sort(out.begin(), out.end(),
              [](const NearestPoint& a, const NearestPoint& b) { return a.arclength < b.arclength; });
    return out;
}

NearestPoint nearest_point(const ConvexFront& front, const Vec2& p) {
    return nearest_points(front, p, 1e-9 * front.diameter()).front();
}

double curvature_at(const ConvexFront& front, std::size_t i) {
    const std::size_t n = front.size();
    if (n < 3) fail(ErrorKind::degenerate_front, "curvature needs 3 markers");
    const Vec2& a = front[(i + n - 1) % n];
    const Vec2& b = front[i];
    const Vec2& c = front[(i + 1) % n];
    const double lab = distance(a, b), lbc = distance(b, c), lca = distance(c, a);
    const double floor = 1e-14 * std::max({lab, lbc, lca});
    if (lab <= floor || lbc <= floor)
        fail(ErrorKind::degenerate_front, "coincident markers in curvature stencil");
    // kappa = 2 cross / (|ab| |bc| |ca|): inverse circumradius, exact for
    // three points on a circle, signed positive at ccw-convex corners.
    const double cr = (b - a).cross(c - b);
    return 2.0 * cr / (lab * lbc * lca);
}

// Largest ball touching the front at y with center on y + s n, as the
// exact minimum over site constraints: the ball of radius s centered at
// c = y + s n must keep every marker and every edge at distance >= s.
// Two conventions make this read the curve the markers sample instead of
// the raw chord polygon. Sites through y itself are excluded (the polyline
// carries no sub-resolution information about the foot's own corner wedge).
// And each edge constraint is relaxed outward by the chord sagitta implied
// by its endpoint curvatures, which turns the chords of a sampled circle
// into its exact tangent lines.
TangentBallSolver::TangentBallSolver(const ConvexFront& front) : front_(&front) {
    const std::size_t m = front.size();
    diam_ = front.diameter();
    edge_normal_.resize(m);
    edge_len2_.resize(m);
    sagitta_.resize(m);
    std::vector<double> kappa(m);
    for (std::size_t j = 0; j < m; ++j) kappa[j] = std::abs(curvature_at(front, j));
    for (std::size_t j = 0; j < m; ++j) {
        edge_normal_[j] = front.outward_edge_normal(j);
        edge_len2_[j] = front.edge_vector(j).norm2();
        sagitta_[j] = 0.125 * edge_len2_[j] * std::min(kappa[j], kappa[(j + 1) % m]);
    }
}

double TangentBallSolver::gamma(const Vec2& y, const Vec2& n, bool checked) const {
    const ConvexFront& front = *front_;
    if (checked) {
        if (std::abs(n.norm() - 1.0) > 1e-9)
            fail(ErrorKind::invalid_ray, "ray direction must be a unit vector");
        if (std::abs(signed_distance(front, y)) > kOnBoundaryRel * diam_)
            fail(ErrorKind::invalid_ray, "ray foot is not on the front");
        const double eps = 1e-6 * diam_;
        if (signed_distance(front, y + n * eps) < 0.25 * eps)
            fail(ErrorKind::invalid_ray, "direction is not inner-pointing");
    }

    const double foot_snap = 1e-9 * diam_;
    const double snap2 = foot_snap * foot_snap;
    const std::size_t m = front.size();
    double best = diam_;

    for (std::size_t j = 0; j < m; ++j) {
        const Vec2 d = front[j] - y;
        const double len2 = d.norm2();
        if (len2 <= snap2) continue;  // the foot itself
        const double denom = n.dot(d);
        // sites within ~1e-10 rad of the tangent plane carry only roundoff;
        // the threshold is relative so that close-by curvature sites
        // (denom ~ |d|^2 kappa / 2) always survive
        if (denom <= 1e-10 * std::sqrt(len2)) continue;
        const double bound = 0.5 * len2 / denom;
        if (bound < best) best = bound;
    }

    for (std::size_t j = 0; j < m; ++j) {
        const Vec2& a = front[j];
        const double denom = 1.0 + n.dot(edge_normal_[j]);
        if (denom <= 1e-12) continue;
        const double dist_line = (a - y).dot(edge_normal_[j]) + sagitta_[j];
        if (dist_line < 0.0) continue;
        const double rho = dist_line / denom;
        if (rho >= best) continue;
        const Vec2& b = front[(j + 1) % m];
        if (segment_nearest(y, a, b).dist2 <= snap2)
            continue;  // an edge through the foot
        // the perpendicular foot of the ball center must fall inside the
        // segment; otherwise the endpoint constraints already govern
        const Vec2 c = y + n * rho;
        const double proj = (c - a).dot(b - a) / edge_len2_[j];
        if (proj >= 0.0 && proj <= 1.0) best = rho;
    }
    return std::max(best, 0.0);
}

double ray_length_gamma(const ConvexFront& front, const Vec2& y, const Vec2& n) {
    return TangentBallSolver(front).gamma(y, n);
}

std::vector<RaySample> sample_rays(const ConvexFront& front) {
    front.validate();
    const std::size_t n = front.size();
    const auto cum = front.cumulative_arclength();
    const TangentBallSolver solver(front);
    std::vector<RaySample> rays(n);
    for (std::size_t i = 0; i < n; ++i) {
        RaySample& r = rays[i];
        r.foot = front[i];
        r.inner_normal = front.inward_vertex_normal(i);
        r.kappa = curvature_at(front, i);
        r.gamma = solver.gamma(r.foot, r.inner_normal, /*checked=*/false);
        r.arclength = cum[i];
    }
    return rays;
}

DilatedFront dilate(const ConvexFront& front, double r, double max_arc_sagitta) {
    if (!(r > 0.0)) fail(ErrorKind::invalid_parameter, "dilation radius must be > 0");
    front.validate();
    const std::size_t n = front.size();

    double max_step = 2.0 * M_PI / double(n);  // mean angular step of the base
    if (max_arc_sagitta > 0.0) {
        // chord sagitta of an arc step phi is r (1 - cos(phi/2)) ~ r phi^2 / 8
        const double phi = std::sqrt(8.0 * max_arc_sagitta / r);
        max_step = std::min(max_step, phi);
    }

    DilatedFront out;
    out.base = front;
    out.radius = r;
    out.correspondent.resize(n);

    std::vector<Vec2> pts;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 np = front.outward_edge_normal((i + n - 1) % n);
        const Vec2 nc = front.outward_edge_normal(i);
        const double a0 = std::atan2(np.y, np.x);
        double turn = std::atan2(np.cross(nc), np.dot(nc));
        if (turn < 1e-12) {  // collinear vertex: single offset point
            pts.push_back(front[i] + nc * r);
            out.correspondent[i] = pts.size() - 1;
        } else {
            // sample [a0, a0+turn] symmetric about the bisector so the
            // canonical correspondent y + r * bisector is always a marker
            const int half_steps = std::max(1, int(std::ceil(0.5 * turn / max_step)));
            const double dphi = 0.5 * turn / half_steps;
            for (int k = 0; k <= 2 * half_steps; ++k) {
                const double phi = a0 + k * dphi;
                pts.push_back(front[i] + Vec2{std::cos(phi), std::sin(phi)} * r);
                if (k == half_steps) out.correspondent[i] = pts.size() - 1;
            }
        }
        // midpoint of the straight offset piece toward the next vertex, so
        // the flat edges carry a collinear marker stencil
        pts.push_back((front[i] + front[(i + 1) % n]) * 0.5 + nc * r);
    }
    out.offset = ConvexFront(std::move(pts));
    return out;
}

std::optional<ConvexFront> intersect(const ConvexFront& a, const ConvexFront& b) {
    a.validate();
    b.validate();
    // Sutherland-Hodgman clip of a against each half-plane of b.
    std::vector<Vec2> poly = a.markers;
    const std::size_t nb = b.size();
    for (std::size_t i = 0; i < nb && !poly.empty(); ++i) {
        const Vec2 p0 = b[i];
        const Vec2 dir = b.edge_vector(i);
        const auto inside = [&](const Vec2& q) { return dir.cross(q - p0) >= 0.0; };
        std::vector<Vec2> next;
        next.reserve(poly.size() + 4);
        const std::size_t m = poly.size();
        for (std::size_t j = 0; j < m; ++j) {
            const Vec2& cur = poly[j];
            const Vec2& prv = poly[(j + m - 1) % m];
            const bool ci = inside(cur), pi = inside(prv);
            if (ci != pi) {
                const double fp = dir.cross(prv - p0);
                const double fc = dir.cross(cur - p0);
                const double t = fp / (fp - fc);
                next.push_back(prv + (cur - prv) * t);
            }
            if (ci) next.push_back(cur);
        }
        poly.swap(next);
    }
    if (poly.size() < 3) return std::nullopt;

    const double dedup = 1e-10 * std::max(a.diameter(), b.diameter());
    std::vector<Vec2> clean;
    for (const auto& p : poly)
        if (clean.empty() || distance(clean.back(), p) > dedup) clean.push_back(p);
    while (clean.size() > 1 && distance(clean.front(), clean.back()) <= dedup)
        clean.pop_back();
    if (clean.size() < 3) return std::nullopt;

    ConvexFront result(std::move(clean));
    const double diam = std::max(a.diameter(), b.diameter());
    if (result.area() <= 1e-12 * diam * diam) return std::nullopt;
    return result;
}

Condition1Report check_condition_1(const ConvexFront& front, double r) {
    Condition1Report report;
    report.worst_margin = std::numeric_limits<double>::infinity();
    if (!(r > 0.0)) fail(ErrorKind::invalid_parameter, "condition radius must be > 0");
    if (front.size() < 3) fail(ErrorKind::degenerate_front, "front needs at least 3 markers");

    double xmin = front[0].x, xmax = xmin, ymin = front[0].y, ymax = ymin;
    for (const auto& m : front.markers) {
        xmin = std::min(xmin, m.x);
        xmax = std::max(xmax, m.x);
        ymin = std::min(ymin, m.y);
        ymax = std::max(ymax, m.y);
    }
    const double diam = front.diameter();
    const double cell = diam / 200.0;
    // Exterior points with d >= 2r pass automatically, and the ball test for a
    // foot/direction pair does not depend on the probe depth, so the probe band
    // never needs to extend past one body diameter.
    const double margin = std::min(2.0 * r, diam) + 2.0 * cell;
    const double tol = 1e-9 * (diam + 2.0 * r);
    const double near_tol = 1e-9 * diam;

    for (double x = xmin - margin; x <= xmax + margin; x += cell) {
        for (double y = ymin - margin; y <= ymax + margin; y += cell) {
            const Vec2 p{x, y};
            const double sd = signed_distance(front, p);
            if (sd >= -near_tol) continue;  // interior or boundary
            const double d = -sd;
            ++report.probes;
            if (d >= 2.0 * r) continue;  // the ball through p already has room
            const Vec2 foot = nearest_point(front, p).point;
            const Vec2 e = (p - foot) / d;
            const Vec2 center = foot + e * (2.0 * r);
            // exterior ball B_2r(center) touching at foot must avoid the body
            const double dc = signed_distance(front, center);
            const double gap = -dc - 2.0 * r;
            if (gap < report.worst_margin) {
                report.worst_margin = gap;
                report.worst_point = p;
            }
            if (dc > -2.0 * r + tol) {
                ++report.violations;
                report.satisfied = false;
            }
        }
    }
    if (report.probes == 0) report.worst_margin = 0.0;
    return report;
}

}  // namespace rayfront::geom
