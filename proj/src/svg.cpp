#include "rayfront/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "rayfront/errors.hpp"

namespace rayfront::io {

SvgCanvas::SvgCanvas(double xmin, double xmax, double ymin, double ymax, int width,
                     int height)
    : xmin_(xmin), xmax_(xmax), ymin_(ymin), ymax_(ymax), width_(width),
      height_(height) {}

Vec2 SvgCanvas::map(const Vec2& world) const {
    const double u = (world.x - xmin_) / (xmax_ - xmin_);
    const double v = (world.y - ymin_) / (ymax_ - ymin_);
    return {u * width_, (1.0 - v) * height_};
}

void SvgCanvas::polyline(const std::vector<Vec2>& pts, const std::string& color,
                         double stroke_width, bool closed) {
    if (pts.size() < 2) return;
    body_ += closed ? "<polygon points=\"" : "<polyline points=\"";
    char buf[64];
    for (const auto& p : pts) {
        const Vec2 q = map(p);
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", q.x, q.y);
        body_ += buf;
    }
    std::snprintf(buf, sizeof buf, "\" fill=\"none\" stroke-width=\"%.2f\"",
                  stroke_width);
    body_ += buf;
    body_ += " stroke=\"" + color + "\"/>\n";
}

void SvgCanvas::line(const Vec2& a, const Vec2& b, const std::string& color,
                     double stroke_width) {
    polyline({a, b}, color, stroke_width);
}

void SvgCanvas::circle(const Vec2& center, double radius_px, const std::string& color) {
    const Vec2 q = map(center);
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"%s\"/>\n", q.x,
                  q.y, radius_px, color.c_str());
    body_ += buf;
}

void SvgCanvas::text(const Vec2& at, const std::string& s, int px) {
    const Vec2 q = map(at);
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" font-size=\"%d\" "
                  "font-family=\"monospace\">",
                  q.x, q.y, px);
    body_ += buf;
    body_ += s + "</text>\n";
}

void SvgCanvas::save(const std::string& path) const {
    std::ofstream os(path);
    if (!os) fail(ErrorKind::io_error, "cannot write " + path);
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
       << width_ << "\" height=\"" << height_ << "\" viewBox=\"0 0 " << width_ << " "
       << height_ << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << body_ << "</svg>\n";
}

std::string SvgCanvas::heat_color(double u) {
    u = std::clamp(u, 0.0, 1.0);
    const int r = int(40 + 215 * u);
    const int g = int(60 + 40 * (1.0 - u));
    const int b = int(240 - 200 * u);
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

}  // namespace rayfront::io
