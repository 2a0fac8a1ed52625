#pragma once

#include <string>
#include <vector>

#include "rayfront/vec2.hpp"

namespace rayfront::io {

// Minimal SVG 1.1 writer for the plot command: world coordinates are mapped
// into a fixed pixel canvas with y flipped.
class SvgCanvas {
public:
    SvgCanvas(double xmin, double xmax, double ymin, double ymax, int width = 720,
              int height = 720);

    void polyline(const std::vector<Vec2>& pts, const std::string& color,
                  double stroke_width, bool closed = false);
    void line(const Vec2& a, const Vec2& b, const std::string& color,
              double stroke_width);
    void circle(const Vec2& center, double radius_px, const std::string& color);
    void text(const Vec2& at, const std::string& s, int px = 12);

    void save(const std::string& path) const;

    // piecewise blue -> red ramp for u in [0, 1]
    static std::string heat_color(double u);

private:
    Vec2 map(const Vec2& world) const;

    double xmin_, xmax_, ymin_, ymax_;
    int width_, height_;
    std::string body_;
};

}  // namespace rayfront::io
