#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "rayfront/vec2.hpp"

namespace rayfront::verify {

// Smooth-enough test functions for the weak identities: polynomials up to
// degree 3, gaussians, and max-of-cones fields (1-Lipschitz by construction).
class TestFunction {
public:
    enum class Kind { polynomial, gaussian, cone_max };

    struct Cone {
        double apex = 0.0;  // height at the center
        Vec2 center;
    };

    // coefficient of x^i y^j at index of (i, j) with i + j <= 3
    static TestFunction polynomial(const std::array<double, 10>& coeffs);
    static TestFunction constant(double c);
    static TestFunction gaussian(const Vec2& center, double width);
    static TestFunction cone_max(std::vector<Cone> cones);

    static TestFunction random_polynomial(std::mt19937_64& rng, double scale = 1.0);
    static TestFunction random_cone_max(std::mt19937_64& rng, const Vec2& around,
                                        double spread, int n_cones = 3);

    Kind kind() const { return kind_; }
    double value(const Vec2& p) const;
    Vec2 gradient(const Vec2& p) const;
    // distance from p to the nearest cone_max kink (tie locus or apex);
    // +inf for smooth kinds
    double kink_distance(const Vec2& p) const;

private:
    Kind kind_ = Kind::polynomial;
    std::array<double, 10> coeffs_{};  // polynomial
    Vec2 center_;                      // gaussian
    double width_ = 1.0;
    std::vector<Cone> cones_;          // cone_max
};

// sin^power window over [t0, t1], vanishing at both ends together with its
// first power-1 derivatives; used to localize space-time test functions.
struct TimeBump {
    double t0 = 0.0;
    double t1 = 1.0;
    int power = 4;

    double value(double t) const;
    double derivative(double t) const;
};

}  // namespace rayfront::verify
