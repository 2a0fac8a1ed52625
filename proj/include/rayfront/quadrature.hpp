#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace rayfront::quad {

struct NodeWeight {
    double node;    // in (-1, 1)
    double weight;
};

// Gauss-Legendre nodes and weights on [-1, 1], Newton iteration on P_n.
// Exact for polynomials of degree <= 2n-1.
std::vector<NodeWeight> gauss_legendre(int n);

// Integrate f over [a, b] with an n-node Gauss-Legendre rule.
template <class F>
double integrate(const F& f, double a, double b, int n) {
    if (a == b) return 0.0;
    const auto rule = gauss_legendre(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (const auto& nw : rule) sum += nw.weight * f(mid + half * nw.node);
    return sum * half;
}

}  // namespace rayfront::quad
