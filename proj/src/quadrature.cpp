#include "rayfront/quadrature.hpp"

#include <mutex>
#include <unordered_map>

namespace rayfront::quad {

namespace {

std::vector<NodeWeight> compute_rule(int n) {
    std::vector<NodeWeight> rule(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev estimate of the i-th root, then Newton.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule[i] = {-x, w};
        rule[n - 1 - i] = {x, w};
    }
    return rule;
}

}  // namespace

std::vector<NodeWeight> gauss_legendre(int n) {
    if (n < 1) n = 1;
    static std::mutex mtx;
    static std::unordered_map<int, std::vector<NodeWeight>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
    return it->second;
}

}  // namespace rayfront::quad
