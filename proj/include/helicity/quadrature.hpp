/// @file quadrature.hpp
/// @brief Gauss-Legendre rules on [0, 1].
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "helicity/vec3.hpp"

namespace helicity {

struct GaussRule {
    std::vector<double> nodes;    // in (0, 1)
    std::vector<double> weights;  // sum to 1
};

/// n-point Gauss-Legendre rule mapped to [0, 1]; n = 1 is the midpoint rule.
inline GaussRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre needs n >= 1");
    GaussRule r;
    if (n == 1) return {{0.5}, {1.0}};
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = 0.5 * (1.0 - x);
        r.nodes[n - 1 - i] = 0.5 * (1.0 + x);
        r.weights[i] = r.weights[n - 1 - i] = 0.5 * w;
    }
    return r;
}

}  // namespace helicity
