// Per-pair kernel expressions shared by both backends. Keeping them in one
// place is what makes the serial and OpenMP sums bit-identical; the build
// disables FMA contraction so the compiler cannot fuse them differently.
#pragma once

#include <cmath>

namespace helicity::kernels::detail {

inline constexpr double kInv4Pi = 0.079577471545947667884;  // 1/(4 pi)

/// 1/(r^2+eps2)^(3/2), or 0 when r^2+eps2 == 0.
inline double inv_cube(double dx, double dy, double dz, double eps2) {
    const double r2 = dx * dx + dy * dy + dz * dz + eps2;
    const bool ok = r2 > 0.0;
    const double safe = ok ? r2 : 1.0;
    const double inv = 1.0 / (safe * std::sqrt(safe));
    return ok ? inv : 0.0;
}

/// 1/sqrt(r^2+eps2), or 0 when r^2+eps2 == 0.
inline double inv_dist(double dx, double dy, double dz, double eps2) {
    const double r2 = dx * dx + dy * dy + dz * dz + eps2;
    const bool ok = r2 > 0.0;
    const double safe = ok ? r2 : 1.0;
    const double inv = 1.0 / std::sqrt(safe);
    return ok ? inv : 0.0;
}

/// (A x B) . d / |d|^3 with d = P_a - P_b; 0 for coincident points.
inline double gauss_term(double ax, double ay, double az, double bx, double by, double bz, double dx, double dy,
                         double dz) {
    const double cx = ay * bz - az * by;
    const double cy = az * bx - ax * bz;
    const double cz = ax * by - ay * bx;
    return (cx * dx + cy * dy + cz * dz) * inv_cube(dx, dy, dz, 0.0);
}

}  // namespace helicity::kernels::detail
