/// @file kernels.hpp
/// @brief Dense pairwise summation kernels (Biot-Savart, 1/r potential, Gauss
/// linking kernel) in two interchangeable backends.
///
/// The serial backend is the reference. The OpenMP backend blocks targets and
/// vectorizes across them, but every target still accumulates its sources one
/// at a time in source order with the same floating-point expressions, so both
/// backends are bit-identical for any thread count and block size.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "helicity/vec3.hpp"

namespace helicity::kernels {

enum class Backend { Serial, OpenMP };

/// Structure-of-arrays point list.
struct PointSet {
    std::vector<double> x, y, z;

    PointSet() = default;
    explicit PointSet(std::span<const Vec3> pts);
    std::size_t size() const { return x.size(); }
    void push_back(const Vec3& p) {
        x.push_back(p.x);
        y.push_back(p.y);
        z.push_back(p.z);
    }
    Vec3 operator[](std::size_t i) const { return {x[i], y[i], z[i]}; }
};

/// Points carrying vector strengths (field value times quadrature weight, or
/// a segment vector for curves).
struct SourceSet {
    PointSet pos;
    std::vector<double> sx, sy, sz;

    std::size_t size() const { return pos.size(); }
    void push_back(const Vec3& p, const Vec3& s) {
        pos.push_back(p);
        sx.push_back(s.x);
        sy.push_back(s.y);
        sz.push_back(s.z);
    }
};

inline constexpr std::size_t kDefaultBlock = 256;

/// out[t] = 1/(4 pi) sum_s S_s x (T_t - P_s) / (|T_t - P_s|^2 + eps^2)^(3/2).
/// With eps == 0 a source coinciding with the target is skipped.
void biot_savart(const SourceSet& src, const PointSet& targets, double eps, std::span<Vec3> out,
                 Backend backend = Backend::OpenMP, std::size_t block = kDefaultBlock);

/// out[t] = 1/(4 pi) sum_s S_s / sqrt(|T_t - P_s|^2 + eps^2), same skip rule.
void potential(const SourceSet& src, const PointSet& targets, double eps, std::span<Vec3> out,
               Backend backend = Backend::OpenMP, std::size_t block = kDefaultBlock);

/// 1/(4 pi) sum_{i != j} (S_i x S_j) . (P_i - P_j) / |P_i - P_j|^3, evaluated
/// as twice the i < j half; coincident pairs are skipped.
double gauss_self_sum(const SourceSet& set, Backend backend = Backend::OpenMP,
                      std::size_t block = kDefaultBlock);

/// 1/(4 pi) sum_{i, j} (A_i x B_j) . (P_i - Q_j) / |P_i - Q_j|^3.
double gauss_cross_sum(const SourceSet& a, const SourceSet& b, Backend backend = Backend::OpenMP,
                       std::size_t block = kDefaultBlock);

}  // namespace helicity::kernels
