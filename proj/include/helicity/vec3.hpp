/// @file vec3.hpp
/// @brief Small fixed-size vector and matrix types used throughout the library.
#pragma once

#include <array>
#include <cmath>

namespace helicity {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

    constexpr Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    constexpr Vec3& operator-=(const Vec3& o) {
        x -= o.x;
        y -= o.y;
        z -= o.z;
        return *this;
    }
    constexpr Vec3& operator*=(double s) {
        x *= s;
        y *= s;
        z *= s;
        return *this;
    }

    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator/(const Vec3& a, double s) { return {a.x / s, a.y / s, a.z / s}; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
constexpr double norm2(const Vec3& a) { return dot(a, a); }
inline Vec3 normalized(const Vec3& a) { return a / norm(a); }
inline bool is_finite(const Vec3& a) {
    return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

/// Row-major 3x3 matrix.
struct Mat3 {
    std::array<double, 9> a{};

    static constexpr Mat3 identity() {
        Mat3 m;
        m.a = {1, 0, 0, 0, 1, 0, 0, 0, 1};
        return m;
    }
    static constexpr Mat3 scaled(double s) {
        Mat3 m;
        m.a = {s, 0, 0, 0, s, 0, 0, 0, s};
        return m;
    }
    /// Matrix whose columns are c0, c1, c2.
    static constexpr Mat3 from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
        Mat3 m;
        m.a = {c0.x, c1.x, c2.x, c0.y, c1.y, c2.y, c0.z, c1.z, c2.z};
        return m;
    }

    constexpr double operator()(int r, int c) const { return a[3 * r + c]; }
    constexpr double& operator()(int r, int c) { return a[3 * r + c]; }

    constexpr Vec3 column(int c) const { return {a[c], a[3 + c], a[6 + c]}; }
    constexpr Vec3 row(int r) const { return {a[3 * r], a[3 * r + 1], a[3 * r + 2]}; }

    constexpr Mat3 transposed() const {
        Mat3 t;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) t(r, c) = (*this)(c, r);
        return t;
    }

    constexpr double det() const {
        return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
               a[2] * (a[3] * a[7] - a[4] * a[6]);
    }

    /// Cofactor matrix; inverse = cofactor().transposed() / det().
    constexpr Mat3 cofactor() const {
        Mat3 c;
        c(0, 0) = a[4] * a[8] - a[5] * a[7];
        c(0, 1) = a[5] * a[6] - a[3] * a[8];
        c(0, 2) = a[3] * a[7] - a[4] * a[6];
        c(1, 0) = a[2] * a[7] - a[1] * a[8];
        c(1, 1) = a[0] * a[8] - a[2] * a[6];
        c(1, 2) = a[1] * a[6] - a[0] * a[7];
        c(2, 0) = a[1] * a[5] - a[2] * a[4];
        c(2, 1) = a[2] * a[3] - a[0] * a[5];
        c(2, 2) = a[0] * a[4] - a[1] * a[3];
        return c;
    }

    Mat3 inverse() const {
        Mat3 inv = cofactor().transposed();
        const double d = det();
        for (double& v : inv.a) v /= d;
        return inv;
    }
};

constexpr Vec3 operator*(const Mat3& m, const Vec3& v) {
    return {m(0, 0) * v.x + m(0, 1) * v.y + m(0, 2) * v.z,
            m(1, 0) * v.x + m(1, 1) * v.y + m(1, 2) * v.z,
            m(2, 0) * v.x + m(2, 1) * v.y + m(2, 2) * v.z};
}

constexpr Mat3 operator*(const Mat3& l, const Mat3& r) {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += l(i, k) * r(k, j);
            m(i, j) = s;
        }
    return m;
}

/// Rotation by `angle` radians about the unit vector `axis` (Rodrigues).
inline Mat3 rotation_about(const Vec3& axis, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double t = 1.0 - c;
    const Vec3 u = axis;
    Mat3 m;
    m(0, 0) = c + u.x * u.x * t;
    m(0, 1) = u.x * u.y * t - u.z * s;
    m(0, 2) = u.x * u.z * t + u.y * s;
    m(1, 0) = u.y * u.x * t + u.z * s;
    m(1, 1) = c + u.y * u.y * t;
    m(1, 2) = u.y * u.z * t - u.x * s;
    m(2, 0) = u.z * u.x * t - u.y * s;
    m(2, 1) = u.z * u.y * t + u.x * s;
    m(2, 2) = c + u.z * u.z * t;
    return m;
}

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace helicity
