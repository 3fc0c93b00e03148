// vec.hpp - small fixed-size vector types used throughout the library.
//
// Natural units everywhere: c = 1. Metric signature for four-vectors is
// (+,-,-,-).

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <ostream>

namespace pw {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    double norm2() const { return x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm2()); }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline Vec3 normalized(const Vec3& v) { return v / v.norm(); }

inline std::ostream& operator<<(std::ostream& os, const Vec3& v) {
    return os << "(" << v.x << ", " << v.y << ", " << v.z << ")";
}

// Complex 3-vector (bra/ket field blocks may carry complex entries).
struct CVec3 {
    std::complex<double> x{0.0, 0.0}, y{0.0, 0.0}, z{0.0, 0.0};

    CVec3() = default;
    CVec3(std::complex<double> x_, std::complex<double> y_, std::complex<double> z_)
        : x(x_), y(y_), z(z_) {}
    CVec3(const Vec3& v) : x(v.x), y(v.y), z(v.z) {}

    CVec3 operator+(const CVec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    CVec3 operator-(const CVec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    CVec3 operator*(std::complex<double> s) const { return {x * s, y * s, z * s}; }

    double norm2() const { return std::norm(x) + std::norm(y) + std::norm(z); }

    Vec3 real() const { return {x.real(), y.real(), z.real()}; }
    CVec3 conj() const { return {std::conj(x), std::conj(y), std::conj(z)}; }
};

inline CVec3 operator*(std::complex<double> s, const CVec3& v) { return v * s; }

// conj(a) . b
inline std::complex<double> cdot(const CVec3& a, const CVec3& b) {
    return std::conj(a.x) * b.x + std::conj(a.y) * b.y + std::conj(a.z) * b.z;
}

// conj(a) x b
inline CVec3 ccross(const CVec3& a, const CVec3& b) {
    const CVec3 ac = a.conj();
    return {ac.y * b.z - ac.z * b.y, ac.z * b.x - ac.x * b.z, ac.x * b.y - ac.y * b.x};
}

// Four-vector with components (t, x, y, z); Minkowski product uses (+,-,-,-).
struct FourVec {
    double t = 0.0;
    Vec3 r;

    constexpr FourVec() = default;
    constexpr FourVec(double t_, const Vec3& r_) : t(t_), r(r_) {}

    constexpr FourVec operator-(const FourVec& o) const { return {t - o.t, r - o.r}; }
};

inline double mdot(const FourVec& a, const FourVec& b) { return a.t * b.t - dot(a.r, b.r); }

// 4x4 field-strength style matrix, indexed [mu][nu] with mu,nu in {0..3},
// component 0 = time.
using Mat4 = std::array<std::array<double, 4>, 4>;

inline Mat4 zero_mat4() {
    Mat4 m{};
    for (auto& row : m) row.fill(0.0);
    return m;
}

}  // namespace pw
