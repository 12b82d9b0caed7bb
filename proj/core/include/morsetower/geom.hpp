#pragma once

#include <array>
#include <cmath>

namespace morse {

struct Vec2 {
    double x = 0, y = 0;
    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::sqrt(x * x + y * y); }
    double norm2() const { return x * x + y * y; }
};

struct Vec3 {
    double x = 0, y = 0, z = 0;
    Vec3 operator+(Vec3 o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(Vec3 o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(Vec3 o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(Vec3 o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    double norm2() const { return dot(*this); }
    Vec3 normalized() const {
        const double n = norm();
        return {x / n, y / n, z / n};
    }
};

struct Mat2 {
    // [[a, b], [c, d]]
    double a = 0, b = 0, c = 0, d = 0;
    double det() const { return a * d - b * c; }
    Mat2 inverse() const {
        const double dd = det();
        return {d / dd, -b / dd, -c / dd, a / dd};
    }
    Vec2 apply(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    Mat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }
};

/// Eigenvalues of the symmetric pencil H v = lambda G v (G SPD), ascending.
/// Used for Morse indices and separatrix directions under a metric.
struct PencilEig {
    std::array<double, 2> lambda;
    std::array<Vec2, 2> vec; // G-normalized
};
PencilEig sym_pencil_eig(const Mat2& h, const Mat2& g);

} // namespace morse
