#pragma once

#include <cmath>

namespace curvn {

// Small fixed-size vector used for curve points in 2-D/3-D and for the
// spatial part of worldlines. Planar curves simply keep z = 0.
struct Vec {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec() = default;
    constexpr Vec(double x_, double y_, double z_ = 0.0) : x(x_), y(y_), z(z_) {}

    constexpr Vec operator+(const Vec& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec operator-(const Vec& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec operator-() const { return {-x, -y, -z}; }
    constexpr Vec operator*(double k) const { return {x * k, y * k, z * k}; }
    constexpr Vec operator/(double k) const { return {x / k, y / k, z / k}; }
    Vec& operator+=(const Vec& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec& operator-=(const Vec& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec& operator*=(double k) { x *= k; y *= k; z *= k; return *this; }

    constexpr bool operator==(const Vec& o) const { return x == o.x && y == o.y && z == o.z; }
};

constexpr Vec operator*(double k, const Vec& v) { return v * k; }

constexpr double dot(const Vec& a, const Vec& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec cross(const Vec& a, const Vec& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
constexpr double norm2(const Vec& v) { return dot(v, v); }
inline double norm(const Vec& v) { return std::sqrt(norm2(v)); }
inline Vec normalized(const Vec& v) { return v / norm(v); }

inline bool finite(const Vec& v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

} // namespace curvn
