#pragma once

#include <cmath>

namespace vdflow {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::sqrt(x * x + y * y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

// Row-major 2x2 matrix; a(i,j) = m[2*i+j].
struct Mat2 {
    double m[4] = {0, 0, 0, 0};

    double& operator()(int i, int j) { return m[2 * i + j]; }
    double operator()(int i, int j) const { return m[2 * i + j]; }

    Vec2 apply(const Vec2& v) const {
        return {m[0] * v.x + m[1] * v.y, m[2] * v.x + m[3] * v.y};
    }
    double det() const { return m[0] * m[3] - m[1] * m[2]; }
    double trace() const { return m[0] + m[3]; }
};

} // namespace vdflow
