#pragma once

#include <array>
#include <cmath>

namespace fraclab {

// Points live in R^d for d <= 3; unused trailing coordinates are zero, so
// norms and dot products can always run over all three components.
using Point = std::array<double, 3>;

inline constexpr int kMaxDim = 3;

inline Point operator+(const Point& a, const Point& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Point operator-(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Point operator*(double k, const Point& a) { return {k * a[0], k * a[1], k * a[2]}; }

inline double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }
inline double distance(const Point& a, const Point& b) { return norm(a - b); }

inline Point cross(const Point& a, const Point& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline Point unit(int axis) {
    Point e{0.0, 0.0, 0.0};
    e[axis] = 1.0;
    return e;
}

// Mirror y2 -> -y2 (second coordinate).
inline Point mirror_y2(Point p) {
    p[1] = -p[1];
    return p;
}

/// Orthonormal frame attached to a unit axis vector.
///
/// d = 2: directions are cos(phi) axis + sin(phi) t1 with t1 the axis rotated
/// by +90 degrees. d = 3: directions are cos(theta) axis + sin(theta) (cos(psi)
/// t1 + sin(psi) t2). For axis = e1 the frame is t1 = e2 (d = 2) and
/// t1 = e3, t2 = e2 (d = 3), so negating the last angle mirrors y2.
struct Frame {
    Point axis{1.0, 0.0, 0.0};
    Point t1{0.0, 1.0, 0.0};
    Point t2{0.0, 0.0, 1.0};

    static Frame around(const Point& axis, int dim);

    Point direction2(double phi) const { return std::cos(phi) * axis + std::sin(phi) * t1; }
    Point direction3(double theta, double psi) const {
        const double st = std::sin(theta);
        return std::cos(theta) * axis + (st * std::cos(psi)) * t1 + (st * std::sin(psi)) * t2;
    }
};

inline Frame Frame::around(const Point& a, int dim) {
    Frame f;
    f.axis = a;
    if (dim == 2) {
        f.t1 = {-a[1], a[0], 0.0};
        f.t2 = {0.0, 0.0, 0.0};
    } else if (dim >= 3) {
        Point ref = unit(1);
        Point proj = ref - dot(ref, a) * a;
        if (norm(proj) < 0.5) {
            ref = unit(2);
            proj = ref - dot(ref, a) * a;
        }
        f.t2 = (1.0 / norm(proj)) * proj;
        f.t1 = cross(a, f.t2);
    }
    return f;
}

}  // namespace fraclab
