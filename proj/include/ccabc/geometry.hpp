#pragma once

#include <cmath>
#include <cstdint>

namespace ccabc {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double dist2(const Vec2& a, const Vec2& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

inline double dist(const Vec2& a, const Vec2& b) {
    return std::sqrt(dist2(a, b));
}

inline int chebyshev(int ax, int ay, int bx, int by) {
    const int dx = ax > bx ? ax - bx : bx - ax;
    const int dy = ay > by ? ay - by : by - ay;
    return dx > dy ? dx : dy;
}

}  // namespace ccabc
