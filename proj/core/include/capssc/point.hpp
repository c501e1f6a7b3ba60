#pragma once

#include <cmath>

namespace capssc {

struct vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline vec2 operator+(vec2 a, vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline vec2 operator-(vec2 a, vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline vec2 operator*(double s, vec2 a) { return {s * a.x, s * a.y}; }
inline vec2 operator*(vec2 a, double s) { return {s * a.x, s * a.y}; }
inline vec2 operator/(vec2 a, double s) { return {a.x / s, a.y / s}; }
inline vec2& operator+=(vec2& a, vec2 b) { a.x += b.x; a.y += b.y; return a; }

inline double dot(vec2 a, vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(vec2 a, vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(vec2 a) { return a.x * a.x + a.y * a.y; }
inline double norm(vec2 a) { return std::sqrt(norm2(a)); }
inline double dist(vec2 a, vec2 b) { return norm(a - b); }

}  // namespace capssc
