#pragma once

#include <array>
#include <cmath>
#include <numbers>

namespace patchwork {

using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;

inline constexpr double kPi = std::numbers::pi;

template <std::size_t N>
constexpr std::array<double, N> operator+(const std::array<double, N>& a, const std::array<double, N>& b)
{
    std::array<double, N> r{};
    for (std::size_t i = 0; i < N; ++i)
        r[i] = a[i] + b[i];
    return r;
}

template <std::size_t N>
constexpr std::array<double, N> operator-(const std::array<double, N>& a, const std::array<double, N>& b)
{
    std::array<double, N> r{};
    for (std::size_t i = 0; i < N; ++i)
        r[i] = a[i] - b[i];
    return r;
}

template <std::size_t N>
constexpr std::array<double, N> operator*(double s, const std::array<double, N>& a)
{
    std::array<double, N> r{};
    for (std::size_t i = 0; i < N; ++i)
        r[i] = s * a[i];
    return r;
}

template <std::size_t N>
constexpr double dot(const std::array<double, N>& a, const std::array<double, N>& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i)
        s += a[i] * b[i];
    return s;
}

template <std::size_t N>
inline double norm(const std::array<double, N>& a)
{
    return std::sqrt(dot(a, a));
}

template <std::size_t N>
inline std::array<double, N> normalize(const std::array<double, N>& a)
{
    return (1.0 / norm(a)) * a;
}

constexpr Vec3 cross(const Vec3& a, const Vec3& b)
{
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

constexpr double cross(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }

/// Orthonormal tangent frame (e1, e2) at a unit vector n with e1 x e2 = n.
inline std::array<Vec3, 2> tangent_frame(const Vec3& n)
{
    int axis = 0;
    for (int k = 1; k < 3; ++k) {
        if (std::abs(n[k]) < std::abs(n[axis]))
            axis = k;
    }
    Vec3 a{0.0, 0.0, 0.0};
    a[axis] = 1.0;
    const Vec3 e1 = normalize(cross(a, n));
    const Vec3 e2 = cross(n, e1);
    return {e1, e2};
}

/// Reduces an angle difference to the representative in [-pi/2, pi/2).
inline double wrap_half_turn(double delta)
{
    return delta - kPi * std::floor(delta / kPi + 0.5);
}

} // namespace patchwork
