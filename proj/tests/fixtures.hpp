#pragma once

// Hand-built inputs with known answers, shared by the tests and the
// acceptance runner.

#include <cmath>
#include <initializer_list>
#include <tuple>

#include "pipeline.hpp"

namespace fixtures {

using patchwork::BiPoly;

// sin(phi - theta - a): a translate of the diagonal.
inline BiPoly parallel_line(double a)
{
    BiPoly f(1);
    f.set(0, 1, std::cos(a));
    f.set(1, 0, -std::cos(a));
    f.set(0, 0, -std::sin(a));
    f.set(1, 1, -std::sin(a));
    return f;
}

// sin(phi + theta - a): a translate of the antidiagonal.
inline BiPoly cross_line(double a)
{
    BiPoly f(1);
    f.set(0, 1, std::cos(a));
    f.set(1, 0, std::cos(a));
    f.set(0, 0, -std::sin(a));
    f.set(1, 1, std::sin(a));
    return f;
}

// Product of `crossing` cross lines and parallel lines up to bidegree b. Mixed
// products are singular where the two families meet, so they get nudged.
inline BiPoly line_product(int b, int crossing)
{
    const double cross_at[] = {0.3, 0.9, 1.5, 2.4};
    const double par_at[] = {1.2, 2.1, 2.7, 0.6};
    BiPoly f = BiPoly::constant(1.0);
    for (int k = 0; k < b; ++k)
        f = f * (k < crossing ? cross_line(cross_at[k]) : parallel_line(par_at[k]));
    if (crossing > 0 && crossing < b) {
        f.add(0, 0, 1e-3);
        f.add(b, b, 1e-3);
    }
    return f;
}

// Roots of s -> f(s, s) on [0, pi): intersections with the diagonal.
inline int diagonal_roots(const BiPoly& f, int samples = 40000)
{
    int roots = 0;
    double prev = patchwork::torus_value(f, 0.0, 0.0);
    for (int k = 1; k <= samples; ++k) {
        const double s = M_PI * k / samples;
        const double v = patchwork::torus_value(f, s, s);
        roots += (v > 0) != (prev > 0);
        prev = v;
    }
    return roots;
}

inline BiPoly form(int b, std::initializer_list<std::tuple<int, int, double>> terms)
{
    BiPoly f(b);
    for (const auto& [i, j, c] : terms)
        f.set(i, j, c);
    return f;
}

// Sphere forms: c00 pulls back to (1 + n3)^b, c_bb to (1 - n3)^b.
inline BiPoly sphere_equator() { return form(1, {{0, 0, 1.0}, {1, 1, -1.0}}); }
inline BiPoly sphere_definite(int b) { return form(b, {{0, 0, 1.0}, {b, b, 1.0}}); }
// Re z^3 + eps n3: six arcs through the poles' neighbourhood, smooth.
inline BiPoly sphere_cubic() { return form(3, {{0, 3, 1.0}, {3, 0, 1.0}, {0, 0, 0.05}, {3, 3, -0.05}}); }

// (x0^2 + x1^2)(y0^2 + y1^2): no real points on the torus.
inline BiPoly torus_definite() { return form(2, {{0, 0, 1.0}, {0, 2, 1.0}, {2, 0, 1.0}, {2, 2, 1.0}}); }

inline patchwork::PolynomialInput input(int degree, const patchwork::RealStructure& rs, std::vector<BiPoly> curves,
                                        double f0 = 1.0)
{
    patchwork::PolynomialInput in;
    in.degree = degree;
    in.rs = rs;
    in.curves = std::move(curves);
    in.f0 = BiPoly::constant(f0);
    return in;
}

// Degree 3 on the torus with n = 2m intersections at the single level.
inline patchwork::PolynomialInput torus_cubic(int m)
{
    return input(3, patchwork::kT2, {BiPoly::diagonal(), line_product(3, m)});
}

} // namespace fixtures
