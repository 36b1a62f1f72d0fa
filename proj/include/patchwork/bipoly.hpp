#pragma once

// Bihomogeneous polynomials of bidegree (b, b) on the quadric P1 x P1,
// evaluated on its two real models: the torus RP1 x RP1 and the sphere of
// Hermitian rank-one matrices.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "pgl2.hpp"

namespace patchwork {

/// Coefficient c(i, j) multiplies x0^(b-i) x1^i y0^(b-j) y1^j.
class BiPoly {
public:
    BiPoly() : BiPoly(0) {}

    explicit BiPoly(int bidegree) : bidegree_(bidegree)
    {
        if (bidegree < 0)
            fail(ErrorKind::InvalidArgument, "bidegree must be nonnegative");
        coeffs_.assign(static_cast<std::size_t>((bidegree + 1) * (bidegree + 1)), cplx(0.0));
    }

    static BiPoly constant(cplx value)
    {
        BiPoly f(0);
        f.set(0, 0, value);
        return f;
    }

    /// x0 y1 - x1 y0, vanishing on the diagonal of RP1 x RP1.
    static BiPoly diagonal()
    {
        BiPoly f(1);
        f.set(0, 1, 1.0);
        f.set(1, 0, -1.0);
        return f;
    }

    /// x0 y0 - x1 y1.
    static BiPoly antidiagonal()
    {
        BiPoly f(1);
        f.set(0, 0, 1.0);
        f.set(1, 1, -1.0);
        return f;
    }

    int bidegree() const { return bidegree_; }

    cplx coeff(int i, int j) const { return coeffs_[index(i, j)]; }
    void set(int i, int j, cplx value) { coeffs_[index(i, j)] = value; }
    void add(int i, int j, cplx value) { coeffs_[index(i, j)] += value; }

    double scale() const
    {
        double s = 0.0;
        for (const auto& c : coeffs_)
            s = std::max(s, std::abs(c));
        return s;
    }

    bool is_zero() const { return scale() == 0.0; }

    friend BiPoly operator*(const BiPoly& f, const BiPoly& g)
    {
        BiPoly h(f.bidegree_ + g.bidegree_);
        for (int i = 0; i <= f.bidegree_; ++i)
            for (int j = 0; j <= f.bidegree_; ++j) {
                const cplx a = f.coeff(i, j);
                if (a == 0.0)
                    continue;
                for (int k = 0; k <= g.bidegree_; ++k)
                    for (int l = 0; l <= g.bidegree_; ++l)
                        h.add(i + k, j + l, a * g.coeff(k, l));
            }
        return h;
    }

    friend BiPoly operator*(cplx s, BiPoly f)
    {
        for (auto& c : f.coeffs_)
            c *= s;
        return f;
    }

    friend BiPoly operator+(BiPoly f, const BiPoly& g)
    {
        if (f.bidegree_ != g.bidegree_)
            fail(ErrorKind::BidegreeMismatch, "cannot add polynomials of different bidegree");
        for (std::size_t k = 0; k < f.coeffs_.size(); ++k)
            f.coeffs_[k] += g.coeffs_[k];
        return f;
    }

    /// Evaluates on explicit homogeneous coordinates; T is cplx or a Jet.
    template <typename T>
    T evaluate_coordinates(const T& x0, const T& x1, const T& y0, const T& y1) const
    {
        const int b = bidegree_;
        // Power tables on the stack for the usual small bidegrees; this sits
        // in the inner loop of every mesh sampling.
        constexpr int kInline = 12;
        std::array<T, 5 * kInline> local;
        std::vector<T> heap;
        T* buf = local.data();
        if (b + 1 > kInline) {
            heap.resize(5 * static_cast<std::size_t>(b + 1));
            buf = heap.data();
        }
        T* px0 = buf;
        T* px1 = buf + (b + 1);
        T* py0 = buf + 2 * (b + 1);
        T* py1 = buf + 3 * (b + 1);
        T* ym = buf + 4 * (b + 1);
        px0[0] = px1[0] = py0[0] = py1[0] = T(cplx(1.0));
        for (int k = 1; k <= b; ++k) {
            px0[k] = px0[k - 1] * x0;
            px1[k] = px1[k - 1] * x1;
            py0[k] = py0[k - 1] * y0;
            py1[k] = py1[k - 1] * y1;
        }
        for (int j = 0; j <= b; ++j)
            ym[j] = py0[b - j] * py1[j];
        T sum = T(cplx(0.0));
        for (int i = 0; i <= b; ++i) {
            T row = T(cplx(0.0));
            bool any = false;
            for (int j = 0; j <= b; ++j) {
                const cplx c = coeff(i, j);
                if (c == 0.0)
                    continue;
                row = row + ym[j] * c;
                any = true;
            }
            if (any)
                sum = sum + px0[b - i] * px1[i] * row;
        }
        return sum;
    }

private:
    std::size_t index(int i, int j) const
    {
        if (i < 0 || j < 0 || i > bidegree_ || j > bidegree_)
            fail(ErrorKind::InvalidArgument, "exponent pair outside bidegree");
        return static_cast<std::size_t>(i * (bidegree_ + 1) + j);
    }

    int bidegree_;
    std::vector<cplx> coeffs_;
};

/// Forward-mode jet: complex value with complex partials in N real variables.
template <int N>
struct Jet {
    cplx v{0.0};
    std::array<cplx, N> d{};

    Jet() = default;
    Jet(cplx value) : v(value) {}

    static Jet variable(double value, int k)
    {
        Jet j(value);
        j.d[k] = 1.0;
        return j;
    }

    friend Jet operator+(const Jet& a, const Jet& b)
    {
        Jet r(a.v + b.v);
        for (int k = 0; k < N; ++k)
            r.d[k] = a.d[k] + b.d[k];
        return r;
    }
    friend Jet operator-(const Jet& a, const Jet& b)
    {
        Jet r(a.v - b.v);
        for (int k = 0; k < N; ++k)
            r.d[k] = a.d[k] - b.d[k];
        return r;
    }
    friend Jet operator*(const Jet& a, const Jet& b)
    {
        Jet r(a.v * b.v);
        for (int k = 0; k < N; ++k)
            r.d[k] = a.d[k] * b.v + a.v * b.d[k];
        return r;
    }
    friend Jet operator*(const Jet& a, cplx s)
    {
        Jet r(a.v * s);
        for (int k = 0; k < N; ++k)
            r.d[k] = a.d[k] * s;
        return r;
    }
    friend Jet operator/(const Jet& a, const Jet& b)
    {
        Jet r(a.v / b.v);
        for (int k = 0; k < N; ++k)
            r.d[k] = (a.d[k] * b.v - a.v * b.d[k]) / (b.v * b.v);
        return r;
    }
};

template <typename T>
inline T power(const T& base, int exponent)
{
    T r(cplx(1.0));
    for (int k = 0; k < exponent; ++k)
        r = r * base;
    return r;
}

enum class Model { Torus, Sphere };

constexpr std::string_view to_string(Model m) { return m == Model::Torus ? "torus" : "sphere"; }

/// A real point of the quadric: two projective pairs on the torus or a unit
/// vector on the sphere (the Hermitian matrix Id + n . sigma).
struct QuadricPoint {
    Model model = Model::Torus;
    Vec2 x{1.0, 0.0};
    Vec2 y{1.0, 0.0};
    Vec3 n{0.0, 0.0, 1.0};

    static QuadricPoint torus(double x0, double x1, double y0, double y1)
    {
        if ((x0 == 0.0 && x1 == 0.0) || (y0 == 0.0 && y1 == 0.0))
            fail(ErrorKind::InvalidArgument, "projective pair cannot be (0, 0)");
        QuadricPoint p;
        p.model = Model::Torus;
        p.x = {x0, x1};
        p.y = {y0, y1};
        return p;
    }

    static QuadricPoint torus_angles(double theta, double phi)
    {
        return torus(std::cos(theta), std::sin(theta), std::cos(phi), std::sin(phi));
    }

    static QuadricPoint sphere(const Vec3& n)
    {
        if (std::abs(norm(n) - 1.0) > 1e-12)
            fail(ErrorKind::InvalidArgument, "sphere point must be a unit vector");
        QuadricPoint p;
        p.model = Model::Sphere;
        p.n = n;
        return p;
    }

    /// Chart angles (theta, phi) of a torus point, in (-pi, pi].
    Vec2 angles() const { return {std::atan2(x[1], x[0]), std::atan2(y[1], y[0])}; }

    /// The rank-one matrix x y^T (torus) or the Hermitian Id + n . sigma (sphere).
    Matrix2 matrix() const
    {
        if (model == Model::Torus)
            return {x[0] * y[0], x[0] * y[1], x[1] * y[0], x[1] * y[1]};
        return {1.0 + n[2], cplx(n[0], -n[1]), cplx(n[0], n[1]), 1.0 - n[2]};
    }
};

/// Pullback of f to the sphere as a function of n in R^3; T is cplx or a
/// Jet in three variables. The two Segre charts agree on the unit sphere.
template <typename T>
T sphere_pullback(const BiPoly& f, const T& n1, const T& n2, const T& n3, bool north)
{
    const cplx i(0.0, 1.0);
    const T one(cplx(1.0));
    if (north) {
        const T w0 = one + n3;
        const T w1 = n1 + n2 * i;
        const T w1c = n1 - n2 * i;
        return f.evaluate_coordinates(w0, w1, w0, w1c) / power(w0, f.bidegree());
    }
    const T w0 = n1 - n2 * i;
    const T w0c = n1 + n2 * i;
    const T w1 = one - n3;
    return f.evaluate_coordinates(w0, w1, w0c, w1) / power(w1, f.bidegree());
}

inline cplx evaluate(const BiPoly& f, const QuadricPoint& p)
{
    if (p.model == Model::Torus)
        return f.evaluate_coordinates(cplx(p.x[0]), cplx(p.x[1]), cplx(p.y[0]), cplx(p.y[1]));
    return sphere_pullback(f, cplx(p.n[0]), cplx(p.n[1]), cplx(p.n[2]), p.n[2] >= 0.0);
}

/// Real part of f on the unit-representative torus chart.
inline double torus_value(const BiPoly& f, double theta, double phi)
{
    return f.evaluate_coordinates(cplx(std::cos(theta)), cplx(std::sin(theta)),
                                  cplx(std::cos(phi)), cplx(std::sin(phi)))
        .real();
}

/// Same value as sphere_pullback in plain doubles. In either chart the
/// divisor is a real power r^b, so a term c(i,j) becomes
/// c * z^p * conj(z)^q * r^(b-p-q) with z = n1 + i n2.
inline double sphere_value(const BiPoly& f, const Vec3& n)
{
    const int b = f.bidegree();
    constexpr int kInline = 12;
    if (b + 1 > kInline)
        return sphere_pullback(f, cplx(n[0]), cplx(n[1]), cplx(n[2]), n[2] >= 0.0).real();
    const bool north = n[2] >= 0.0;
    const double r = north ? 1.0 + n[2] : 1.0 - n[2];
    double zr[kInline], zi[kInline], rp[2 * kInline];
    zr[0] = 1.0;
    zi[0] = 0.0;
    for (int k = 1; k <= b; ++k) {
        zr[k] = zr[k - 1] * n[0] - zi[k - 1] * n[1];
        zi[k] = zr[k - 1] * n[1] + zi[k - 1] * n[0];
    }
    // rp[b + e] = r^e for e in [-b, b]
    rp[b] = 1.0;
    const double inv = 1.0 / r;
    for (int e = 1; e <= b; ++e) {
        rp[b + e] = rp[b + e - 1] * r;
        rp[b - e] = rp[b - e + 1] * inv;
    }
    double sum = 0.0;
    for (int i = 0; i <= b; ++i)
        for (int j = 0; j <= b; ++j) {
            const cplx c = f.coeff(i, j);
            if (c == 0.0)
                continue;
            // north: z^i conj(z)^j; south: conj(z)^(b-i) z^(b-j)
            const int p = north ? i : b - j, q = north ? j : b - i;
            // z^p conj(z)^q
            const double mr = zr[p] * zr[q] + zi[p] * zi[q];
            const double mi = zi[p] * zr[q] - zr[p] * zi[q];
            const int e = north ? b - i - j : i + j - b;
            sum += (c.real() * mr - c.imag() * mi) * rp[b + e];
        }
    return sum;
}

/// Value and (d/dtheta, d/dphi) of the torus chart pullback.
inline std::pair<double, Vec2> torus_jet(const BiPoly& f, double theta, double phi)
{
    using J = Jet<2>;
    J x0(std::cos(theta)), x1(std::sin(theta)), y0(std::cos(phi)), y1(std::sin(phi));
    x0.d[0] = -std::sin(theta);
    x1.d[0] = std::cos(theta);
    y0.d[1] = -std::sin(phi);
    y1.d[1] = std::cos(phi);
    const J r = f.evaluate_coordinates(x0, x1, y0, y1);
    return {r.v.real(), {r.d[0].real(), r.d[1].real()}};
}

/// Value and ambient R^3 gradient of the sphere pullback at a unit vector.
inline std::pair<double, Vec3> sphere_jet(const BiPoly& f, const Vec3& n)
{
    using J = Jet<3>;
    const J r = sphere_pullback(f, J::variable(n[0], 0), J::variable(n[1], 1), J::variable(n[2], 2),
                                n[2] >= 0.0);
    return {r.v.real(), {r.d[0].real(), r.d[1].real(), r.d[2].real()}};
}

/// Tangent covector of the chart pullback: (d/dtheta, d/dphi) on the torus,
/// components along tangent_frame(n) on the sphere.
inline Vec2 gradient(const BiPoly& f, const QuadricPoint& p)
{
    if (p.model == Model::Torus) {
        if ((p.x[0] == 0.0 && p.x[1] == 0.0) || (p.y[0] == 0.0 && p.y[1] == 0.0))
            fail(ErrorKind::ChartSingularity, "degenerate projective pair");
        const Vec2 a = p.angles();
        return torus_jet(f, a[0], a[1]).second;
    }
    const auto [value, g] = sphere_jet(f, p.n);
    (void)value;
    const auto frame = tangent_frame(p.n);
    return {dot(g, frame[0]), dot(g, frame[1])};
}

namespace detail {

/// Phase e^{i t} such that e^{i t} f satisfies a conjugation symmetry
/// c(i,j) -> conj(c(pi(i,j))) * sign(i,j); fixed by the largest coefficient.
template <typename Partner>
bool invariant_up_to_phase(const BiPoly& f, Partner partner, double tol)
{
    const double s = f.scale();
    if (s == 0.0)
        return true;
    const int b = f.bidegree();
    int bi = 0, bj = 0;
    for (int i = 0; i <= b; ++i)
        for (int j = 0; j <= b; ++j)
            if (std::abs(f.coeff(i, j)) > std::abs(f.coeff(bi, bj))) {
                bi = i;
                bj = j;
            }
    // e^{2it} c = sign * conj(c_partner)  =>  e^{2it} = sign * conj(c_partner) / c
    const auto [pi, pj, sign] = partner(bi, bj);
    const cplx top = f.coeff(bi, bj);
    const cplx mate = f.coeff(pi, pj);
    if (std::abs(std::abs(mate) - std::abs(top)) > tol * s)
        return false;
    const cplx phase2 = sign * std::conj(mate) / top;
    const cplx phase = std::sqrt(phase2);
    for (int i = 0; i <= b; ++i)
        for (int j = 0; j <= b; ++j) {
            const auto [qi, qj, sg] = partner(i, j);
            const cplx lhs = phase * f.coeff(i, j);
            const cplx rhs = sg * std::conj(phase * f.coeff(qi, qj));
            if (std::abs(lhs - rhs) > tol * s)
                return false;
        }
    return true;
}

struct PartnerIndex {
    int i, j;
    double sign;
};

} // namespace detail

inline constexpr double kInvarianceTol = 1e-9;

/// Whether f o I = f (as a real form, up to a global complex phase).
inline bool check_invariance(const BiPoly& f, const RealStructure& rs, double tol = kInvarianceTol)
{
    using detail::PartnerIndex;
    const int b = f.bidegree();
    switch (rs.kind) {
    case RealStructureKind::T2:
        return detail::invariant_up_to_phase(
            f, [](int i, int j) { return PartnerIndex{i, j, 1.0}; }, tol);
    case RealStructureKind::S2:
        return detail::invariant_up_to_phase(
            f, [](int i, int j) { return PartnerIndex{j, i, 1.0}; }, tol);
    case RealStructureKind::Empty:
        // I acts on the quadric by (x, y) -> (J conj x, J conj y), J(a, b) = (b, -a).
        return detail::invariant_up_to_phase(
            f, [b](int i, int j) { return PartnerIndex{b - i, b - j, ((i + j) % 2) ? -1.0 : 1.0}; },
            tol);
    }
    return false;
}

enum class Sign { Plus, Minus, OnCurve };

constexpr std::string_view to_string(Sign s)
{
    return s == Sign::Plus ? "+" : (s == Sign::Minus ? "-" : "0");
}

constexpr Sign flip(Sign s)
{
    return s == Sign::Plus ? Sign::Minus : (s == Sign::Minus ? Sign::Plus : Sign::OnCurve);
}

inline constexpr double kOnCurveTol = 1e-8;

/// Value of f at the unit representative of p (scale-free up to the sign
/// convention of odd bidegree on the torus).
inline double unit_value(const BiPoly& f, const QuadricPoint& p)
{
    if (p.model == Model::Sphere)
        return sphere_value(f, p.n);
    const double nx = norm(p.x), ny = norm(p.y);
    return f.evaluate_coordinates(cplx(p.x[0] / nx), cplx(p.x[1] / nx), cplx(p.y[0] / ny),
                                  cplx(p.y[1] / ny))
        .real();
}

/// Sign of f_prev / f_next at p. Needs an even, nonnegative bidegree gap so
/// that the sign does not depend on the chosen representative.
inline Sign ratio_sign(const BiPoly& f_prev, const BiPoly& f_next, const QuadricPoint& p)
{
    const int gap = f_next.bidegree() - f_prev.bidegree();
    if (gap < 0 || gap % 2 != 0)
        fail(ErrorKind::BidegreeMismatch, "ratio sign needs an even nonnegative bidegree gap");
    const double a = unit_value(f_prev, p);
    const double b = unit_value(f_next, p);
    if (std::abs(a) <= kOnCurveTol * f_prev.scale() || std::abs(b) <= kOnCurveTol * f_next.scale())
        return Sign::OnCurve;
    return (a > 0.0) == (b > 0.0) ? Sign::Plus : Sign::Minus;
}

} // namespace patchwork
