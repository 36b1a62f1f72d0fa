#pragma once

// Projectivized 2x2 complex matrices, the level embedding into PGL2(C),
// the unitary projection and the three anti-holomorphic real structures.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <string_view>
#include <utility>

#include "errors.hpp"

namespace patchwork {

using cplx = std::complex<double>;

inline constexpr double kProjectiveTol = 1e-9;

/// Scalar group used when comparing projective classes.
enum class ScalarGroup { Complex, Real, Unit };

struct Matrix2 {
    cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

    static Matrix2 identity() { return {}; }
    static Matrix2 zero() { return {0.0, 0.0, 0.0, 0.0}; }

    cplx det() const { return a * d - b * c; }

    const cplx& operator[](int k) const
    {
        switch (k) {
        case 0: return a;
        case 1: return b;
        case 2: return c;
        default: return d;
        }
    }
    cplx& operator[](int k) { return const_cast<cplx&>(std::as_const(*this)[k]); }

    double max_abs() const
    {
        return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
    }

    int argmax_abs() const
    {
        int best = 0;
        for (int k = 1; k < 4; ++k) {
            if (std::abs((*this)[k]) > std::abs((*this)[best]))
                best = k;
        }
        return best;
    }

    bool is_zero() const { return max_abs() == 0.0; }

    friend Matrix2 operator+(const Matrix2& x, const Matrix2& y)
    {
        return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
    }
    friend Matrix2 operator-(const Matrix2& x, const Matrix2& y)
    {
        return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
    }
    friend Matrix2 operator*(cplx s, const Matrix2& m) { return {s * m.a, s * m.b, s * m.c, s * m.d}; }
    friend Matrix2 operator*(const Matrix2& x, const Matrix2& y)
    {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
};

inline Matrix2 adjugate(const Matrix2& m) { return {m.d, -m.b, -m.c, m.a}; }

inline Matrix2 conjugate(const Matrix2& m)
{
    return {std::conj(m.a), std::conj(m.b), std::conj(m.c), std::conj(m.d)};
}

inline Matrix2 hermitian_conjugate(const Matrix2& m)
{
    return {std::conj(m.a), std::conj(m.c), std::conj(m.b), std::conj(m.d)};
}

/// Divides by the largest-modulus entry, so the result has that entry equal to 1.
inline Matrix2 normalized(const Matrix2& m)
{
    if (m.is_zero())
        fail(ErrorKind::InvalidArgument, "zero matrix has no projective class");
    const cplx s = m[m.argmax_abs()];
    return (1.0 / s) * m;
}

/// Projective equality: m2 = lambda * m1 for lambda in the given scalar group.
inline bool projective_equal(const Matrix2& m1, const Matrix2& m2,
                             ScalarGroup group = ScalarGroup::Complex,
                             double tol = kProjectiveTol)
{
    if (m1.is_zero() || m2.is_zero())
        return false;
    const int k = m1.argmax_abs();
    const double scale2 = m2.max_abs();
    if (std::abs(m2[k]) <= tol * scale2)
        return false;
    const cplx lambda = m2[k] / m1[k];
    const Matrix2 n1 = (1.0 / m1[k]) * m1;
    const Matrix2 n2 = (1.0 / m2[k]) * m2;
    for (int i = 0; i < 4; ++i) {
        if (std::abs(n1[i] - n2[i]) > tol)
            return false;
    }
    switch (group) {
    case ScalarGroup::Complex:
        return true;
    case ScalarGroup::Real:
        return std::abs(lambda.imag()) <= tol * std::abs(lambda);
    case ScalarGroup::Unit:
        return std::abs(std::abs(lambda) - 1.0) <= tol;
    }
    return false;
}

inline bool is_singular(const Matrix2& m, double tol = kProjectiveTol)
{
    const double s = m.max_abs();
    return std::abs(m.det()) <= tol * s * s;
}

/// A point of (0, inf) x S: a level coordinate and a rank-one base matrix
/// taken up to real scalars.
struct PsiPoint {
    double alpha = 1.0;
    Matrix2 base = Matrix2::zero();
};

/// e^alpha B + e^-alpha adj(B*), defined up to complex scalars.
inline Matrix2 psi(const PsiPoint& p)
{
    if (!(p.alpha > 0.0) || !std::isfinite(p.alpha))
        fail(ErrorKind::InvalidArgument, "level coordinate must be positive");
    if (p.base.is_zero())
        fail(ErrorKind::DegenerateBase, "zero base matrix");
    if (!is_singular(p.base))
        fail(ErrorKind::DegenerateBase, "base matrix is not rank one");
    const double up = std::exp(p.alpha);
    const double down = std::exp(-p.alpha);
    return cplx(up) * p.base + cplx(down) * adjugate(hermitian_conjugate(p.base));
}

/// Unitary part of the polar decomposition, A + adj(A*), up to real scalars.
inline Matrix2 polar_project(const Matrix2& m)
{
    if (m.is_zero() || is_singular(m))
        fail(ErrorKind::SingularInput, "polar projection needs an invertible matrix");
    return m + adjugate(hermitian_conjugate(m));
}

enum class RealStructureKind { T2, Empty, S2 };

struct RealStructure {
    RealStructureKind kind = RealStructureKind::T2;

    friend bool operator==(const RealStructure&, const RealStructure&) = default;
};

inline constexpr RealStructure kT2{RealStructureKind::T2};
inline constexpr RealStructure kEmpty{RealStructureKind::Empty};
inline constexpr RealStructure kS2{RealStructureKind::S2};

constexpr std::string_view to_string(RealStructureKind kind)
{
    switch (kind) {
    case RealStructureKind::T2: return "T2";
    case RealStructureKind::Empty: return "empty";
    case RealStructureKind::S2: return "S2";
    }
    return "?";
}

inline RealStructure parse_real_structure(std::string_view name)
{
    if (name == "T2")
        return kT2;
    if (name == "empty")
        return kEmpty;
    if (name == "S2")
        return kS2;
    fail(ErrorKind::Schema, "unknown real structure '" + std::string(name) + "'");
}

/// Applies the involution. The empty structure uses adj(A*), which is
/// projectively the inverse of A*.
inline Matrix2 apply_real_structure(const RealStructure& rs, const Matrix2& m)
{
    switch (rs.kind) {
    case RealStructureKind::T2:
        return conjugate(m);
    case RealStructureKind::Empty:
        if (m.is_zero() || is_singular(m))
            fail(ErrorKind::SingularInput, "empty real structure is undefined on the quadric");
        return adjugate(hermitian_conjugate(m));
    case RealStructureKind::S2:
        return hermitian_conjugate(m);
    }
    return m;
}

inline bool is_real_point(const RealStructure& rs, const Matrix2& m)
{
    if (rs.kind == RealStructureKind::Empty && (m.is_zero() || is_singular(m)))
        return false;
    return projective_equal(apply_real_structure(rs, m), m, ScalarGroup::Complex);
}

} // namespace patchwork
