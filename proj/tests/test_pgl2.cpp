#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "pgl2.hpp"

using namespace patchwork;

namespace {

Matrix2 random_matrix(std::mt19937_64& rng, bool real)
{
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix2 m;
    for (int k = 0; k < 4; ++k)
        m[k] = real ? cplx(g(rng)) : cplx(g(rng), g(rng));
    return m;
}

// Real rank-one u v^T with unit u, v.
Matrix2 random_real_rank_one(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
    const double s = ang(rng), t = ang(rng);
    const double u0 = std::cos(s), u1 = std::sin(s), v0 = std::cos(t), v1 = std::sin(t);
    return {u0 * v0, u0 * v1, u1 * v0, u1 * v1};
}

void expect_matrix_near(const Matrix2& x, const Matrix2& y, double tol = 1e-12)
{
    for (int k = 0; k < 4; ++k)
        EXPECT_NEAR(std::abs(x[k] - y[k]), 0.0, tol) << "entry " << k;
}

} // namespace

TEST(Adjugate, IdentityIsFixed) { expect_matrix_near(adjugate(Matrix2::identity()), Matrix2::identity()); }

TEST(Adjugate, TextbookExample)
{
    expect_matrix_near(adjugate(Matrix2{1.0, 2.0, 3.0, 4.0}), Matrix2{4.0, -2.0, -3.0, 1.0});
}

TEST(Adjugate, AnnihilatesRankOne)
{
    const Matrix2 m{2.0, 6.0, 1.0, 3.0};
    expect_matrix_near(adjugate(m) * m, Matrix2::zero());
}

TEST(Adjugate, ProductIsDeterminantTimesIdentity)
{
    std::mt19937_64 rng(11);
    for (int t = 0; t < 100; ++t) {
        const Matrix2 m = random_matrix(rng, false);
        expect_matrix_near(adjugate(m) * m, m.det() * Matrix2::identity(), 1e-10);
    }
}

TEST(Psi, DiagonalRankOne)
{
    for (double alpha : {0.1, 1.0, 2.5}) {
        const Matrix2 r = psi({alpha, Matrix2{1.0, 0.0, 0.0, 0.0}});
        expect_matrix_near(r, Matrix2{std::exp(alpha), 0.0, 0.0, std::exp(-alpha)});
    }
}

// Expanding det(a B + b C) for singular B, C gives a b tr(B adj C); with
// C = adj(B*) that is tr(B B*) = |u|^2 |v|^2 = 1.
TEST(Psi, UnitDeterminantForUnitRealRankOne)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> level(0.05, 3.0);
    for (int t = 0; t < 100; ++t) {
        const Matrix2 b = random_real_rank_one(rng);
        const double alpha = level(rng);
        const Matrix2 r = psi({alpha, b});
        EXPECT_NEAR(std::abs(r.det() - cplx(1.0)), 0.0, 1e-12);
        const Matrix2 bb = b * hermitian_conjugate(b);
        EXPECT_NEAR(r.det().real(), (bb.a + bb.d).real(), 1e-12);
    }
}

TEST(Psi, RealBaseGivesRealMatrix)
{
    std::mt19937_64 rng(5);
    for (int t = 0; t < 100; ++t) {
        const Matrix2 r = psi({0.7, random_real_rank_one(rng)});
        for (int k = 0; k < 4; ++k)
            EXPECT_EQ(r[k].imag(), 0.0);
    }
}

TEST(Psi, RejectsInvertibleBase)
{
    EXPECT_THROW(psi({1.0, Matrix2::identity()}), Error);
    EXPECT_THROW(psi({1.0, Matrix2::zero()}), Error);
    EXPECT_THROW(psi({0.0, Matrix2{1.0, 0.0, 0.0, 0.0}}), Error);
}

TEST(PolarProject, SpecialUnitaryIsFixedProjectively)
{
    const double t = 0.4;
    const cplx e(std::cos(t), std::sin(t));
    const Matrix2 u{e, 0.0, 0.0, std::conj(e)};
    const Matrix2 p = polar_project(u);
    expect_matrix_near(p, cplx(2.0) * u);
    EXPECT_TRUE(projective_equal(p, u, ScalarGroup::Real));
}

TEST(PolarProject, DiagonalHandExpansion)
{
    const Matrix2 p = polar_project(Matrix2{2.0, 0.0, 0.0, 0.5});
    expect_matrix_near(p, Matrix2{2.5, 0.0, 0.0, 2.5});
    EXPECT_TRUE(projective_equal(p, Matrix2::identity(), ScalarGroup::Real));
}

TEST(PolarProject, LevelIndependentAfterPsi)
{
    std::mt19937_64 rng(9);
    for (int t = 0; t < 20; ++t) {
        Matrix2 b = random_matrix(rng, false);
        b.d = b.b * b.c / b.a; // rank one
        const Matrix2 ref = polar_project(psi({0.5, b}));
        for (double alpha : {1.0, 2.0})
            EXPECT_TRUE(projective_equal(ref, polar_project(psi({alpha, b})), ScalarGroup::Real, 1e-8));
    }
}

TEST(PolarProject, RejectsSingular) { EXPECT_THROW(polar_project(Matrix2{1.0, 2.0, 2.0, 4.0}), Error); }

TEST(RealStructure, FixedPoints)
{
    const Matrix2 real{1.0, 2.0, 3.0, 4.0};
    EXPECT_TRUE(projective_equal(apply_real_structure(kT2, real), real));
    const Matrix2 herm{1.0, cplx(0.0, 1.0), cplx(0.0, -1.0), 2.0};
    EXPECT_TRUE(projective_equal(apply_real_structure(kS2, herm), herm));
}

TEST(RealStructure, InvolutionsSquareToIdentity)
{
    std::mt19937_64 rng(17);
    for (const RealStructure& rs : {kT2, kS2, kEmpty})
        for (int t = 0; t < 100; ++t) {
            const Matrix2 m = random_matrix(rng, false);
            const Matrix2 twice = apply_real_structure(rs, apply_real_structure(rs, m));
            EXPECT_TRUE(projective_equal(twice, m, ScalarGroup::Complex, 1e-9)) << to_string(rs.kind);
        }
}

TEST(RealStructure, RealPoints)
{
    EXPECT_TRUE(is_real_point(kT2, Matrix2{1.0, 2.0, 3.0, 4.0}));
    EXPECT_TRUE(is_real_point(kS2, Matrix2{1.0, cplx(0.0, 1.0), cplx(0.0, -1.0), 2.0}));
    const double t = 1.1;
    const cplx e(std::cos(t), std::sin(t));
    EXPECT_TRUE(is_real_point(kEmpty, Matrix2{e, 0.0, 0.0, std::conj(e)}));
    EXPECT_TRUE(is_real_point(kEmpty, Matrix2{0.0, 1.0, -1.0, 0.0}));
    EXPECT_FALSE(is_real_point(kT2, Matrix2{cplx(0.0, 1.0), 1.0, 0.0, 1.0}));
    EXPECT_FALSE(is_real_point(kEmpty, Matrix2{1.0, 0.0, 0.0, 0.0}));
}

TEST(RealStructure, ParseNames)
{
    EXPECT_EQ(parse_real_structure("T2"), kT2);
    EXPECT_EQ(parse_real_structure("S2"), kS2);
    EXPECT_EQ(parse_real_structure("empty"), kEmpty);
    EXPECT_THROW(parse_real_structure("RP2"), Error);
}

TEST(ProjectiveEqual, ScalarGroups)
{
    const Matrix2 m{1.0, 2.0, 3.0, 4.0};
    EXPECT_TRUE(projective_equal(m, cplx(0.0, 2.0) * m, ScalarGroup::Complex));
    EXPECT_FALSE(projective_equal(m, cplx(0.0, 2.0) * m, ScalarGroup::Real));
    EXPECT_TRUE(projective_equal(m, cplx(-3.0) * m, ScalarGroup::Real));
    EXPECT_TRUE(projective_equal(m, cplx(0.0, 1.0) * m, ScalarGroup::Unit));
    EXPECT_FALSE(projective_equal(m, Matrix2::identity()));
}
