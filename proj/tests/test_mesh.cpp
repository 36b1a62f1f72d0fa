#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "mesh.hpp"
#include "random_spec.hpp"

using namespace patchwork;

namespace {

int mesh_euler_char(const Mesh& m)
{
    return m.vertex_count() - static_cast<int>(m.edge_count()) + static_cast<int>(m.quad_count());
}

} // namespace

TEST(Mesh, TorusCounts)
{
    const Mesh m({Model::Torus, 64});
    EXPECT_EQ(m.vertex_count(), 64 * 64);
    EXPECT_EQ(m.quad_count(), 64u * 64u);
    EXPECT_EQ(m.edge_count(), 2u * 64u * 64u);
    EXPECT_EQ(mesh_euler_char(m), 0);
}

TEST(Mesh, SphereIsClosed)
{
    const Mesh m({Model::Sphere, 32});
    EXPECT_EQ(mesh_euler_char(m), 2);
    for (std::size_t e = 0; e < m.edge_count(); ++e) {
        const auto q = m.edge_quads(static_cast<int>(e));
        EXPECT_GE(q[0], 0);
        EXPECT_GE(q[1], 0);
        EXPECT_NE(q[0], q[1]);
    }
    for (std::size_t s = 0; s < m.sample_count(); ++s)
        EXPECT_NEAR(norm(m.point(static_cast<int>(s)).n), 1.0, 1e-12);
}

TEST(Mesh, TorusEdgesHaveTwoQuads)
{
    const Mesh m({Model::Torus, 32});
    for (std::size_t e = 0; e < m.edge_count(); ++e) {
        const auto q = m.edge_quads(static_cast<int>(e));
        EXPECT_GE(q[1], 0);
    }
}

TEST(Mesh, RejectsBadResolution)
{
    EXPECT_THROW(Mesh({Model::Torus, 31}), Error);
    EXPECT_THROW(Mesh({Model::Sphere, 16}), Error);
}

// Odd bidegree flips sign across the seam: f(theta + pi, phi) = -f(theta, phi).
TEST(Mesh, SeamTwistMatchesDirectEvaluation)
{
    std::mt19937_64 rng(31);
    const Mesh m({Model::Torus, 32});
    for (int b : {1, 2, 3}) {
        const BiPoly f = random_invariant(b, kT2, rng);
        const auto vv = m.vertex_values(f);
        for (std::size_t s = 0; s < m.sample_count(); ++s) {
            const Vec3& c = m.coord(static_cast<int>(s));
            const double direct = torus_value(f, c[0], c[1]);
            const double via = vv[m.vertex_of(static_cast<int>(s))] * m.twist(static_cast<int>(s), b);
            EXPECT_NEAR(direct, via, 1e-12);
        }
    }
}

TEST(Mesh, LocateRoundTrip)
{
    for (Model model : {Model::Torus, Model::Sphere}) {
        const Mesh m({model, 32});
        std::set<int> seen;
        for (std::size_t s = 0; s < m.sample_count(); ++s) {
            const int v = m.locate(m.point(static_cast<int>(s)));
            EXPECT_EQ(v, m.vertex_of(static_cast<int>(s)));
            seen.insert(v);
        }
        EXPECT_EQ(static_cast<int>(seen.size()), m.vertex_count());
    }
}

TEST(Mesh, CacheReusesRecentMeshes)
{
    const auto a = make_mesh({Model::Torus, 48});
    const auto b = make_mesh({Model::Torus, 48});
    EXPECT_EQ(a.get(), b.get());
    const auto c = make_mesh({Model::Sphere, 48});
    EXPECT_NE(a.get(), c.get());
}
