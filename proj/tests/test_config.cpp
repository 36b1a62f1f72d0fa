#include <string>

#include <gtest/gtest.h>

#include "config.hpp"
#include "fixtures.hpp"

using namespace patchwork;

namespace {

std::string sample(const char* name) { return std::string(PATCHWORK_SAMPLES) + "/" + name; }

ErrorKind kind_of(const json& j)
{
    try {
        parse_config(j);
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "config was accepted: " << j.dump();
    return ErrorKind::Io;
}

json minimal_torus_cubic()
{
    return json::parse(R"({
        "schema_version": 1, "degree": 3, "real_structure": "T2",
        "curves": [
            {"bidegree": 1, "coefficients": [{"i": 0, "j": 1, "re": 1}, {"i": 1, "j": 0, "re": -1}]},
            {"bidegree": 3, "coefficients": [{"i": 0, "j": 0, "re": 1}, {"i": 3, "j": 3, "re": 1}]}
        ]})");
}

} // namespace

TEST(Config, ParsesCoefficients)
{
    const Config cfg = parse_config(minimal_torus_cubic());
    ASSERT_TRUE(cfg.polynomial);
    EXPECT_EQ(cfg.degree, 3);
    EXPECT_EQ(cfg.input_mode, "polynomial");
    EXPECT_EQ(cfg.grid, kDefaultResolution);
    const BiPoly& f = cfg.polynomial->curves[0];
    EXPECT_EQ(f.coeff(0, 1), cplx(1.0));
    EXPECT_EQ(f.coeff(1, 0), cplx(-1.0));
    EXPECT_EQ(f.coeff(0, 0), cplx(0.0));
}

TEST(Config, ComplexCoefficientsAndF0)
{
    json j = minimal_torus_cubic();
    j["curves"][0]["coefficients"].push_back({{"i", 1}, {"j", 1}, {"re", 0.5}, {"im", -2.0}});
    j["f0"] = -3.0;
    j["gammas"] = {0.5, 1.5};
    const Config cfg = parse_config(j);
    EXPECT_EQ(cfg.polynomial->curves[0].coeff(1, 1), cplx(0.5, -2.0));
    EXPECT_EQ(cfg.polynomial->f0.coeff(0, 0), cplx(-3.0));
    EXPECT_EQ(*cfg.gammas, (std::vector<double>{0.5, 1.5}));
}

TEST(Config, SchemaErrors)
{
    json j = minimal_torus_cubic();
    j["schema_version"] = 2;
    EXPECT_EQ(kind_of(j), ErrorKind::Schema);

    j = minimal_torus_cubic();
    j.erase("degree");
    EXPECT_EQ(kind_of(j), ErrorKind::Schema);

    j = minimal_torus_cubic();
    j["real_structure"] = "Klein";
    EXPECT_EQ(kind_of(j), ErrorKind::Schema);

    j = minimal_torus_cubic();
    j["curves"][1]["bidegree"] = 2;
    EXPECT_EQ(kind_of(j), ErrorKind::Schema);

    j = minimal_torus_cubic();
    j["curves"][0]["coefficients"][0]["i"] = 4;
    EXPECT_EQ(kind_of(j), ErrorKind::Schema);

    j = minimal_torus_cubic();
    j["curves"][0]["coefficients"][0]["re"] = "one";
    EXPECT_EQ(kind_of(j), ErrorKind::Schema);

    j = minimal_torus_cubic();
    j["input_mode"] = "sketch";
    EXPECT_EQ(kind_of(j), ErrorKind::Schema);
}

TEST(Config, MalformedFiles)
{
    EXPECT_THROW(load_config(sample("malformed_bidegree.json")), Error);
    EXPECT_THROW(load_config(sample("no_such_file.json")), Error);
    try {
        load_config(sample("no_such_file.json"));
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Io);
    }
}

TEST(Config, SamplesBuild)
{
    struct Case {
        const char* file;
        int chi;
    };
    for (const Case& c : {Case{"torus_cubic_six_points.json", -5}, Case{"torus_quadric_empty.json", 0},
                          Case{"sphere_cubic_split.json", 3}, Case{"empty_quadric.json", 0},
                          Case{"torus_cubic_combinatorial.json", -1}}) {
        const BuildResult r = build(load_config(sample(c.file)));
        EXPECT_EQ(r.chi_complex, c.chi) << c.file;
        EXPECT_EQ(r.chi_formula, c.chi) << c.file;
    }
    for (const char* f : {"torus_cubic_random.json", "sphere_quartic_random.json"}) {
        const BuildResult r = build(load_config(sample(f)));
        EXPECT_EQ(r.chi_formula, r.chi_complex) << f;
        EXPECT_TRUE(r.surface.link.ok) << f;
    }
}

// The combinatorial sample was serialized from a traced build; both routes
// must agree.
TEST(Config, CombinatorialMatchesTracedBuild)
{
    const BuildResult traced = build(fixtures::torus_cubic(1));
    const Config cfg = load_config(sample("torus_cubic_combinatorial.json"));
    ASSERT_TRUE(cfg.combinatorial);
    const BuildResult comb = build(cfg);
    EXPECT_EQ(comb.chi_complex, traced.chi_complex);
    EXPECT_EQ(comb.surface.components.size(), traced.surface.components.size());
    ASSERT_EQ(comb.spec.arrangements.size(), 1u);
    EXPECT_EQ(comb.spec.arrangements[0].regions.size(), traced.spec.arrangements[0].regions.size());
}

TEST(Config, CombinatorialErrors)
{
    json j = read_json_file(sample("torus_cubic_combinatorial.json"));
    json bad = j;
    bad["levels"][0]["regions"][0]["sign"] = "0";
    EXPECT_EQ(kind_of(bad), ErrorKind::Schema);

    bad = j;
    bad["levels"][0]["vertex_count"] = 3;
    EXPECT_EQ(kind_of(bad), ErrorKind::SpecViolation);

    bad = j;
    bad["levels"] = json::array();
    EXPECT_EQ(kind_of(bad), ErrorKind::Schema);

    // Changing a region's Euler characteristic breaks the arrangement identity.
    bad = j;
    bad["levels"][0]["regions"][0]["euler_char"] = bad["levels"][0]["regions"][0]["euler_char"].get<int>() + 2;
    EXPECT_THROW(parse_config(bad), Error);
}
