#include <string>

#include <gtest/gtest.h>

#include "config.hpp"
#include "fixtures.hpp"
#include "report.hpp"
#include "svg.hpp"

using namespace patchwork;

namespace {

ojson strip_levels(ojson j)
{
    j["spec"].erase("gammas");
    j["spec"].erase("betas");
    return j;
}

} // namespace

TEST(Report, TopLevelLayout)
{
    const BuildResult r = build(fixtures::torus_cubic(2));
    const ojson j = build_report(r, ChiMode::Both, "polynomial");
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items())
        keys.push_back(k);
    EXPECT_EQ(keys, (std::vector<std::string>{"schema_version", "spec", "levels", "surface", "bounds", "conventions",
                                              "warnings"}));
    EXPECT_EQ(j["surface"]["euler_char_formula"], -3);
    EXPECT_EQ(j["surface"]["euler_char_complex"], -3);
    EXPECT_EQ(j["levels"][0]["vertex_count"], 4);
    EXPECT_TRUE(j["levels"][0].contains("transversality_margin"));
    EXPECT_EQ(j["bounds"]["sigma"], -5);
    EXPECT_TRUE(j["bounds"]["pass"].get<bool>());
    EXPECT_TRUE(j["surface"]["link_check"]["ok"].get<bool>());
}

TEST(Report, ModesSelectEulerFields)
{
    const BuildResult r = build(fixtures::torus_cubic(0));
    EXPECT_FALSE(build_report(r, ChiMode::Formula, "polynomial")["surface"].contains("euler_char_complex"));
    EXPECT_FALSE(build_report(r, ChiMode::Complex, "polynomial")["surface"].contains("euler_char_formula"));
    EXPECT_EQ(parse_chi_mode("both"), ChiMode::Both);
    EXPECT_THROW(parse_chi_mode("fast"), Error);
}

TEST(Report, RegionsCarryBothSheets)
{
    const BuildResult r = build(fixtures::torus_cubic(1));
    const ojson j = build_report(r, ChiMode::Both, "polynomial");
    for (const auto& reg : j["levels"][0]["regions"])
        EXPECT_NE(reg["sign"], reg["reflected_sign"]);
}

TEST(Report, SerializationIsDeterministic)
{
    const std::string a = build_report(build(fixtures::torus_cubic(3)), ChiMode::Both, "polynomial").dump(2);
    const std::string b = build_report(build(fixtures::torus_cubic(3)), ChiMode::Both, "polynomial").dump(2);
    EXPECT_EQ(a, b);
}

// Only the echoed level placement may differ between two placements.
TEST(Report, LevelPlacementDoesNotChangeTopology)
{
    struct Case {
        PolynomialInput in;
        std::vector<double> ga, gb;
    };
    const std::vector<Case> cases = {
        {fixtures::torus_cubic(2), {1.0}, {2.5}},
        {fixtures::input(4, kT2, {fixtures::line_product(2, 0), fixtures::line_product(4, 4)}), {1.0, 2.0}, {0.25, 3.5}},
    };
    for (const Case& c : cases) {
        PolynomialInput a = c.in, b = c.in;
        a.gammas = c.ga;
        b.gammas = c.gb;
        const ojson ja = build_report(build(a), ChiMode::Both, "polynomial");
        const ojson jb = build_report(build(b), ChiMode::Both, "polynomial");
        EXPECT_NE(ja["spec"]["gammas"], jb["spec"]["gammas"]);
        EXPECT_EQ(strip_levels(ja).dump(), strip_levels(jb).dump());
    }
}

TEST(Report, TypoNotesPerStructure)
{
    const ojson t = build_report(build(fixtures::torus_cubic(0)), ChiMode::Both, "polynomial");
    ASSERT_FALSE(t["warnings"].empty());
    EXPECT_NE(t["warnings"].back().get<std::string>().find("1 >= chi >= sigma"), std::string::npos);
    const ojson s = build_report(build(fixtures::input(3, kS2, {fixtures::sphere_definite(1), fixtures::sphere_cubic()})),
                                 ChiMode::Both, "polynomial");
    EXPECT_NE(s["warnings"].back().get<std::string>().find("d + sigma"), std::string::npos);
}

TEST(Report, ErrorRecord)
{
    try {
        fail(ErrorKind::Schema, "bad field");
    } catch (const Error& e) {
        const ojson j = error_record(e);
        EXPECT_EQ(j["error"], std::string(to_string(ErrorKind::Schema)));
        EXPECT_NE(j["message"].get<std::string>().find("bad field"), std::string::npos);
    }
}

TEST(Svg, DeterministicAndWellFormed)
{
    const BuildResult r = build(fixtures::torus_cubic(1));
    const std::string a = emit_svg(r), b = emit_svg(r);
    EXPECT_EQ(a, b);
    EXPECT_NE(a.find("<svg"), std::string::npos);
    EXPECT_NE(a.find("</svg>"), std::string::npos);
}

TEST(Svg, SphereDrawsTwoDisks)
{
    const BuildResult r = build(fixtures::input(3, kS2, {fixtures::sphere_equator(), fixtures::sphere_cubic()}));
    EXPECT_NE(emit_svg(r).find("</svg>"), std::string::npos);
}

TEST(Svg, CombinatorialInputHasNoPicture)
{
    DiagramSpec spec = build(fixtures::torus_cubic(1)).spec;
    for (auto& arr : spec.arrangements)
        arr.mesh.reset();
    EXPECT_THROW(emit_svg(build(spec)), Error);
}
