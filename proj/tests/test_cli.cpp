#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
    int code = -1;
    std::string out;
};

Outcome run(const std::string& args)
{
    const std::string cmd = std::string(PATCHWORK_CLI) + " " + args + " 2>/dev/null";
    Outcome r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p)
        return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0)
        r.out.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string sample(const char* name) { return std::string(PATCHWORK_SAMPLES) + "/" + name; }

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() /
               ("patchwork_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    fs::path dir_;
};

} // namespace

TEST_F(Cli, BuildWritesReport)
{
    const Outcome r = run("build " + sample("torus_cubic_six_points.json"));
    ASSERT_EQ(r.code, 0);
    const json j = json::parse(r.out);
    EXPECT_EQ(j["surface"]["euler_char_complex"], -5);
    EXPECT_EQ(j["surface"]["component_count"], 1);
    EXPECT_TRUE(j["bounds"]["pass"].get<bool>());
}

TEST_F(Cli, BuildToFileMatchesStdout)
{
    const fs::path out = dir_ / "report.json";
    ASSERT_EQ(run("build " + sample("torus_quadric_empty.json") + " --out " + out.string()).code, 0);
    EXPECT_EQ(json::parse(slurp(out)), json::parse(run("build " + sample("torus_quadric_empty.json")).out));
}

TEST_F(Cli, SchemaErrorExitsNonZero)
{
    const Outcome r = run("build " + sample("malformed_bidegree.json"));
    EXPECT_EQ(r.code, 1);
    const json j = json::parse(r.out);
    EXPECT_EQ(j["error"], "Schema");
}

TEST_F(Cli, VerifyFailureExitsTwo)
{
    const Outcome ok = run("verify " + sample("sphere_cubic_split.json"));
    EXPECT_EQ(ok.code, 0);
    EXPECT_TRUE(json::parse(ok.out)["pass"].get<bool>());
    const Outcome bad = run("verify " + sample("sphere_cubic_six_points.json"));
    EXPECT_EQ(bad.code, 2);
    EXPECT_FALSE(json::parse(bad.out)["pass"].get<bool>());
}

TEST_F(Cli, ModeFormulaOnly)
{
    const json j = json::parse(run("build --mode formula " + sample("torus_cubic_combinatorial.json")).out);
    EXPECT_EQ(j["surface"]["euler_char_formula"], -1);
    EXPECT_FALSE(j["surface"].contains("euler_char_complex"));
}

TEST_F(Cli, SvgIsByteIdentical)
{
    const fs::path a = dir_ / "a.svg", b = dir_ / "b.svg";
    ASSERT_EQ(run("svg " + sample("torus_cubic_six_points.json") + " --svg " + a.string()).code, 0);
    ASSERT_EQ(run("svg " + sample("torus_cubic_six_points.json") + " --svg " + b.string()).code, 0);
    const std::string sa = slurp(a);
    EXPECT_FALSE(sa.empty());
    EXPECT_EQ(sa, slurp(b));
}

TEST_F(Cli, SvgNeedsPolynomialInput)
{
    EXPECT_EQ(run("svg " + sample("torus_cubic_combinatorial.json") + " --svg " + (dir_ / "c.svg").string()).code, 1);
}

TEST_F(Cli, LevelsRoundTrip)
{
    const json fwd = json::parse(run("levels --gammas 1 3").out);
    EXPECT_EQ(fwd["betas"], json::parse("[8.0, 6.0, 0.0]"));
    const json back = json::parse(run("levels --betas 8 6 0").out);
    EXPECT_EQ(back["gammas"], json::parse("[1.0, 3.0]"));
    EXPECT_NE(run("levels --betas 4 0 0").code, 0);
}

TEST_F(Cli, TraceDumpsPolylines)
{
    const fs::path dump = dir_ / "curves.jsonl";
    const Outcome r = run("trace " + sample("torus_cubic_six_points.json") + " --dump " + dump.string());
    ASSERT_EQ(r.code, 0);
    const json j = json::parse(r.out);
    ASSERT_TRUE(j.contains("curves"));
    std::ifstream in(dump);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) {
        const json p = json::parse(line);
        EXPECT_TRUE(p.contains("coords"));
        ++lines;
    }
    EXPECT_GT(lines, 0);
}

TEST_F(Cli, MissingFileIsIoError)
{
    const Outcome r = run("build " + (dir_ / "absent.json").string());
    EXPECT_NE(r.code, 0);
}

TEST_F(Cli, SelftestSmall)
{
    const Outcome r = run("selftest --seed 5 --count 1");
    EXPECT_EQ(r.code, 0) << r.out;
}
