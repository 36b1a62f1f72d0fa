// patchwork: build and check real patchwork surfaces from curve data.
//
// Exit status: 0 ok, 1 pipeline or input error (JSON error record on
// stdout), 2 the surface violates a bound clause.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "patchwork.hpp"

using namespace patchwork;

namespace {

struct Options {
    std::string config;
    std::string mode = "both";
    int grid = 0;
    std::string out;
    std::string svg;
    std::string dump;
    std::uint64_t seed = 1;
    int count = 10;
    std::vector<double> gammas;
    std::vector<double> betas;
};

void write_text(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        fail(ErrorKind::Io, "cannot write " + path);
    f << text;
}

Config load(const Options& o)
{
    Config cfg = load_config(o.config);
    if (o.grid > 0) {
        cfg.grid = o.grid;
        if (cfg.polynomial)
            cfg.polynomial->grid = o.grid;
    }
    return cfg;
}

int cmd_levels(const Options& o)
{
    ojson j;
    if (!o.betas.empty()) {
        j["betas"] = o.betas;
        j["gammas"] = gammas_from_betas(o.betas);
    } else {
        validate_gammas(o.gammas);
        j["gammas"] = o.gammas;
        j["betas"] = betas_from_gammas(o.gammas);
    }
    write_text(o.out, j.dump(2) + "\n");
    return 0;
}

int cmd_trace(const Options& o)
{
    const Config cfg = load(o);
    if (!cfg.polynomial)
        fail(ErrorKind::InvalidArgument, "trace needs polynomial input");
    const PolynomialInput& in = *cfg.polynomial;
    validate_input(in);
    ojson j;
    j["schema_version"] = kSchemaVersion;
    j["real_structure"] = std::string(to_string(in.rs.kind));
    ojson curves = ojson::array();
    ojson pairs = ojson::array();
    if (in.rs.kind != RealStructureKind::Empty) {
        std::vector<CurveSystem> traced;
        int n = in.grid;
        std::vector<IntersectionSet> xs;
        for (;;) {
            try {
                const auto mesh = make_mesh({model_for(in.rs), n});
                traced.clear();
                xs.clear();
                for (const auto& f : in.curves)
                    traced.push_back(trace(f, mesh));
                for (std::size_t k = 0; k + 1 < traced.size(); ++k)
                    xs.push_back(intersect(traced[k], traced[k + 1]));
                break;
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::ResolutionTooCoarse || 2 * n > in.max_grid)
                    throw;
                n *= 2;
            }
        }
        j["grid"] = n;
        for (const auto& cs : traced) {
            ojson c;
            c["bidegree"] = cs.bidegree();
            c["circles"] = cs.circles.size();
            if (in.rs.kind == RealStructureKind::T2) {
                ojson cls = ojson::array();
                for (const auto& ci : cs.circles)
                    cls.push_back({ci.torus_class[0], ci.torus_class[1]});
                c["classes"] = cls;
            }
            c["min_gradient"] = cs.min_gradient;
            curves.push_back(c);
        }
        for (std::size_t k = 0; k < xs.size(); ++k)
            pairs.push_back({{"curves", {k, k + 1}},
                             {"intersections", xs[k].points.size()},
                             {"bound", intersection_bound(traced[k].bidegree(), traced[k + 1].bidegree())},
                             {"margin", xs[k].transversality_margin}});
        if (!o.dump.empty()) {
            std::ofstream f(o.dump);
            if (!f)
                fail(ErrorKind::Io, "cannot write " + o.dump);
            for (const auto& cs : traced)
                write_polylines(f, cs);
        }
    }
    j["curves"] = curves;
    j["pairs"] = pairs;
    write_text(o.out, j.dump(2) + "\n");
    return 0;
}

int cmd_build(const Options& o, bool bounds_only)
{
    const Config cfg = load(o);
    const ChiMode mode = parse_chi_mode(o.mode);
    const BuildResult r = build(cfg, mode);
    const ojson report = build_report(r, mode, cfg.input_mode);
    write_text(o.out, (bounds_only ? report.at("bounds") : report).dump(2) + "\n");
    if (!o.svg.empty())
        write_text(o.svg, emit_svg(r));
    return r.bounds.pass() ? 0 : 2;
}

int cmd_svg(const Options& o)
{
    const Config cfg = load(o);
    const BuildResult r = build(cfg, parse_chi_mode(o.mode));
    write_text(o.svg.empty() ? o.out : o.svg, emit_svg(r));
    return 0;
}

// Random valid specs for every structure and degree 2..6; each must agree
// across both Euler modes, pass the link check and satisfy the bounds.
int cmd_selftest(const Options& o)
{
    std::mt19937_64 rng(o.seed);
    int failures = 0;
    for (const RealStructure& rs : {kT2, kS2, kEmpty})
        for (int d = 2; d <= 6; ++d)
            for (int i = 0; i < o.count; ++i) {
                const RandomBuild rb = random_build(d, rs, rng);
                const BuildResult& r = rb.result;
                const bool ok = r.chi_formula == r.chi_complex && r.surface.link.ok && r.bounds.pass();
                failures += ok ? 0 : 1;
                std::printf("%s d=%d #%d chi=%d components=%zu rejected=%d %s\n", std::string(to_string(rs.kind)).c_str(), d, i,
                            r.chi_complex, r.surface.components.size(), rb.rejected, ok ? "ok" : "FAIL");
            }
    std::printf("%s: %d failures\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 2 : 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Real patchwork surfaces: build, trace and check"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&o](CLI::App* sub) {
        sub->add_option("config", o.config, "configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--mode", o.mode, "Euler characteristic mode")
            ->check(CLI::IsMember({"formula", "complex", "both"}));
        sub->add_option("--grid", o.grid, "initial grid resolution");
        sub->add_option("--out", o.out, "output path (default stdout)");
    };

    auto* levels = app.add_subcommand("levels", "convert critical levels to tropical coefficients or back");
    auto* lg = levels->add_option("--gammas", o.gammas, "critical levels");
    auto* lb = levels->add_option("--betas", o.betas, "tropical coefficients");
    lg->excludes(lb);
    levels->add_option("--out", o.out, "output path (default stdout)");

    auto* trace_cmd = app.add_subcommand("trace", "trace the real curves only");
    add_common(trace_cmd);
    trace_cmd->add_option("--dump", o.dump, "write curve polylines (JSON lines)");

    auto* build_cmd = app.add_subcommand("build", "run the full pipeline and write a report");
    add_common(build_cmd);
    build_cmd->add_option("--svg", o.svg, "also write the level diagrams");

    auto* verify = app.add_subcommand("verify", "report the bound checks only");
    add_common(verify);

    auto* svg_cmd = app.add_subcommand("svg", "write level arrangement diagrams");
    add_common(svg_cmd);
    svg_cmd->add_option("--svg", o.svg, "output path (overrides --out)");

    auto* self = app.add_subcommand("selftest", "randomized checks over all structures");
    self->add_option("--seed", o.seed, "random seed");
    self->add_option("--count", o.count, "specs per structure and degree");

    CLI11_PARSE(app, argc, argv);

    try {
        if (levels->parsed()) {
            if (o.gammas.empty() && o.betas.empty())
                fail(ErrorKind::InvalidArgument, "give --gammas or --betas");
            return cmd_levels(o);
        }
        if (trace_cmd->parsed())
            return cmd_trace(o);
        if (build_cmd->parsed())
            return cmd_build(o, false);
        if (verify->parsed())
            return cmd_build(o, true);
        if (svg_cmd->parsed())
            return cmd_svg(o);
        return cmd_selftest(o);
    } catch (const Error& e) {
        std::cout << error_record(e).dump() << "\n";
        return 1;
    }
}
