#pragma once

// levels -> trace -> arrange -> assemble -> classify -> verify.

#include <optional>
#include <string>
#include <vector>

#include "arrangement.hpp"
#include "bipoly.hpp"
#include "errors.hpp"
#include "levels.hpp"
#include "mesh.hpp"
#include "surface.hpp"
#include "tracer.hpp"

namespace patchwork {

struct PolynomialInput {
    int degree = 0;
    RealStructure rs = kT2;
    std::vector<BiPoly> curves;
    BiPoly f0 = BiPoly::constant(1.0);
    std::optional<std::vector<double>> gammas;
    int grid = kDefaultResolution;
    int max_grid = kMaxResolution;
};

enum class ChiMode { Formula, Complex, Both };

struct BuildResult {
    DiagramSpec spec;
    std::vector<CurveSystem> traced;
    int grid_used = 0;
    PatchworkSurface surface;
    int chi_formula = 0;
    int chi_complex = 0;
    BoundReport bounds;
    std::vector<std::string> warnings;

    int euler_char() const { return chi_complex; }
};

inline LevelData levels_for(int degree, const std::optional<std::vector<double>>& gammas)
{
    const int k = degree / 2;
    if (!gammas)
        return default_levels(k);
    if (static_cast<int>(gammas->size()) != k)
        fail(ErrorKind::SpecViolation, "need floor(d/2) critical levels");
    return make_levels(*gammas);
}

inline void validate_input(const PolynomialInput& in)
{
    if (in.degree < 1)
        fail(ErrorKind::SpecViolation, "degree must be at least 1");
    if (static_cast<int>(in.curves.size()) != expected_curve_count(in.degree))
        fail(ErrorKind::SpecViolation, "wrong number of curves for the degree");
    for (int j = 0; j < static_cast<int>(in.curves.size()); ++j) {
        if (in.curves[j].bidegree() != expected_bidegree(in.degree, j))
            fail(ErrorKind::SpecViolation, "curve bidegrees must run 2,4,..,d or 1,3,..,d");
        if (in.curves[j].is_zero())
            fail(ErrorKind::NotACurve, "zero polynomial");
        if (!check_invariance(in.curves[j], in.rs))
            fail(ErrorKind::NotInvariant, "curve " + std::to_string(j) + " is not invariant under the real structure");
    }
    if (in.f0.bidegree() != 0 || in.f0.is_zero() || !check_invariance(in.f0, in.rs))
        fail(ErrorKind::SpecViolation, "f0 must be a nonzero invariant constant");
}

/// Traces every curve and builds every level arrangement at one resolution.
inline DiagramSpec arrange_at(const PolynomialInput& in, int resolution, std::vector<CurveSystem>& traced)
{
    DiagramSpec spec;
    spec.degree = in.degree;
    spec.rs = in.rs;
    spec.levels = levels_for(in.degree, in.gammas);
    const Model m = model_for(in.rs);
    const auto mesh = make_mesh({m, resolution});
    traced.clear();
    for (const auto& f : in.curves) {
        traced.push_back(trace(f, mesh));
        CurveSummary cs;
        cs.bidegree = f.bidegree();
        cs.circles = static_cast<int>(traced.back().circles.size());
        for (const auto& c : traced.back().circles)
            cs.classes.push_back(c.torus_class);
        spec.curves.push_back(cs);
    }
    for (int l = 1; l <= spec.level_count(); ++l) {
        const int p = spec.prev_curve(l), n = spec.next_curve(l);
        const CurveSystem* prev = p < 0 ? nullptr : &traced[p];
        const BiPoly& fp = p < 0 ? in.f0 : in.curves[p];
        spec.arrangements.push_back(build_arrangement(prev, traced[n], fp, in.curves[n], l));
    }
    return spec;
}

inline void finish_build(BuildResult& r, ChiMode mode)
{
    r.surface = assemble(r.spec);
    r.chi_formula = euler_formula(r.spec);
    r.chi_complex = euler_complex(r.surface);
    if (mode == ChiMode::Both && r.chi_formula != r.chi_complex)
        fail(ErrorKind::SpecViolation, "formula and complex Euler characteristics disagree: " +
                                           std::to_string(r.chi_formula) + " vs " + std::to_string(r.chi_complex));
    const int chi = mode == ChiMode::Formula ? r.chi_formula : r.chi_complex;
    r.bounds = verify_bounds(r.spec.degree, r.spec.rs, chi);
}

/// Full pipeline from polynomials; all curves share one grid, doubled on demand.
inline BuildResult build(const PolynomialInput& in, ChiMode mode = ChiMode::Both)
{
    validate_input(in);
    BuildResult r;
    if (in.rs.kind == RealStructureKind::Empty) {
        r.spec.degree = in.degree;
        r.spec.rs = in.rs;
        r.spec.levels = levels_for(in.degree, in.gammas);
        finish_build(r, mode);
        return r;
    }
    int n = in.grid;
    for (;;) {
        try {
            r.spec = arrange_at(in, n, r.traced);
            r.grid_used = n;
            break;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ResolutionTooCoarse || n * 2 > in.max_grid)
                throw;
            r.warnings.push_back("grid " + std::to_string(n) + " too coarse: " + e.what());
            n *= 2;
        }
    }
    for (const auto& arr : r.spec.arrangements)
        if (arr.transversality_margin < 1e-2)
            r.warnings.push_back("level " + std::to_string(arr.level) + " transversality margin " +
                                 std::to_string(arr.transversality_margin));
    finish_build(r, mode);
    return r;
}

/// Pipeline from combinatorial data (arrangements already finished).
inline BuildResult build(DiagramSpec spec, ChiMode mode = ChiMode::Both)
{
    BuildResult r;
    r.spec = std::move(spec);
    finish_build(r, mode);
    return r;
}

} // namespace patchwork
