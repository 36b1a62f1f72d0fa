#pragma once

// Machine-readable build reports.

#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "pipeline.hpp"
#include "surface.hpp"

namespace patchwork {

using ojson = nlohmann::ordered_json;

inline const char* to_string(ChiMode m)
{
    return m == ChiMode::Formula ? "formula" : (m == ChiMode::Complex ? "complex" : "both");
}

inline ChiMode parse_chi_mode(const std::string& s)
{
    if (s == "formula")
        return ChiMode::Formula;
    if (s == "complex")
        return ChiMode::Complex;
    if (s == "both")
        return ChiMode::Both;
    fail(ErrorKind::InvalidArgument, "mode must be formula, complex or both");
}

inline std::string sign_label(Sign s) { return std::string(to_string(s)); }

inline ojson spec_echo(const DiagramSpec& spec, const std::string& input_mode, int grid)
{
    ojson j;
    j["degree"] = spec.degree;
    j["real_structure"] = std::string(to_string(spec.rs.kind));
    j["input_mode"] = input_mode;
    if (grid > 0)
        j["grid"] = grid;
    j["gammas"] = spec.levels.gammas;
    j["betas"] = spec.levels.betas;
    ojson curves = ojson::array();
    for (const auto& c : spec.curves) {
        ojson cj;
        cj["bidegree"] = c.bidegree;
        cj["circles"] = c.circles;
        if (spec.rs.kind == RealStructureKind::T2) {
            ojson cls = ojson::array();
            for (const auto& k : c.classes)
                cls.push_back({k[0], k[1]});
            cj["classes"] = cls;
        }
        curves.push_back(cj);
    }
    j["curves"] = curves;
    return j;
}

inline ojson level_summary(const LevelArrangement& arr, bool with_margin)
{
    ojson j;
    j["level"] = arr.level;
    j["prev_bidegree"] = arr.prev_bidegree;
    j["next_bidegree"] = arr.next_bidegree;
    j["vertex_count"] = arr.vertex_count();
    j["arc_count"] = arr.arcs.size();
    j["circles"] = {{"prev", arr.circle_count(CurveRole::Prev)}, {"next", arr.circle_count(CurveRole::Next)}};
    if (with_margin)
        j["transversality_margin"] = arr.transversality_margin;
    ojson regions = ojson::array();
    for (std::size_t r = 0; r < arr.regions.size(); ++r)
        regions.push_back({{"id", r},
                           {"sign", sign_label(arr.regions[r].sign)},
                           {"reflected_sign", sign_label(flip(arr.regions[r].sign))},
                           {"euler_char", arr.regions[r].euler_char},
                           {"boundary_cycles", arr.regions[r].boundary.size()}});
    j["regions"] = regions;
    return j;
}

inline ojson surface_json(const BuildResult& r, ChiMode mode)
{
    const PatchworkSurface& s = r.surface;
    ojson j;
    j["empty"] = s.empty();
    j["mode"] = to_string(mode);
    if (mode != ChiMode::Complex)
        j["euler_char_formula"] = r.chi_formula;
    if (mode != ChiMode::Formula)
        j["euler_char_complex"] = r.chi_complex;
    ojson comps = ojson::array();
    for (const auto& c : s.components) {
        ojson cj;
        cj["euler_char"] = c.euler_char;
        cj["orientable"] = c.orientable;
        cj[c.orientable ? "genus" : "crosscaps"] = c.genus_or_crosscaps;
        cj["pieces"] = c.pieces;
        comps.push_back(cj);
    }
    j["component_count"] = s.components.size();
    j["components"] = comps;
    ojson pieces = ojson::array();
    for (const auto& p : s.pieces) {
        ojson pj;
        pj["kind"] = to_string(p.kind);
        if (p.level >= 0)
            pj["level"] = p.level;
        if (p.kind == PieceKind::Cylinder)
            pj["top_level"] = p.top_level < 0 ? ojson("infinity") : ojson(p.top_level);
        if (p.sheet != 0)
            pj["sheet"] = p.sheet > 0 ? "+" : "-";
        if (p.curve >= 0)
            pj["curve"] = p.curve;
        if (p.circle >= 0)
            pj["circle"] = p.circle;
        if (p.region >= 0)
            pj["region"] = p.region;
        pj["euler_char"] = p.euler_char;
        pj["orientable"] = p.orientable;
        if (p.standalone)
            pj["standalone"] = true;
        pj["boundary_cycles"] = p.boundary.size();
        pieces.push_back(pj);
    }
    j["pieces"] = pieces;
    j["complex"] = {{"vertices", s.vertex_count}, {"edges", s.edges.size()}};
    j["link_check"] = {{"ok", s.link.ok},
                       {"vertices_checked", s.link.vertices_checked},
                       {"edges_checked", s.link.edges_checked},
                       {"failures", s.link.failures}};
    return j;
}

inline ojson bounds_json(const BoundReport& b)
{
    ojson j;
    j["degree"] = b.degree;
    j["sigma"] = b.sigma;
    j["euler_char"] = b.euler_char;
    ojson clauses = ojson::array();
    for (const auto& c : b.clauses)
        clauses.push_back({{"name", c.name}, {"applicable", c.applicable}, {"pass", c.pass}, {"detail", c.detail}});
    j["clauses"] = clauses;
    j["pass"] = b.pass();
    return j;
}

inline ojson conventions_json(const DiagramSpec& spec)
{
    ojson j;
    j["sheet_plus"] = std::string(kSheetPlusLabel) + " carries Plus regions";
    j["sheet_minus"] = std::string(kSheetMinusLabel) + " carries Minus regions (reflection level)";
    if (spec.odd()) {
        if (spec.rs.kind == RealStructureKind::T2)
            j["level0_end"] = std::string("circle end (Moebius collapse) on sheet ") +
                              (kT2CircleEndSheet > 0 ? "+" : "-") + ", cone point on the other sheet";
        else if (spec.rs.kind == RealStructureKind::S2)
            j["level0_end"] = std::string("cone point on sheet ") + (kS2ConeSheet > 0 ? "+" : "-") +
                              ", RP2 end on the other sheet (detached when the first curve has no real points)";
        else
            j["level0_end"] = "one RP2";
    }
    j["infinity"] = "sheet cylinders over each top-curve circle are glued to each other";
    j["intersection_parity"] = "real intersection counts of consecutive curves are even; odd counts are rejected";
    j["bounds_interval"] = "1 >= chi >= sigma (odd T2), 0 >= chi >= sigma (even T2), d >= chi >= d + sigma (S2)";
    return j;
}

inline ojson build_report(const BuildResult& r, ChiMode mode, const std::string& input_mode)
{
    ojson j;
    j["schema_version"] = kSchemaVersion;
    j["spec"] = spec_echo(r.spec, input_mode, r.grid_used);
    ojson levels = ojson::array();
    for (const auto& arr : r.spec.arrangements)
        levels.push_back(level_summary(arr, input_mode == "polynomial"));
    j["levels"] = levels;
    j["surface"] = surface_json(r, mode);
    j["bounds"] = bounds_json(r.bounds);
    j["conventions"] = conventions_json(r.spec);
    ojson warnings = r.warnings;
    if (r.spec.rs.kind == RealStructureKind::T2)
        warnings.push_back("typo: the interval is also written as [1, sigma]; 1 >= chi >= sigma is used");
    if (r.spec.rs.kind == RealStructureKind::S2)
        warnings.push_back("typo: a restated lower bound reads d - sigma; d + sigma is used");
    j["warnings"] = warnings;
    return j;
}

inline ojson error_record(const Error& e)
{
    return {{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
}

} // namespace patchwork
