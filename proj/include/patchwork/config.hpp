#pragma once

// Configuration files (schema_version 1): polynomial or combinatorial input.

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "arrangement.hpp"
#include "bipoly.hpp"
#include "errors.hpp"
#include "levels.hpp"
#include "pipeline.hpp"
#include "surface.hpp"

namespace patchwork {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct Config {
    int degree = 0;
    RealStructure rs = kT2;
    std::string input_mode = "polynomial";
    std::optional<std::vector<double>> gammas;
    int grid = kDefaultResolution;
    std::uint64_t seed = 0;
    std::optional<PolynomialInput> polynomial;
    std::optional<DiagramSpec> combinatorial;
};

namespace detail {

template <typename T>
T get_field(const json& j, const char* key, const char* where)
{
    if (!j.is_object() || !j.contains(key))
        fail(ErrorKind::Schema, std::string(where) + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        fail(ErrorKind::Schema, std::string(where) + ": field '" + key + "' has the wrong type");
    }
}

inline cplx parse_scalar(const json& j, const char* where)
{
    if (j.is_number())
        return j.get<double>();
    return {get_field<double>(j, "re", where), j.value("im", 0.0)};
}

inline BiPoly parse_curve(const json& j)
{
    const int b = get_field<int>(j, "bidegree", "curve");
    if (b < 0)
        fail(ErrorKind::Schema, "curve: negative bidegree");
    BiPoly f(b);
    const json& coeffs = get_field<json>(j, "coefficients", "curve");
    if (!coeffs.is_array())
        fail(ErrorKind::Schema, "curve: coefficients must be an array");
    for (const json& c : coeffs) {
        const int i = get_field<int>(c, "i", "coefficient");
        const int k = get_field<int>(c, "j", "coefficient");
        if (i < 0 || k < 0 || i > b || k > b)
            fail(ErrorKind::Schema, "coefficient exponent outside the bidegree");
        f.add(i, k, {get_field<double>(c, "re", "coefficient"), c.value("im", 0.0)});
    }
    return f;
}

inline CurveRole parse_role(const std::string& s)
{
    if (s == "prev")
        return CurveRole::Prev;
    if (s == "next")
        return CurveRole::Next;
    fail(ErrorKind::Schema, "circle curve must be \"prev\" or \"next\"");
}

inline Sign parse_sign(const json& j)
{
    const std::string s = j.is_string() ? j.get<std::string>() : std::string();
    if (s == "+" || s == "plus")
        return Sign::Plus;
    if (s == "-" || s == "minus")
        return Sign::Minus;
    fail(ErrorKind::Schema, "region sign must be \"+\" or \"-\"");
}

inline int vertex_ref(const json& j, int vertex_count)
{
    if (j.is_null())
        return -1;
    if (!j.is_number_integer())
        fail(ErrorKind::Schema, "arc endpoints must be vertex ids or null");
    const int v = j.get<int>();
    if (v < -1 || v >= vertex_count)
        fail(ErrorKind::Schema, "arc endpoint outside the vertex range");
    return v;
}

inline LevelArrangement parse_level(const json& j, int level, Model model)
{
    LevelArrangement arr;
    arr.level = level;
    arr.model = model;
    const int nv = get_field<int>(j, "vertex_count", "level");
    if (nv < 0)
        fail(ErrorKind::Schema, "level: negative vertex_count");
    if (nv % 2 != 0)
        fail(ErrorKind::SpecViolation, "level: odd number of intersection points");
    arr.vertices.resize(nv);

    // circle id -> arc ids, keyed by position in the circles array
    const json& circles = get_field<json>(j, "circles", "level");
    for (const json& c : circles) {
        CircleRecord rec;
        rec.curve = parse_role(get_field<std::string>(c, "curve", "circle"));
        rec.index = get_field<int>(c, "index", "circle");
        if (c.contains("class"))
            rec.torus_class = get_field<std::array<int, 2>>(c, "class", "circle");
        if (arr.find_circle(rec.curve, rec.index) >= 0)
            fail(ErrorKind::Schema, "duplicate circle");
        const json& arcs = get_field<json>(c, "arcs", "circle");
        if (!arcs.is_array() || arcs.empty())
            fail(ErrorKind::Schema, "circle needs at least one arc");
        const int cid = static_cast<int>(arr.circles.size());
        for (const json& a : arcs) {
            ArcRecord arc;
            arc.curve = rec.curve;
            arc.circle = cid;
            arc.tail = vertex_ref(a.contains("from") ? a.at("from") : json(), nv);
            arc.head = vertex_ref(a.contains("to") ? a.at("to") : json(), nv);
            if ((arc.tail < 0) != (arc.head < 0) || (arc.tail < 0 && arcs.size() != 1))
                fail(ErrorKind::Schema, "only a single-arc circle may omit its vertices");
            rec.arcs.push_back(static_cast<int>(arr.arcs.size()));
            arr.arcs.push_back(arc);
        }
        for (std::size_t k = 0; k < rec.arcs.size(); ++k) {
            const ArcRecord& x = arr.arcs[rec.arcs[k]];
            const ArcRecord& y = arr.arcs[rec.arcs[(k + 1) % rec.arcs.size()]];
            if (x.head != y.tail)
                fail(ErrorKind::Schema, "consecutive arcs of a circle must share a vertex");
        }
        arr.circles.push_back(std::move(rec));
    }

    const json& regions = get_field<json>(j, "regions", "level");
    for (const json& r : regions) {
        RegionRecord reg;
        reg.sign = parse_sign(get_field<json>(r, "sign", "region"));
        reg.euler_char = get_field<int>(r, "euler_char", "region");
        const int rid = static_cast<int>(arr.regions.size());
        for (const json& b : get_field<json>(r, "boundary", "region")) {
            const int c = get_field<int>(b, "circle", "boundary");
            const int a = get_field<int>(b, "arc", "boundary");
            const std::string side = get_field<std::string>(b, "side", "boundary");
            if (c < 0 || c >= static_cast<int>(arr.circles.size()) || a < 0 ||
                a >= static_cast<int>(arr.circles[c].arcs.size()))
                fail(ErrorKind::Schema, "boundary reference outside the circle list");
            if (side != "left" && side != "right")
                fail(ErrorKind::Schema, "side must be left or right");
            ArcRecord& arc = arr.arcs[arr.circles[c].arcs[a]];
            int& slot = side == "left" ? arc.left : arc.right;
            if (slot >= 0 && slot != rid)
                fail(ErrorKind::Schema, "an arc side is claimed by two regions");
            slot = rid;
        }
        arr.regions.push_back(std::move(reg));
    }
    for (const auto& a : arr.arcs)
        if (a.left < 0 || a.right < 0)
            fail(ErrorKind::Schema, "every arc needs a region on each side");

    // Half-arcs per vertex, then rotations (given or derived).
    std::vector<std::vector<HalfArc>> halves(nv);
    for (int a = 0; a < static_cast<int>(arr.arcs.size()); ++a) {
        if (arr.arcs[a].tail >= 0)
            halves[arr.arcs[a].tail].push_back({a, true});
        if (arr.arcs[a].head >= 0)
            halves[arr.arcs[a].head].push_back({a, false});
    }
    std::vector<char> given(nv, 0);
    if (j.contains("rotations")) {
        for (const json& r : j.at("rotations")) {
            const int v = get_field<int>(r, "vertex", "rotation");
            if (v < 0 || v >= nv)
                fail(ErrorKind::Schema, "rotation vertex outside the range");
            const json& hs = get_field<json>(r, "half_arcs", "rotation");
            if (!hs.is_array() || hs.size() != 4)
                fail(ErrorKind::Schema, "a rotation lists four half-arcs");
            for (int k = 0; k < 4; ++k) {
                const int c = get_field<int>(hs[k], "circle", "half_arc");
                const int a = get_field<int>(hs[k], "arc", "half_arc");
                const std::string end = get_field<std::string>(hs[k], "end", "half_arc");
                if (c < 0 || c >= static_cast<int>(arr.circles.size()) || a < 0 ||
                    a >= static_cast<int>(arr.circles[c].arcs.size()) || (end != "tail" && end != "head"))
                    fail(ErrorKind::Schema, "bad half-arc reference");
                arr.vertices[v].rotation[k] = {arr.circles[c].arcs[a], end == "tail"};
            }
            given[v] = 1;
        }
    }
    for (int v = 0; v < nv; ++v) {
        if (halves[v].size() != 4)
            fail(ErrorKind::Schema, "every vertex needs exactly four half-arcs");
        if (!given[v]) {
            std::array<HalfArc, 4> h{halves[v][0], halves[v][1], halves[v][2], halves[v][3]};
            derive_rotation(arr, arr.vertices[v], h);
        }
    }
    finish_arrangement(arr);
    return arr;
}

} // namespace detail

inline Config parse_config(const json& j)
{
    Config cfg;
    if (!j.is_object())
        fail(ErrorKind::Schema, "config must be an object");
    const int version = j.value("schema_version", kSchemaVersion);
    if (version != kSchemaVersion)
        fail(ErrorKind::Schema, "unsupported schema_version");
    cfg.degree = detail::get_field<int>(j, "degree", "config");
    if (cfg.degree < 1)
        fail(ErrorKind::Schema, "degree must be at least 1");
    try {
        cfg.rs = parse_real_structure(detail::get_field<std::string>(j, "real_structure", "config"));
    } catch (const Error& e) {
        fail(ErrorKind::Schema, e.what());
    }
    cfg.input_mode = j.value("input_mode", std::string("polynomial"));
    cfg.grid = j.value("grid", kDefaultResolution);
    cfg.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("gammas"))
        cfg.gammas = detail::get_field<std::vector<double>>(j, "gammas", "config");

    if (cfg.input_mode == "polynomial") {
        PolynomialInput in;
        in.degree = cfg.degree;
        in.rs = cfg.rs;
        in.grid = cfg.grid;
        in.gammas = cfg.gammas;
        if (j.contains("f0"))
            in.f0 = BiPoly::constant(detail::parse_scalar(j.at("f0"), "f0"));
        const json& curves = detail::get_field<json>(j, "curves", "config");
        if (!curves.is_array())
            fail(ErrorKind::Schema, "curves must be an array");
        for (const json& c : curves)
            in.curves.push_back(detail::parse_curve(c));
        if (static_cast<int>(in.curves.size()) != expected_curve_count(cfg.degree))
            fail(ErrorKind::Schema, "wrong number of curves for the degree");
        for (int k = 0; k < static_cast<int>(in.curves.size()); ++k)
            if (in.curves[k].bidegree() != expected_bidegree(cfg.degree, k))
                fail(ErrorKind::Schema, "curve bidegrees must run 2,4,..,d or 1,3,..,d");
        cfg.polynomial = std::move(in);
    } else if (cfg.input_mode == "combinatorial") {
        DiagramSpec spec;
        spec.degree = cfg.degree;
        spec.rs = cfg.rs;
        spec.levels = levels_for(cfg.degree, cfg.gammas);
        if (cfg.rs.kind != RealStructureKind::Empty) {
            const Model m = model_for(cfg.rs);
            const json levels = j.value("levels", json::array());
            if (static_cast<int>(levels.size()) != spec.level_count())
                fail(ErrorKind::Schema, "need floor(d/2) levels");
            for (int l = 1; l <= spec.level_count(); ++l)
                spec.arrangements.push_back(detail::parse_level(levels[l - 1], l, m));
            const int nc = expected_curve_count(cfg.degree);
            spec.curves.resize(nc);
            for (int c = 0; c < nc; ++c)
                spec.curves[c].bidegree = expected_bidegree(cfg.degree, c);
            if (j.contains("curves")) {
                const json& curves = j.at("curves");
                if (!curves.is_array() || static_cast<int>(curves.size()) != nc)
                    fail(ErrorKind::Schema, "wrong number of curves for the degree");
                for (int c = 0; c < nc; ++c) {
                    if (detail::get_field<int>(curves[c], "bidegree", "curve") != spec.curves[c].bidegree)
                        fail(ErrorKind::Schema, "curve bidegrees must run 2,4,..,d or 1,3,..,d");
                    spec.curves[c].circles = detail::get_field<int>(curves[c], "circles", "curve");
                }
            } else {
                if (spec.level_count() == 0)
                    fail(ErrorKind::Schema, "degree 1 needs the curves list");
                // Circle counts from the levels where each curve appears.
                for (int c = 0; c < nc; ++c) {
                    const int lb = spec.bottom_level(c);
                    spec.curves[c].circles = lb > 0 ? spec.arrangements[lb - 1].circle_count(CurveRole::Next)
                                                    : spec.arrangements[0].circle_count(CurveRole::Prev);
                }
            }
            for (int c = 0; c < nc; ++c) {
                const int lb = spec.bottom_level(c);
                const LevelArrangement* arr =
                    spec.arrangements.empty() ? nullptr : &spec.arrangements[std::max(lb, 1) - 1];
                for (int i = 0; i < spec.curves[c].circles; ++i) {
                    const int id = arr ? arr->find_circle(lb > 0 ? CurveRole::Next : CurveRole::Prev, i) : -1;
                    spec.curves[c].classes.push_back(id >= 0 ? arr->circles[id].torus_class : std::array<int, 2>{0, 0});
                }
            }
        }
        validate_spec(spec);
        cfg.combinatorial = std::move(spec);
    } else {
        fail(ErrorKind::Schema, "input_mode must be polynomial or combinatorial");
    }
    return cfg;
}

inline json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorKind::Io, "cannot read " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::Schema, std::string("malformed JSON: ") + e.what());
    }
}

inline Config load_config(const std::string& path) { return parse_config(read_json_file(path)); }

/// Runs the pipeline on either input mode.
inline BuildResult build(const Config& cfg, ChiMode mode = ChiMode::Both)
{
    if (cfg.polynomial)
        return build(*cfg.polynomial, mode);
    return build(*cfg.combinatorial, mode);
}

} // namespace patchwork
