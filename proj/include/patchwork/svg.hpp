#pragma once

// SVG 1.1 drawings of level arrangements. Output depends only on the
// arrangement data, so reruns are byte-identical.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "arrangement.hpp"
#include "pipeline.hpp"
#include "surface.hpp"

namespace patchwork {

namespace svg {

inline constexpr double kPanel = 240.0;
inline constexpr double kGap = 30.0;
inline constexpr int kRaster = 96;
inline constexpr const char* kPlusFill = "#f3c89b";
inline constexpr const char* kMinusFill = "#9fc3ea";
inline constexpr const char* kPrevStroke = "#b03a2e";
inline constexpr const char* kNextStroke = "#1b4f8f";

inline std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", std::abs(v) < 5e-4 ? 0.0 : v);
    return buf;
}

struct Point2 {
    double x, y;
    int disk; // sphere: 0 north, 1 south; torus: 0
};

// Panel layout: torus is one square, sphere is two disks side by side.
struct Frame {
    Model model;
    double x0, y0;

    double width() const { return model == Model::Torus ? kPanel : 2.0 * kPanel + kGap; }

    Point2 project(const Vec3& p) const
    {
        if (model == Model::Torus) {
            auto wrap = [](double a) { return a - kPi * std::floor(a / kPi); };
            return {x0 + wrap(p[0]) / kPi * kPanel, y0 + kPanel - wrap(p[1]) / kPi * kPanel, 0};
        }
        const Vec3 n = normalize(p);
        const int disk = n[2] >= 0.0 ? 0 : 1;
        const double r = kPanel / 2.0;
        const double cx = x0 + r + disk * (kPanel + kGap);
        // The south disk is seen from below, so mirror x to keep orientation.
        const double sx = disk == 0 ? n[0] : -n[0];
        return {cx + sx * r, y0 + r - n[1] * r, disk};
    }
};

inline const char* fill_of(Sign s) { return s == Sign::Plus ? kPlusFill : kMinusFill; }

// Sign raster: runs of equal-sign cells merged into rectangles.
inline void raster(std::string& out, const Frame& fr, const LevelArrangement& arr, bool flipped)
{
    const Mesh& mesh = *arr.mesh;
    const double cell = kPanel / kRaster;
    const int disks = fr.model == Model::Torus ? 1 : 2;
    for (int d = 0; d < disks; ++d)
        for (int row = 0; row < kRaster; ++row) {
            int run_start = -1;
            Sign run_sign = Sign::Plus;
            auto flush = [&](int end) {
                if (run_start < 0)
                    return;
                const double x = fr.x0 + d * (kPanel + kGap) + run_start * cell;
                const double y = fr.y0 + row * cell;
                out += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num((end - run_start) * cell) +
                       "\" height=\"" + num(cell) + "\" fill=\"" + fill_of(run_sign) + "\"/>\n";
                run_start = -1;
            };
            for (int col = 0; col < kRaster; ++col) {
                const double u = (col + 0.5) / kRaster, v = (row + 0.5) / kRaster;
                QuadricPoint q;
                if (fr.model == Model::Torus) {
                    q = QuadricPoint::torus_angles(u * kPi, (1.0 - v) * kPi);
                } else {
                    const double x = 2.0 * u - 1.0, y = 1.0 - 2.0 * v;
                    const double rr = x * x + y * y;
                    if (rr >= 1.0) {
                        flush(col);
                        continue;
                    }
                    const double z = std::sqrt(1.0 - rr);
                    q = QuadricPoint::sphere(d == 0 ? Vec3{x, y, z} : Vec3{-x, y, -z});
                }
                const int region = arr.vertex_region[mesh.locate(q)];
                Sign s = arr.regions[region].sign;
                if (flipped)
                    s = flip(s);
                if (run_start >= 0 && s != run_sign)
                    flush(col);
                if (run_start < 0) {
                    run_start = col;
                    run_sign = s;
                }
            }
            flush(kRaster);
        }
}

// Polyline split wherever the projection jumps (seams, hemisphere change).
inline void polyline(std::string& out, const Frame& fr, const std::vector<Vec3>& pts, const char* stroke)
{
    std::string path;
    Point2 last{0, 0, -1};
    for (const auto& p : pts) {
        const Point2 q = fr.project(p);
        const bool jump = last.disk < 0 || q.disk != last.disk ||
                          std::hypot(q.x - last.x, q.y - last.y) > kPanel / 4.0;
        path += (jump ? "M" : "L") + num(q.x) + " " + num(q.y) + " ";
        last = q;
    }
    if (path.empty())
        return;
    path.pop_back();
    out += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"1.5\"/>\n";
}

inline void outline(std::string& out, const Frame& fr)
{
    if (fr.model == Model::Torus) {
        out += "<rect x=\"" + num(fr.x0) + "\" y=\"" + num(fr.y0) + "\" width=\"" + num(kPanel) + "\" height=\"" +
               num(kPanel) + "\" fill=\"none\" stroke=\"#333\"/>\n";
        return;
    }
    for (int d = 0; d < 2; ++d) {
        const double r = kPanel / 2.0;
        out += "<circle cx=\"" + num(fr.x0 + r + d * (kPanel + kGap)) + "\" cy=\"" + num(fr.y0 + r) + "\" r=\"" +
               num(r) + "\" fill=\"none\" stroke=\"#333\"/>\n";
    }
}

inline void label(std::string& out, double x, double y, const std::string& text)
{
    out += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"monospace\" font-size=\"12\">" + text +
           "</text>\n";
}

inline void panel(std::string& out, const Frame& fr, const LevelArrangement& arr, bool flipped)
{
    label(out, fr.x0, fr.y0 - 8.0,
          "level " + std::to_string(arr.level) + (flipped ? " reflected" : "") + ": " +
              std::to_string(arr.vertex_count()) + " vertices, " + std::to_string(arr.regions.size()) + " regions");
    raster(out, fr, arr, flipped);
    for (const auto& a : arr.arcs)
        polyline(out, fr, a.polyline, a.curve == CurveRole::Prev ? kPrevStroke : kNextStroke);
    for (const auto& v : arr.vertices) {
        const Point2 q = fr.project(v.pos);
        out += "<circle cx=\"" + num(q.x) + "\" cy=\"" + num(q.y) + "\" r=\"3\" fill=\"#000\"/>\n";
    }
    outline(out, fr);
}

inline void glyphs(std::string& out, double x0, double y0, const PatchworkSurface& s)
{
    label(out, x0, y0, "ends:");
    double y = y0 + 18.0;
    for (const auto& p : s.pieces) {
        std::string glyph;
        switch (p.kind) {
        case PieceKind::ConePoint:
            glyph = "<circle cx=\"" + num(x0 + 6) + "\" cy=\"" + num(y - 4) + "\" r=\"4\" fill=\"#000\"/>\n";
            break;
        case PieceKind::CoamoebaCircleEnd:
            glyph = "<circle cx=\"" + num(x0 + 6) + "\" cy=\"" + num(y - 4) + "\" r=\"5\" fill=\"none\" stroke=\"#000\" "
                    "stroke-dasharray=\"2 2\"/>\n";
            break;
        case PieceKind::CoamoebaRP2:
            glyph = "<rect x=\"" + num(x0 + 1) + "\" y=\"" + num(y - 9) + "\" width=\"10\" height=\"10\" fill=\"none\" "
                    "stroke=\"#000\"/>\n";
            break;
        default:
            continue;
        }
        out += glyph;
        std::string text = to_string(p.kind);
        if (p.sheet != 0)
            text += std::string(" sheet ") + (p.sheet > 0 ? kSheetPlusLabel : kSheetMinusLabel);
        if (p.curve >= 0)
            text += " curve " + std::to_string(p.curve);
        label(out, x0 + 18.0, y, text);
        y += 18.0;
    }
}

} // namespace svg

/// One row per critical level: the arrangement and its sign reflection.
inline std::string emit_svg(const BuildResult& r)
{
    using namespace svg;
    for (const auto& arr : r.spec.arrangements)
        if (!arr.mesh)
            fail(ErrorKind::InvalidArgument, "svg needs traced arrangements (polynomial input)");
    const Model m = r.spec.rs.kind == RealStructureKind::S2 ? Model::Sphere : Model::Torus;
    const double panel_w = Frame{m, 0, 0}.width();
    const std::size_t rows = r.spec.arrangements.size();
    const double width = 2.0 * panel_w + 3.0 * kGap + 220.0;
    const double height = std::max<double>(1, rows) * (kPanel + 2.0 * kGap) + kGap;
    std::string body;
    for (std::size_t i = 0; i < rows; ++i) {
        const double y = kGap + i * (kPanel + 2.0 * kGap) + 10.0;
        panel(body, Frame{m, kGap, y}, r.spec.arrangements[i], false);
        panel(body, Frame{m, 2.0 * kGap + panel_w, y}, r.spec.arrangements[i], true);
    }
    if (rows == 0)
        label(body, kGap, kGap + 10.0, std::string("no critical levels; ") + std::string(to_string(r.spec.rs.kind)));
    glyphs(body, 3.0 * kGap + 2.0 * panel_w, kGap + 10.0, r.surface);
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
                      num(width) + "\" height=\"" + num(height) + "\" viewBox=\"0 0 " + num(width) + " " +
                      num(height) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
    out += body;
    out += "</svg>\n";
    return out;
}

} // namespace patchwork
