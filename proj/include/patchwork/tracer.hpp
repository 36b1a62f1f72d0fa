#pragma once

// Real loci of curves on the quadric as closed polylines, and the
// transverse intersections of two such curves.
//
// Extraction is marching squares on a Mesh: crossing points are linear
// interpolants on sign-change edges, chained through quads, then pulled onto
// the curve by Newton steps along the gradient. On the torus, polyline
// points carry lifted angles (the chart is the universal cover), so values
// along a polyline are continuous even for odd bidegree and the lift
// displacement after one turn is the homology class.

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <ostream>
#include <utility>
#include <vector>

#include "bipoly.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "mesh.hpp"

namespace patchwork {

inline constexpr double kRefineTol = 1e-10;
inline constexpr double kMinGradient = 1e-5;
inline constexpr double kMinTransversality = 1e-4;
inline constexpr double kDuplicateRadius = 1e-6;
inline constexpr int kMinCircleCells = 8;

// ---------------------------------------------------------------------------
// Model-space helpers. Positions are Vec3: (theta, phi, 0) lifted angles on
// the torus, unit vectors on the sphere.

namespace chart {

inline double value(const BiPoly& f, Model m, const Vec3& p)
{
    return m == Model::Torus ? torus_value(f, p[0], p[1]) : sphere_value(f, p);
}

/// Value and tangent gradient (third component 0 on the torus).
inline std::pair<double, Vec3> jet(const BiPoly& f, Model m, const Vec3& p)
{
    if (m == Model::Torus) {
        const auto [v, g] = torus_jet(f, p[0], p[1]);
        return {v, {g[0], g[1], 0.0}};
    }
    auto [v, g] = sphere_jet(f, p);
    const double radial = dot(g, p);
    return {v, g - radial * p};
}

inline Vec3 step(Model m, const Vec3& p, const Vec3& delta)
{
    return m == Model::Torus ? p + delta : normalize(p + delta);
}

inline Vec3 lerp(Model m, const Vec3& a, const Vec3& b, double t)
{
    const Vec3 r = a + t * (b - a);
    return m == Model::Torus ? r : normalize(r);
}

inline QuadricPoint point(Model m, const Vec3& p)
{
    return m == Model::Torus ? QuadricPoint::torus_angles(p[0], p[1]) : QuadricPoint::sphere(normalize(p));
}

/// Shift of p by multiples of pi (torus) that lands nearest to ref.
inline Vec3 lift_shift(Model m, const Vec3& p, const Vec3& ref)
{
    if (m == Model::Sphere)
        return {0.0, 0.0, 0.0};
    return {kPi * std::round((ref[0] - p[0]) / kPi), kPi * std::round((ref[1] - p[1]) / kPi), 0.0};
}

inline double distance(Model m, const Vec3& a, const Vec3& b)
{
    if (m == Model::Sphere)
        return norm(a - b);
    return std::hypot(wrap_half_turn(a[0] - b[0]), wrap_half_turn(a[1] - b[1]));
}

/// Positive when w lies to the left of the direction t at p.
inline double left_of(Model m, const Vec3& p, const Vec3& t, const Vec3& w)
{
    const Vec3 d = w - p;
    if (m == Model::Torus)
        return t[0] * d[1] - t[1] * d[0];
    return dot(cross(t, d), p);
}

/// Direction angle of a tangent vector at p, measured counterclockwise.
inline double direction_angle(Model m, const Vec3& p, const Vec3& t)
{
    if (m == Model::Torus)
        return std::atan2(t[1], t[0]);
    const auto frame = tangent_frame(p);
    return std::atan2(dot(t, frame[1]), dot(t, frame[0]));
}

} // namespace chart

/// Sample values of a field, with quad-consistent signs (see Mesh).
struct SampledField {
    std::vector<double> value;
    std::vector<signed char> sign;
};

inline SampledField sample_field(const Mesh& mesh, const BiPoly& f)
{
    const std::vector<double> vv = mesh.vertex_values(f);
    SampledField field;
    field.value.resize(mesh.sample_count());
    field.sign.resize(mesh.sample_count());
    for (std::size_t s = 0; s < mesh.sample_count(); ++s) {
        const int tw = mesh.twist(static_cast<int>(s), f.bidegree());
        const double v = vv[mesh.vertex_of(static_cast<int>(s))];
        field.value[s] = tw * v;
        field.sign[s] = static_cast<signed char>((v >= 0.0 ? 1 : -1) * tw);
    }
    return field;
}

/// The model a real structure puts on the quadric.
inline Model model_for(const RealStructure& rs)
{
    if (rs.kind == RealStructureKind::Empty)
        fail(ErrorKind::InvalidArgument, "the empty real structure has no real quadric");
    return rs.kind == RealStructureKind::T2 ? Model::Torus : Model::Sphere;
}

inline RealStructure real_structure_for(Model m) { return m == Model::Torus ? kT2 : kS2; }

struct CurvePoint {
    Vec3 pos;       // refined, lifted
    Vec3 raw;       // interpolant on the mesh edge, same lift
    Vec3 shift;     // lift shift to apply to mesh coordinates of the source samples
    int edge = -1;  // topological mesh edge
    int sample_a = -1, sample_b = -1;
};

struct Circle {
    std::vector<CurvePoint> points; // closed: points.back() connects to points.front() + period
    Vec3 period{0.0, 0.0, 0.0};
    std::array<int, 2> torus_class{0, 0};

    Vec3 closing_point() const { return points.front().pos + period; }
};

struct CurveSystem {
    BiPoly source;
    std::shared_ptr<const Mesh> mesh;
    std::vector<Circle> circles;
    bool certified_smooth = false;
    double min_gradient = 0.0;
    SampledField field;

    Model model() const { return mesh->model(); }
    int bidegree() const { return source.bidegree(); }
    bool empty() const { return circles.empty(); }
};

/// Scale-one copy of an invariant polynomial whose values on the real model
/// are real; an exactly invariant input only gets a positive rescaling.
inline BiPoly real_form(const BiPoly& f, const RealStructure& rs)
{
    if (!check_invariance(f, rs))
        fail(ErrorKind::NotInvariant, "polynomial is not invariant under the real structure");
    const double s = f.scale();
    if (s == 0.0)
        return f;
    const int b = f.bidegree();
    int bi = 0, bj = 0;
    for (int i = 0; i <= b; ++i)
        for (int j = 0; j <= b; ++j)
            if (std::abs(f.coeff(i, j)) > std::abs(f.coeff(bi, bj))) {
                bi = i;
                bj = j;
            }
    const cplx top = f.coeff(bi, bj);
    cplx phase2 = std::conj(top) / top;
    if (rs.kind == RealStructureKind::S2)
        phase2 = std::conj(f.coeff(bj, bi)) / top;
    const cplx phase = std::sqrt(phase2);
    BiPoly g = (phase / s) * f;
    // Drop the residual imaginary parts so that evaluation is exactly real.
    for (int i = 0; i <= b; ++i)
        for (int j = 0; j <= b; ++j) {
            if (rs.kind == RealStructureKind::T2) {
                g.set(i, j, g.coeff(i, j).real());
            } else if (i == j) {
                g.set(i, j, g.coeff(i, j).real());
            } else if (i < j) {
                const cplx avg = 0.5 * (g.coeff(i, j) + std::conj(g.coeff(j, i)));
                g.set(i, j, avg);
                g.set(j, i, std::conj(avg));
            }
        }
    return g;
}

namespace detail {

inline Vec3 refine_onto(const BiPoly& f, Model m, const Vec3& start, double cell, double& grad_norm)
{
    Vec3 p = start;
    for (int it = 0; it < 40; ++it) {
        const auto [v, g] = chart::jet(f, m, p);
        const double g2 = dot(g, g);
        if (std::abs(v) <= 1e-14 || g2 < 1e-30)
            break;
        p = chart::step(m, p, (-v / g2) * g);
    }
    const auto [v, g] = chart::jet(f, m, p);
    grad_norm = norm(g);
    if (grad_norm < kMinGradient)
        fail(ErrorKind::SingularCurve, "near-zero gradient on the traced locus");
    if (std::abs(v) > kRefineTol)
        fail(ErrorKind::SingularCurve, "Newton refinement did not converge onto the curve");
    if (chart::distance(m, p, start) > 3.0 * cell)
        fail(ErrorKind::ResolutionTooCoarse, "refinement left the source cell");
    return p;
}

inline int local_edge_index(const Mesh& mesh, std::size_t q, int edge)
{
    for (int k = 0; k < 4; ++k)
        if (mesh.quad_edge(q, k) == edge)
            return k;
    return -1;
}

} // namespace detail

/// Traces the real locus of f on the mesh.
inline CurveSystem trace(const BiPoly& f, std::shared_ptr<const Mesh> mesh)
{
    if (f.bidegree() == 0 || f.is_zero())
        fail(ErrorKind::NotACurve, "constant polynomial does not define a curve");
    const Model m = mesh->model();
    CurveSystem cs;
    cs.source = f;
    cs.mesh = mesh;
    const BiPoly g = real_form(f, real_structure_for(m));
    cs.field = sample_field(*mesh, g);
    const auto& sign = cs.field.sign;
    const auto& val = cs.field.value;

    const std::size_t nq = mesh->quad_count();
    std::vector<std::array<int, 2>> links(nq, {-1, -1});
    std::vector<char> crossed(mesh->edge_count(), 0);
    for (std::size_t q = 0; q < nq; ++q) {
        const auto& qs = mesh->quad(q);
        int found = 0;
        std::array<int, 4> ks{};
        for (int k = 0; k < 4; ++k)
            if (sign[qs[k]] != sign[qs[(k + 1) % 4]])
                ks[found++] = k;
        if (found == 4)
            fail(ErrorKind::ResolutionTooCoarse, "two branches share a grid cell");
        if (found == 2) {
            links[q] = {ks[0], ks[1]};
            crossed[mesh->quad_edge(q, ks[0])] = 1;
            crossed[mesh->quad_edge(q, ks[1])] = 1;
        }
    }

    const double cell = mesh->cell_size();
    std::vector<int> quad_circle(nq, -1);
    std::vector<char> visited(mesh->edge_count(), 0);
    double min_grad = std::numeric_limits<double>::infinity();

    for (int start = 0; start < static_cast<int>(mesh->edge_count()); ++start) {
        if (!crossed[start] || visited[start])
            continue;
        const int circle_id = static_cast<int>(cs.circles.size());
        Circle circle;
        int cur = start;
        std::size_t q = static_cast<std::size_t>(mesh->edge_quads(start)[0]);
        bool have_prev = false;
        Vec3 prev{};
        for (;;) {
            const int k_in = detail::local_edge_index(*mesh, q, cur);
            if (k_in < 0 || links[q][0] < 0)
                fail(ErrorKind::ResolutionTooCoarse, "inconsistent crossing structure");
            const auto& qs = mesh->quad(q);
            const int a = qs[k_in], b = qs[(k_in + 1) % 4];
            const double t = val[a] / (val[a] - val[b]);
            const Vec3 raw0 = chart::lerp(m, mesh->coord(a), mesh->coord(b), t);
            CurvePoint cp;
            cp.shift = have_prev ? chart::lift_shift(m, raw0, prev) : Vec3{0.0, 0.0, 0.0};
            cp.raw = raw0 + cp.shift;
            cp.edge = cur;
            cp.sample_a = a;
            cp.sample_b = b;
            double gn = 0.0;
            cp.pos = detail::refine_onto(g, m, cp.raw, cell, gn);
            min_grad = std::min(min_grad, gn);
            prev = cp.raw;
            have_prev = true;
            circle.points.push_back(cp);
            visited[cur] = 1;
            quad_circle[q] = circle_id;

            const int k_out = links[q][0] == k_in ? links[q][1] : links[q][0];
            const int next = mesh->quad_edge(q, k_out);
            if (next == start)
                break;
            const auto& eq = mesh->edge_quads(next);
            q = static_cast<std::size_t>(eq[0] == static_cast<int>(q) ? eq[1] : eq[0]);
            cur = next;
        }
        if (static_cast<int>(circle.points.size()) < kMinCircleCells)
            fail(ErrorKind::ResolutionTooCoarse, "a circle spans fewer than 8 cells");
        const Vec3& first = circle.points.front().raw;
        const Vec3 closing = first + chart::lift_shift(m, first, circle.points.back().raw);
        circle.period = closing - first;
        if (m == Model::Torus) {
            int p = static_cast<int>(std::lround(circle.period[0] / kPi));
            int qn = static_cast<int>(std::lround(circle.period[1] / kPi));
            if (p < 0 || (p == 0 && qn < 0)) {
                p = -p;
                qn = -qn;
            }
            circle.torus_class = {p, qn};
        }
        cs.circles.push_back(std::move(circle));
    }

    // Distinct circles may not pass through the same or edge-adjacent cells.
    for (std::size_t q = 0; q < nq; ++q) {
        if (quad_circle[q] < 0)
            continue;
        for (int k = 0; k < 4; ++k) {
            const auto& eq = mesh->edge_quads(mesh->quad_edge(q, k));
            const int other = eq[0] == static_cast<int>(q) ? eq[1] : eq[0];
            if (other >= 0 && quad_circle[other] >= 0 && quad_circle[other] != quad_circle[q])
                fail(ErrorKind::ResolutionTooCoarse, "two circles pass through adjacent cells");
        }
    }

    if (m == Model::Torus) {
        int sp = 0, sq = 0;
        for (const auto& c : cs.circles) {
            sp += c.torus_class[0];
            sq += c.torus_class[1];
        }
        if ((sp - f.bidegree()) % 2 != 0 || (sq - f.bidegree()) % 2 != 0)
            fail(ErrorKind::ResolutionTooCoarse, "circle classes inconsistent with the bidegree");
    }

    cs.min_gradient = cs.circles.empty() ? 0.0 : min_grad;
    cs.certified_smooth = true;
    return cs;
}

inline CurveSystem trace(const BiPoly& f, const TraceGrid& grid)
{
    return trace(f, make_mesh(grid));
}

/// Traces with automatic doubling of the resolution on ResolutionTooCoarse.
inline CurveSystem trace_adaptive(const BiPoly& f, TraceGrid grid)
{
    for (;;) {
        try {
            return trace(f, grid);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ResolutionTooCoarse || grid.resolution * 2 > kMaxResolution)
                throw;
            grid.resolution *= 2;
        }
    }
}

// ---------------------------------------------------------------------------
// Intersections

struct CurvePosition {
    int circle = -1;
    int segment = -1; // polyline segment index; the last segment closes the circle
    double param = 0.0;
};

struct IntersectionPoint {
    Vec3 pos_a; // in the lift of A's circle
    Vec3 pos_b; // in the lift of B's circle
    CurvePosition on_a, on_b;
    double margin = 1.0;
};

struct IntersectionSet {
    std::vector<IntersectionPoint> points;
    double transversality_margin = 1.0;

    std::size_t size() const { return points.size(); }
};

inline int intersection_bound(int a, int b)
{
    if (a < 0 || b < 0)
        fail(ErrorKind::InvalidArgument, "bidegrees must be nonnegative");
    return 2 * a * b;
}

namespace detail {

inline Vec3 newton_pair(const BiPoly& f, const BiPoly& g, Model m, const Vec3& guess, double cell,
                        double& margin)
{
    Vec3 p = guess;
    for (int it = 0; it < 60; ++it) {
        const auto [fv, fg] = chart::jet(f, m, p);
        const auto [gv, gg] = chart::jet(g, m, p);
        if (std::max(std::abs(fv), std::abs(gv)) <= 1e-14)
            break;
        Vec3 u1{1.0, 0.0, 0.0}, u2{0.0, 1.0, 0.0};
        if (m == Model::Sphere) {
            const auto fr = tangent_frame(p);
            u1 = fr[0];
            u2 = fr[1];
        }
        const double a11 = dot(fg, u1), a12 = dot(fg, u2);
        const double a21 = dot(gg, u1), a22 = dot(gg, u2);
        const double det = a11 * a22 - a12 * a21;
        if (std::abs(det) < 1e-300)
            fail(ErrorKind::TangencyDetected, "singular Jacobian at an intersection");
        const double d1 = (-fv * a22 + gv * a12) / det;
        const double d2 = (-gv * a11 + fv * a21) / det;
        p = chart::step(m, p, d1 * u1 + d2 * u2);
    }
    const auto [fv, fg] = chart::jet(f, m, p);
    const auto [gv, gg] = chart::jet(g, m, p);
    if (std::max(std::abs(fv), std::abs(gv)) > kRefineTol)
        fail(ErrorKind::ResolutionTooCoarse, "intersection refinement did not converge");
    if (chart::distance(m, p, guess) > 3.0 * cell)
        fail(ErrorKind::ResolutionTooCoarse, "intersection refinement left the source cell");
    const double nf = norm(fg), ng = norm(gg);
    margin = norm(cross(fg, gg)) / (nf * ng);
    return p;
}

struct RawRoot {
    Vec3 pos;
    CurvePosition where;
    double margin;
};

/// Roots of g along the polylines of `along` (whose defining form is f).
inline std::vector<RawRoot> roots_along(const CurveSystem& along, const BiPoly& f, const BiPoly& g)
{
    const Model m = along.model();
    const double cell = along.mesh->cell_size();
    std::vector<RawRoot> out;
    for (int ci = 0; ci < static_cast<int>(along.circles.size()); ++ci) {
        const Circle& c = along.circles[ci];
        const int n = static_cast<int>(c.points.size());
        auto pos = [&](int k) { return k == n ? c.closing_point() : c.points[k].pos; };
        std::vector<double> gv(n + 1);
        for (int k = 0; k <= n; ++k)
            gv[k] = chart::value(g, m, pos(k));
        for (int k = 0; k < n; ++k) {
            if ((gv[k] >= 0.0) == (gv[k + 1] >= 0.0))
                continue;
            const Vec3 a = pos(k), b = pos(k + 1);
            const double t = gv[k] / (gv[k] - gv[k + 1]);
            double margin = 0.0;
            const Vec3 root = newton_pair(f, g, m, chart::lerp(m, a, b, t), cell, margin);
            const Vec3 ab = b - a;
            const double len2 = dot(ab, ab);
            const double s = len2 > 0.0 ? std::clamp(dot(root - a, ab) / len2, 0.0, 1.0) : 0.0;
            out.push_back({root, {ci, k, s}, margin});
        }
    }
    return out;
}

} // namespace detail

/// Transverse intersections of two traced curves on the same mesh.
inline IntersectionSet intersect(const CurveSystem& a, const CurveSystem& b)
{
    if (a.model() != b.model() || a.mesh->resolution() != b.mesh->resolution())
        fail(ErrorKind::InvalidArgument, "curves traced on different grids");
    IntersectionSet out;
    if (a.empty() || b.empty())
        return out;
    const Model m = a.model();
    const RealStructure rs = real_structure_for(m);
    const BiPoly f = real_form(a.source, rs);
    const BiPoly g = real_form(b.source, rs);
    const auto ra = detail::roots_along(a, f, g);
    const auto rb = detail::roots_along(b, g, f);

    for (std::size_t i = 0; i < ra.size(); ++i)
        for (std::size_t j = i + 1; j < ra.size(); ++j)
            if (chart::distance(m, ra[i].pos, ra[j].pos) < kDuplicateRadius)
                fail(ErrorKind::DuplicateCollision, "two intersection points nearly coincide");
    if (ra.size() != rb.size())
        fail(ErrorKind::ResolutionTooCoarse, "intersection counts disagree between the two curves");

    std::vector<char> used(rb.size(), 0);
    for (const auto& r : ra) {
        int match = -1;
        double best = kDuplicateRadius;
        for (std::size_t j = 0; j < rb.size(); ++j) {
            const double dist = chart::distance(m, r.pos, rb[j].pos);
            if (!used[j] && dist < best) {
                best = dist;
                match = static_cast<int>(j);
            }
        }
        if (match < 0)
            fail(ErrorKind::ResolutionTooCoarse, "unmatched intersection point");
        used[match] = 1;
        IntersectionPoint ip;
        ip.pos_a = r.pos;
        ip.pos_b = rb[match].pos;
        ip.on_a = r.where;
        ip.on_b = rb[match].where;
        ip.margin = std::min(r.margin, rb[match].margin);
        out.points.push_back(ip);
        out.transversality_margin = std::min(out.transversality_margin, ip.margin);
    }
    if (out.transversality_margin < kMinTransversality)
        fail(ErrorKind::TangencyDetected, "curves meet almost tangentially");
    if (out.points.size() % 2 != 0)
        fail(ErrorKind::ResolutionTooCoarse, "odd number of real intersections");
    return out;
}

/// Line-delimited debug records {"circle_id", "t", "coords"} for every traced point.
inline void write_polylines(std::ostream& os, const CurveSystem& cs)
{
    char buf[256];
    for (std::size_t c = 0; c < cs.circles.size(); ++c) {
        const auto& pts = cs.circles[c].points;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            const double t = static_cast<double>(k) / static_cast<double>(pts.size());
            const Vec3& p = pts[k].pos;
            if (cs.model() == Model::Torus)
                std::snprintf(buf, sizeof buf, "{\"circle_id\":%zu,\"t\":%.17g,\"coords\":[%.17g,%.17g]}\n",
                              c, t, p[0], p[1]);
            else
                std::snprintf(buf, sizeof buf,
                              "{\"circle_id\":%zu,\"t\":%.17g,\"coords\":[%.17g,%.17g,%.17g]}\n", c, t,
                              p[0], p[1], p[2]);
            os << buf;
        }
    }
}

} // namespace patchwork
